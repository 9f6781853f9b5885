import random
from fractions import Fraction

import pytest

from qcheck.algebra.exactalg import (
    ONE,
    ONE_RF,
    Q,
    ZERO,
    ZERO_RF,
    LaurentPoly,
    Poly,
    RatFunc,
    accumulate_quotients,
    integer_primitive_numerator,
    laurent_to_json,
    poly_divrem,
    poly_exquo,
    poly_from_json,
    poly_gcd,
    poly_lcm,
    poly_to_json,
    ratfunc_arith,
    ratfunc_make,
)
from qcheck.core.errors import AlgebraError, PolyZeroDivisionError, UsageError


def _random_poly(rng: random.Random, max_degree: int = 6, rational: bool = False) -> Poly:
    degree = rng.randint(0, max_degree)
    if rational:
        return Poly(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(degree + 1))
    return Poly(rng.randint(-9, 9) for _ in range(degree + 1))


def _nonzero(rng: random.Random, **kw) -> Poly:
    while True:
        p = _random_poly(rng, **kw)
        if not p.is_zero:
            return p


@pytest.fixture
def rng():
    return random.Random(20240601)


def test_poly_canonical_form():
    assert Poly([1, 2, 0, 0]).coeffs == (1, 2)
    assert Poly([0, 0]) == ZERO
    assert ZERO.degree == -1
    assert Poly([3]).degree == 0
    assert Poly([0, 0, 5]).valuation == 2


def test_poly_rejects_floats():
    with pytest.raises(AlgebraError):
        Poly([1.5])


def test_poly_arithmetic_values():
    one_plus_q = Poly([1, 1])
    assert one_plus_q * one_plus_q == Poly([1, 2, 1])
    assert one_plus_q - one_plus_q == ZERO
    assert 2 - Q == Poly([2, -1])
    assert one_plus_q**3 == Poly([1, 3, 3, 1])
    assert Poly([1, 2, 3])(2) == 17
    assert Poly([Fraction(1, 2), 1]) * 2 == Poly([1, 2])


def test_poly_divrem_value():
    quot, rem = poly_divrem(Poly([-1, 0, 0, 1]), Poly([-1, 1]))
    assert quot == Poly([1, 1, 1])
    assert rem == ZERO


def test_poly_divrem_rational_divisor():
    quot, rem = poly_divrem(Poly([1, 0, 1]), Poly([1, 2]))
    assert Poly([1, 2]) * quot + rem == Poly([1, 0, 1])
    assert rem.degree < 1


def test_poly_divrem_by_zero():
    with pytest.raises(PolyZeroDivisionError):
        poly_divrem(ONE, ZERO)


def test_poly_exquo_inexact():
    with pytest.raises(AlgebraError):
        poly_exquo(Poly([1, 0, 1]), Poly([1, 1]))


def test_poly_divrem_reconstruction(rng):
    for _ in range(200):
        a = _random_poly(rng, max_degree=9, rational=rng.random() < 0.3)
        b = _nonzero(rng, max_degree=5, rational=rng.random() < 0.3)
        quot, rem = poly_divrem(a, b)
        assert b * quot + rem == a
        assert rem.degree < b.degree


def test_poly_gcd_values():
    a = Poly([-1, 0, 1])  # q^2 - 1
    b = Poly([1, 2, 1])  # (q + 1)^2
    assert poly_gcd(a, b) == Poly([1, 1])
    assert poly_gcd(Poly([2, 4]), ZERO) == Poly([Fraction(1, 2), 1])
    assert poly_gcd(Poly([5]), a) == ONE
    with pytest.raises(AlgebraError):
        poly_gcd(ZERO, ZERO)


def test_poly_gcd_divides_both(rng):
    for _ in range(100):
        common = _nonzero(rng, max_degree=3)
        a = common * _nonzero(rng, max_degree=4)
        b = common * _nonzero(rng, max_degree=4)
        g = poly_gcd(a, b)
        assert g.is_monic
        assert poly_divrem(a, g)[1] == ZERO
        assert poly_divrem(b, g)[1] == ZERO
        assert poly_divrem(g, common.monic())[1] == ZERO


def test_poly_lcm():
    a = Poly([-1, 0, 1])
    b = Poly([1, 2, 1])
    assert poly_lcm(a, b) == Poly([-1, -1, 1, 1])
    assert poly_lcm(a, ZERO) == ZERO


def test_laurent_normalises_valuation():
    p = LaurentPoly(Poly([0, 0, 1, 1]), -3)
    assert p.offset == -1
    assert p.body == Poly([1, 1])
    assert LaurentPoly(ZERO, 5).offset == 0


def test_laurent_arithmetic():
    inv_q = LaurentPoly.monomial(-1)
    assert inv_q * Q == LaurentPoly.of(1)
    assert (LaurentPoly.of(Q) + inv_q)(2) == Fraction(5, 2)
    assert (inv_q**3).offset == -3
    assert LaurentPoly.of(Q).to_poly() == Q
    with pytest.raises(AlgebraError):
        inv_q.to_poly()


def test_ratfunc_reduces_to_canonical_form():
    r = ratfunc_make(Poly([-1, 0, 1]), Poly([2, 2]))
    assert r.num == Poly([Fraction(-1, 2), Fraction(1, 2)])
    assert r.den == ONE


def test_ratfunc_folds_laurent_offsets():
    # (1+q^2)/q
    r = ratfunc_make(LaurentPoly(Poly([1, 0, 1]), -1), LaurentPoly.of(1))
    assert r.num == Poly([1, 0, 1])
    assert r.den == Q


def test_ratfunc_laurent_folding_random_offsets(rng):
    for _ in range(50):
        t = rng.randint(-12, -1)
        constant = rng.choice([c for c in range(-9, 10) if c])
        body = Poly([constant] + [rng.randint(-9, 9) for _ in range(rng.randint(0, 6))])
        r = ratfunc_make(LaurentPoly(body, t), ONE)
        assert r.den == Poly.monomial(-t)
        assert r == RatFunc.of(body) / RatFunc.of(Poly.monomial(-t))


def test_ratfunc_zero_and_one():
    assert ZERO_RF.is_zero
    assert ONE_RF == 1
    assert RatFunc.of(Q) / RatFunc.of(Q) == ONE_RF
    assert RatFunc.of(Q) - RatFunc.of(Q) == ZERO_RF


def test_ratfunc_division_by_zero():
    with pytest.raises(PolyZeroDivisionError):
        RatFunc.of(Q) / ZERO_RF
    with pytest.raises(PolyZeroDivisionError):
        ratfunc_make(ONE, ZERO)


def test_ratfunc_arith_unknown_op():
    with pytest.raises(UsageError):
        ratfunc_arith(ONE_RF, ONE_RF, "pow")


def test_ratfunc_evaluate_pole():
    r = ratfunc_make(ONE, Poly([-1, 1]))
    assert r.evaluate(3) == Fraction(1, 2)
    with pytest.raises(PolyZeroDivisionError):
        r.evaluate(1)


def test_ratfunc_negative_power():
    r = RatFunc.of(Poly([1, 1]))
    assert r**-2 * r**2 == ONE_RF


def test_ratfunc_canonical_form_preserved(rng):
    for _ in range(100):
        a = ratfunc_make(_random_poly(rng), _nonzero(rng, max_degree=4))
        b = ratfunc_make(_random_poly(rng, rational=True), _nonzero(rng, max_degree=4, rational=True))
        for value in (a + b, a - b, a * b):
            assert value.den.is_monic
            assert value.is_zero or poly_gcd(value.num, value.den) == ONE
        if not b.is_zero:
            assert (a / b) * b == a
        assert (a + b) - b == a


def test_integer_primitive_numerator():
    r = ratfunc_make(Poly([Fraction(-2, 3), Fraction(-4, 3)]), Poly([1, 0, 1]))
    assert integer_primitive_numerator(r) == Poly([1, 2])
    assert integer_primitive_numerator(ZERO_RF) == ZERO


def test_accumulate_quotients_matches_incremental_sum(rng):
    terms = []
    expected = ZERO_RF
    for _ in range(6):
        num = LaurentPoly(_random_poly(rng), rng.randint(-3, 3))
        den = LaurentPoly(_nonzero(rng, max_degree=3), rng.randint(-2, 2))
        terms.append((num, den))
        expected = expected + ratfunc_make(num, den)
    assert accumulate_quotients(terms) == expected


def test_accumulate_quotients_with_common_den_and_divisor():
    # 1/(1-q) + 1/(1-q^2), over (1-q^2), then divided by q
    terms = [(ONE, Poly([1, -1])), (ONE, Poly([1, 0, -1]))]
    total = accumulate_quotients(terms, common_den=Poly([1, 0, -1]), divisor=Q)
    expected = (ratfunc_make(ONE, Poly([1, -1])) + ratfunc_make(ONE, Poly([1, 0, -1]))) / RatFunc.of(Q)
    assert total == expected


def test_accumulate_quotients_empty():
    assert accumulate_quotients([]) == ZERO_RF
    assert accumulate_quotients([(ZERO, ONE)]) == ZERO_RF


def test_json_helpers():
    assert poly_to_json(Poly([Fraction(1, 2), 0, 3])) == {"offset": 0, "coeffs": ["1/2", "0/1", "3/1"]}
    p = LaurentPoly(Poly([1, Fraction(-2, 3)]), -2)
    assert poly_from_json(laurent_to_json(p)) == p
    with pytest.raises(UsageError):
        poly_from_json({"offset": 0})
