from fractions import Fraction

import pytest

from qcheck.algebra.exactalg import LaurentPoly, Poly, RatFunc, ratfunc_make
from qcheck.algebra.qobjects import q_integer
from qcheck.core.errors import UsageError
from qcheck.services.wzengine import (
    BOUNDARY_IDS,
    REINDEX_IDS,
    WZPoint,
    conjecture61_expression,
    is_laurent,
    reindex_identity_check,
    sum_F,
    telescope_check,
    telescope_span_check,
    theorem_lhs,
    theorem_partial_sum,
    theorem_rhs,
    theorem_summand,
    verify_boundary,
    verify_boundary_form,
    verify_combination,
    verify_theorem,
    verify_vanishing_summand,
    wz_F,
    wz_G,
    wz_pair_check,
    wz_pair_result,
)


def _q(t: int) -> RatFunc:
    return RatFunc.of(LaurentPoly.monomial(t))


# ---------------------------------------------------------------------------
# The pair
# ---------------------------------------------------------------------------


def test_wz_F_values():
    assert wz_F(WZPoint(0, 0)) == 1
    assert wz_F(WZPoint(0, 1)) == ratfunc_make(Poly([1, 1, 1]), Poly([0, 1]))
    assert wz_F(WZPoint(1, 0)) == ratfunc_make(Poly([1, 0, 1]), Poly([0, 1]))
    assert wz_F(WZPoint(0, -1)) == -1


def test_wz_G_values():
    for k in (-2, 0, 3):
        assert wz_G(WZPoint(0, k)).is_zero
    assert wz_G(WZPoint(1, 1)) == -ratfunc_make(Poly([1, 0, 1]), Poly([0, 1]))
    assert wz_G(WZPoint(1, 0)) == -2


def test_wz_point_rejects_negative_n():
    with pytest.raises(UsageError):
        WZPoint(-1, 0)


@pytest.mark.parametrize("n", range(0, 11))
@pytest.mark.parametrize("k", range(-3, 4))
def test_wz_pair_identity(n, k):
    assert wz_pair_check(WZPoint(n, k))


def test_wz_pair_negative_k_point():
    result = wz_pair_result(WZPoint(3, -1))
    assert result.passed
    assert result.label == "exact"


@pytest.mark.parametrize("m", range(1, 9))
@pytest.mark.parametrize("k", range(-2, 3))
def test_telescope_step(m, k):
    assert telescope_check(m, k)


def test_telescope_values():
    assert telescope_check(1, 1)
    assert telescope_check(5, 1)
    assert telescope_check(5, -1)
    with pytest.raises(UsageError):
        telescope_check(0, 1)


def test_telescope_span():
    assert telescope_span_check(5, 0, 2).passed
    assert telescope_span_check(5, -2, 0).passed
    with pytest.raises(UsageError):
        telescope_span_check(5, 1, 1)


def test_sum_F_rejects_empty_range():
    with pytest.raises(UsageError):
        sum_F(0, 0)


# ---------------------------------------------------------------------------
# Theorems
# ---------------------------------------------------------------------------


def test_leading_summands():
    assert theorem_summand("qdiv", 0) == 1
    assert theorem_summand("thm_1_1", 0).is_zero
    # [-1] = -q^{-1}
    assert theorem_summand("thm_1_2", 0) == -_q(-1)
    assert theorem_partial_sum("qdiv", -1).is_zero


def test_qdiv_lhs_is_three_terms():
    expected = theorem_summand("qdiv", 0) + theorem_summand("qdiv", 1) + theorem_summand("qdiv", 2)
    assert theorem_lhs("qdiv", 3) == expected


def test_qdiv_rhs_at_3():
    bracket = RatFunc.of(q_integer(3))
    expected = _q(-1) * bracket + RatFunc.of(Poly([1, -1]) ** 2) * _q(-1) * bracket**3 * Fraction(1, 3)
    assert theorem_rhs("qdiv", 3) == expected


def test_thm_1_1_rhs_at_3():
    bracket = RatFunc.of(q_integer(3))
    correction = RatFunc.of(Poly([1, -1]) ** 2) * bracket**3 * _q(-2) * Fraction(1, 3)
    expected = bracket * _q(-2) + RatFunc.of(Poly([1, 1])) * bracket**3 + correction
    assert theorem_rhs("thm_1_1", 3) == expected


@pytest.mark.parametrize(
    "theorem_id, n",
    [
        *[("thm_1_1", n) for n in (3, 5, 7, 9, 15)],
        *[("thm_1_2", n) for n in (3, 5, 7, 9, 15)],
        *[("qdiv", n) for n in (3, 5, 7, 9)],
        *[("thm_5_1", n) for n in (5, 7, 9)],
        *[("thm_5_2", n) for n in (5, 7, 9)],
    ],
)
def test_verify_theorem(theorem_id, n):
    result = verify_theorem(theorem_id, n)
    assert result.passed, result.witness


def test_theorem_rejects_bad_instances():
    with pytest.raises(UsageError):
        theorem_lhs("thm_1_1", 4)
    with pytest.raises(UsageError):
        theorem_rhs("thm_5_1", 3)
    with pytest.raises(UsageError):
        verify_theorem("thm_9_9", 5)
    with pytest.raises(UsageError):
        theorem_summand("qdiv", -1)


# ---------------------------------------------------------------------------
# Boundary values and reindexing
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "boundary_id, m",
    [
        *[(boundary_id, m) for boundary_id in ("g_m_1", "g_m_0") for m in (3, 5, 7, 9)],
        *[(boundary_id, m) for boundary_id in ("g_m_2", "g_m_neg1") for m in (5, 7, 9)],
    ],
)
def test_verify_boundary(boundary_id, m):
    assert verify_boundary(boundary_id, m).passed


def test_boundary_rejects_small_m():
    with pytest.raises(UsageError):
        verify_boundary("g_m_2", 3)
    with pytest.raises(UsageError):
        verify_boundary("g_m_1", 6)


@pytest.mark.parametrize("boundary_id", BOUNDARY_IDS)
def test_verify_boundary_form(boundary_id):
    assert verify_boundary_form(boundary_id, 5).passed


@pytest.mark.parametrize("reindex_id", REINDEX_IDS)
@pytest.mark.parametrize("m", [3, 5, 7])
def test_reindex_identities(reindex_id, m):
    assert reindex_identity_check(reindex_id, m)


@pytest.mark.parametrize("combination_id", ["k1", "kneg1"])
@pytest.mark.parametrize("m", [3, 5, 7])
def test_verify_combination(combination_id, m):
    assert verify_combination(combination_id, m).passed


@pytest.mark.parametrize("m", [3, 5, 7])
def test_vanishing_summand(m):
    result = verify_vanishing_summand(m)
    assert result.passed
    assert not result.denominator_warning


# ---------------------------------------------------------------------------
# Laurent conjecture
# ---------------------------------------------------------------------------


def test_conjecture_at_one():
    assert conjecture61_expression(1) == _q(-2)


@pytest.mark.parametrize("n", range(1, 7))
def test_conjecture_is_laurent(n):
    assert is_laurent(conjecture61_expression(n))


@pytest.mark.slow
@pytest.mark.parametrize("n", range(7, 25))
def test_conjecture_is_laurent_acceptance_range(n):
    assert is_laurent(conjecture61_expression(n))


def test_conjecture_rejects_zero():
    with pytest.raises(UsageError):
        conjecture61_expression(0)


def test_is_laurent():
    assert is_laurent(ratfunc_make(Poly([1, 0, 1]), Poly([0, 1])))
    assert is_laurent(RatFunc.of(3))
    assert not is_laurent(ratfunc_make(Poly([1]), Poly([1, 1])))
