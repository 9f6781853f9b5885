"""
The q-WZ pair ``F(n,k)``, ``G(n,k)`` and everything derived from it: the pair
identity, telescoping over ``n``, the left and right sides of the five
supercongruence theorems, the boundary congruences for ``G(m,k)``, the
reindexing identities and the Laurent-polynomial conjecture expression.

Every value is an exact ``RatFunc``.  Sums are accumulated over a common
denominator and reduced once.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from qcheck.algebra.congruence import (
    CongruenceResult,
    ModulusSpec,
    congruent,
    exact_identity,
    modulus_build,
    standard_modulus,
)
from qcheck.algebra.exactalg import (
    ONE,
    ZERO_RF,
    LaurentPoly,
    Poly,
    RatFunc,
    accumulate_quotients,
    poly_lcm,
    ratfunc_make,
)
from qcheck.algebra.qobjects import (
    QPochhammerSpec,
    central_q_binomial,
    poch,
    poch_poly,
    q_bracket,
    q_factorial,
    q_integer,
    q_pochhammer_inverse_guard,
)
from qcheck.core.errors import TranscriptionError, UsageError

logger = logging.getLogger(__name__)

TheoremId = Literal["thm_1_1", "thm_1_2", "qdiv", "thm_5_1", "thm_5_2"]
THEOREM_IDS: tuple[str, ...] = ("thm_1_1", "thm_1_2", "qdiv", "thm_5_1", "thm_5_2")
BOUNDARY_IDS: tuple[str, ...] = ("g_m_1", "g_m_0", "g_m_2", "g_m_neg1")
REINDEX_IDS: tuple[str, ...] = ("sum_F_n1", "sum_F_nneg1", "sum_F_n2", "sum_F_nneg2")
COMBINATION_IDS: tuple[str, ...] = ("k1", "kneg1")

LATE_START = {"thm_5_1", "thm_5_2", "g_m_2", "g_m_neg1"}


@dataclass(frozen=True)
class WZPoint:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 0:
            raise UsageError(f"WZ point needs n >= 0, got {self.n}")


def _q(t: int, c=1) -> LaurentPoly:
    return LaurentPoly.monomial(t, c)


def _half(x: int) -> int:
    if x % 2:
        raise TranscriptionError(f"exponent {x}/2 is not an integer")
    return x // 2


def _binom2(n: int) -> int:
    return n * (n - 1) // 2


def _one_minus_q() -> Poly:
    return ONE - Poly.monomial(1)


def require_odd(label: str, n: int) -> None:
    """Reject even ``n`` and ``n`` below the start of the family ``label``."""
    floor = 3 if label in LATE_START else 1
    if n % 2 == 0 or n <= floor:
        raise UsageError(f"{label} needs an odd n > {floor}, got {n}")


# ---------------------------------------------------------------------------
# The pair
# ---------------------------------------------------------------------------


def _wz_F_parts(n: int, k: int) -> tuple[LaurentPoly, LaurentPoly]:
    num = q_bracket(3 * n + 2 * k + 1) * poch(1, 2, n) * poch(2 * k + 1, 2, n) ** 2
    num = num.shift(-_binom2(n + 1) - (2 * n + 1) * k)
    den = LaurentPoly(q_factorial(n) ** 2 * poch_poly(2, 2, n))
    return num, den


@lru_cache(maxsize=4096)
def _wz_F(n: int, k: int) -> RatFunc:
    return ratfunc_make(*_wz_F_parts(n, k))


@lru_cache(maxsize=4096)
def _wz_G(n: int, k: int) -> RatFunc:
    inverse = q_pochhammer_inverse_guard(QPochhammerSpec(2, 2), n - 1)
    if inverse.is_zero:
        return ZERO_RF
    num = -(_q(0) + _q(n + 2 * k - 1)) * poch(1, 2, n) * poch(2 * k + 1, 2, n - 1) ** 2
    num = num.shift(-_binom2(n) - (2 * n - 1) * k)
    den = _one_minus_q() * q_factorial(n - 1) ** 2
    return ratfunc_make(num, den) * inverse


def wz_F(p: WZPoint) -> RatFunc:
    """``[3n+2k+1] (q;q^2)_n (q^{2k+1};q^2)_n^2 q^{-C(n+1,2)-(2n+1)k} / ((q;q)_n^2 (q^2;q^2)_n)``."""
    return _wz_F(p.n, p.k)


def wz_G(p: WZPoint) -> RatFunc:
    """The companion of ``F``; vanishes at ``n = 0`` through ``1/(q^2;q^2)_{-1} = 0``."""
    return _wz_G(p.n, p.k)


def wz_pair_result(p: WZPoint) -> CongruenceResult:
    """``F(n,k-1) - F(n,k) = G(n+1,k) - G(n,k)`` exactly."""
    n, k = p.n, p.k
    lhs = _wz_F(n, k - 1) - _wz_F(n, k)
    rhs = _wz_G(n + 1, k) - _wz_G(n, k)
    return exact_identity(lhs, rhs)


def wz_pair_check(p: WZPoint) -> bool:
    return wz_pair_result(p).passed


@lru_cache(maxsize=256)
def sum_F(m: int, k: int) -> RatFunc:
    """``Σ_{n=0}^{m-1} F(n,k)`` over the common denominator ``(q;q)_{m-1}^2 (q^2;q^2)_{m-1}``."""
    if m < 1:
        raise UsageError(f"sum over n needs m >= 1, got {m}")
    common = q_factorial(m - 1) ** 2 * poch_poly(2, 2, m - 1)
    return accumulate_quotients((_wz_F_parts(n, k) for n in range(m)), common_den=common)


def telescope_result(m: int, k: int) -> CongruenceResult:
    """``Σ_{n<m} [F(n,k-1) - F(n,k)] = G(m,k)`` exactly."""
    if m < 1:
        raise UsageError(f"telescope needs m >= 1, got {m}")
    return exact_identity(sum_F(m, k - 1) - sum_F(m, k), _wz_G(m, k))


def telescope_check(m: int, k: int) -> bool:
    return telescope_result(m, k).passed


def telescope_span_check(m: int, k_lo: int, k_hi: int) -> CongruenceResult:
    """``Σ_n F(n,k_lo) - Σ_n F(n,k_hi) = Σ_{k=k_lo+1}^{k_hi} G(m,k)`` exactly."""
    if k_lo >= k_hi:
        raise UsageError(f"telescope span needs k_lo < k_hi, got {k_lo} >= {k_hi}")
    total = ZERO_RF
    for k in range(k_lo + 1, k_hi + 1):
        total = total + _wz_G(m, k)
    return exact_identity(sum_F(m, k_lo) - sum_F(m, k_hi), total)


# ---------------------------------------------------------------------------
# Theorems
# ---------------------------------------------------------------------------


def _neg_poch(k: int) -> Poly:
    # (-q;q)_k
    return poch_poly(1, 1, k, sign=-1)


def _hypergeometric_den(k: int) -> LaurentPoly:
    return LaurentPoly(q_factorial(k) ** 2 * poch_poly(2, 2, k))


def _summand_parts(theorem_id: str, k: int) -> tuple[LaurentPoly, LaurentPoly]:
    if theorem_id == "thm_1_1":
        num = q_bracket(3 * k) * q_bracket(2 * k) * q_bracket(k) ** 2 * LaurentPoly(central_q_binomial(k) ** 3)
        den = q_bracket(2 * k - 1) * LaurentPoly(_neg_poch(k) ** 4)
        return num.shift(_half(-(k * k + 3 * k))), den
    if theorem_id == "thm_1_2":
        num = q_bracket(3 * k - 1) * poch(1, 2, k) * poch(-1, 2, k) ** 2
        return num.shift(_half(3 * k - k * k)), _hypergeometric_den(k)
    if theorem_id == "qdiv":
        num = q_bracket(3 * k + 1) * poch(1, 2, k) ** 3
        return num.shift(-_binom2(k + 1)), _hypergeometric_den(k)
    if theorem_id == "thm_5_1":
        num = q_bracket(3 * k + 5) * poch(1, 2, k) * poch(5, 2, k) ** 2
        return num.shift(_half(-(k * k + 9 * k))), _hypergeometric_den(k)
    if theorem_id == "thm_5_2":
        num = q_bracket(3 * k - 3) * poch(1, 2, k) * poch(-3, 2, k) ** 2
        return num.shift(_half(7 * k - k * k)), _hypergeometric_den(k)
    raise UsageError(f"unknown theorem id {theorem_id!r}")


def theorem_summand(theorem_id: TheoremId, k: int) -> RatFunc:
    """The ``k``-th term of the theorem's left-hand sum."""
    if k < 0:
        raise UsageError(f"summand index must be >= 0, got {k}")
    return ratfunc_make(*_summand_parts(theorem_id, k))


def theorem_partial_sum(theorem_id: TheoremId, upper: int) -> RatFunc:
    """``Σ_{k=0}^{upper}`` of the theorem's summand."""
    if theorem_id not in THEOREM_IDS:
        raise UsageError(f"unknown theorem id {theorem_id!r}")
    if upper < 0:
        return ZERO_RF
    terms = [_summand_parts(theorem_id, k) for k in range(upper + 1)]
    if theorem_id == "thm_1_1":
        return accumulate_quotients(terms)
    return accumulate_quotients(terms, common_den=_hypergeometric_den(upper).body)


def _check_theorem(theorem_id: str, n: int) -> None:
    if theorem_id not in THEOREM_IDS:
        raise UsageError(f"unknown theorem id {theorem_id!r}")
    require_odd(theorem_id, n)


def theorem_lhs(theorem_id: TheoremId, n: int) -> RatFunc:
    _check_theorem(theorem_id, n)
    return theorem_partial_sum(theorem_id, n - 1)


def theorem_rhs(theorem_id: TheoremId, n: int) -> RatFunc:
    """Right-hand side, including the ``(n^2-1)(1-q)^2/24`` correction term."""
    _check_theorem(theorem_id, n)
    bracket = LaurentPoly(q_integer(n))
    cube = RatFunc.of(bracket**3)
    c = Fraction(n * n - 1, 24)
    correction = RatFunc.of(_one_minus_q() ** 2) * cube * c
    one_plus_q = RatFunc.of(ONE + Poly.monomial(1))

    if theorem_id == "qdiv":
        lead = RatFunc.of(_q(_half(1 - n)))
        return RatFunc.of(bracket) * lead + correction * lead

    if theorem_id in ("thm_1_1", "thm_1_2"):
        lead = RatFunc.of(_q(-_half(n + 1)))
        middle = one_plus_q * cube
        if theorem_id == "thm_1_2":
            middle = -middle
        return RatFunc.of(bracket) * lead + middle + correction * lead

    # (1+q^3)/(1+q+q^2)^2
    ratio = ratfunc_make(ONE + Poly.monomial(3), q_integer(3) ** 2)
    if theorem_id == "thm_5_1":
        lead = RatFunc.of(_q(_half(5 - n)))
        return (
            RatFunc.of(bracket) * lead
            + one_plus_q * RatFunc.of(_q(3)) * cube
            + ratio * RatFunc.of(_q(4)) * cube
            + correction * lead
        )

    lead = RatFunc.of(_q(-_half(n + 3)))
    return (
        RatFunc.of(bracket) * lead
        - one_plus_q * RatFunc.of(_q(-1)) * cube
        - ratio * cube
        + correction * lead
    )


def verify_theorem(theorem_id: TheoremId, n: int) -> CongruenceResult:
    """``lhs ≡ rhs (mod [n] Φ_n^3)``."""
    spec = standard_modulus(n)
    lhs = theorem_lhs(theorem_id, n)
    rhs = theorem_rhs(theorem_id, n)
    logger.debug(f"verifying {theorem_id} at n={n}, lhs denominator degree {lhs.den.degree}")
    return congruent(lhs, rhs, modulus_build(spec), spec.describe())


# ---------------------------------------------------------------------------
# Boundary values of G
# ---------------------------------------------------------------------------


def _boundary_target(boundary_id: str, m: int) -> tuple[RatFunc, ModulusSpec]:
    cube = RatFunc.of(q_integer(m) ** 3)
    if boundary_id == "g_m_1":
        target = -RatFunc.of((_q(0) + _q(1)) * _q(1)) * cube
        return target, ModulusSpec.of(("q_integer", m, 3), ("cyclotomic", m, 1))
    if boundary_id == "g_m_0":
        target = -RatFunc.of((_q(0) + _q(-1)) * _q(2)) * cube
        return target, ModulusSpec.of(("q_integer", m, 3), ("cyclotomic", m, 1))
    ratio = ratfunc_make((ONE + Poly.monomial(3)) * Poly.monomial(2), q_integer(3) ** 2)
    return -ratio * cube, ModulusSpec.of(("q_integer", m, 1), ("cyclotomic", m, 3))


_BOUNDARY_K = {"g_m_1": 1, "g_m_0": 0, "g_m_2": 2, "g_m_neg1": -1}


def verify_boundary(boundary_id: str, m: int) -> CongruenceResult:
    """``G(m,k)`` against its boundary value, each modulus as displayed."""
    if boundary_id not in BOUNDARY_IDS:
        raise UsageError(f"unknown boundary id {boundary_id!r}")
    require_odd(boundary_id, m)
    target, spec = _boundary_target(boundary_id, m)
    return congruent(_wz_G(m, _BOUNDARY_K[boundary_id]), target, modulus_build(spec), spec.describe())


def verify_boundary_form(boundary_id: str, m: int) -> CongruenceResult:
    """
    ``G(m,k)`` equals its closed form with ``(q^2;q^2)_{m-1}`` split as
    ``(q;q)_{m-1} (-q;q)_{m-1}``.  For ``g_m_1`` and ``g_m_2`` the form with
    ``(q;q^2)_m^3`` is checked as well.
    """
    if boundary_id not in BOUNDARY_IDS:
        raise UsageError(f"unknown boundary id {boundary_id!r}")
    require_odd(boundary_id, m)
    k = _BOUNDARY_K[boundary_id]
    exponent = -_binom2(m) - (2 * m - 1) * k
    lead = -(_q(0) + _q(m + 2 * k - 1))
    base_den = _one_minus_q() * q_factorial(m - 1) ** 3 * _neg_poch(m - 1)

    num = (lead * poch(1, 2, m) * poch(2 * k + 1, 2, m - 1) ** 2).shift(exponent)
    result = exact_identity(_wz_G(m, k), ratfunc_make(num, base_den))
    if not result.passed or boundary_id not in ("g_m_1", "g_m_2"):
        return result

    num = (lead * poch(1, 2, m) ** 3).shift(exponent)
    den = base_den * _one_minus_q() ** 2
    if boundary_id == "g_m_2":
        num = num * (_q(0) - _q(2 * m + 1)) ** 2
        den = den * (ONE - Poly.monomial(3)) ** 2
    return exact_identity(_wz_G(m, k), ratfunc_make(num, den))


# ---------------------------------------------------------------------------
# Reindexing and combination steps
# ---------------------------------------------------------------------------


def reindex_identity_result(reindex_id: str, m: int) -> CongruenceResult:
    """
    ``Σ_{n<m} F(n,k)`` against the theorem sum it turns into, with the power
    of ``q`` between them made explicit.
    """
    if reindex_id not in REINDEX_IDS:
        raise UsageError(f"unknown reindex id {reindex_id!r}")
    require_odd(reindex_id, m)
    if reindex_id == "sum_F_n1":
        # the k = m term of the reindexed sum is kept
        return exact_identity(sum_F(m, 1), theorem_partial_sum("thm_1_1", m) * RatFunc.of(_q(1)))
    if reindex_id == "sum_F_nneg1":
        return exact_identity(sum_F(m, -1), theorem_partial_sum("thm_1_2", m - 1) * RatFunc.of(_q(1)))
    if reindex_id == "sum_F_n2":
        return exact_identity(sum_F(m, 2), theorem_partial_sum("thm_5_1", m - 1) * RatFunc.of(_q(-2)))
    return exact_identity(sum_F(m, -2), theorem_partial_sum("thm_5_2", m - 1) * RatFunc.of(_q(2)))


def reindex_identity_check(reindex_id: str, m: int) -> bool:
    return reindex_identity_result(reindex_id, m).passed


def verify_combination(combination_id: str, m: int) -> CongruenceResult:
    """``Σ F(n,±1) ≡ Σ F(n,0) ± (1+q) q [m]^3 (mod [m]^3 Φ_m)``."""
    if combination_id not in COMBINATION_IDS:
        raise UsageError(f"unknown combination id {combination_id!r}")
    require_odd(combination_id, m)
    shift = RatFunc.of((ONE + Poly.monomial(1)) * Poly.monomial(1) * q_integer(m) ** 3)
    spec = ModulusSpec.of(("q_integer", m, 3), ("cyclotomic", m, 1))
    if combination_id == "k1":
        return congruent(sum_F(m, 1), sum_F(m, 0) + shift, modulus_build(spec), spec.describe())
    return congruent(sum_F(m, -1), sum_F(m, 0) - shift, modulus_build(spec), spec.describe())


def verify_vanishing_summand(m: int) -> CongruenceResult:
    """The ``k = m`` term of the thm_1_1 sum is ``≡ 0 (mod [m]^4)``."""
    require_odd("vanishing summand", m)
    spec = ModulusSpec.of(("q_integer", m, 4))
    return congruent(theorem_summand("thm_1_1", m), ZERO_RF, modulus_build(spec), spec.describe())


# ---------------------------------------------------------------------------
# Laurent conjecture
# ---------------------------------------------------------------------------


def conjecture61_expression(n: int) -> RatFunc:
    """
    ``Σ_{k=1}^{n} [3k][2k][k]^2 (-q^{k+1};q)_{n-k}^4 [2k choose k]^3 q^{-(k^2+3k)/2} / [2k-1]``
    divided by ``(1+q)^3 [2n+1] [2n choose n]``.
    """
    if n < 1:
        raise UsageError(f"conjecture expression needs n >= 1, got {n}")
    terms = []
    common = ONE
    for k in range(1, n + 1):
        num = LaurentPoly(
            q_integer(3 * k) * q_integer(2 * k) * q_integer(k) ** 2 * central_q_binomial(k) ** 3
        ) * poch(k + 1, 1, n - k, sign=-1) ** 4
        den = q_integer(2 * k - 1)
        common = poly_lcm(common, den)
        terms.append((num.shift(_half(-(k * k + 3 * k))), LaurentPoly(den)))
    prefactor = (ONE + Poly.monomial(1)) ** 3 * q_integer(2 * n + 1) * central_q_binomial(n)
    return accumulate_quotients(terms, common_den=common, divisor=prefactor)


def is_laurent(r: RatFunc) -> bool:
    """True iff the reduced denominator is a power of ``q``."""
    den = RatFunc.of(r).den
    return den.valuation == den.degree
