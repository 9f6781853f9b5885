"""
Congruences of rational functions modulo a polynomial.

``A(q) ≡ B(q) (mod P(q))`` means ``P`` divides the numerator of the reduced
form of ``A - B``.  Every modulus built here is a product of q-integers and
cyclotomic polynomials, hence monic with integer coefficients; dividing an
integer polynomial by such a modulus gives integer quotient and remainder, so
divisibility over Q and over Z[q] agree.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal

from qcheck.algebra.exactalg import (
    ONE,
    ZERO,
    LaurentPoly,
    Poly,
    RatFunc,
    integer_primitive_numerator,
    poly_divrem,
    poly_gcd,
    poly_to_json,
    ratfunc_make,
)
from qcheck.algebra.qobjects import central_q_binomial, cyclotomic, poch_poly, q_bracket, q_integer
from qcheck.core.errors import AlgebraError, UsageError

logger = logging.getLogger(__name__)

FactorKind = Literal["q_integer", "cyclotomic"]


@dataclass(frozen=True)
class ModulusSpec:
    """Product of ``(kind, n, power)`` factors, e.g. ``[n] Φ_n^3``."""

    factors: tuple[tuple[FactorKind, int, int], ...]

    def __post_init__(self):
        if not self.factors:
            raise UsageError("a modulus needs at least one factor")
        for kind, n, power in self.factors:
            if kind not in ("q_integer", "cyclotomic"):
                raise UsageError(f"unknown modulus factor kind {kind!r}")
            if n < 1 or power < 1:
                raise UsageError(f"modulus factor ({kind}, {n}, {power}) needs n >= 1 and power >= 1")

    @classmethod
    def of(cls, *factors: tuple[FactorKind, int, int]) -> "ModulusSpec":
        return cls(tuple(factors))

    def describe(self) -> str:
        parts = []
        for kind, n, power in self.factors:
            sym = f"[{n}]" if kind == "q_integer" else f"Phi_{n}"
            parts.append(sym if power == 1 else f"{sym}^{power}")
        return "*".join(parts)


@dataclass(frozen=True)
class CongruenceResult:
    """
    Outcome of one congruence test.

    ``witness`` is the quotient when ``passed`` and the remainder otherwise.
    A zero ``modulus`` marks an exact identity test; its failure witness is
    the full primitive numerator of the difference.
    """

    passed: bool
    witness: Poly
    modulus: Poly
    denominator_warning: bool = False
    label: str = field(default="", compare=False)

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "modulus": self.label,
            "denominator_warning": self.denominator_warning,
            "witness": poly_to_json(self.witness),
        }


def modulus_build(spec: ModulusSpec) -> Poly:
    """Expand the product; the result is asserted monic."""
    value = ONE
    for kind, n, power in spec.factors:
        base = q_integer(n) if kind == "q_integer" else cyclotomic(n)
        value = value * base**power
    if not value.is_monic:
        raise AlgebraError(f"modulus {spec.describe()} is not monic")
    return value


def standard_modulus(n: int) -> ModulusSpec:
    """``[n] Φ_n(q)^3``, the modulus of every main theorem."""
    return ModulusSpec.of(("q_integer", n, 1), ("cyclotomic", n, 3))


def congruent(a: RatFunc, b: RatFunc, modulus: Poly, label: str = "") -> CongruenceResult:
    """Test ``a ≡ b (mod modulus)`` on the integer-primitive numerator of ``a - b``."""
    if not modulus.is_monic:
        raise UsageError("congruences are only defined here for monic moduli")
    diff = RatFunc.of(a) - RatFunc.of(b)
    warning = not diff.is_zero and poly_gcd(diff.den, modulus).degree > 0
    if warning:
        logger.debug("reduced denominator shares a factor with modulus %s", label or modulus)
    numerator = integer_primitive_numerator(diff)
    quot, rem = poly_divrem(numerator, modulus)
    if rem.is_zero:
        return CongruenceResult(True, quot, modulus, warning, label)
    return CongruenceResult(False, rem, modulus, warning, label)


def exact_identity(a: RatFunc, b: RatFunc) -> CongruenceResult:
    """``a == b`` exactly, reported as a congruence modulo the zero polynomial."""
    numerator = integer_primitive_numerator(RatFunc.of(a) - RatFunc.of(b))
    return CongruenceResult(numerator.is_zero, numerator, ZERO, False, "exact")


# ---------------------------------------------------------------------------
# Lemmas
# ---------------------------------------------------------------------------

LEMMA_IDS = (
    "fermat",
    "mod_n",
    "mod_n_new",
    "mod_n_identity",
    "mod_n_2",
    "mod_n_2_identity",
    "mod_n_new_identity",
    "bracket_inverse",
)


def _rf(num, den=1) -> RatFunc:
    return ratfunc_make(LaurentPoly.of(num), LaurentPoly.of(den))


def _mod_n_lhs(n: int) -> RatFunc:
    # (q;q^2)_n / ((1-q)(q;q)_{n-1})
    return _rf(poch_poly(1, 2, n), (ONE - Poly.monomial(1)) * poch_poly(1, 1, n - 1))


def _mod_n_new_lhs(n: int) -> RatFunc:
    # (q;q^2)_{n-1} / (q;q)_{n-1}
    return _rf(poch_poly(1, 2, n - 1), poch_poly(1, 1, n - 1))


def _qbinom_over_neg(n: int) -> RatFunc:
    # [2n choose n] / (-q;q)_n
    return _rf(central_q_binomial(n), poch_poly(1, 1, n, sign=-1))


def verify_lemma(lemma_id: str, n: int) -> CongruenceResult:
    """Check one of the auxiliary congruences or identities at odd ``n > 1``."""
    if lemma_id not in LEMMA_IDS:
        raise UsageError(f"unknown lemma id {lemma_id!r}")
    if n <= 1 or n % 2 == 0:
        raise UsageError(f"lemma {lemma_id} needs an odd n > 1, got {n}")

    n_int = RatFunc.of(q_integer(n))
    n_phi = modulus_build(ModulusSpec.of(("q_integer", n, 1), ("cyclotomic", n, 1)))
    phi = cyclotomic(n)

    if lemma_id == "fermat":
        return congruent(_rf(poch_poly(1, 1, n - 1, sign=-1)), RatFunc.of(1), phi, f"Phi_{n}")

    if lemma_id == "mod_n":
        return congruent(_mod_n_lhs(n), n_int, n_phi, f"[{n}]*Phi_{n}")

    if lemma_id == "mod_n_new":
        return congruent(_mod_n_new_lhs(n), -n_int * Poly.monomial(1), n_phi, f"[{n}]*Phi_{n}")

    if lemma_id == "mod_n_identity":
        return exact_identity(_mod_n_lhs(n), n_int * _qbinom_over_neg(n))

    if lemma_id == "mod_n_2":
        return congruent(_qbinom_over_neg(n), RatFunc.of(1), phi, f"Phi_{n}")

    if lemma_id == "mod_n_2_identity":
        half = (n - 1) // 2
        rhs = _rf(poch_poly(1, 2, half) * poch_poly(n + 2, 2, half), poch_poly(1, 1, n - 1))
        return exact_identity(_qbinom_over_neg(n), rhs)

    if lemma_id == "mod_n_new_identity":
        return exact_identity(_mod_n_new_lhs(n), _mod_n_lhs(n) / _rf(q_bracket(2 * n - 1)))

    # bracket_inverse: [2n-1] ≡ -q^{-1}
    return congruent(_rf(q_bracket(2 * n - 1)), _rf(LaurentPoly.monomial(-1, -1)), phi, f"Phi_{n}")

