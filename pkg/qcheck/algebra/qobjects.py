"""
Constructors for q-integers, q-shifted factorials, q-binomial coefficients and
cyclotomic polynomials.

Cyclotomic polynomials come from the integer recurrence
``Φ_n = (q^n - 1) / ∏_{d|n, d<n} Φ_d``; no root of unity is ever represented.
Results are memoised per process.  ``functools.lru_cache`` is safe under
concurrent lookup and the cached values are deterministic, so a racing
double computation only wastes time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from sympy import divisors

from qcheck.algebra.exactalg import ONE, ZERO, ZERO_RF, LaurentPoly, Poly, RatFunc, poly_exquo, ratfunc_make
from qcheck.core.errors import UsageError


@dataclass(frozen=True)
class QPochhammerSpec:
    """``(sign * q^base_exp; q^step)_length``; ``sign = -1`` encodes bases like ``-q``."""

    base_exp: int
    step: int = 1
    length: int = 0
    sign: int = 1

    def __post_init__(self):
        if self.step < 1:
            raise UsageError(f"q-shifted factorial step must be >= 1, got {self.step}")
        if self.length < 0:
            raise UsageError(f"q-shifted factorial length must be >= 0, got {self.length}")
        if self.sign not in (1, -1):
            raise UsageError(f"base sign must be +1 or -1, got {self.sign}")


def q_integer(n: int) -> Poly:
    """``[n] = 1 + q + ... + q^(n-1)``; ``[0] = 0``."""
    if n < 0:
        raise UsageError(f"q_integer needs n >= 0, got {n}")
    return Poly([1] * n)


def q_bracket(n: int) -> LaurentPoly:
    """``[n] = (1 - q^n)/(1 - q)`` for any integer ``n``, with ``[-m] = -q^(-m) [m]``."""
    if n >= 0:
        return LaurentPoly(q_integer(n))
    return LaurentPoly(-q_integer(-n), n)


def _factor(sign: int, e: int) -> LaurentPoly:
    # 1 - sign*q^e
    if e >= 0:
        return LaurentPoly(ONE - Poly.monomial(e, sign))
    return LaurentPoly(Poly.monomial(-e, 1) - sign, e)


@lru_cache(maxsize=None)
def _pochhammer(sign: int, a: int, d: int, k: int) -> LaurentPoly:
    if k == 0:
        return LaurentPoly(ONE)
    return _pochhammer(sign, a, d, k - 1) * _factor(sign, a + (k - 1) * d)


def q_pochhammer(spec: QPochhammerSpec) -> LaurentPoly:
    """``∏_{i<k} (1 - sign*q^(a + i*d))``; the empty product is 1."""
    # prefix products are cached, so build bottom-up to keep the recursion shallow
    for k in range(0, spec.length, 64):
        _pochhammer(spec.sign, spec.base_exp, spec.step, k)
    return _pochhammer(spec.sign, spec.base_exp, spec.step, spec.length)


def q_pochhammer_inverse_guard(spec: QPochhammerSpec, signed_length: int) -> RatFunc:
    """
    Reciprocal ``1 / (sign*q^a; q^d)_signed_length`` with the convention that
    the reciprocal of a factorial of negative length is 0.

    ``spec`` supplies base and step; ``signed_length`` replaces its length.
    """
    if signed_length < 0:
        return ZERO_RF
    value = q_pochhammer(QPochhammerSpec(spec.base_exp, spec.step, signed_length, spec.sign))
    return ratfunc_make(LaurentPoly(ONE), value)


def poch(a: int, d: int, k: int, sign: int = 1) -> LaurentPoly:
    """Shorthand for ``q_pochhammer(QPochhammerSpec(a, d, k, sign))``."""
    return q_pochhammer(QPochhammerSpec(a, d, k, sign))


def poch_poly(a: int, d: int, k: int, sign: int = 1) -> Poly:
    """``poch`` for nonnegative base exponents, returned as a plain polynomial."""
    return poch(a, d, k, sign).to_poly()


def q_factorial(n: int) -> Poly:
    """``(q;q)_n``."""
    return poch_poly(1, 1, n)


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Poly:
    """The ``n``-th cyclotomic polynomial, by exact division of ``q^n - 1``."""
    if n < 1:
        raise UsageError(f"cyclotomic needs n >= 1, got {n}")
    value = Poly.monomial(n) - 1
    for d in divisors(n)[:-1]:
        value = poly_exquo(value, cyclotomic(d))
    return value


@lru_cache(maxsize=None)
def q_binomial(n: int, k: int) -> Poly:
    """
    Gaussian binomial ``[n choose k]``, 0 outside ``0 <= k <= n``.

    Built as ``∏ Φ_d`` over the ``d`` with ``⌊n/d⌋ - ⌊k/d⌋ - ⌊(n-k)/d⌋ = 1``.
    """
    if k < 0 or k > n:
        return ZERO
    value = ONE
    for d in range(2, n + 1):
        if n // d - k // d - (n - k) // d:
            value = value * cyclotomic(d)
    return value


def central_q_binomial(k: int) -> Poly:
    """``[2k choose k] = (q;q)_{2k} / (q;q)_k^2``."""
    return q_binomial(2 * k, k)
