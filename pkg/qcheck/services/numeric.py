"""
The q -> 1 side: classical supercongruences modulo prime powers, the
binomial divisibility claims, and bridges between q-summands and their
classical limits.  All arithmetic is on exact rationals and integers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal

from sympy import isprime

from qcheck.algebra.exactalg import RatFunc
from qcheck.core.errors import IntegralityError, PoleError, UsageError
from qcheck.services.wzengine import WZPoint, theorem_summand, wz_F

logger = logging.getLogger(__name__)

SupercongruenceId = Literal["div1_half", "div1_full", "guo1", "wang", "guo1_pr", "wang_pr"]
DivisibilityId = Literal["sun_3k1", "sunby", "strong"]
BridgeId = Literal["wz_F0", "wang", "guo"]

SUPERCONGRUENCE_IDS: tuple[str, ...] = ("div1_half", "div1_full", "guo1", "wang", "guo1_pr", "wang_pr")
DIVISIBILITY_IDS: tuple[str, ...] = ("sun_3k1", "sunby", "strong")
BRIDGE_IDS: tuple[str, ...] = ("wz_F0", "wang", "guo")


@dataclass(frozen=True)
class SupercongruenceSpec:
    id: str
    p: int
    r: int | None = None

    def __post_init__(self):
        if self.id not in SUPERCONGRUENCE_IDS:
            raise UsageError(f"unknown supercongruence id {self.id!r}")
        if not isprime(self.p):
            raise UsageError(f"{self.id} needs a prime p, got {self.p}")
        floor = 2 if self.id.startswith("div1") else 3
        if self.p <= floor:
            raise UsageError(f"{self.id} needs p > {floor}, got {self.p}")
        if self.id.endswith("_pr"):
            if self.r is None or self.r < 2:
                raise UsageError(f"{self.id} needs r >= 2, got {self.r}")
        elif self.r is not None:
            raise UsageError(f"{self.id} takes no exponent r")


@dataclass(frozen=True)
class DivisibilitySpec:
    id: str
    n: int

    def __post_init__(self):
        if self.id not in DIVISIBILITY_IDS:
            raise UsageError(f"unknown divisibility id {self.id!r}")
        if self.n < 2:
            raise UsageError(f"{self.id} needs n >= 2, got {self.n}")


def pochhammer(a: Fraction | int, k: int) -> Fraction:
    """Rising factorial ``a (a+1) ... (a+k-1)``."""
    if k < 0:
        raise UsageError(f"pochhammer needs k >= 0, got {k}")
    a = Fraction(a)
    value = Fraction(1)
    for i in range(k):
        value *= a + i
    return value


def _central_binomials(upper: int) -> Iterator[tuple[int, int]]:
    """``(k, C(2k,k))`` for ``0 <= k < upper``."""
    c = 1
    for k in range(upper):
        yield k, c
        c = c * 2 * (2 * k + 1) // (k + 1)


def _div1_term(k: int, c: int) -> Fraction:
    return Fraction((3 * k + 1) * c**3, 16**k)


def _guo_term(k: int, c: int) -> Fraction:
    return Fraction(6 * k**4 * c**3, 16**k * (2 * k - 1))


def _wang_terms(upper: int) -> Iterator[Fraction]:
    # (3k-1) (1/2)_k (-1/2)_k^2 4^k / k!^3, by term ratio
    half = neg_half = Fraction(1)
    fact = 1
    for k in range(upper):
        yield (3 * k - 1) * half * neg_half**2 * 4**k / fact**3
        half *= Fraction(1, 2) + k
        neg_half *= Fraction(-1, 2) + k
        fact *= k + 1


def _series(kind: str, upper: int) -> Fraction:
    """Exact ``Σ_{k<upper}`` of the classical summand."""
    if kind == "wang":
        return sum(_wang_terms(upper), Fraction(0))
    term = _div1_term if kind == "div1" else _guo_term
    return sum((term(k, c) for k, c in _central_binomials(upper)), Fraction(0))


def _reduce_mod(value: Fraction, p: int, modulus: int) -> int:
    if value.denominator % p == 0:
        raise IntegralityError(f"denominator {value.denominator} of the sum is divisible by p = {p}")
    return value.numerator * pow(value.denominator, -1, modulus) % modulus


def supercongruence_residue(spec: SupercongruenceSpec) -> tuple[int, int, int]:
    """Return ``(residue, target, modulus)`` for the stated range and power of ``p``."""
    p, r = spec.p, spec.r
    if spec.id == "div1_half":
        total, modulus, target = _series("div1", (p + 1) // 2), p**3, p
    elif spec.id == "div1_full":
        total, modulus, target = _series("div1", p), p**3, p
    elif spec.id == "guo1":
        total, modulus, target = _series("guo", p), p**4, p + 2 * p**3
    elif spec.id == "wang":
        total, modulus, target = _series("wang", p), p**4, p - 2 * p**3
    elif spec.id == "guo1_pr":
        total, modulus, target = _series("guo", p**r), p ** (r + 3), p**r
    else:
        total, modulus, target = _series("wang", p**r), p ** (r + 3), p**r
    return _reduce_mod(total, p, modulus), target % modulus, modulus


def check_supercongruence(spec: SupercongruenceSpec) -> bool:
    residue, target, modulus = supercongruence_residue(spec)
    if residue != target:
        logger.info(f"{spec.id} at p={spec.p}: residue {residue} != {target} mod {modulus}")
    return residue == target


def check_half_full_agreement(p: int) -> bool:
    """The two truncations of the ``(3k+1)`` series agree modulo ``p^3``."""
    if not isprime(p) or p < 3:
        raise UsageError(f"agreement check needs an odd prime, got {p}")
    modulus = p**3
    half = _reduce_mod(_series("div1", (p + 1) // 2), p, modulus)
    full = _reduce_mod(_series("div1", p), p, modulus)
    return half == full


def divisibility_sum(spec: DivisibilitySpec) -> int:
    """``Σ_{k=0}^{n-1} term_k 16^(n-k-1)`` as an exact integer."""
    n = spec.n
    total = Fraction(0)
    for k, c in _central_binomials(n):
        if spec.id == "sun_3k1":
            term = Fraction((3 * k + 1) * c**3)
        else:
            term = Fraction(6 * k**4 * c**3, 2 * k - 1)
        total += term * 16 ** (n - k - 1)
    if total.denominator != 1:
        raise IntegralityError(f"{spec.id} sum at n={n} is not an integer: {total}")
    return total.numerator


def divisibility_divisor(spec: DivisibilitySpec) -> int:
    c = next(c for k, c in _central_binomials(spec.n + 1) if k == spec.n)
    factor = 4 if spec.id == "strong" else 2
    return factor * spec.n * c


def check_divisibility(spec: DivisibilitySpec) -> bool:
    return divisibility_sum(spec) % divisibility_divisor(spec) == 0


def eval_at_one(r: RatFunc) -> Fraction:
    """Value of the reduced rational function at ``q = 1``."""
    r = RatFunc.of(r)
    den = r.den(1)
    if den == 0:
        raise PoleError(f"reduced denominator vanishes at q = 1: {r.den!r}")
    return r.num(1) / den


def bridge_values(bridge_id: BridgeId, k: int) -> tuple[Fraction, Fraction]:
    """``(q -> 1 limit of the q-summand, classical summand)`` at index ``k``."""
    if k < 0:
        raise UsageError(f"bridge index must be >= 0, got {k}")
    c = next(c for i, c in _central_binomials(k + 1) if i == k)
    if bridge_id == "wz_F0":
        return eval_at_one(wz_F(WZPoint(k, 0))), _div1_term(k, c)
    if bridge_id == "wang":
        return eval_at_one(theorem_summand("thm_1_2", k)), list(_wang_terms(k + 1))[-1]
    if bridge_id == "guo":
        return eval_at_one(theorem_summand("thm_1_1", k)), _guo_term(k, c)
    raise UsageError(f"unknown bridge id {bridge_id!r}")


def bridge_check(bridge_id: BridgeId, k: int) -> bool:
    symbolic, classical = bridge_values(bridge_id, k)
    return symbolic == classical
