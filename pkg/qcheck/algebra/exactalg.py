"""
Exact arithmetic kernel.

Rationals are :class:`fractions.Fraction`.  On top of them this module provides
dense polynomials in ``q`` (:class:`Poly`), Laurent polynomials
(:class:`LaurentPoly`) and rational functions kept in reduced canonical form
(:class:`RatFunc`).  Every value is immutable and every operation is exact.

Multiplication and gcd run on sympy's dense univariate toolkit over ``ZZ``
after clearing denominators; division with remainder is a direct loop with an
integer fast path for divisors whose leading coefficient is a unit.

Canonical forms:

* ``Poly``: no trailing zero coefficients; the zero polynomial is ``Poly(())``.
* ``LaurentPoly``: body has a nonzero constant term; zero has offset 0.
* ``RatFunc``: ``gcd(num, den) == 1``, ``den`` monic; zero is ``0 / 1``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Iterable, Sequence, Union

from sympy.polys.densearith import dup_mul
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd, dup_inner_gcd

from qcheck.core.errors import AlgebraError, PolyZeroDivisionError, UsageError

Rational = Fraction
Scalar = Union[int, Fraction]

_F0 = Fraction(0)
_F1 = Fraction(1)


def _as_fraction(c: Any) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, bool) or not isinstance(c, int):
        raise AlgebraError(f"coefficients must be int or Fraction, got {type(c).__name__}")
    return Fraction(c)


def _to_zz(ints: Sequence[int]) -> list:
    """Low-to-high integer coefficients -> sympy dense list (high-to-low) over ZZ."""
    return [ZZ(c) for c in reversed(ints)]


def _from_zz(dup: Sequence) -> list[int]:
    return [int(c) for c in reversed(dup)]


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------


class Poly:
    """Dense polynomial over the rationals; ``coeffs[i]`` is the coefficient of ``q**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        # caller guarantees Fraction entries and a nonzero top coefficient
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def from_ints(cls, ints: Sequence[int], den: int = 1) -> "Poly":
        """Build ``(1/den) * sum(ints[i] q^i)``."""
        cs = list(ints)
        while cs and not cs[-1]:
            cs.pop()
        if den == 1:
            return cls._raw(tuple(Fraction(c) for c in cs))
        return cls._raw(tuple(Fraction(c, den) for c in cs))

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> "Poly":
        if k < 0:
            raise AlgebraError("negative exponent in a Poly; use LaurentPoly")
        c = _as_fraction(c)
        if not c:
            return ZERO
        return cls._raw((_F0,) * k + (c,))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly._raw, (self.coeffs,))

    # -- inspection ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _F0

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    @property
    def valuation(self) -> int:
        """Exponent of the lowest nonzero term; ``0`` for zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    def integral_parts(self) -> tuple[list[int], int]:
        """Return ``(ints, den)`` with ``self == Poly.from_ints(ints, den)`` and ``den`` minimal."""
        if not self.coeffs:
            return [], 1
        den = math.lcm(*(c.denominator for c in self.coeffs))
        return [c.numerator * (den // c.denominator) for c in self.coeffs], den

    def __call__(self, x: Scalar) -> Fraction:
        acc = _F0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- arithmetic ---------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.coeffs == Poly((other,)).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Poly", self.coeffs))

    def __repr__(self) -> str:
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __neg__(self) -> "Poly":
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other: "Poly | Scalar") -> "Poly":
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = Poly((other,))
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other: "Poly | Scalar") -> "Poly":
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = Poly((other,))
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Poly":
        return (-self) + other

    def scale(self, c: Scalar) -> "Poly":
        c = _as_fraction(c)
        if not c:
            return ZERO
        return Poly._raw(tuple(x * c for x in self.coeffs))

    def __mul__(self, other: "Poly | Scalar") -> "Poly":
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            return ZERO
        a, da = self.integral_parts()
        b, db = other.integral_parts()
        return Poly.from_ints(_from_zz(dup_mul(_to_zz(a), _to_zz(b), ZZ)), da * db)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise AlgebraError("negative power of a Poly; use RatFunc")
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        return poly_divrem(self, other)

    def shift(self, k: int) -> "Poly":
        """Multiply by ``q**k`` (``k >= 0``)."""
        if k < 0:
            raise AlgebraError("negative shift of a Poly; use LaurentPoly")
        if not self.coeffs or not k:
            return self
        return Poly._raw((_F0,) * k + self.coeffs)

    def monic(self) -> "Poly":
        if not self.coeffs:
            raise PolyZeroDivisionError("the zero polynomial has no monic associate")
        return self.scale(1 / self.coeffs[-1])

    def to_json(self) -> dict:
        return poly_to_json(self)


ZERO = Poly._raw(())
ONE = Poly._raw((_F1,))
Q = Poly._raw((_F0, _F1))


# ---------------------------------------------------------------------------
# Division and gcd
# ---------------------------------------------------------------------------


def _int_divrem(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    """Division by an integer polynomial with leading coefficient 1."""
    r = list(a)
    db = len(b) - 1
    quot = [0] * (len(r) - db)
    low = b[:db]
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            quot[i - db] = c
            base = i - db
            for j, bj in enumerate(low):
                if bj:
                    r[base + j] -= c * bj
    return quot, r[:db]


def poly_divrem(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Return ``(quotient, remainder)`` with ``a == b*quotient + remainder`` and ``deg(remainder) < deg(b)``."""
    if b.is_zero:
        raise PolyZeroDivisionError("division by the zero polynomial")
    if a.degree < b.degree:
        return ZERO, a

    if b.lead in (1, -1) and b.is_integral and a.is_integral:
        sign = int(b.lead)
        bi = [int(c) * sign for c in b.coeffs]
        quot, rem = _int_divrem([int(c) for c in a.coeffs], bi)
        return Poly.from_ints(quot).scale(sign), Poly.from_ints(rem)

    r = list(a.coeffs)
    bl = b.coeffs
    db = len(bl) - 1
    inv = 1 / bl[-1]
    quot = [_F0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * inv
        if c:
            quot[i - db] = c
            base = i - db
            for j in range(db):
                if bl[j]:
                    r[base + j] -= c * bl[j]
    return Poly(quot), Poly(r[:db])


def poly_exquo(a: Poly, b: Poly) -> Poly:
    """Exact quotient ``a / b``; raises :class:`AlgebraError` when ``b`` does not divide ``a``."""
    quot, rem = poly_divrem(a, b)
    if not rem.is_zero:
        raise AlgebraError(f"inexact division: remainder of degree {rem.degree}")
    return quot


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor over the rationals."""
    if a.is_zero and b.is_zero:
        raise AlgebraError("gcd of two zero polynomials is undefined")
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    if a.degree == 0 or b.degree == 0:
        return ONE
    h = dup_gcd(_to_zz(a.integral_parts()[0]), _to_zz(b.integral_parts()[0]), ZZ)
    return Poly.from_ints(_from_zz(h)).monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    """Monic least common multiple; zero if either argument is zero."""
    if a.is_zero or b.is_zero:
        return ZERO
    return poly_exquo(a * b, poly_gcd(a, b)).monic()


# ---------------------------------------------------------------------------
# LaurentPoly
# ---------------------------------------------------------------------------


class LaurentPoly:
    """``body * q**offset`` where ``body`` has a nonzero constant term."""

    __slots__ = ("body", "offset")

    def __init__(self, body: Poly, offset: int = 0):
        if body.is_zero:
            offset = 0
        else:
            v = body.valuation
            if v:
                body = Poly._raw(body.coeffs[v:])
                offset += v
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "offset", offset)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    def __reduce__(self):
        return (LaurentPoly, (self.body, self.offset))

    @classmethod
    def of(cls, x: "LaurentPoly | Poly | Scalar") -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, Poly):
            return cls(x)
        return cls(Poly((x,)))

    @classmethod
    def monomial(cls, t: int, c: Scalar = 1) -> "LaurentPoly":
        return cls(Poly((c,)), t)

    @property
    def is_zero(self) -> bool:
        return self.body.is_zero

    @property
    def is_poly(self) -> bool:
        return self.offset >= 0

    def to_poly(self) -> Poly:
        if self.offset < 0:
            raise AlgebraError("Laurent polynomial has negative exponents")
        return self.body.shift(self.offset)

    def __call__(self, x: Scalar) -> Fraction:
        return self.body(x) * Fraction(x) ** self.offset

    def __bool__(self) -> bool:
        return not self.body.is_zero

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (Poly, int, Fraction)) and not isinstance(other, bool):
            other = LaurentPoly.of(other)
        if isinstance(other, LaurentPoly):
            return self.offset == other.offset and self.body == other.body
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("LaurentPoly", self.body.coeffs, self.offset))

    def __repr__(self) -> str:
        return f"LaurentPoly({self.body!r}, offset={self.offset})"

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(-self.body, self.offset)

    def __add__(self, other: "LaurentPoly | Poly | Scalar") -> "LaurentPoly":
        if not isinstance(other, (LaurentPoly, Poly, int, Fraction)):
            return NotImplemented
        other = LaurentPoly.of(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        low = min(self.offset, other.offset)
        body = self.body.shift(self.offset - low) + other.body.shift(other.offset - low)
        return LaurentPoly(body, low)

    __radd__ = __add__

    def __sub__(self, other: "LaurentPoly | Poly | Scalar") -> "LaurentPoly":
        if not isinstance(other, (LaurentPoly, Poly, int, Fraction)):
            return NotImplemented
        return self + (-LaurentPoly.of(other))

    def __rsub__(self, other: "Poly | Scalar") -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other: "LaurentPoly | Poly | Scalar") -> "LaurentPoly":
        if not isinstance(other, (LaurentPoly, Poly, int, Fraction)):
            return NotImplemented
        other = LaurentPoly.of(other)
        return LaurentPoly(self.body * other.body, self.offset + other.offset)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LaurentPoly":
        if e < 0:
            raise AlgebraError("negative power of a LaurentPoly; use RatFunc")
        return LaurentPoly(self.body**e, self.offset * e)

    def shift(self, t: int) -> "LaurentPoly":
        """Multiply by ``q**t`` for any integer ``t``."""
        return LaurentPoly(self.body, self.offset + t)

    def to_json(self) -> dict:
        return laurent_to_json(self)


# ---------------------------------------------------------------------------
# RatFunc
# ---------------------------------------------------------------------------


class RatFunc:
    """Reduced quotient ``num / den`` with ``den`` monic and coprime to ``num``."""

    __slots__ = ("num", "den")

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        obj = object.__new__(cls)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "den", den)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    def __reduce__(self):
        return (RatFunc._raw, (self.num, self.den))

    @classmethod
    def of(cls, x: "RatFunc | LaurentPoly | Poly | Scalar") -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, LaurentPoly):
            return ratfunc_make(x, LaurentPoly.of(1))
        if isinstance(x, Poly):
            return cls._raw(x, ONE)
        return cls._raw(Poly((x,)), ONE)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self) -> bool:
        return not self.num.is_zero

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (LaurentPoly, Poly, int, Fraction)) and not isinstance(other, bool):
            other = RatFunc.of(other)
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("RatFunc", self.num.coeffs, self.den.coeffs))

    def __repr__(self) -> str:
        return f"RatFunc({self.num!r} / {self.den!r})"

    def __neg__(self) -> "RatFunc":
        return RatFunc._raw(-self.num, self.den)

    def _binary(self, other, op: str, reflected: bool = False) -> "RatFunc":
        if not isinstance(other, (RatFunc, LaurentPoly, Poly, int, Fraction)):
            return NotImplemented
        other = RatFunc.of(other)
        if reflected:
            return ratfunc_arith(other, self, op)
        return ratfunc_arith(self, other, op)

    def __add__(self, other):
        return self._binary(other, "add")

    def __radd__(self, other):
        return self._binary(other, "add", reflected=True)

    def __sub__(self, other):
        return self._binary(other, "sub")

    def __rsub__(self, other):
        return self._binary(other, "sub", reflected=True)

    def __mul__(self, other):
        return self._binary(other, "mul")

    def __rmul__(self, other):
        return self._binary(other, "mul", reflected=True)

    def __truediv__(self, other):
        return self._binary(other, "div")

    def __rtruediv__(self, other):
        return self._binary(other, "div", reflected=True)

    def __pow__(self, e: int) -> "RatFunc":
        if e < 0:
            return RatFunc.of(1) / (self ** (-e))
        # powers of coprime polynomials stay coprime
        return RatFunc._raw(self.num**e, self.den**e) if self.num else (ZERO_RF if e else ONE_RF)

    def evaluate(self, x: Scalar) -> Fraction:
        d = self.den(x)
        if not d:
            raise PolyZeroDivisionError(f"pole at q = {x}")
        return self.num(x) / d

    def to_json(self) -> dict:
        return ratfunc_to_json(self)


def _reduce(num: Poly, den: Poly) -> RatFunc:
    """Cancel the gcd and make the denominator monic."""
    if den.is_zero:
        raise PolyZeroDivisionError("zero denominator")
    if num.is_zero:
        return ZERO_RF
    if den.degree == 0:
        return RatFunc._raw(num.scale(1 / den.lead), ONE)
    if len(den.coeffs) - den.valuation == 1:
        # den is c*q^t: only powers of q can cancel
        t = min(den.degree, num.valuation)
        num = Poly._raw(num.coeffs[t:])
        den = Poly._raw(den.coeffs[t:])
        return RatFunc._raw(num.scale(1 / den.lead), den.scale(1 / den.lead))

    n_ints, dn = num.integral_parts()
    d_ints, dd = den.integral_parts()
    _, cff, cfg = dup_inner_gcd(_to_zz(n_ints), _to_zz(d_ints), ZZ)
    new_num, new_den = _from_zz(cff), _from_zz(cfg)
    lead = new_den[-1]
    scale = Fraction(dd, dn * lead)
    return RatFunc._raw(Poly.from_ints(new_num).scale(scale), Poly.from_ints(new_den, lead))


def ratfunc_make(num: "LaurentPoly | Poly", den: "LaurentPoly | Poly") -> RatFunc:
    """Fold the q-offsets, cancel the gcd and scale the denominator monic."""
    num = LaurentPoly.of(num)
    den = LaurentPoly.of(den)
    if den.is_zero:
        raise PolyZeroDivisionError("zero denominator")
    t = num.offset - den.offset
    if t >= 0:
        return _reduce(num.body.shift(t), den.body)
    return _reduce(num.body, den.body.shift(-t))


def ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    """Exact field arithmetic; ``op`` is one of ``add``, ``sub``, ``mul``, ``div``."""
    if op == "add" or op == "sub":
        bn = b.num if op == "add" else -b.num
        if a.is_zero:
            return RatFunc._raw(bn, b.den)
        if b.is_zero:
            return a
        if a.den == b.den:
            return _reduce(a.num + bn, a.den)
        return _reduce(a.num * b.den + bn * a.den, a.den * b.den)
    if op == "mul":
        if a.is_zero or b.is_zero:
            return ZERO_RF
        return _reduce(a.num * b.num, a.den * b.den)
    if op == "div":
        if b.is_zero:
            raise PolyZeroDivisionError("division by the zero rational function")
        if a.is_zero:
            return ZERO_RF
        return _reduce(a.num * b.den, a.den * b.num)
    raise UsageError(f"unknown rational-function operation {op!r}")


def integer_primitive_numerator(a: RatFunc) -> Poly:
    """Numerator scaled to integer coefficients with content 1 and positive leading coefficient."""
    if a.num.is_zero:
        return ZERO
    ints, _ = a.num.integral_parts()
    g = math.gcd(*ints)
    if ints[-1] < 0:
        g = -g
    return Poly.from_ints([c // g for c in ints])


def accumulate_quotients(
    terms: Iterable[tuple["LaurentPoly | Poly", "LaurentPoly | Poly"]],
    common_den: Poly | None = None,
    divisor: Poly | None = None,
) -> RatFunc:
    """
    Sum unreduced ``(numerator, denominator)`` pairs over one common denominator
    and reduce once.

    ``common_den`` must be divisible by every term's denominator body; when it
    is omitted the monic lcm of the bodies is used.  A ``divisor`` common to the
    whole sum is folded into the denominator before the reduction.
    """
    folded = []
    for num, den in terms:
        num = LaurentPoly.of(num)
        den = LaurentPoly.of(den)
        if den.is_zero:
            raise PolyZeroDivisionError("zero denominator in a summand")
        if num.is_zero:
            continue
        folded.append((num.body, num.offset - den.offset, den.body))
    if not folded:
        return ZERO_RF

    if common_den is None:
        common_den = ONE
        for _, _, d in folded:
            common_den = poly_lcm(common_den, d)

    low = min(e for _, e, _ in folded)
    total = ZERO
    cofactors: dict[Poly, Poly] = {}
    for body, e, d in folded:
        cof = cofactors.get(d)
        if cof is None:
            cof = cofactors[d] = poly_exquo(common_den, d)
        total = total + (body * cof).shift(e - low)
    if divisor is not None:
        common_den = common_den * divisor
    return ratfunc_make(LaurentPoly(total, low), common_den)


ZERO_RF = RatFunc._raw(ZERO, ONE)
ONE_RF = RatFunc._raw(ONE, ONE)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _fraction_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def poly_to_json(p: Poly) -> dict:
    return {"offset": 0, "coeffs": [_fraction_str(c) for c in p.coeffs]}


def laurent_to_json(p: LaurentPoly) -> dict:
    return {"offset": p.offset, "coeffs": [_fraction_str(c) for c in p.body.coeffs]}


def ratfunc_to_json(r: RatFunc) -> dict:
    return {"num": poly_to_json(r.num), "den": poly_to_json(r.den)}


def poly_from_json(data: dict) -> LaurentPoly:
    """Read back a ``poly_to_json`` or ``laurent_to_json`` payload."""
    try:
        body = Poly(Fraction(s) for s in data["coeffs"])
        return LaurentPoly(body, int(data.get("offset", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed polynomial JSON: {exc}") from exc
