"""Exact arithmetic for rational mode.

Constants such as ``(avg v)**(1/p) * prod (avg sigma_i)**(1/p_i')`` leave the
rationals as soon as an exponent is fractional.  :class:`PowerProduct` keeps
them exact as a finite product ``prod b_j ** e_j`` with rational bases and
rational exponents; two such numbers are compared by raising both to a common
integer power, which brings everything back into :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable

import numpy as np


def iroot(x: int, d: int) -> int | None:
    """Return the exact integer ``d``-th root of ``x >= 0`` or None."""
    if x < 0 or d < 1:
        raise ValueError("iroot needs x >= 0 and d >= 1")
    if x in (0, 1) or d == 1:
        return x
    # Newton iteration from above
    r = 1 << ((x.bit_length() + d - 1) // d)
    while True:
        s = ((d - 1) * r + x // r ** (d - 1)) // d
        if s >= r:
            break
        r = s
    return r if r**d == x else None


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


class PowerProduct:
    """Nonnegative real ``prod base ** exp`` with rational bases and exponents.

    Zero is represented by ``factors is None``.  Bases are positive Fractions
    other than 1; exponents are nonzero Fractions.  Equal bases are merged, and
    a base that is a perfect power is reduced when that makes an exponent
    integral, so rational values usually collapse to a single integer-power
    factor and :meth:`rational` can recover them.
    """

    __slots__ = ("factors",)

    def __init__(self, factors: dict[Fraction, Fraction] | None):
        self.factors = factors

    # construction ----------------------------------------------------
    @classmethod
    def of(cls, x) -> "PowerProduct":
        if isinstance(x, PowerProduct):
            return x
        if isinstance(x, (float, np.floating)):
            raise TypeError("PowerProduct needs exact input, got a float")
        q = Fraction(x)
        if q < 0:
            raise ValueError("PowerProduct represents nonnegative reals only")
        if q == 0:
            return cls(None)
        return cls._normalized({q: Fraction(1)})

    @classmethod
    def _normalized(cls, factors: dict[Fraction, Fraction]) -> "PowerProduct":
        out: dict[Fraction, Fraction] = {}
        for base, e in factors.items():
            if base == 1 or e == 0:
                continue
            base, e = _reduce_perfect_power(base, e)
            out[base] = out.get(base, Fraction(0)) + e
        # integral exponents fold into one rational coefficient
        coef = Fraction(1)
        rest: dict[Fraction, Fraction] = {}
        for base, e in out.items():
            if e == 0:
                continue
            if e.denominator == 1:
                coef *= base ** int(e)
            else:
                rest[base] = e
        if coef != 1:
            rest[coef] = rest.get(coef, Fraction(0)) + 1
            if rest[coef] == 0:
                del rest[coef]
        return cls(rest)

    # arithmetic ------------------------------------------------------
    def __mul__(self, other) -> "PowerProduct":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.factors is None or other.factors is None:
            return PowerProduct(None)
        merged = dict(self.factors)
        for b, e in other.factors.items():
            merged[b] = merged.get(b, Fraction(0)) + e
        return PowerProduct._normalized(merged)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PowerProduct":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other ** -1

    def __rtruediv__(self, other) -> "PowerProduct":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self ** -1

    def __pow__(self, e) -> "PowerProduct":
        if isinstance(e, (float, np.floating)):
            raise TypeError("exact powers need a rational exponent")
        e = Fraction(e)
        if self.factors is None:
            if e > 0:
                return self
            if e == 0:
                return PowerProduct({})
            raise ZeroDivisionError("zero to a nonpositive power")
        return PowerProduct._normalized({b: x * e for b, x in self.factors.items()})

    # comparisons -----------------------------------------------------
    def _cmp(self, other) -> int:
        other = _coerce(other)
        if other is NotImplemented:
            raise TypeError("cannot compare PowerProduct with this type")
        if self.factors is None or other.factors is None:
            a = 0 if self.factors is None else 1
            b = 0 if other.factors is None else 1
            return (a > b) - (a < b)
        ratio = self / other
        d = _lcm(e.denominator for e in ratio.factors.values())
        value = Fraction(1)
        for b, e in ratio.factors.items():
            value *= b ** int(e * d)
        return (value > 1) - (value < 1)

    def __eq__(self, other) -> bool:
        if _coerce(other) is NotImplemented:
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __hash__(self) -> int:
        q = self.rational()
        if q is None:
            raise TypeError("irrational PowerProduct values are unhashable")
        return hash(q)

    # conversions -----------------------------------------------------
    def rational(self) -> Fraction | None:
        """The value as a Fraction, or None when it is irrational."""
        if self.factors is None:
            return Fraction(0)
        if not self.factors:
            return Fraction(1)
        d = _lcm(e.denominator for e in self.factors.values())
        value = Fraction(1)
        for b, e in self.factors.items():
            value *= b ** int(e * d)
        num = iroot(value.numerator, d)
        den = iroot(value.denominator, d)
        if num is None or den is None:
            return None
        return Fraction(num, den)

    def log(self) -> float:
        if self.factors is None:
            return -math.inf
        return sum(float(e) * (math.log(b.numerator) - math.log(b.denominator))
                   for b, e in self.factors.items())

    def __float__(self) -> float:
        if self.factors is None:
            return 0.0
        return math.exp(self.log())

    def __bool__(self) -> bool:
        return self.factors is not None

    def __repr__(self) -> str:
        if self.factors is None:
            return "0"
        if not self.factors:
            return "1"
        parts = []
        for b, e in sorted(self.factors.items()):
            parts.append(f"({b})" if e == 1 else f"({b})^({e})")
        return "*".join(parts)


def _coerce(x):
    if isinstance(x, PowerProduct):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return PowerProduct.of(x)
    return NotImplemented


def _reduce_perfect_power(base: Fraction, e: Fraction) -> tuple[Fraction, Fraction]:
    d = e.denominator
    if d == 1:
        return base, e
    # pull out the largest k | d with base a perfect k-th power
    for k in sorted(_divisors(d), reverse=True):
        if k == 1:
            break
        num = iroot(base.numerator, k)
        den = iroot(base.denominator, k)
        if num is not None and den is not None:
            return Fraction(num, den), e * k
    return base, e


def _divisors(d: int) -> list[int]:
    return [k for k in range(1, d + 1) if d % k == 0]


def exact_power(x, e):
    """``x ** e`` kept exact: Fractions and PowerProducts in, PowerProduct out."""
    return PowerProduct.of(x) ** e


def to_exact(x) -> Fraction:
    """Convert a config value (int, str like '4/3', Fraction, float) to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    return Fraction(x)
