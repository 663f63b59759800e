"""Exact interval helpers: rational endpoints, outward rounding, decimal output."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

import mpmath

Real = Union[int, Fraction, float]


def to_fraction(x: object) -> Fraction:
    """Parse an exact rational from int, Fraction, ``"p/q"`` or decimal strings.

    Floats are accepted only because every binary64 value is an exact dyadic
    rational; no rounding happens here.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip().replace(" ", ""))
    if isinstance(x, mpmath.mpf):
        return mpf_to_fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    sign, man, exp, _bc = x._mpf_
    if not man and exp:
        raise ValueError("non-finite mpf")
    v = int(man)
    if sign:
        v = -v
    return Fraction(v << exp) if exp >= 0 else Fraction(v, 1 << -exp)


def floor_div(a: int, b: int) -> int:
    return a // b


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def floor_scaled(x: Fraction, bits: int) -> int:
    """floor(x * 2**bits)."""
    return (x.numerator << bits) // x.denominator if bits >= 0 else math.floor(x / (1 << -bits))


def ceil_scaled(x: Fraction, bits: int) -> int:
    return -floor_scaled(-x, bits)


def sqrt_bounds(q: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational bounds lo <= sqrt(q) <= hi with hi - lo <= 2**-bits (q >= 0)."""
    if q < 0:
        raise ValueError("negative argument")
    if q == 0:
        return Fraction(0), Fraction(0)
    scaled = (q.numerator << (2 * bits)) // q.denominator
    r = math.isqrt(scaled)
    lo = Fraction(r, 1 << bits)
    hi = lo if lo * lo == q else Fraction(r + 1, 1 << bits)
    return lo, hi


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi]; endpoints are exact rationals or binary64 floats."""

    lo: Real
    hi: Real

    def __post_init__(self) -> None:
        if self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Real) -> "Interval":
        return cls(x, x)

    @property
    def width(self) -> Real:
        return self.hi - self.lo

    @property
    def mid(self) -> Real:
        return (self.lo + self.hi) / 2

    def contains(self, x: Real) -> bool:
        return self.lo <= x <= self.hi

    def __contains__(self, x: Real) -> bool:
        return self.contains(x)

    def subset_of(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(self.lo * 0, max(-self.lo, self.hi))

    def __float__(self) -> float:
        return float(self.mid)

    def to_json(self, digits: int | None = None) -> list[str]:
        if digits is None:
            return [str(self.lo), str(self.hi)]
        return [decimal_floor(to_fraction(self.lo), digits), decimal_ceil(to_fraction(self.hi), digits)]


def iv_to_interval(x: "mpmath.ctx_iv.ivmpf") -> Interval:
    """Convert an mpmath interval to an exact-rational Interval (no widening)."""
    return Interval(mpf_to_fraction(mpmath.mpf(x.a)), mpf_to_fraction(mpmath.mpf(x.b)))


def interval_to_iv(x: Interval):
    lo, hi = to_fraction(x.lo), to_fraction(x.hi)
    return mpmath.iv.mpf([_iv_fraction(lo).a, _iv_fraction(hi).b])


def _iv_fraction(q: Fraction):
    return mpmath.iv.mpf(q.numerator) / q.denominator


def rational_iv(q: Fraction):
    """Tight mpmath interval enclosing the rational q at the current iv precision."""
    return _iv_fraction(q)


def _decimal(x: Fraction, digits: int, rounding) -> str:
    scaled = x * 10**digits
    k = rounding(scaled)
    sign = "-" if k < 0 else ""
    k = abs(k)
    if digits == 0:
        return f"{sign}{k}"
    s = str(k).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def decimal_floor(x: Fraction, digits: int) -> str:
    """Decimal string d with d <= x, exactly ``digits`` fractional digits."""
    return _decimal(x, digits, math.floor)


def decimal_ceil(x: Fraction, digits: int) -> str:
    return _decimal(x, digits, math.ceil)


def digits_for_bits(bits: int) -> int:
    """Decimal places needed so outward rounding adds at most ~2**-bits."""
    return max(1, math.ceil((bits + 2) * math.log10(2)) + 1)


def fraction_mpi(lo: Fraction, hi: Fraction, prec: int):
    """libmp interval tuple enclosing [lo, hi] at ``prec`` bits."""
    from mpmath import libmp

    return (libmp.from_rational(lo.numerator, lo.denominator, prec, "f"),
            libmp.from_rational(hi.numerator, hi.denominator, prec, "c"))


def mpi_to_interval(x) -> Interval:
    a, b = x
    return Interval(mpf_to_fraction(mpmath.mpf(a)), mpf_to_fraction(mpmath.mpf(b)))


def log_interval(lo: Fraction, hi: Fraction, prec: int) -> Interval:
    """Outward enclosure of [log lo, log hi] for 0 < lo <= hi."""
    from mpmath import libmp

    return mpi_to_interval(libmp.mpi_log(fraction_mpi(lo, hi, prec), prec))
