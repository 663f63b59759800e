"""Exact arithmetic in Q(alpha), elements stored as coordinate vectors."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebraic import AlgebraicNumber
from .enclosure import Interval, to_fraction
from .errors import ValidationError
from .polynomial import qinverse_mod, qmul, qpoly, qrem


@dataclass(frozen=True)
class NumberFieldElement:
    """c_0 + c_1 alpha + ... + c_{d-1} alpha^{d-1}."""

    coords: tuple[Fraction, ...]
    field: AlgebraicNumber

    def __post_init__(self) -> None:
        if len(self.coords) != self.field.degree:
            raise ValidationError(f"expected {self.field.degree} coordinates, got {len(self.coords)}")

    @classmethod
    def from_coords(cls, coords: Iterable, field: AlgebraicNumber) -> "NumberFieldElement":
        cs = [to_fraction(c) for c in coords]
        d = field.degree
        if len(cs) > d:
            return cls._reduce(cs, field)
        return cls(tuple(cs + [Fraction(0)] * (d - len(cs))), field)

    @classmethod
    def _reduce(cls, poly: Sequence[Fraction], field: AlgebraicNumber) -> "NumberFieldElement":
        r = qrem(list(poly), qpoly(field.minpoly.coeffs))
        d = field.degree
        return cls(tuple(r + [Fraction(0)] * (d - len(r))), field)

    @classmethod
    def rational(cls, q, field: AlgebraicNumber) -> "NumberFieldElement":
        return cls.from_coords([to_fraction(q)], field)

    @classmethod
    def generator(cls, field: AlgebraicNumber) -> "NumberFieldElement":
        if field.degree == 1:
            return cls.rational(field.rational, field)
        return cls.from_coords([0, 1], field)

    # -- predicates ----------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.field.degree

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValidationError("element is irrational")
        return self.coords[0]

    def _coerce(self, other) -> "NumberFieldElement":
        if isinstance(other, NumberFieldElement):
            if other.field != self.field:
                raise ValidationError("elements belong to different fields")
            return other
        return NumberFieldElement.rational(other, self.field)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "NumberFieldElement":
        o = self._coerce(other)
        return NumberFieldElement(tuple(a + b for a, b in zip(self.coords, o.coords)), self.field)

    __radd__ = __add__

    def __neg__(self) -> "NumberFieldElement":
        return NumberFieldElement(tuple(-a for a in self.coords), self.field)

    def __sub__(self, other) -> "NumberFieldElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "NumberFieldElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "NumberFieldElement":
        o = self._coerce(other)
        return NumberFieldElement._reduce(qmul(list(self.coords), list(o.coords)), self.field)

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        inv = qinverse_mod(qpoly(self.coords), qpoly(self.field.minpoly.coeffs))
        return NumberFieldElement.from_coords(inv, self.field)

    def __truediv__(self, other) -> "NumberFieldElement":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "NumberFieldElement":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "NumberFieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = NumberFieldElement.rational(1, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- invariants ----------------------------------------------------------

    def multiplication_matrix(self) -> list[list[Fraction]]:
        """Column j holds the coordinates of self * alpha^j."""
        cols = []
        gen = NumberFieldElement.generator(self.field) if self.degree > 1 else None
        cur = self
        for _ in range(self.degree):
            cols.append(list(cur.coords))
            if gen is not None:
                cur = cur * gen
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]

    def trace(self) -> Fraction:
        m = self.multiplication_matrix()
        return sum((m[i][i] for i in range(self.degree)), Fraction(0))

    def embed(self, bits: int = 128) -> Interval:
        """Enclosure of the real embedding at alpha."""
        return self.field.evaluate(self.coords, bits)

    def conjugate_values(self, prec: int = 128) -> list:
        """Approximate complex values at every conjugate disk centre (alpha first)."""
        import mpmath

        from .algebraic import conjugates

        if self.degree == 1:
            return [mpmath.mpf(self.coords[0].numerator) / self.coords[0].denominator]
        cs = conjugates(self.field, Fraction(1, 1 << prec))
        out = []
        with mpmath.workprec(prec + 16):
            for disk in cs.disks:
                z = mpmath.mpc(_mpq(disk.re), _mpq(disk.im))
                acc = mpmath.mpc(0)
                for c in reversed(self.coords):
                    acc = acc * z + _mpq(c)
                out.append(acc)
        return out

    def __float__(self) -> float:
        return float(self.embed(64).mid)

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if j == 0 else f"({c})*a^{j}" if j > 1 else f"({c})*a")
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> dict[str, object]:
        return {"coords": [str(c) for c in self.coords], "minpoly": list(self.field.minpoly.coeffs)}


def _mpq(q: Fraction):
    import mpmath

    return mpmath.mpf(q.numerator) / q.denominator


def sqrt_in_field(n: int, field: AlgebraicNumber) -> NumberFieldElement:
    """An element whose square is n, found among c0 + c1 alpha for quadratic fields."""
    if field.degree != 2:
        raise ValidationError("square roots are only located in quadratic fields")
    a0, a1, a2 = (Fraction(c) for c in field.minpoly.coeffs)
    # alpha = (-a1 + s)/(2 a2) with s^2 = disc, so s = 2 a2 alpha + a1
    disc = a1 * a1 - 4 * a2 * a0
    s = NumberFieldElement.from_coords([a1, 2 * a2], field)
    ratio = Fraction(n) / disc
    from math import isqrt

    num, den = ratio.numerator, ratio.denominator
    rn, rd = isqrt(num) if num >= 0 else -1, isqrt(den)
    if num < 0 or rn * rn != num or rd * rd != den:
        raise ValidationError(f"sqrt({n}) does not lie in Q(sqrt({disc}))")
    root = s * Fraction(rn, rd)
    return -root if root.embed(32).hi < 0 else root
