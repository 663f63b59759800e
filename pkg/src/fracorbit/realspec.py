"""Representations of the multiplier xi.

Four variants cover every real the orbit code handles: exact rationals,
elements of Q(alpha), lacunary binary series sum 2^-s_k, and interval
literals backed by a refinement callback.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .algebraic import AlgebraicNumber
from .enclosure import Interval, ceil_scaled, floor_scaled, mpf_to_fraction, to_fraction
from .errors import ValidationError
from .field import NumberFieldElement


@dataclass(frozen=True)
class RationalSpec:
    value: Fraction
    kappa_hint: float | None = None
    variant = "rational"

    def __post_init__(self) -> None:
        if self.value == 0:
            raise ValidationError("xi must be nonzero")

    @property
    def bits(self) -> int:
        return max(self.value.numerator.bit_length(), self.value.denominator.bit_length())

    def enclosure(self, bits: int) -> Interval:
        return Interval(self.value, self.value)

    def to_json(self) -> dict[str, object]:
        return {"variant": self.variant, "value": str(self.value)}


@dataclass(frozen=True)
class FieldSpec:
    element: NumberFieldElement
    kappa_hint: float | None = None
    variant = "field"

    def __post_init__(self) -> None:
        if self.element.is_zero():
            raise ValidationError("xi must be nonzero")

    @property
    def bits(self) -> int:
        return max(max(c.numerator.bit_length(), c.denominator.bit_length()) for c in self.element.coords)

    def enclosure(self, bits: int) -> Interval:
        return self.element.embed(bits)

    def to_json(self) -> dict[str, object]:
        return {"variant": self.variant, "coords": [str(c) for c in self.element.coords],
                "minpoly": list(self.element.field.minpoly.coeffs)}


_CLOSED_FORMS = ("2^k", "k!")


@dataclass(frozen=True)
class LacunarySpec:
    """xi = sum_k 2^(-s_k) over a strictly increasing positive exponent sequence.

    ``form`` is ``"2^k"`` (s_k = 2^k, k >= 1), ``"k!"`` (s_k = k!, k >= 1) or
    ``"list"`` with explicit finite ``exponents``.
    """

    form: str
    exponents: tuple[int, ...] = ()
    kappa_hint: float | None = None
    variant = "lacunary"

    def __post_init__(self) -> None:
        if self.form not in _CLOSED_FORMS + ("list",):
            raise ValidationError(f"unknown lacunary form {self.form!r}")
        if self.form == "list":
            ex = self.exponents
            if not ex:
                raise ValidationError("empty exponent list")
            if ex[0] < 1 or any(b <= a for a, b in zip(ex, ex[1:])):
                raise ValidationError("exponents must be strictly increasing positive integers")

    @property
    def infinite(self) -> bool:
        return self.form != "list"

    @property
    def bits(self) -> int:
        return 0

    def exponents_upto(self, limit: int) -> list[int]:
        """All s_k <= limit, plus the first exponent above it when one exists."""
        out: list[int] = []
        if self.form == "list":
            for s in self.exponents:
                out.append(s)
                if s > limit:
                    break
            return out
        k = 1
        while True:
            s = 1 << k if self.form == "2^k" else math.factorial(k)
            out.append(s)
            if s > limit:
                return out
            k += 1

    def exponent_array(self, limit: int) -> np.ndarray:
        # the first exponent past the limit only marks that a tail exists
        return np.asarray([min(s, limit + 1) for s in self.exponents_upto(limit)], dtype=np.int64)

    def has_exponent_above(self, limit: int) -> bool:
        return self.infinite or self.exponents[-1] > limit

    def partial_sum(self, limit: int) -> Fraction:
        return sum((Fraction(1, 1 << s) for s in self.exponents_upto(limit) if s <= limit), Fraction(0))

    def enclosure(self, bits: int) -> Interval:
        s = self.partial_sum(bits)
        if not self.has_exponent_above(bits):
            return Interval(s, s)
        # tail of a strictly increasing sequence is at most twice its first term
        first = next(e for e in self.exponents_upto(bits) if e > bits)
        return Interval(s + Fraction(1, 1 << first), s + Fraction(2, 1 << first))

    def digit(self, position: int) -> int:
        """Binary digit of xi at 2^-position."""
        return int(position in set(self.exponents_upto(position)))

    def to_json(self) -> dict[str, object]:
        ex: object = self.form if self.form != "list" else list(self.exponents)
        return {"variant": self.variant, "exponents": ex}


def _const_pi(prec: int) -> tuple[Fraction, Fraction]:
    from mpmath import libmp

    return (mpf_to_fraction(_mpf(libmp.mpf_pi(prec, "f"))), mpf_to_fraction(_mpf(libmp.mpf_pi(prec, "c"))))


def _const_e(prec: int) -> tuple[Fraction, Fraction]:
    from mpmath import libmp

    return (mpf_to_fraction(_mpf(libmp.mpf_e(prec, "f"))), mpf_to_fraction(_mpf(libmp.mpf_e(prec, "c"))))


def _const_log2(prec: int) -> tuple[Fraction, Fraction]:
    from mpmath import libmp

    return (mpf_to_fraction(_mpf(libmp.mpf_ln2(prec, "f"))), mpf_to_fraction(_mpf(libmp.mpf_ln2(prec, "c"))))


def _mpf(t):
    import mpmath

    return mpmath.mpf(t)


def _sqrt_const(n: int) -> Callable[[int], tuple[Fraction, Fraction]]:
    def enc(prec: int) -> tuple[Fraction, Fraction]:
        r = math.isqrt(n << (2 * prec))
        lo = Fraction(r, 1 << prec)
        hi = lo if r * r == n << (2 * prec) else Fraction(r + 1, 1 << prec)
        return lo, hi

    return enc


CONSTANTS: dict[str, Callable[[int], tuple[Fraction, Fraction]]] = {
    "pi": _const_pi,
    "e": _const_e,
    "log2": _const_log2,
}


@dataclass(frozen=True)
class IntervalSpec:
    """A real known through enclosures [lo, hi] of width about 2^-bits."""

    label: str
    refine: Callable[[int], tuple[Fraction, Fraction]] = field(compare=False)
    kappa_hint: float | None = None
    literal: tuple[Fraction, Fraction] | None = None
    variant = "interval"

    @property
    def bits(self) -> int:
        return 0

    def enclosure(self, bits: int) -> Interval:
        lo, hi = self.refine(bits)
        if lo <= 0 <= hi and bits > 64:
            raise ValidationError("xi enclosure contains zero")
        return Interval(lo, hi)

    def to_json(self) -> dict[str, object]:
        if self.literal is not None:
            return {"variant": self.variant, "lo": str(self.literal[0]), "hi": str(self.literal[1])}
        return {"variant": self.variant, "constant": self.label}


def interval_constant(name: str, kappa_hint: float | None = None) -> IntervalSpec:
    if name in CONSTANTS:
        return IntervalSpec(name, CONSTANTS[name], kappa_hint)
    if name.startswith("sqrt"):
        n = int(name[4:].strip("()"))
        if n <= 0 or math.isqrt(n) ** 2 == n:
            raise ValidationError(f"{name} is not an irrational square root")
        return IntervalSpec(name, _sqrt_const(n), kappa_hint)
    raise ValidationError(f"unknown constant {name!r}; known: {sorted(CONSTANTS)} or sqrtN")


def fixed_interval(lo, hi, kappa_hint: float | None = None) -> IntervalSpec:
    """An interval literal that cannot be refined further."""
    lo_q, hi_q = to_fraction(lo), to_fraction(hi)
    if hi_q < lo_q:
        raise ValidationError("empty interval literal")

    def enc(prec: int) -> tuple[Fraction, Fraction]:
        return lo_q, hi_q

    return IntervalSpec(f"[{lo_q},{hi_q}]", enc, kappa_hint, (lo_q, hi_q))


RealSpec = RationalSpec | FieldSpec | LacunarySpec | IntervalSpec


def _parse_list(text: str) -> list[str]:
    """Items of "[a, b, ...]" where entries may be bare fractions like -1/5."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValidationError(f"expected a bracketed list, got {text!r}")
    items = [t.strip().strip('"').strip("'") for t in body[1:-1].split(",")]
    return [t for t in items if t]


def parse_realspec(obj, alpha: AlgebraicNumber | None = None) -> RealSpec:
    """Build a RealSpec from JSON (dict or text) or the short CLI forms.

    Short forms: ``"p/q"``, ``"field:[c0,c1,...]"``, ``"lacunary:2^k"``,
    ``"lacunary:k!"``, ``"lacunary:[s1,s2,...]"``, ``"const:pi"``.
    """
    if isinstance(obj, (int, Fraction)):
        return RationalSpec(Fraction(obj))
    if isinstance(obj, str):
        s = obj.strip()
        if s.startswith("{"):
            return parse_realspec(json.loads(s), alpha)
        head, _, rest = s.partition(":")
        if rest:
            if head == "field":
                return parse_realspec({"variant": "field", "coords": _parse_list(rest)}, alpha)
            if head == "lacunary":
                ex = [int(e) for e in _parse_list(rest)] if rest.startswith("[") else rest
                return parse_realspec({"variant": "lacunary", "exponents": ex}, alpha)
            if head == "const":
                return interval_constant(rest)
            raise ValidationError(f"unknown xi form {obj!r}")
        try:
            return RationalSpec(to_fraction(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse xi {obj!r}") from exc
    if not isinstance(obj, dict) or "variant" not in obj:
        raise ValidationError("xi spec must be a JSON object with a 'variant' field")
    kappa = obj.get("kappa_hint")
    variant = obj["variant"]
    if variant == "rational":
        return RationalSpec(to_fraction(obj["value"]), kappa)
    if variant == "field":
        if alpha is None:
            raise ValidationError("field xi requires the orbit's alpha")
        if "minpoly" in obj and [int(c) for c in obj["minpoly"]] != list(alpha.minpoly.coeffs):
            raise ValidationError("xi lives in a different field than alpha")
        return FieldSpec(NumberFieldElement.from_coords(obj["coords"], alpha), kappa)
    if variant == "lacunary":
        ex = obj["exponents"]
        if isinstance(ex, str):
            return LacunarySpec(ex, (), kappa)
        return LacunarySpec("list", tuple(int(e) for e in ex), kappa)
    if variant == "interval":
        if "constant" in obj:
            return interval_constant(obj["constant"], kappa)
        return fixed_interval(obj["lo"], obj["hi"], kappa)
    raise ValidationError(f"unknown xi variant {variant!r}")


def dyadic_enclosure(spec: RealSpec, bits: int) -> tuple[int, int]:
    enc = spec.enclosure(bits)
    return floor_scaled(Fraction(enc.lo), bits), ceil_scaled(Fraction(enc.hi), bits)


KEMPNER = LacunarySpec("2^k")
LIOUVILLE = LacunarySpec("k!")
