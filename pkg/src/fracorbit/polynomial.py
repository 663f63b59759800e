"""Integer polynomials in ascending-coefficient form, plus exact Q[x] helpers."""
from __future__ import annotations

import json
import math
import numbers
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import ValidationError

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coef>\d+)?\s*\*?\s*
        (?P<x>x(?:\s*(?:\^|\*\*)\s*(?P<exp>\d+))?)?\s*""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class IntPolynomial:
    """a_0 + a_1 x + ... + a_d x^d with integer coefficients, a_d != 0, d >= 0."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coeffs or self.coeffs[-1] == 0:
            raise ValidationError("leading coefficient must be nonzero")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]) -> "IntPolynomial":
        raw = list(coeffs)
        for c in raw:
            if isinstance(c, bool) or not isinstance(c, numbers.Integral):
                if not (isinstance(c, float) and c.is_integer()):
                    raise ValidationError(f"non-integer coefficient {c!r}")
        cs = [int(c) for c in raw]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ValidationError("coefficients are all zero")
        return cls(tuple(cs))

    @classmethod
    def parse(cls, text: str | Sequence[int]) -> "IntPolynomial":
        """Accept ``"x^2-x-1"``, ``"[-1,-1,1]"`` or an ascending integer list."""
        if not isinstance(text, str):
            return cls.from_coeffs(text)
        s = text.strip()
        if s.startswith("["):
            try:
                data = json.loads(s)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"bad coefficient list {text!r}") from exc
            return cls.from_coeffs(data)
        return cls.from_coeffs(_parse_expression(s))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def content(self) -> int:
        return reduce(math.gcd, self.coeffs, 0)

    @property
    def is_primitive(self) -> bool:
        return self.content == 1

    @property
    def length(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coeffs)

    @property
    def is_monic(self) -> bool:
        return abs(self.leading) == 1

    def primitive_part(self) -> "IntPolynomial":
        g = self.content
        sign = -1 if self.leading < 0 else 1
        return IntPolynomial(tuple(sign * c // g for c in self.coeffs))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_scaled(self, num: int, bits: int) -> int:
        """2**(bits*d) * f(num / 2**bits), exactly."""
        acc = 0
        for j, c in enumerate(reversed(self.coeffs)):
            acc = acc * num + (c << (bits * j))
        return acc

    def derivative(self) -> "IntPolynomial | None":
        if self.degree == 0:
            return None
        return IntPolynomial(tuple(j * c for j, c in enumerate(self.coeffs) if j > 0))

    def is_reciprocal(self) -> int:
        """+1 if self-reciprocal, -1 if anti-reciprocal, 0 otherwise."""
        rev = self.coeffs[::-1]
        if rev == self.coeffs:
            return 1
        if tuple(-c for c in rev) == self.coeffs:
            return -1
        return 0

    def __str__(self) -> str:
        parts = []
        for j in range(self.degree, -1, -1):
            c = self.coeffs[j]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if j == 0:
                body = str(a)
            else:
                coef = "" if a == 1 else str(a)
                body = coef + ("x" if j == 1 else f"x^{j}")
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f"{sign}{body}"
        return out

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def _parse_expression(s: str) -> list[int]:
    if not s:
        raise ValidationError("empty polynomial string")
    coeffs: dict[int, int] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValidationError(f"cannot parse polynomial {s!r} at position {pos}")
        if m.group("coef") is None and m.group("x") is None:
            raise ValidationError(f"cannot parse polynomial {s!r} at position {pos}")
        if not first and m.group("sign") is None:
            raise ValidationError(f"missing operator in {s!r} at position {pos}")
        sign = -1 if m.group("sign") == "-" else 1
        coef = int(m.group("coef")) if m.group("coef") is not None else 1
        if m.group("x") is None:
            exp = 0
        else:
            exp = int(m.group("exp")) if m.group("exp") is not None else 1
        coeffs[exp] = coeffs.get(exp, 0) + sign * coef
        pos = m.end()
        first = False
    d = max(coeffs)
    return [coeffs.get(j, 0) for j in range(d + 1)]


# ---------------------------------------------------------------------------
# Exact arithmetic in Q[x]; polynomials are lists of Fractions, ascending.

QPoly = list


def qpoly(coeffs: Iterable) -> QPoly:
    out = [Fraction(c) for c in coeffs]
    return qtrim(out)


def qtrim(p: QPoly) -> QPoly:
    while p and p[-1] == 0:
        p.pop()
    return p


def qadd(p: QPoly, q: QPoly) -> QPoly:
    n = max(len(p), len(q))
    out = [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]
    return qtrim([Fraction(c) for c in out])


def qsub(p: QPoly, q: QPoly) -> QPoly:
    return qadd(p, [-c for c in q])


def qmul(p: QPoly, q: QPoly) -> QPoly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return qtrim(out)


def qdivmod(p: QPoly, q: QPoly) -> tuple[QPoly, QPoly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    qq: list[Fraction] = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(r) >= len(q) and r:
        shift = len(r) - len(q)
        c = r[-1] / lead
        qq[shift] = c
        for j, b in enumerate(q):
            r[shift + j] -= c * b
        r.pop()
        qtrim(r)
    return qtrim(qq), qtrim(r)


def qrem(p: QPoly, q: QPoly) -> QPoly:
    return qdivmod(p, q)[1]


def qinverse_mod(a: QPoly, m: QPoly) -> QPoly:
    """Inverse of a modulo m in Q[x]/(m); raises ZeroDivisionError if not coprime."""
    r0, r1 = list(m), qrem(a, m)
    s0, s1 = [], [Fraction(1)]
    while r1:
        quo, rem = qdivmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, qsub(s0, qmul(quo, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible modulo the polynomial")
    inv = [c / r0[0] for c in s0]
    return qrem(qtrim(inv), m)


def power_sums(f: IntPolynomial, count: int) -> list[Fraction]:
    """Newton power sums p_k = sum_i alpha_i^k for k = 0..count-1 (exact)."""
    d = f.degree
    a = [Fraction(c, f.leading) for c in f.coeffs]  # monic normalisation
    # e-coefficients: x^d + a_{d-1} x^{d-1} + ... ; p_k + a_{d-1} p_{k-1} + ... + k a_{d-k} = 0
    p: list[Fraction] = [Fraction(d)]
    for k in range(1, count):
        s = Fraction(0)
        for i in range(1, min(k, d) + 1):
            coeff = a[d - i]
            if i < k:
                s += coeff * p[k - i]
            else:
                s += k * coeff
        p.append(-s)
    return p
