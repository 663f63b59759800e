"""Real algebraic numbers alpha > 1: isolation, conjugate disks, invariants.

Every numeric claim made here is certified: root enclosures are checked by
exact sign changes, conjugate disks by Smith's inclusion theorem evaluated in
exact Gaussian-integer arithmetic, and comparisons against the unit circle
are decided on exact rationals.
"""
from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath

from .enclosure import Interval, ceil_scaled, floor_scaled, log_interval, sqrt_bounds, to_fraction
from .errors import (
    DegreeTooLarge,
    EtaTooLarge,
    NoRootAboveOne,
    NotIrreducible,
    RefinementCapExceeded,
    UnsupportedLeaf,
    ValidationError,
)
from .polynomial import IntPolynomial, qpoly, qrem

MAX_DEGREE = 24
DEFAULT_CAP_BITS = 1_000_000

RATIONAL_INTEGER = "RationalInteger"
RATIONAL = "Rational"
PISOT = "Pisot"
SALEM = "Salem"
HAS_OUTSIDE = "HasOutsideConjugate"
NO_OUTSIDE = "NoOutsideConjugate"
UNDETERMINED = "Undetermined"

OUTSIDE = "outside"
INSIDE = "inside"
ON_CIRCLE = "on_unit_circle"
UNDECIDED = "undetermined"


def default_cap_bits() -> int:
    raw = os.environ.get("FRACORBIT_CAP_BITS")
    return int(raw) if raw else DEFAULT_CAP_BITS


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def _sign_at(f: IntPolynomial, x: Fraction) -> int:
    """Exact sign of f(x) for rational x."""
    n, m = x.numerator, x.denominator
    d = f.degree
    acc = 0
    for j, c in enumerate(reversed(f.coeffs)):
        acc = acc * n + c * m**j
    del d
    return _sign(acc)


@dataclass(frozen=True)
class AlgebraicNumber:
    """A real root alpha > 1 of an irreducible primitive integer polynomial.

    ``lo``/``hi`` bound an interval holding exactly one real root of ``minpoly``.
    For degree one the interval collapses to the rational root itself.
    """

    minpoly: IntPolynomial
    lo: Fraction
    hi: Fraction
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, compare=False, hash=False, repr=False)

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def rational(self) -> Fraction:
        if not self.is_rational:
            raise ValidationError("alpha is irrational")
        a0, a1 = self.minpoly.coeffs
        return Fraction(-a0, a1)

    @property
    def is_integer(self) -> bool:
        return self.minpoly.is_monic

    def __float__(self) -> float:
        lo, hi = self.dyadic(64)
        return float(Fraction(lo + hi, 1 << 65))

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.rational)
        return f"root of {self.minpoly} in [{float(self.lo):.6g}, {float(self.hi):.6g}]"

    # -- certified refinement -------------------------------------------------

    def dyadic(self, bits: int) -> tuple[int, int]:
        """Integers lo, hi with lo/2**bits <= alpha <= hi/2**bits and hi - lo small.

        The best enclosure computed so far is cached; coarser requests are
        answered by outward truncation.
        """
        if bits < 0:
            raise ValueError("bits must be non-negative")
        if self.is_rational:
            q = self.rational
            return floor_scaled(q, bits), ceil_scaled(q, bits)
        best = self._cache.get("dyadic")
        if best is not None and best[0] >= bits:
            b0, lo0, hi0 = best
            s = b0 - bits
            return lo0 >> s, -((-hi0) >> s)
        target = bits if best is None else max(bits, 2 * best[0])
        lo, hi = self._refine(target)
        with self._lock:
            cur = self._cache.get("dyadic")
            if cur is None or cur[0] < target:
                self._cache["dyadic"] = (target, lo, hi)
        s = target - bits
        return lo >> s, -((-hi) >> s)

    def enclosure(self, bits: int) -> Interval:
        lo, hi = self.dyadic(bits)
        return Interval(Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))

    def mpf(self, prec: int) -> mpmath.mpf:
        lo, _ = self.dyadic(prec + 8)
        with mpmath.workprec(prec + 16):
            return mpmath.mpf(lo) / mpmath.mpf(2) ** (prec + 8)

    def _tight_rational_interval(self) -> tuple[Fraction, Fraction]:
        cached = self._cache.get("tight")
        if cached is None:
            cached = _bisect_rational(self.minpoly, self.lo, self.hi, Fraction(1, 1 << 60))
            self._cache["tight"] = cached
        return cached

    def _refine(self, bits: int) -> tuple[int, int]:
        f = self.minpoly
        a, b = self._tight_rational_interval()
        if a == b:
            return floor_scaled(a, bits), ceil_scaled(a, bits)
        desc = list(reversed(f.coeffs))
        x = None
        prec = 64
        with mpmath.workprec(prec):
            x = (mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator) / 2
        target = bits + 32
        while True:
            prec = min(2 * prec, target)
            with mpmath.workprec(prec + 16):
                for _ in range(2):
                    fx, dfx = mpmath.polyval(desc, x, derivative=True)
                    x = x - fx / dfx
            if prec >= target:
                break
        with mpmath.workprec(bits + 48):
            m = int(mpmath.floor(x * mpmath.mpf(2) ** bits))
        for slack in (2, 64, 1 << 20):
            lo_q = max(Fraction(m - slack, 1 << bits), a)
            hi_q = min(Fraction(m + slack + 1, 1 << bits), b)
            if lo_q < hi_q and _sign_at(f, lo_q) * _sign_at(f, hi_q) < 0:
                return floor_scaled(lo_q, bits), ceil_scaled(hi_q, bits)
            if lo_q < hi_q and _sign_at(f, lo_q) == 0:
                return floor_scaled(lo_q, bits), ceil_scaled(lo_q, bits)
        return _bisect_dyadic(f, a, b, bits)

    def evaluate(self, coeffs: Sequence, bits: int = 128) -> Interval:
        """Exact enclosure of p(alpha) for a rational polynomial p (ascending)."""
        cs = [to_fraction(c) for c in coeffs]
        if self.is_rational:
            q = self.rational
            v = sum((c * q**k for k, c in enumerate(cs)), Fraction(0))
            return Interval(v, v)
        lo, hi = self.dyadic(bits)
        return poly_enclosure(cs, lo, hi, bits)


def poly_enclosure(cs: Sequence[Fraction], lo: int, hi: int, bits: int) -> Interval:
    """Enclosure of sum c_k x^k for x in [lo, hi]/2**bits with 0 < lo (exact)."""
    m = len(cs) - 1
    if m < 0:
        return Interval(Fraction(0), Fraction(0))
    den = 1
    for c in cs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    nums = [int(c * den) for c in cs]
    s_lo = s_hi = 0
    plo = phi = 1
    for k, c in enumerate(nums):
        scale = 1 << (bits * (m - k))
        if c >= 0:
            s_lo += c * plo * scale
            s_hi += c * phi * scale
        else:
            s_lo += c * phi * scale
            s_hi += c * plo * scale
        plo *= lo
        phi *= hi
    q = den << (bits * m)
    return Interval(Fraction(s_lo, q), Fraction(s_hi, q))


def _bisect_rational(f: IntPolynomial, a: Fraction, b: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    sa = _sign_at(f, a)
    while b - a > width:
        mid = (a + b) / 2
        sm = _sign_at(f, mid)
        if sm == 0:
            return mid, mid
        if sm == sa:
            a = mid
        else:
            b = mid
    return a, b


def _bisect_dyadic(f: IntPolynomial, a: Fraction, b: Fraction, bits: int) -> tuple[int, int]:
    sa = _sign_at(f, a)
    lo, hi = floor_scaled(a, bits), ceil_scaled(b, bits)
    lo_q, hi_q = a, b
    while hi - lo > 2:
        mid = (lo + hi) // 2
        mq = Fraction(mid, 1 << bits)
        if not (lo_q < mq < hi_q):
            break
        sm = _sign_at(f, mq)
        if sm == 0:
            return mid, mid
        if sm == sa:
            lo, lo_q = mid, mq
        else:
            hi, hi_q = mid, mq
    return lo, hi


# ---------------------------------------------------------------------------


def _real_root_intervals(f: IntPolynomial) -> list[tuple[Fraction, Fraction]]:
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(f.coeffs)), x, domain="ZZ")
    out = []
    for (a, b), _mult in poly.intervals():
        out.append((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))))
    return out


def _is_irreducible(f: IntPolynomial) -> bool:
    if f.degree == 1:
        return True
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(f.coeffs)), x, domain="ZZ")
    _content, factors = poly.factor_list()
    return len(factors) == 1 and factors[0][1] == 1 and factors[0][0].degree() == f.degree


def _separate_from_one(f: IntPolynomial, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction] | None:
    """Shrink an isolating interval so that it lies strictly above 1, or None."""
    if a > 1:
        return a, b
    if b <= 1:
        return None
    s1 = _sign_at(f, Fraction(1))
    if s1 == 0:
        return None
    if a == b:
        return None
    sb = _sign_at(f, b)
    if sb == 0:
        return (b, b) if b > 1 else None
    if s1 * sb < 0:
        return Fraction(1), b
    return None


def parse_algebraic(coeffs: Iterable[int] | str | IntPolynomial, which_root: str | int = "largest",
                    max_degree: int = MAX_DEGREE) -> AlgebraicNumber:
    """Build a certified AlgebraicNumber from an integer polynomial.

    ``which_root`` selects among the real roots exceeding 1: ``"largest"``,
    ``"smallest"`` or a 0-based index in increasing order.
    """
    f = coeffs if isinstance(coeffs, IntPolynomial) else IntPolynomial.parse(coeffs)  # type: ignore[arg-type]
    if f.degree < 1:
        raise ValidationError("degree must be at least 1")
    if f.degree > max_degree:
        raise DegreeTooLarge(f"degree {f.degree} exceeds the exact irreducibility limit {max_degree}")
    f = f.primitive_part()
    if not _is_irreducible(f):
        raise NotIrreducible(f"{f} factors over the rationals")
    if f.degree == 1:
        q = Fraction(-f.coeffs[0], f.coeffs[1])
        if q <= 1:
            raise NoRootAboveOne(f"the root {q} of {f} does not exceed 1")
        return AlgebraicNumber(f, q, q)
    candidates = []
    for a, b in _real_root_intervals(f):
        sep = _separate_from_one(f, a, b)
        if sep is not None:
            candidates.append(sep)
    if not candidates:
        raise NoRootAboveOne(f"{f} has no real root exceeding 1")
    candidates.sort()
    if which_root == "largest":
        a, b = candidates[-1]
    elif which_root == "smallest":
        a, b = candidates[0]
    else:
        try:
            a, b = candidates[int(which_root)]
        except (IndexError, ValueError) as exc:
            raise ValidationError(f"root selector {which_root!r} out of range ({len(candidates)} roots > 1)") from exc
    a, b = _bisect_rational(f, a, b, Fraction(1, 1 << 48))
    return AlgebraicNumber(f, a, b)


def rational_algebraic(q: Fraction | str | int) -> AlgebraicNumber:
    q = to_fraction(q)
    return parse_algebraic([-q.numerator, q.denominator])


# ---------------------------------------------------------------------------
# Conjugates


@dataclass(frozen=True)
class Disk:
    re: Fraction
    im: Fraction
    flag: str

    @property
    def center(self) -> complex:
        return complex(float(self.re), float(self.im))

    def modulus_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def modulus_bounds(self, radius: Fraction, bits: int = 80) -> tuple[Fraction, Fraction]:
        lo, hi = sqrt_bounds(self.modulus_sq(), bits)
        return max(Fraction(0), lo - radius), hi + radius


@dataclass(frozen=True)
class ConjugateSet:
    """Pairwise-disjoint disks, one root each; ``disks[0]`` contains alpha."""

    disks: tuple[Disk, ...]
    radius: Fraction
    precision_bits: int

    @property
    def alpha_disk(self) -> Disk:
        return self.disks[0]

    @property
    def others(self) -> tuple[Disk, ...]:
        return self.disks[1:]

    def flags(self) -> list[str]:
        return [d.flag for d in self.disks]


def _gauss_mul(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _approx_roots(f: IntPolynomial, prec: int, previous: list | None) -> list:
    desc = list(reversed(f.coeffs))
    with mpmath.workprec(prec + 32):
        if previous is None:
            steps = 100
            while True:
                try:
                    roots = mpmath.polyroots(desc, maxsteps=steps, extraprec=prec + 32)
                    break
                except mpmath.libmp.NoConvergence:
                    steps *= 4
                    if steps > 100_000:
                        raise RefinementCapExceeded(f"root approximation failed for {f}")
            return [mpmath.mpc(r) for r in roots]
        out = []
        for z in previous:
            z = mpmath.mpc(z)
            for _ in range(4):
                fz, dfz = mpmath.polyval(desc, z, derivative=True)
                if dfz == 0:
                    break
                z = z - fz / dfz
            out.append(z)
        return out


def _smith_radius(f: IntPolynomial, centers: list[tuple[int, int]], i: int, p: int) -> Fraction | None:
    d = f.degree
    x, y = centers[i]
    acc = (0, 0)
    for j, c in enumerate(reversed(f.coeffs)):
        acc = _gauss_mul(acc, (x, y))
        acc = (acc[0] + (c << (p * j)), acc[1])
    prod = (1, 0)
    for j, (xj, yj) in enumerate(centers):
        if j != i:
            prod = _gauss_mul(prod, (x - xj, y - yj))
    den = prod[0] ** 2 + prod[1] ** 2
    if den == 0:
        return None
    num = acc[0] ** 2 + acc[1] ** 2
    w_sq = Fraction(num, f.leading**2 * den << (2 * p))
    _, w_hi = sqrt_bounds(w_sq, p + 8)
    return d * w_hi


@lru_cache(maxsize=512)
def conjugates(alpha: AlgebraicNumber, rho: Fraction | float | str = Fraction(1, 1 << 20),
               cap_bits: int | None = None) -> ConjugateSet:
    """Certified disjoint root disks of alpha's minimal polynomial, radius <= rho."""
    rho = to_fraction(rho)
    if rho <= 0:
        raise ValidationError("radius must be positive")
    cap = default_cap_bits() if cap_bits is None else cap_bits
    f = alpha.minpoly
    if alpha.is_rational:
        q = alpha.rational
        return ConjugateSet((Disk(q, Fraction(0), OUTSIDE),), Fraction(0), 0)
    p = max(64, -math.floor(math.log2(rho)) + 24)
    approx = None
    reciprocal = f.is_reciprocal() != 0
    last_failure = "disks not certified"
    result: ConjugateSet | None = None
    while p <= cap:
        approx = _approx_roots(f, p, approx)
        with mpmath.workprec(p + 32):
            centers = [(int(mpmath.nint(z.real * mpmath.mpf(2) ** p)),
                        int(mpmath.nint(z.imag * mpmath.mpf(2) ** p))) for z in approx]
        radii = [_smith_radius(f, centers, i, p) for i in range(len(centers))]
        if any(r is None for r in radii):
            last_failure = "coincident root approximations"
            p *= 2
            continue
        R = max(radii)  # type: ignore[type-var]
        scale = Fraction(1, 1 << p)
        disks_c = [(Fraction(cx) * scale, Fraction(cy) * scale) for cx, cy in centers]
        disjoint = all(
            (disks_c[i][0] - disks_c[j][0]) ** 2 + (disks_c[i][1] - disks_c[j][1]) ** 2 > 4 * R * R
            for i in range(len(disks_c)) for j in range(i + 1, len(disks_c))
        )
        if not disjoint or R > rho:
            last_failure = "disks overlap" if not disjoint else "radius above request"
            p *= 2
            continue
        a_idx = _locate_alpha(alpha, disks_c, R, p)
        if a_idx is None:
            last_failure = "alpha not located in a unique disk"
            p *= 2
            continue
        flags = [_circle_flag(c, R, disks_c, idx, reciprocal) for idx, c in enumerate(disks_c)]
        flags[a_idx] = OUTSIDE
        order = [a_idx] + sorted(
            (i for i in range(len(disks_c)) if i != a_idx),
            key=lambda i: (-(disks_c[i][0] ** 2 + disks_c[i][1] ** 2), disks_c[i][1], disks_c[i][0]),
        )
        result = ConjugateSet(tuple(Disk(disks_c[i][0], disks_c[i][1], flags[i]) for i in order), R, p)
        if UNDECIDED not in flags:
            return result
        last_failure = "unit-circle status undecided"
        p *= 2
    if result is not None:
        return result
    raise RefinementCapExceeded(f"conjugate isolation for {f} hit the {cap}-bit cap: {last_failure}")


def _locate_alpha(alpha: AlgebraicNumber, centers, R: Fraction, p: int) -> int | None:
    enc = alpha.enclosure(p + 8)
    hits = []
    for i, (cx, cy) in enumerate(centers):
        nearest = min(max(cx, enc.lo), enc.hi)
        if (cx - nearest) ** 2 + cy * cy <= R * R:
            hits.append(i)
    return hits[0] if len(hits) == 1 else None


def _circle_flag(c, R: Fraction, centers, idx: int, reciprocal: bool) -> str:
    m2 = c[0] ** 2 + c[1] ** 2
    if m2 > (1 + R) ** 2:
        return OUTSIDE
    if R < 1 and m2 < (1 - R) ** 2:
        return INSIDE
    if reciprocal and m2 > R * R:
        # z -> 1/conj(z) permutes the roots of a (anti-)reciprocal polynomial;
        # if the image disk meets only this disk, the root is on |z| = 1.
        g = m2 - R * R
        ic = (c[0] / g, c[1] / g)
        ir = R / g
        meets = [
            j for j, o in enumerate(centers)
            if (ic[0] - o[0]) ** 2 + (ic[1] - o[1]) ** 2 <= (ir + R) ** 2
        ]
        if meets == [idx]:
            return ON_CIRCLE
    return UNDECIDED


# ---------------------------------------------------------------------------
# Invariants


@dataclass(frozen=True)
class AlgebraicInvariants:
    length: int
    tilde_length: int
    mahler: Interval
    log_height: Interval
    classification: str
    conjugates: ConjugateSet | None = None

    def to_json(self, digits: int = 12) -> dict[str, object]:
        out: dict[str, object] = {
            "L": self.length,
            "L_tilde": self.tilde_length,
            "mahler_measure": self.mahler.to_json(digits),
            "log_height": self.log_height.to_json(digits),
            "classification": self.classification,
        }
        if self.conjugates is not None:
            out["conjugates"] = [
                {"re": _dec(d.re, digits), "im": _dec(d.im, digits), "flag": d.flag}
                for d in self.conjugates.disks
            ]
            out["conjugate_radius"] = float(self.conjugates.radius)
        return out


def _dec(x: Fraction, digits: int) -> str:
    return f"{float(x):.{digits}g}"


def _max1(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    return max(Fraction(1), lo), max(Fraction(1), hi)


def mahler_enclosure(alpha: AlgebraicNumber, cs: ConjugateSet) -> Interval:
    lo = hi = Fraction(abs(alpha.minpoly.leading))
    for disk in cs.disks:
        if disk.flag in (INSIDE, ON_CIRCLE):
            continue
        mlo, mhi = _max1(*disk.modulus_bounds(cs.radius, cs.precision_bits + 8))
        lo *= mlo
        hi *= mhi
    return Interval(lo, hi)


def classify(alpha: AlgebraicNumber, cs: ConjugateSet) -> str:
    if alpha.is_rational:
        return RATIONAL_INTEGER if alpha.is_integer else RATIONAL
    others = [d.flag for d in cs.others]
    if OUTSIDE in others:
        return HAS_OUTSIDE
    if UNDECIDED in others:
        return UNDETERMINED
    if not alpha.is_integer:
        return NO_OUTSIDE
    if ON_CIRCLE in others:
        return SALEM
    return PISOT


def invariants(alpha: AlgebraicNumber, tol: Fraction | float | str = Fraction(1, 10**12),
               cap_bits: int | None = None) -> AlgebraicInvariants:
    tol = to_fraction(tol)
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    f = alpha.minpoly
    L = f.length
    Lt = abs(sum(f.coeffs))
    d = f.degree
    bits = max(64, -math.floor(math.log2(tol)) + 24)
    if alpha.is_rational:
        q = alpha.rational
        m = Fraction(abs(f.leading)) * max(Fraction(1), abs(q))
        M = Interval(m, m)
        return AlgebraicInvariants(L, Lt, M, _log_interval(M, d, bits), classify(alpha, None), None)  # type: ignore[arg-type]
    rho = Fraction(1, 1 << 20)
    while True:
        try:
            cs = conjugates(alpha, rho, cap_bits)
        except RefinementCapExceeded:
            raise
        M = mahler_enclosure(alpha, cs)
        h = _log_interval(M, d, bits)
        if M.width <= tol and h.width <= tol:
            break
        rho = rho / (1 << 16)
        if -math.log2(rho) > (default_cap_bits() if cap_bits is None else cap_bits):
            raise RefinementCapExceeded("invariant tolerance not reachable below the cap")
    return AlgebraicInvariants(L, Lt, M, h, classify(alpha, cs), cs)


def _log_interval(M: Interval, d: int, bits: int) -> Interval:
    v = log_interval(M.lo, M.hi, bits + 16)
    return Interval(v.lo / d, v.hi / d)


# ---------------------------------------------------------------------------


def delta_threshold(alpha: AlgebraicNumber, eta: Fraction | int | str = 0) -> Fraction:
    """Largest gap delta for which runs force the integer recurrence identity."""
    eta = to_fraction(eta)
    f = alpha.minpoly
    if alpha.is_rational:
        q_, p_ = f.coeffs[1], -f.coeffs[0]
        if (p_ - q_) * abs(eta) >= 1:
            raise EtaTooLarge(f"(p-q)|eta| = {(p_ - q_) * abs(eta)} >= 1")
        delta = (1 - (p_ - q_) * abs(eta)) / (p_ + q_)
    else:
        Lt = abs(sum(f.coeffs))
        if abs(eta) * Lt >= 1:
            raise EtaTooLarge(f"|eta| * L~ = {abs(eta) * Lt} >= 1")
        delta = (1 - abs(eta) * Lt) / f.length
    assert 0 < delta < Fraction(1, 2)
    return delta


@dataclass(frozen=True)
class GarsiaBound:
    zero: bool
    bound: Fraction
    degree: int

    def __bool__(self) -> bool:  # pragma: no cover - convenience
        return not self.zero


def garsia_lower_bound(p: IntPolynomial | Sequence[int], lam: AlgebraicNumber,
                       rho: Fraction = Fraction(1, 1 << 24)) -> GarsiaBound:
    """Either p(lam) = 0, or an explicit rational lower bound on |p(lam)|.

    The bound comes from the norm: a_d^m * prod_i p(lam_i) is a nonzero
    integer, and each |p(lam_i)| <= pbar (m+1) max(1, |lam_i|)^m.
    """
    coeffs = list(p.coeffs) if isinstance(p, IntPolynomial) else [int(c) for c in p]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        return GarsiaBound(True, Fraction(0), -1)
    f = lam.minpoly
    if not qrem(qpoly(coeffs), qpoly(f.coeffs)):
        return GarsiaBound(True, Fraction(0), len(coeffs) - 1)
    m = len(coeffs) - 1
    pbar = max(abs(c) for c in coeffs)
    bound = Fraction(1, abs(f.leading) ** m)
    if not lam.is_rational:
        cs = conjugates(lam, rho)
        for disk in cs.others:
            if disk.flag in (INSIDE, ON_CIRCLE):
                u = Fraction(1)
            else:
                u = max(Fraction(1), disk.modulus_bounds(cs.radius, cs.precision_bits + 8)[1])
            bound /= pbar * (m + 1) * u**m
    return GarsiaBound(False, bound, m)


# ---------------------------------------------------------------------------
# height calculus


@dataclass(frozen=True)
class RationalLeaf:
    value: Fraction


@dataclass(frozen=True)
class AlphaPowerLeaf:
    alpha: AlgebraicNumber
    n: int


@dataclass(frozen=True)
class SumNode:
    terms: tuple


@dataclass(frozen=True)
class ProductNode:
    factors: tuple


@dataclass(frozen=True)
class PowerNode:
    base: object
    n: int


HeightExpr = RationalLeaf | AlphaPowerLeaf | SumNode | ProductNode | PowerNode


def parse_height_expr(obj, alpha: AlgebraicNumber | None = None):
    """Tree from JSON: {"sum": [...]}, {"product": [...]}, {"power": [e, n]},
    {"rational": "p/q"} or {"alpha_pow": n}."""
    if isinstance(obj, (int, Fraction, str)):
        return RationalLeaf(to_fraction(obj))
    if not isinstance(obj, dict) or len(obj) != 1:
        raise UnsupportedLeaf(f"cannot interpret {obj!r} as a height expression")
    (key, val), = obj.items()
    if key == "rational":
        return RationalLeaf(to_fraction(val))
    if key == "alpha_pow":
        if alpha is None:
            raise UnsupportedLeaf("alpha powers need an alpha")
        return AlphaPowerLeaf(alpha, int(val))
    if key == "sum":
        return SumNode(tuple(parse_height_expr(v, alpha) for v in val))
    if key == "product":
        return ProductNode(tuple(parse_height_expr(v, alpha) for v in val))
    if key == "power":
        return PowerNode(parse_height_expr(val[0], alpha), int(val[1]))
    raise UnsupportedLeaf(f"unknown node {key!r}")


def height_upper_bound(expr, bits: int = 64) -> Interval:
    """Enclosure of the height bound given by the sum, product and power rules.

    The true height of the expression is at most ``result.hi``.
    """
    if isinstance(expr, RationalLeaf):
        q = expr.value
        m = max(abs(q.numerator), abs(q.denominator))
        return log_interval(Fraction(m), Fraction(m), bits) if m > 1 else Interval(Fraction(0), Fraction(0))
    if isinstance(expr, AlphaPowerLeaf):
        h = invariants(expr.alpha, Fraction(1, 1 << bits)).log_height
        k = abs(expr.n)
        return Interval(k * h.lo, k * h.hi)
    if isinstance(expr, SumNode):
        if not expr.terms:
            raise UnsupportedLeaf("empty sum")
        parts = [height_upper_bound(t, bits) for t in expr.terms]
        n = len(parts)
        extra = log_interval(Fraction(n), Fraction(n), bits) if n > 1 else Interval(Fraction(0), Fraction(0))
        return Interval(sum(p.lo for p in parts) + extra.lo, sum(p.hi for p in parts) + extra.hi)
    if isinstance(expr, ProductNode):
        if not expr.factors:
            raise UnsupportedLeaf("empty product")
        parts = [height_upper_bound(t, bits) for t in expr.factors]
        return Interval(sum(p.lo for p in parts), sum(p.hi for p in parts))
    if isinstance(expr, PowerNode):
        h = height_upper_bound(expr.base, bits)
        k = abs(expr.n)
        return Interval(k * h.lo, k * h.hi)
    raise UnsupportedLeaf(f"unsupported leaf {expr!r}")


def theta_height_slope(alpha: AlgebraicNumber, bits: int = 64) -> Interval:
    """((d^2 + d)/2) log alpha + h(alpha): the growth rate in n of h(theta_1)."""
    d = alpha.degree
    a = alpha.enclosure(bits + 8)
    la = log_interval(a.lo, a.hi, bits)
    h = invariants(alpha, Fraction(1, 1 << bits)).log_height
    c = Fraction(d * d + d, 2)
    return Interval(c * la.lo + h.lo, c * la.hi + h.hi)
