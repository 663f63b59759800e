"""Certified orbits xi * alpha^n = A_n + eta + eps_n with eps_n in (-1/2, 1/2].

Enclosures of eps_n are stored as int64 arrays in units of 2^-60, rounded
outward, so every stored interval contains the true value. Exact per-point
data (the integer A_n and eps at higher precision) is available on demand
through ``Orbit.refine``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import kernels
from .algebraic import AlgebraicNumber, default_cap_bits
from .enclosure import Interval, ceil_scaled, floor_scaled, to_fraction
from .errors import PrecisionCapExceeded, UndecidableRounding, ValidationError
from .field import NumberFieldElement
from .realspec import FieldSpec, IntervalSpec, LacunarySpec, RationalSpec, RealSpec

try:  # pragma: no cover - optional speedup for big divisions
    import gmpy2

    _mpz = gmpy2.mpz
except ImportError:  # pragma: no cover
    gmpy2 = None

    def _mpz(x: int) -> int:
        return x

SCALE = 60
ONE = 1 << SCALE
HALF = 1 << (SCALE - 1)
MAX_GUARD_BITS = 56
# A_n values are kept in memory only while their total size stays below this
A_STORAGE_BITS = 1 << 28


@dataclass(frozen=True)
class PrecisionBudget:
    """Guard bits g and the refinement cap; working precision grows linearly in n."""

    guard_bits: int = 40
    cap_bits: int = field(default_factory=default_cap_bits)

    def __post_init__(self) -> None:
        if not 1 <= self.guard_bits <= MAX_GUARD_BITS:
            raise ValidationError(f"guard bits must lie in [1, {MAX_GUARD_BITS}]")
        if self.cap_bits < 64:
            raise ValidationError("cap must be at least 64 bits")

    @property
    def width_units(self) -> int:
        """Largest allowed eps width, in units of 2^-60."""
        return 1 << (SCALE - self.guard_bits)

    def bits_for(self, n: int, log2_alpha: float, xi_bits: int) -> int:
        return math.ceil(n * log2_alpha) + xi_bits + self.guard_bits + 64


@dataclass(frozen=True)
class OrbitPoint:
    n: int
    A: int
    eps: Interval
    dist: Interval
    exact: bool = False


# ---------------------------------------------------------------------------
# nearest-integer decomposition


def nearest_decomposition(x: Interval, eta) -> tuple[int, Interval]:
    """Split x - eta = A + eps with A integer and eps in (-1/2, 1/2].

    A degenerate interval is decided exactly; otherwise the enclosure must not
    straddle a point where A changes.
    """
    eta = to_fraction(eta)
    lo, hi = to_fraction(x.lo), to_fraction(x.hi)
    if hi - lo >= Fraction(1, 2):
        raise ValidationError("enclosure width must be below 1/2")
    tl, th = lo - eta, hi - eta
    a_lo = math.ceil(tl - Fraction(1, 2))
    a_hi = math.ceil(th - Fraction(1, 2))
    if a_lo != a_hi:
        raise UndecidableRounding(f"enclosure [{float(lo)}, {float(hi)}] minus {eta} straddles a half-integer")
    return a_lo, Interval(tl - a_lo, th - a_lo)


def _floor_div(x, v, s: int):
    """floor(x / (v 2^s)) for v > 0, using shifts for the power of two."""
    x = x >> s
    return x if v == 1 else x // v


def _decompose_scaled(n_lo, n_hi, v, s: int):
    """t in [n_lo, n_hi] / (v 2^s); returns (A, eps_lo, eps_hi) in 2^-60 units, or None.

    Only linear-cost big-integer operations are used; the enclosure width must
    be below 1/2.
    """
    q = v << s
    a0 = _floor_div(n_lo, v, s)
    base = (a0 * v) << s
    r_lo = n_lo - base
    r_hi = n_hi - base if n_hi != n_lo else r_lo
    # A = ceil(t - 1/2): t - a0 in [0, 3/2) here
    k_lo = 1 if 2 * r_lo > q else 0
    k_hi = k_lo if r_hi is r_lo else (1 if 2 * r_hi > q else 0)
    if k_lo != k_hi or 2 * r_hi > 3 * q:
        return None
    if k_lo:
        r_lo -= q
        r_hi -= q
    if s >= SCALE:
        u_lo = _floor_div(r_lo, v, s - SCALE)
        u_hi = -_floor_div(-r_hi, v, s - SCALE)
    else:
        u_lo = _floor_div(r_lo << (SCALE - s), v, 0)
        u_hi = -_floor_div(-(r_hi << (SCALE - s)), v, 0)
    return int(a0 + k_lo), int(u_lo), int(u_hi)


# ---------------------------------------------------------------------------
# backends


class _Backend:
    name = "abstract"
    exact = False

    def run(self, N: int, budget: PrecisionBudget):  # pragma: no cover - interface
        raise NotImplementedError

    def point(self, n: int, bits: int, budget: PrecisionBudget) -> OrbitPoint:  # pragma: no cover
        raise NotImplementedError


def _eta_parts(eta: Fraction) -> tuple[int, int]:
    return eta.numerator, eta.denominator


class ExactRationalBackend(_Backend):
    """Rational xi and alpha = p/q: exact big-rational arithmetic."""

    name = "exact_rational"
    exact = True

    def __init__(self, xi: Fraction, alpha: Fraction, eta: Fraction):
        self.xi, self.alpha, self.eta = xi, alpha, eta

    def _state(self, n: int):
        p, q = self.alpha.numerator, self.alpha.denominator
        return self.xi.numerator * p**n, self.xi.denominator * q**n

    def run(self, N: int, budget: PrecisionBudget):
        p, q = self.alpha.numerator, self.alpha.denominator
        a, b = self.xi.numerator, self.xi.denominator
        u, v = _eta_parts(self.eta)
        pow2 = (b & (b - 1)) == 0 and (q & (q - 1)) == 0
        lo = np.empty(N, dtype=np.int64)
        hi = np.empty(N, dtype=np.int64)
        keep_a = N * (N + 1) // 2 * max(1.0, math.log2(max(abs(self.alpha), 2))) < A_STORAGE_BITS
        A: list[int] | None = [] if keep_a else None
        if pow2:
            s = b.bit_length() - 1
            qs = q.bit_length() - 1
            X = a
            for i in range(N):
                X *= p
                s += qs
                T = v * X - (u << s)
                res = _decompose_scaled(T, T, v, s)
                An, lo[i], hi[i] = res
                if A is not None:
                    A.append(An)
        else:
            X, B = _mpz(a), _mpz(b)
            for i in range(N):
                X *= p
                B *= q
                T = v * X - u * B
                res = _decompose_scaled(T, T, B * v, 0)
                An, lo[i], hi[i] = res
                if A is not None:
                    A.append(An)
        return lo, hi, A

    def point(self, n: int, bits: int, budget: PrecisionBudget) -> OrbitPoint:
        X, B = self._state(n)
        y = Fraction(X, B)
        A, eps = nearest_decomposition(Interval(y, y), self.eta)
        return OrbitPoint(n, A, eps, abs(eps), True)


class _PowerCoords:
    """Integer coordinates C with xi alpha^n = (sum_j C_j alpha^j) / D in Q(alpha)."""

    def __init__(self, start: NumberFieldElement):
        self.field = start.field
        self.f = self.field.minpoly.coeffs
        den = 1
        for c in start.coords:
            den = den * c.denominator // math.gcd(den, c.denominator)
        self.C = [int(c * den) for c in start.coords]
        self.D = den
        self.n = 0

    def step(self) -> None:
        f, C = self.f, self.C
        d = len(C)
        ad = f[d]
        top = C[d - 1]
        new = [0] * d
        new[0] = -top * f[0]
        for j in range(1, d):
            new[j] = ad * C[j - 1] - top * f[j]
        self.C = new
        if ad != 1:
            self.D *= ad
            if self.n % 32 == 0:
                g = self.D
                for c in new:
                    g = math.gcd(g, c)
                    if g == 1:
                        break
                if g > 1:
                    self.C = [c // g for c in new]
                    self.D //= g
        self.n += 1

    @classmethod
    def at(cls, start: NumberFieldElement, n: int) -> "_PowerCoords":
        gen = NumberFieldElement.generator(start.field)
        obj = cls(start * gen**n)
        obj.n = n
        return obj


def _alpha_power_bounds(alpha: AlgebraicNumber, d: int, P: int) -> tuple[list[int], list[int]]:
    """alpha^j in [lo_j, hi_j] / 2^P for j < d (outward)."""
    extra = 8 * d + 8
    L, H = alpha.dyadic(P + extra)
    lo, hi = [1 << P], [1 << P]
    pl, ph = 1, 1
    for j in range(1, d):
        pl *= L
        ph *= H
        sh = (P + extra) * j - P
        lo.append(pl >> sh)
        hi.append(-((-ph) >> sh))
    return lo, hi


def _embed(C: list[int], lo: list[int], hi: list[int]) -> tuple[int, int]:
    s_lo = s_hi = 0
    for c, l_, h_ in zip(C, lo, hi):
        if c >= 0:
            s_lo += c * l_
            s_hi += c * h_
        else:
            s_lo += c * h_
            s_hi += c * l_
    return s_lo, s_hi


class FieldBackend(_Backend):
    """xi in Q(alpha): exact coordinate recurrence, certified embedding."""

    name = "field"
    exact = False

    def __init__(self, xi: NumberFieldElement, alpha: AlgebraicNumber, eta: Fraction):
        self.xi, self.alpha, self.eta = xi, alpha, eta
        self.log2_alpha = math.log2(float(alpha.enclosure(64).hi))
        self.xi_bits = max(max(c.numerator.bit_length(), c.denominator.bit_length()) for c in xi.coords)

    def _decide(self, C, D, P, bounds, budget: PrecisionBudget):
        """Decomposition at precision P; None when P is too coarse."""
        u, v = _eta_parts(self.eta)
        if not any(C[1:]):
            T = v * C[0] - u * D
            return _decompose_scaled(T, T, v * D, 0), True
        lo, hi = bounds
        y_lo, y_hi = _embed(C, lo, hi)
        t_lo = v * y_lo - ((u * D) << P)
        t_hi = v * y_hi - ((u * D) << P)
        res = _decompose_scaled(t_lo, t_hi, v * D, P)
        if res is None or res[2] - res[1] > budget.width_units:
            return None, False
        return res, False

    def run(self, N: int, budget: PrecisionBudget):
        coords = _PowerCoords(self.xi)
        d = self.alpha.degree
        lo_u = np.empty(N, dtype=np.int64)
        hi_u = np.empty(N, dtype=np.int64)
        keep_a = N * (N + 1) // 2 * max(1.0, self.log2_alpha) < A_STORAGE_BITS
        A: list[int] | None = [] if keep_a else None
        block = 256
        P = -1
        bounds = None
        for i in range(N):
            coords.step()
            n = i + 1
            need = budget.bits_for(min(N, n + block), self.log2_alpha, self.xi_bits + coords.D.bit_length())
            if need > P:
                P = min(need + block, budget.cap_bits)
                bounds = _alpha_power_bounds(self.alpha, d, P)
            res, _exact = self._decide(coords.C, coords.D, P, bounds, budget)
            Pn = P
            while res is None:
                if Pn >= budget.cap_bits:
                    self._fail(n, budget)
                Pn = min(2 * Pn, budget.cap_bits)
                res, _exact = self._decide(coords.C, coords.D, Pn, _alpha_power_bounds(self.alpha, d, Pn), budget)
            An, lo_u[i], hi_u[i] = res
            if A is not None:
                A.append(An)
        return lo_u, hi_u, A

    def _fail(self, n: int, budget: PrecisionBudget):
        raise UndecidableRounding(f"n={n}: rounding undecided at the {budget.cap_bits}-bit cap")

    def point(self, n: int, bits: int, budget: PrecisionBudget) -> OrbitPoint:
        coords = _PowerCoords.at(self.xi, n)
        C, D = coords.C, coords.D
        u, v = _eta_parts(self.eta)
        if not any(C[1:]):
            y = Fraction(C[0], D)
            A, eps = nearest_decomposition(Interval(y, y), self.eta)
            return OrbitPoint(n, A, eps, abs(eps), True)
        P = max(bits, budget.bits_for(n, self.log2_alpha, self.xi_bits + D.bit_length()))
        while True:
            lo, hi = _alpha_power_bounds(self.alpha, len(C), P)
            y_lo, y_hi = _embed(C, lo, hi)
            t_lo = v * y_lo - ((u * D) << P)
            t_hi = v * y_hi - ((u * D) << P)
            q = Fraction(v * D) * (1 << P)
            w = Fraction(t_hi - t_lo) / q
            try:
                if w <= Fraction(1, 1 << bits):
                    A, eps = nearest_decomposition(Interval(Fraction(t_lo) / q, Fraction(t_hi) / q), 0)
                    return OrbitPoint(n, A, eps, abs(eps), False)
            except UndecidableRounding:
                pass
            if P >= budget.cap_bits:
                self._fail(n, budget)
            P = min(2 * P, budget.cap_bits)


class LacunaryPow2Backend(_Backend):
    """xi = sum 2^-s_k and alpha = 2^m: read binary windows of xi directly."""

    name = "lacunary_pow2"
    exact = False

    def __init__(self, spec: LacunarySpec, m: int, eta: Fraction):
        self.spec, self.m, self.eta = spec, m, eta

    def run(self, N: int, budget: PrecisionBudget):
        W = kernels.WINDOW_BITS
        limit = self.m * N + W
        exps = self.spec.exponent_array(limit)
        F, tail = kernels.lacunary_windows(exps, self.m, N, self.spec.infinite)
        e_lo, e_hi = floor_scaled(self.eta, SCALE), ceil_scaled(self.eta, SCALE)
        t_lo = F - e_hi
        t_hi = F + tail.astype(np.int64) - e_lo
        # A offset = ceil((t - 1/2)); integer part of xi 2^(mn) is added on demand
        a_lo = -np.floor_divide(HALF - t_lo, ONE)
        a_hi = -np.floor_divide(HALF - t_hi, ONE)
        lo = t_lo - a_lo * ONE
        hi = t_hi - a_lo * ONE
        for i in np.flatnonzero(a_lo != a_hi):
            pt = self.point(int(i) + 1, 2 * W, budget)
            lo[i] = floor_scaled(pt.eps.lo, SCALE)
            hi[i] = ceil_scaled(pt.eps.hi, SCALE)
        return lo.astype(np.int64), hi.astype(np.int64), None

    def _integer_part(self, n: int) -> int:
        sh = self.m * n
        return sum(1 << (sh - s) for s in self.spec.exponents_upto(sh) if s <= sh)

    def _window(self, n: int, W: int) -> tuple[Fraction, Fraction]:
        sh = self.m * n
        F = 0
        nxt = None
        for s in self.spec.exponents_upto(sh + W):
            if sh < s <= sh + W:
                F += 1 << (W - (s - sh))
            elif s > sh + W:
                nxt = s
        lo = Fraction(F, 1 << W)
        if nxt is None:
            return lo, lo
        # the tail starts with 2^-(nxt - sh) and is at most twice that
        e = nxt - sh
        return lo + Fraction(1, 1 << e), lo + Fraction(2, 1 << e)

    def point(self, n: int, bits: int, budget: PrecisionBudget) -> OrbitPoint:
        W = max(bits, SCALE)
        while True:
            lo, hi = self._window(n, W)
            try:
                A, eps = nearest_decomposition(Interval(lo, hi), self.eta)
                break
            except UndecidableRounding:
                if W >= budget.cap_bits:
                    raise
                W = min(2 * W, budget.cap_bits)
        return OrbitPoint(n, A + self._integer_part(n), eps, abs(eps), lo == hi)


class IntervalBackend(_Backend):
    """Generic fallback: enclosure of xi times a certified enclosure of alpha^n."""

    name = "interval"
    exact = False

    def __init__(self, spec: RealSpec, alpha: AlgebraicNumber, eta: Fraction):
        self.spec, self.alpha, self.eta = spec, alpha, eta
        self.log2_alpha = math.log2(float(alpha.enclosure(64).hi))
        one = NumberFieldElement.rational(1, alpha)
        self._one = one

    def _product(self, C, D, P: int):
        """Enclosure [lo, hi] / (D 2^(2P)) of xi * alpha^n."""
        if self.alpha.is_rational:
            alpha_lo = alpha_hi = C[0] << P
        else:
            lo, hi = _alpha_power_bounds(self.alpha, len(C), P)
            alpha_lo, alpha_hi = _embed(C, lo, hi)
        enc = self.spec.enclosure(P)
        x_lo, x_hi = floor_scaled(Fraction(enc.lo), P), ceil_scaled(Fraction(enc.hi), P)
        prods = (x_lo * alpha_lo, x_lo * alpha_hi, x_hi * alpha_lo, x_hi * alpha_hi)
        return min(prods), max(prods)

    def _decide(self, C, D, P, budget):
        u, v = _eta_parts(self.eta)
        y_lo, y_hi = self._product(C, D, P)
        t_lo = v * y_lo - ((u * D) << (2 * P))
        t_hi = v * y_hi - ((u * D) << (2 * P))
        res = _decompose_scaled(t_lo, t_hi, v * D, 2 * P)
        if res is None or res[2] - res[1] > budget.width_units:
            return None
        return res

    def run(self, N: int, budget: PrecisionBudget):
        coords = _PowerCoords(self._one)
        lo_u = np.empty(N, dtype=np.int64)
        hi_u = np.empty(N, dtype=np.int64)
        keep_a = N * (N + 1) // 2 * max(1.0, self.log2_alpha) < A_STORAGE_BITS
        A: list[int] | None = [] if keep_a else None
        block = 256
        P = -1
        for i in range(N):
            coords.step()
            n = i + 1
            need = budget.bits_for(min(N, n + block), self.log2_alpha, coords.D.bit_length())
            if need > P:
                P = min(need + block, budget.cap_bits)
            res = self._decide(coords.C, coords.D, P, budget)
            Pn = P
            while res is None:
                if Pn >= budget.cap_bits:
                    raise UndecidableRounding(f"n={n}: rounding undecided at the {budget.cap_bits}-bit cap")
                Pn = min(2 * Pn, budget.cap_bits)
                res = self._decide(coords.C, coords.D, Pn, budget)
            An, lo_u[i], hi_u[i] = res
            if A is not None:
                A.append(An)
        return lo_u, hi_u, A

    def point(self, n: int, bits: int, budget: PrecisionBudget) -> OrbitPoint:
        coords = _PowerCoords.at(self._one, n)
        C, D = coords.C, coords.D
        P = max(bits, budget.bits_for(n, self.log2_alpha, D.bit_length()))
        while True:
            y_lo, y_hi = self._product(C, D, P)
            q = Fraction(D) * (1 << (2 * P))
            lo, hi = Fraction(y_lo) / q, Fraction(y_hi) / q
            if hi - lo <= Fraction(1, 1 << bits):
                try:
                    A, eps = nearest_decomposition(Interval(lo, hi), self.eta)
                    return OrbitPoint(n, A, eps, abs(eps), False)
                except UndecidableRounding:
                    pass
            if P >= budget.cap_bits:
                raise UndecidableRounding(f"n={n}: rounding undecided at the {budget.cap_bits}-bit cap")
            P = min(2 * P, budget.cap_bits)


def select_backend(xi: RealSpec, alpha: AlgebraicNumber, eta: Fraction) -> _Backend:
    if isinstance(xi, FieldSpec):
        if xi.element.field != alpha:
            raise ValidationError("xi must lie in the field generated by alpha")
        if alpha.is_rational:
            return ExactRationalBackend(xi.element.coords[0], alpha.rational, eta)
        return FieldBackend(xi.element, alpha, eta)
    if isinstance(xi, RationalSpec):
        if alpha.is_rational:
            return ExactRationalBackend(xi.value, alpha.rational, eta)
        return FieldBackend(NumberFieldElement.rational(xi.value, alpha), alpha, eta)
    if isinstance(xi, LacunarySpec):
        if alpha.is_rational:
            q = alpha.rational
            if q.denominator == 1 and q.numerator & (q.numerator - 1) == 0:
                return LacunaryPow2Backend(xi, q.numerator.bit_length() - 1, eta)
        return IntervalBackend(xi, alpha, eta)
    if isinstance(xi, IntervalSpec):
        return IntervalBackend(xi, alpha, eta)
    raise ValidationError(f"unsupported xi {xi!r}")


# ---------------------------------------------------------------------------


class Orbit:
    """Immutable certified orbit for n = 1..N."""

    def __init__(self, xi: RealSpec, alpha: AlgebraicNumber, eta: Fraction, N: int,
                 budget: PrecisionBudget, backend: _Backend, eps_lo: np.ndarray, eps_hi: np.ndarray,
                 A: list[int] | None):
        self.xi, self.alpha, self.eta, self.N, self.budget = xi, alpha, eta, N, budget
        self.backend = backend
        eps_lo.flags.writeable = False
        eps_hi.flags.writeable = False
        self.eps_lo, self.eps_hi = eps_lo, eps_hi
        self._A = A
        neg = eps_hi <= 0
        pos = eps_lo >= 0
        dl = np.where(pos, eps_lo, np.where(neg, -eps_hi, 0))
        dh = np.where(pos, eps_hi, np.where(neg, -eps_lo, np.maximum(-eps_lo, eps_hi)))
        dl.flags.writeable = False
        dh.flags.writeable = False
        self.dist_lo, self.dist_hi = dl.astype(np.int64), dh.astype(np.int64)

    @property
    def exact(self) -> bool:
        return self.backend.exact

    def __len__(self) -> int:
        return self.N

    def A(self, n: int) -> int:
        self._check(n)
        if self._A is not None:
            return self._A[n - 1]
        return self.refine(n).A

    def _check(self, n: int) -> None:
        if not 1 <= n <= self.N:
            raise IndexError(f"n={n} outside 1..{self.N}")

    def __getitem__(self, n: int) -> OrbitPoint:
        self._check(n)
        lo, hi = int(self.eps_lo[n - 1]), int(self.eps_hi[n - 1])
        eps = Interval(Fraction(lo, ONE), Fraction(hi, ONE))
        dist = Interval(Fraction(int(self.dist_lo[n - 1]), ONE), Fraction(int(self.dist_hi[n - 1]), ONE))
        return OrbitPoint(n, self.A(n), eps, dist, self.exact)

    def __iter__(self) -> Iterator[OrbitPoint]:
        for n in range(1, self.N + 1):
            yield self[n]

    def refine(self, n: int, bits: int = 2 * SCALE) -> OrbitPoint:
        """The point at n with eps enclosed to about 2^-bits (exact when possible)."""
        self._check(n)
        return self.backend.point(n, bits, self.budget)

    @property
    def max_width_units(self) -> int:
        return int((self.eps_hi - self.eps_lo).max()) if self.N else 0

    def widths_ok(self, guard_bits: int | None = None) -> bool:
        g = self.budget.guard_bits if guard_bits is None else guard_bits
        return self.max_width_units <= 1 << (SCALE - g)

    def has_A(self) -> bool:
        return self._A is not None


def compute_orbit(xi: RealSpec, alpha: AlgebraicNumber, eta=0, N: int = 100,
                  budget: PrecisionBudget | None = None) -> Orbit:
    """Certified orbit points for n = 1..N."""
    if N < 1:
        raise ValidationError("N must be at least 1")
    eta = to_fraction(eta)
    budget = PrecisionBudget() if budget is None else budget
    backend = select_backend(xi, alpha, eta)
    lo, hi, A = backend.run(N, budget)
    return Orbit(xi, alpha, eta, N, budget, backend, lo, hi, A)


def units_to_decimal(u: int, digits: int, up: bool) -> str:
    """Decimal string for u/2^60 rounded down (or up) at ``digits`` places."""
    scaled = u * 10**digits
    k = -((-scaled) >> SCALE) if up else scaled >> SCALE
    sign = "-" if k < 0 else ""
    k = abs(k)
    s = str(k).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"
