"""Hit counts, maximal runs and the integer identities that hold inside runs."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from . import kernels
from .algebraic import OUTSIDE, AlgebraicNumber, conjugates
from .enclosure import Interval, ceil_scaled, floor_scaled, log_interval, to_fraction
from .errors import (
    NoOutsideConjugate,
    PrecisionCapExceeded,
    ReconstructionMismatch,
    UncertainPoints,
    UndecidableRounding,
    ValidationError,
)
from .field import NumberFieldElement
from .orbit import SCALE, Orbit
from .polynomial import power_sums

DEFAULT_S = 100


# ---------------------------------------------------------------------------
# classification against delta


def _check_delta(delta: Fraction) -> None:
    if not 0 < delta < Fraction(1, 2):
        raise ValidationError("delta must lie in (0, 1/2)")


def classify(orbit: Orbit, delta, N: int | None = None) -> tuple[np.ndarray, int]:
    """+1 for dist >= delta, -1 for dist < delta, 0 if undecided after refinement.

    Returns the class array for n = 1..N and the number of refined points.
    """
    delta = to_fraction(delta)
    _check_delta(delta)
    N = orbit.N if N is None else N
    if not 1 <= N <= orbit.N:
        raise ValidationError(f"N={N} outside the orbit length {orbit.N}")
    d_lo, d_hi = floor_scaled(delta, SCALE), ceil_scaled(delta, SCALE)
    cls = kernels.classify_dist(orbit.dist_lo[:N], orbit.dist_hi[:N], d_lo, d_hi).copy()
    pending = np.flatnonzero(cls == 0)
    for i in pending:
        cls[i] = _refine_against(orbit, int(i) + 1, delta)
    return cls, int(pending.size)


def _refine_against(orbit: Orbit, n: int, delta: Fraction) -> int:
    bits = 2 * SCALE
    cap = orbit.budget.cap_bits
    while True:
        try:
            pt = orbit.refine(n, bits)
        except (UndecidableRounding, PrecisionCapExceeded):
            return 0
        if pt.dist.lo >= delta:
            return 1
        if pt.dist.hi < delta:
            return -1
        if pt.exact or bits >= cap:
            return 0
        bits = min(2 * bits, cap)


@dataclass(frozen=True)
class CountReport:
    N: int
    delta: Fraction
    eta: Fraction
    count_ge: int
    count_lt: int
    uncertain: int
    refined: int = 0
    hit_indices: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        assert self.count_ge + self.count_lt + self.uncertain == self.N

    def to_json(self) -> dict[str, object]:
        out: dict[str, object] = {
            "N": self.N, "delta": str(self.delta), "eta": str(self.eta),
            "count_ge": self.count_ge, "count_lt": self.count_lt,
            "uncertain": self.uncertain, "refined": self.refined,
        }
        if self.hit_indices is not None:
            out["hit_indices"] = list(self.hit_indices)
        return out


def count_hits(orbit: Orbit, delta, N: int | None = None, keep_indices: bool = False) -> CountReport:
    """Three-way certified tally of #{n <= N : dist(n) >= delta}."""
    delta = to_fraction(delta)
    cls, refined = classify(orbit, delta, N)
    ge = int((cls == 1).sum())
    lt = int((cls == -1).sum())
    hits = tuple(int(i) + 1 for i in np.flatnonzero(cls == 1)) if keep_indices else None
    return CountReport(len(cls), delta, orbit.eta, ge, lt, len(cls) - ge - lt, refined, hits)


# ---------------------------------------------------------------------------
# runs and the linear envelope


@dataclass(frozen=True)
class Envelope:
    """k < gamma * n + gamma0 for every run (start n, length k)."""

    gamma: Fraction
    gamma0: Fraction
    S: int

    @property
    def B(self) -> Fraction:
        return (self.gamma + self.gamma0 + 2) / self.gamma

    def covers(self, runs: Iterable[tuple[int, int]]) -> bool:
        return all(k < self.gamma * n + self.gamma0 for n, k in runs)


def fit_envelope(runs: Sequence[tuple[int, int]], S: int = DEFAULT_S) -> Envelope | None:
    """Smallest slope gamma with gamma0 = S * gamma covering all runs strictly.

    The infimum max k/(n+S) is not attained by a strict bound, so gamma is
    nudged up by a margin below 2^-32 / (n_max + S).
    """
    if S <= 0:
        raise ValidationError("S must be positive")
    if not runs:
        return None
    g_inf = max(Fraction(k, n + S) for n, k in runs)
    n_max = max(n for n, _ in runs)
    gamma = g_inf + Fraction(1, (n_max + S) << 32)
    env = Envelope(gamma, S * gamma, S)
    assert env.covers(runs)
    return env


def intercept_for_slope(runs: Sequence[tuple[int, int]], slope) -> Fraction | None:
    """Least c0 with k <= slope * n + c0 for every run."""
    slope = to_fraction(slope)
    if not runs:
        return None
    return max(k - slope * n for n, k in runs)


@dataclass(frozen=True)
class RunReport:
    N: int
    delta: Fraction
    runs: tuple[tuple[int, int], ...]
    envelope: Envelope | None
    count_ge: int

    @property
    def gamma(self) -> Fraction | None:
        return None if self.envelope is None else self.envelope.gamma

    @property
    def gamma0(self) -> Fraction | None:
        return None if self.envelope is None else self.envelope.gamma0

    @property
    def B(self) -> Fraction | None:
        return None if self.envelope is None else self.envelope.B

    @property
    def longest(self) -> int:
        return max((k for _, k in self.runs), default=0)

    def to_json(self) -> dict[str, object]:
        env = self.envelope
        return {
            "N": self.N, "delta": str(self.delta), "count_ge": self.count_ge,
            "runs": [list(r) for r in self.runs],
            "gamma": None if env is None else float(env.gamma),
            "gamma0": None if env is None else float(env.gamma0),
            "B": None if env is None else float(env.B),
            "S": None if env is None else env.S,
        }


def _certain_classes(orbit: Orbit, delta: Fraction, N: int | None) -> np.ndarray:
    cls, _ = classify(orbit, delta, N)
    bad = np.flatnonzero(cls == 0)
    if bad.size:
        raise UncertainPoints(f"{bad.size} points undecided against delta, first n={int(bad[0]) + 1}")
    return cls


def max_runs(orbit: Orbit, delta, S: int = DEFAULT_S, N: int | None = None) -> RunReport:
    """Maximal blocks of consecutive n with dist < delta, plus the envelope fit."""
    delta = to_fraction(delta)
    cls = _certain_classes(orbit, delta, N)
    starts, lengths = kernels.maximal_runs(cls)
    runs = tuple((int(s) + 1, int(k)) for s, k in zip(starts, lengths))
    return RunReport(len(cls), delta, runs, fit_envelope(runs, S), int((cls == 1).sum()))


# ---------------------------------------------------------------------------
# identities inside runs


@dataclass(frozen=True)
class Violation:
    n: int
    span: int
    residual: int

    def to_json(self) -> dict[str, int]:
        return {"n": self.n, "span": self.span, "residual": self.residual}


def check_recurrence_in_runs(orbit: Orbit, alpha: AlgebraicNumber, delta, N: int | None = None) -> list[Violation]:
    """Integer identities inside every maximal run (empty list when they all hold).

    Degree one, alpha = p/q: q^k A_{n+k} = p^k A_n from each run's start.
    Otherwise every d+1 consecutive in-run indices satisfy sum_j a_j A_{m+j} = 0.
    """
    delta = to_fraction(delta)
    if orbit.alpha != alpha:
        raise ValidationError("orbit was computed for a different alpha")
    report = max_runs(orbit, delta, N=N)
    f = alpha.minpoly.coeffs
    d = alpha.degree
    out: list[Violation] = []
    for start, length in report.runs:
        A = [orbit.A(n) for n in range(start, start + length)]
        if d == 1:
            q, p = f[1], -f[0]
            pk, qk = 1, 1
            for k in range(1, length):
                pk *= p
                qk *= q
                r = qk * A[k] - pk * A[0]
                if r:
                    out.append(Violation(start, k, r))
        else:
            for m in range(length - d):
                r = sum(f[j] * A[m + j] for j in range(d + 1))
                if r:
                    out.append(Violation(start + m, d, r))
    return out


@dataclass(frozen=True)
class ConjugateTheta:
    re: mpmath.mpf
    im: mpmath.mpf
    radius: float

    @property
    def value(self) -> complex:
        return complex(float(self.re), float(self.im))


@dataclass(frozen=True)
class RecurrenceSolution:
    """theta_1 exactly in Q(alpha), the other theta_i as complex disks."""

    theta1: NumberFieldElement
    conjugate_thetas: tuple[ConjugateTheta, ...]
    n: int
    window: tuple[int, ...]

    def to_json(self) -> dict[str, object]:
        return {
            "n": self.n, "window": list(self.window),
            "theta1": self.theta1.to_json(), "theta1_value": float(self.theta1),
            "conjugates": [{"re": float(t.re), "im": float(t.im), "radius": t.radius}
                           for t in self.conjugate_thetas],
        }


def _beta_polys(f: Sequence[int]) -> list[list[int]]:
    """beta_k(x) = sum_{m>k} a_m x^(m-k-1), ascending coefficients, k = 0..d-1."""
    d = len(f) - 1
    return [[f[m] for m in range(k + 1, d + 1)] for k in range(d)]


def solve_theta(window: Sequence[int], alpha: AlgebraicNumber, n: int) -> RecurrenceSolution:
    """theta_i with A_{n+k} = sum_i theta_i alpha_i^(n+k), k = 0..d-1."""
    d = alpha.degree
    if d < 2:
        raise ValidationError("the theta solve needs degree at least 2")
    window = tuple(int(a) for a in window)
    if len(window) != d:
        raise ValidationError(f"expected {d} window values, got {len(window)}")
    f = alpha.minpoly.coeffs
    g1 = [Fraction(0)] * d
    for a_k, beta in zip(window, _beta_polys(f)):
        for j, c in enumerate(beta):
            g1[j] += a_k * c
    g0 = NumberFieldElement.from_coords([j * f[j] for j in range(1, d + 1)], alpha)
    x1 = NumberFieldElement.from_coords(g1, alpha) / g0
    theta1 = x1 * NumberFieldElement.generator(alpha) ** (-n)
    for k, (a_k, tr) in enumerate(zip(window, trace_sequence(theta1, n, d))):
        if tr != a_k:
            raise ReconstructionMismatch(f"trace reconstruction gives {tr} at n+{k}, expected {a_k}")
    return RecurrenceSolution(theta1, _conjugate_thetas(theta1), n, window)


def _conjugate_thetas(theta1: NumberFieldElement, prec: int = 160) -> tuple[ConjugateTheta, ...]:
    cs = conjugates(theta1.field, Fraction(1, 1 << prec))
    R = float(cs.radius)
    out = []
    with mpmath.workprec(prec + 32):
        coords = [mpmath.mpf(c.numerator) / c.denominator for c in theta1.coords]
        for disk in cs.others:
            z = mpmath.mpc(mpmath.mpf(disk.re.numerator) / disk.re.denominator,
                           mpmath.mpf(disk.im.numerator) / disk.im.denominator)
            acc = mpmath.mpc(0)
            for c in reversed(coords):
                acc = acc * z + c
            # |c(z') - c(z)| <= sum_j |c_j| j (|z| + R)^(j-1) R for |z' - z| <= R
            mz = float(abs(z)) + R
            lip = sum(abs(float(c)) * j * mz ** (j - 1) for j, c in enumerate(coords) if j)
            scale = sum(abs(float(c)) * mz**j for j, c in enumerate(coords))
            radius = lip * R * (1 + 1e-12) + scale * 2.0 ** (-prec)
            out.append(ConjugateTheta(acc.real, acc.imag, radius))
    return tuple(out)


def trace_sequence(theta1: NumberFieldElement, start: int, count: int) -> list[Fraction]:
    """Tr(theta1 alpha^j) for j = start..start+count-1 via Newton power sums."""
    alpha = theta1.field
    d = alpha.degree
    # Tr(c(alpha) alpha^j) = sum_i c_i p_{i+j}
    top = start + count + d
    if start < 0:
        raise ValidationError("start must be non-negative")
    p = power_sums(alpha.minpoly, top)
    return [sum((c * p[i + j] for i, c in enumerate(theta1.coords)), Fraction(0))
            for j in range(start, start + count)]


# ---------------------------------------------------------------------------
# growth of hit indices


@dataclass(frozen=True)
class GrowthCheck:
    ok: bool
    witness: int | None
    B: Fraction

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict[str, object]:
        return {"ok": self.ok, "witness": self.witness, "B": str(self.B)}


def geometric_growth_check(hits: Sequence[int], gamma, gamma0) -> GrowthCheck:
    """x_m + B <= B (1 + gamma)^m for the m-th hit, B = (gamma + gamma0 + 2) / gamma."""
    gamma, gamma0 = to_fraction(gamma), to_fraction(gamma0)
    if gamma <= 0:
        raise ValidationError("gamma must be positive")
    B = (gamma + gamma0 + 2) / gamma
    hits = list(hits)
    if any(b <= a for a, b in zip(hits, hits[1:])):
        raise ValidationError("hit indices must be strictly increasing")
    if not hits:
        return GrowthCheck(True, None, B)
    ratio = 1 + gamma
    rhs = B
    last = hits[-1] + B
    for m, x in enumerate(hits, start=1):
        rhs *= ratio
        if x + B > rhs and x + B > B * ratio**m:
            return GrowthCheck(False, m, B)
        if rhs >= last:
            break
        rhs = _coarsen_down(rhs)
    return GrowthCheck(True, None, B)


def _coarsen_down(q: Fraction) -> Fraction:
    """A lower bound on q with a short dyadic denominator (keeps sizes bounded)."""
    if q.denominator.bit_length() <= 128:
        return q
    return Fraction(floor_scaled(q, 96), 1 << 96)


# ---------------------------------------------------------------------------
# log-N law and the conjugate slope


@dataclass(frozen=True)
class LogFit:
    c: float
    zero_counts: bool
    ratios: tuple[float, ...]

    def to_json(self) -> dict[str, object]:
        return {"c": self.c, "zero_counts": self.zero_counts, "ratios": list(self.ratios)}


def logN_fit(counts: Sequence[tuple[float, int]]) -> LogFit:
    """Largest c with count_j >= c log N_j for every sample."""
    if len(counts) < 3:
        raise ValidationError("need at least three samples")
    Ns = [float(N) for N, _ in counts]
    if any(b <= a for a, b in zip(Ns, Ns[1:])) or Ns[0] <= 1:
        raise ValidationError("N_j must be increasing and above 1")
    ratios = tuple(c / math.log(N) for N, c in zip(Ns, (c for _, c in counts)))
    zero = any(c == 0 for _, c in counts)
    return LogFit(0.0 if zero else min(ratios), zero, ratios)


def theorem3_slope(alpha: AlgebraicNumber, bits: int = 96) -> Interval:
    """(d-1) log alpha / log |alpha_2| for the largest outside conjugate alpha_2 != alpha."""
    if alpha.degree == 1:
        raise NoOutsideConjugate("a rational alpha has no other conjugates")
    cs = conjugates(alpha, Fraction(1, 1 << bits))
    outside = [disk for disk in cs.others if disk.flag == OUTSIDE]
    if not outside:
        raise NoOutsideConjugate(f"no conjugate of {alpha} other than itself lies outside the unit circle")
    best = max(outside, key=lambda disk: disk.modulus_sq())
    m_lo, m_hi = best.modulus_bounds(cs.radius, bits + 16)
    a = alpha.enclosure(bits + 16)
    num = log_interval(a.lo, a.hi, bits + 16)
    den = log_interval(m_lo, m_hi, bits + 16)
    if den.lo <= 0:
        raise NoOutsideConjugate("the outside conjugate is too close to the unit circle")
    d1 = alpha.degree - 1
    return Interval(d1 * num.lo / den.hi, d1 * num.hi / den.lo)
