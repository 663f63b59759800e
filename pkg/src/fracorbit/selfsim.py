"""Fourier transforms of homogeneous self-similar measures.

The measure mu is the fixed point of mu = sum_i p_i f_i mu with branch maps
f_i(x) = r^(l_i) x + a_i. Its transform satisfies

    mu^(u) = sum_i p_i e(u a_i) mu^(r^(l_i) u),      e(t) = exp(2 pi i t),

so along the ladder u r^j each level depends only on the levels j + l_i.
``mu_hat`` seeds the ladder where the attractor looks like a point and runs
the recurrence downward; the error bound combines the seed remainder with a
floating-point rounding budget.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import mpmath
import numpy as np

from . import kernels
from .algebraic import AlgebraicNumber, parse_algebraic, rational_algebraic
from .enclosure import Interval, to_fraction
from .errors import (
    AtomicDegenerate,
    GcdNotOne,
    NoEqualExponentPair,
    NotProbabilityVector,
    ToleranceUnreachable,
    ValidationError,
)
from .field import NumberFieldElement

TWO_PI = 2 * math.pi
_U = 2.0**-53
# |computed e(t) - e(t)| for t reduced exactly into [0, 1)
_PHASE_ERR = 8 * _U


@dataclass(frozen=True)
class Branch:
    l: int
    a: Fraction
    p: Fraction

    def to_json(self) -> list:
        return [self.l, str(self.a), str(self.p)]


@dataclass(frozen=True)
class IFSpec:
    """Contraction ratio r = 1/beta and branches (l_i, a_i, p_i)."""

    beta: AlgebraicNumber
    branches: tuple[Branch, ...]

    @property
    def r_is_rational(self) -> bool:
        return self.beta.is_rational

    @property
    def r(self) -> Fraction:
        return 1 / self.beta.rational

    @property
    def m(self) -> int:
        return len(self.branches)

    @property
    def lmax(self) -> int:
        return max(b.l for b in self.branches)

    def r_float(self) -> float:
        return 1.0 / float(self.beta)

    def r_enclosure(self, bits: int) -> Interval:
        if self.r_is_rational:
            return Interval(self.r, self.r)
        b = self.beta.enclosure(bits)
        return Interval(1 / b.hi, 1 / b.lo)

    def r_mpf(self, prec: int):
        if self.r_is_rational:
            return mpmath.mpf(self.r.numerator) / self.r.denominator
        with mpmath.workprec(prec + 16):
            return 1 / self.beta.mpf(prec + 8)

    def to_json(self) -> dict[str, object]:
        if self.r_is_rational:
            r: object = str(self.r)
        else:
            r = {"inverse_of_root": list(self.beta.minpoly.coeffs)}
        return {"r": r, "branches": [b.to_json() for b in self.branches]}

    @classmethod
    def from_json(cls, obj) -> "IFSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "r" not in obj or "branches" not in obj:
            raise ValidationError('IFS spec needs "r" and "branches"')
        return make_ifs(obj["r"], obj["branches"])


def _parse_ratio(r) -> AlgebraicNumber:
    if isinstance(r, dict):
        if "inverse_of_root" in r:
            return parse_algebraic(r["inverse_of_root"], r.get("root", "largest"))
        raise ValidationError(f"cannot read contraction ratio {r!r}")
    q = to_fraction(r)
    if not 0 < q < 1:
        raise ValidationError(f"contraction ratio {q} is not in (0, 1)")
    return rational_algebraic(1 / q)


def make_ifs(r, branches: Iterable[Sequence]) -> IFSpec:
    """Build and validate an IFSpec from a ratio and (l, a, p) triples."""
    beta = r if isinstance(r, AlgebraicNumber) else _parse_ratio(r)
    bs = []
    for br in branches:
        if len(br) != 3:
            raise ValidationError(f"branch {br!r} is not a triple (l, a, p)")
        l, a, p = br
        if isinstance(l, float) or int(l) != l or int(l) < 1:
            raise ValidationError(f"exponent {l!r} is not a positive integer")
        bs.append(Branch(int(l), to_fraction(a), to_fraction(p)))
    return validate_ifs(IFSpec(beta, tuple(bs)))


def _fixed_point_is_shared(spec: IFSpec) -> bool:
    bs = spec.branches
    if spec.r_is_rational:
        r = spec.r
        pts = {b.a / (1 - r**b.l) for b in bs}
        return len(pts) == 1
    gen = NumberFieldElement.generator(spec.beta)
    rinv = gen.inverse()
    pts = [(1 - rinv**b.l).inverse() * b.a for b in bs]
    return all(p.coords == pts[0].coords for p in pts[1:])


def validate_ifs(spec: IFSpec) -> IFSpec:
    """Check the invariants and reorder so the first two branches share l with a_1 > a_2."""
    bs = list(spec.branches)
    if len(bs) < 2:
        raise ValidationError("an IFS needs at least two branches")
    if spec.beta.is_rational and spec.beta.rational <= 1:
        raise ValidationError("contraction ratio must lie in (0, 1)")
    g = reduce(math.gcd, (b.l for b in bs))
    if g != 1:
        raise GcdNotOne(f"gcd of the exponents is {g}; rescale r to r^{g} and divide the exponents")
    if any(not 0 < b.p < 1 for b in bs) or sum(b.p for b in bs) != 1:
        raise NotProbabilityVector("probabilities must lie in (0, 1) and sum to 1")
    if _fixed_point_is_shared(spec):
        raise AtomicDegenerate("all branches fix the same point; the measure is a Dirac mass")
    pair = None
    for l in sorted({b.l for b in bs}):
        same = [i for i, b in enumerate(bs) if b.l == l]
        hi = max(same, key=lambda i: bs[i].a)
        lo = min(same, key=lambda i: bs[i].a)
        if bs[hi].a > bs[lo].a:
            pair = (hi, lo)
            break
    if pair is None:
        raise NoEqualExponentPair(
            "no two branches share an exponent with distinct translations; "
            "regroup branches (e.g. compose maps) to create such a pair")
    rest = [b for i, b in enumerate(bs) if i not in pair]
    return IFSpec(spec.beta, (bs[pair[0]], bs[pair[1]], *rest))


# ---------------------------------------------------------------------------
# attractor enclosure


@dataclass(frozen=True)
class Hull:
    lo: Fraction
    hi: Fraction

    @property
    def center(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def radius(self) -> Fraction:
        return (self.hi - self.lo) / 2


def _branch_image(spec: IFSpec, b: Branch, lo: Fraction, hi: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    r = spec.r_enclosure(bits)
    rl_lo, rl_hi = r.lo**b.l, r.hi**b.l
    img_lo = min(rl_lo * lo, rl_hi * lo) + b.a
    img_hi = max(rl_lo * hi, rl_hi * hi) + b.a
    return img_lo, img_hi


def attractor_hull(spec: IFSpec, bits: int = 64) -> Hull:
    """An interval mapped into itself by every branch, hence containing the attractor."""
    # fixed points bound the convex hull; start there and widen until invariant
    r = spec.r_enclosure(bits)
    fps = []
    for b in spec.branches:
        for rr in (r.lo, r.hi):
            fps.append(b.a / (1 - rr**b.l))
    lo, hi = min(fps), max(fps)
    pad = Fraction(0)
    for _ in range(200):
        imgs = [_branch_image(spec, b, lo, hi, bits) for b in spec.branches]
        if all(lo <= a and c <= hi for a, c in imgs):
            return Hull(lo, hi)
        pad = max(pad * 2, (hi - lo) * Fraction(1, 1 << 40), Fraction(1, 1 << bits))
        lo = min(lo, min(a for a, _ in imgs)) - pad
        hi = max(hi, max(c for _, c in imgs)) + pad
    raise ValidationError("could not certify an invariant interval for the attractor")


# ---------------------------------------------------------------------------
# Fourier samples


def _widen(x: float, direction: float, radius: float) -> float:
    return x if radius == 0 else math.nextafter(x, direction)


@dataclass(frozen=True)
class FourierSample:
    u: float
    re: float
    im: float
    radius: float
    tol: float

    @property
    def re_lo(self) -> float:
        return _widen(self.re - self.radius, -math.inf, self.radius)

    @property
    def re_hi(self) -> float:
        return _widen(self.re + self.radius, math.inf, self.radius)

    @property
    def im_lo(self) -> float:
        return _widen(self.im - self.radius, -math.inf, self.radius)

    @property
    def im_hi(self) -> float:
        return _widen(self.im + self.radius, math.inf, self.radius)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def abs_lo(self) -> float:
        if self.radius == 0:
            return abs(self.value)
        return max(0.0, math.nextafter(abs(self.value) * (1 - 2 * _U) - self.radius, -math.inf))

    @property
    def abs_hi(self) -> float:
        if self.radius == 0:
            return abs(self.value)
        return min(1.0, math.nextafter(abs(self.value) * (1 + 2 * _U) + self.radius, math.inf))

    def conjugate(self) -> "FourierSample":
        return FourierSample(-self.u, self.re, -self.im, self.radius, self.tol)

    def row(self) -> list[float]:
        return [self.u, self.re_lo, self.re_hi, self.im_lo, self.im_hi, self.abs_lo, self.abs_hi]

    def to_json(self) -> dict[str, object]:
        keys = ("u", "re_lo", "re_hi", "im_lo", "im_hi", "abs_lo", "abs_hi")
        out: dict[str, object] = dict(zip(keys, self.row()))
        out["tol"] = self.tol
        return out


def depth_cap(spec: IFSpec, u: float, tol: float, R: float) -> int:
    """Ladder depth allowed for a given u and tolerance."""
    lr = -math.log(spec.r_float())
    return max(0, math.ceil((math.log(max(abs(u), 1e-300)) + math.log(4 * math.pi * max(R, 1e-300) / tol)) / lr)) + 8


def _frac_phase(x) -> tuple[float, float]:
    t = x - math.floor(x) if isinstance(x, Fraction) else mpmath.frac(x)
    ang = TWO_PI * float(t)
    return math.cos(ang), math.sin(ang)


class _Ladder:
    """Phases e(u r^j a_i) and seeds e(u r^j c), evaluated with exact reduction mod 1."""

    def __init__(self, spec: IFSpec, hull: Hull):
        self.spec = spec
        self.c = hull.center
        self.R = float(hull.radius) * (1 + 4 * _U)

    def levels(self, u: Fraction, J: int):
        n = J + self.spec.lmax
        if self.spec.r_is_rational:
            r = self.spec.r
            v = [u]
            for _ in range(n - 1):
                v.append(v[-1] * r)
            return v, 0.0
        # the ladder values only matter mod 1; carry enough bits for the integer part
        prec = 80 + max(0, u.numerator.bit_length() - u.denominator.bit_length())
        with mpmath.workprec(prec + 32):
            r = self.spec.r_mpf(prec + 32)
            x = mpmath.mpf(u.numerator) / u.denominator
            v = [x]
            for _ in range(n - 1):
                v.append(v[-1] * r)
        # relative error ~2^-(prec+30) per step on values below |u| 2^...; absolute below 2^-70
        return v, 2.0**-70

    def phases(self, u: Fraction, J: int):
        spec = self.spec
        m = spec.m
        v, err = self.levels(u, J)
        ph = np.empty((J, m, 2))
        rat = spec.r_is_rational
        with mpmath.workprec(80 + int(abs(u)).bit_length() + 32):
            for j in range(J):
                for i, b in enumerate(spec.branches):
                    ph[j, i] = _frac_phase(v[j] * b.a if rat else v[j] * (mpmath.mpf(b.a.numerator) / b.a.denominator))
            base = np.empty((spec.lmax, 2))
            c = self.c if rat else mpmath.mpf(self.c.numerator) / self.c.denominator
            for t in range(spec.lmax):
                base[t] = _frac_phase(v[J + t] * c)
            vJ = abs(float(v[J])) if J < len(v) else 0.0
        amax = max(abs(float(b.a)) for b in spec.branches) + abs(float(self.c))
        # phase arguments carry an absolute error err * amax before reduction
        phase_err = _PHASE_ERR + TWO_PI * err * (amax + 1)
        return ph, base, vJ, phase_err


def _required_depth(spec: IFSpec, u: float, tol: float, R: float) -> int:
    if R == 0:
        return 0
    r = spec.r_float()
    J = max(0, math.ceil(math.log(TWO_PI * abs(u) * R / (tol / 2)) / -math.log(r)))
    while J > 0 and TWO_PI * abs(u) * r ** (J - 1) * R <= tol / 2:
        J -= 1
    while TWO_PI * abs(u) * r**J * R * (1 + 1e-9) > tol / 2:
        J += 1
    return J


def mu_hat(spec: IFSpec, u, tol: float = 1e-10) -> FourierSample:
    """Certified enclosure of the Fourier transform at u (error radius at most tol)."""
    return mu_hat_many(spec, [u], tol)[0]


def mu_hat_many(spec: IFSpec, us: Sequence, tol: float = 1e-10, hull: Hull | None = None) -> list[FourierSample]:
    """Evaluate several samples in one batched ladder pass."""
    if not tol > 0:
        raise ValidationError("tol must be positive")
    hull = hull or attractor_hull(spec)
    lad = _Ladder(spec, hull)
    m, lmax = spec.m, spec.lmax
    probs = np.array([float(b.p) for b in spec.branches])
    shifts = np.array([b.l for b in spec.branches], dtype=np.int64)
    rows = []
    for u in us:
        uq = to_fraction(u)
        if uq == 0:
            rows.append(None)
            continue
        ua = abs(uq)
        J = _required_depth(spec, float(ua), tol, lad.R)
        cap = depth_cap(spec, float(ua), tol, lad.R)
        if J > cap:
            raise ToleranceUnreachable(f"ladder depth {J} exceeds the cap {cap} at u={float(uq)}")
        ph, base, vJ, phase_err = lad.phases(ua, J)
        seed_err = TWO_PI * vJ * lad.R * (1 + 8 * _U)
        step_err = m * (phase_err + 16 * _U)
        radius = seed_err + J * step_err + lmax * phase_err
        if J * step_err + lmax * phase_err > tol / 2:
            raise ToleranceUnreachable(f"rounding error {J * step_err:.3g} exceeds tol/2 at u={float(uq)}")
        rows.append((uq, J, ph, base, radius))
    live = [row for row in rows if row is not None]
    results: list[FourierSample | None] = []
    if live:
        jmax = max(1, max(row[1] for row in live))
        nu = len(live)
        ph_re = np.ones((nu, jmax, m))
        ph_im = np.zeros((nu, jmax, m))
        base_re = np.empty((nu, lmax))
        base_im = np.empty((nu, lmax))
        depth = np.empty(nu, dtype=np.int64)
        for s, (_uq, J, ph, base, _rad) in enumerate(live):
            depth[s] = J
            if J:
                ph_re[s, :J] = ph[:, :, 0]
                ph_im[s, :J] = ph[:, :, 1]
            base_re[s] = base[:, 0]
            base_im[s] = base[:, 1]
        out_re, out_im = kernels.ladder_dp(ph_re, ph_im, depth, probs, shifts, base_re, base_im)
        k = 0
        for row in rows:
            if row is None:
                continue
            uq, _J, _ph, _base, rad = row
            im = float(out_im[k]) if uq > 0 else -float(out_im[k])
            results.append(FourierSample(float(uq), float(out_re[k]), im, rad, tol))
            k += 1
    final = []
    it = iter(results)
    for row, u in zip(rows, us):
        final.append(FourierSample(0.0, 1.0, 0.0, 0.0, tol) if row is None else next(it))
    return final


def functional_residual(spec: IFSpec, u, tol: float = 1e-10) -> tuple[float, float]:
    """|mu^(u) - sum p_i e(u a_i) mu^(r^l_i u)| and the combined tolerance bound."""
    uq = to_fraction(u)
    lhs = mu_hat(spec, uq, tol)
    acc = 0j
    bound = lhs.radius
    for b in spec.branches:
        if spec.r_is_rational:
            v = uq * spec.r**b.l
        else:
            v = Fraction(float(uq) * spec.r_float() ** b.l)
        s = mu_hat(spec, v, tol)
        c, si = _frac_phase(uq * b.a)
        acc += float(b.p) * complex(c, si) * s.value
        bound += float(b.p) * s.radius
    if not spec.r_is_rational:
        # the shifted argument is rounded to double; mu^ is 2 pi R-Lipschitz
        R = float(attractor_hull(spec).radius) + abs(float(attractor_hull(spec).center))
        bound += TWO_PI * R * abs(float(uq)) * 4 * _U
    return abs(lhs.value - acc), bound + 64 * _U


# ---------------------------------------------------------------------------
# exponent sum controlling the decay


def _norm_sq_interval(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Range of ||x||^2 for x in [lo, hi]."""
    if hi - lo >= Fraction(1, 2):
        return Fraction(0), Fraction(1, 4)
    fl = math.floor(lo)
    if math.floor(hi) != fl:
        d = max(hi - math.floor(hi), math.ceil(lo) - lo)
        return Fraction(0), min(d, Fraction(1, 2)) ** 2
    f_lo, f_hi = lo - fl, hi - fl
    d_lo_end = min(f_lo, 1 - f_lo)
    d_hi_end = min(f_hi, 1 - f_hi)
    low = min(d_lo_end, d_hi_end)
    high = Fraction(1, 2) if f_lo <= Fraction(1, 2) <= f_hi else max(d_lo_end, d_hi_end)
    return low * low, high * high


def theorem4_sum(spec: IFSpec, u, C0: int = 0, tail_tol: float = 1e-12, bits: int = 96) -> Interval:
    """Enclosure of sum_{n > C0} ||(a_1 - a_2) u r^n||^2."""
    uq = to_fraction(u)
    if uq == 0:
        raise ValidationError("the exponent sum diverges at u = 0")
    if C0 < 0:
        raise ValidationError("C0 must be a natural number")
    scale = 1 << bits
    gap = spec.branches[0].a - spec.branches[1].a
    x = abs(gap * uq)
    rr = spec.r_enclosure(bits + 8)
    r_lo = (rr.lo.numerator * scale) // rr.lo.denominator
    r_hi = -((-rr.hi.numerator * scale) // rr.hi.denominator)
    x_lo = (x.numerator * scale) // x.denominator
    x_hi = -((-x.numerator * scale) // x.denominator)
    tol_q = to_fraction(tail_tol)
    r2_hi = Fraction(r_hi * r_hi, scale * scale)
    total_lo = Fraction(0)
    total_hi = Fraction(0)
    n = 0
    while True:
        n += 1
        x_lo = (x_lo * r_lo) >> bits
        x_hi = -((-x_hi * r_hi) >> bits)
        xl, xh = Fraction(x_lo, scale), Fraction(x_hi, scale)
        if xh < Fraction(1, 2):
            tail = xh * xh / (1 - r2_hi)
            if tail <= tol_q and n > C0:
                return Interval(total_lo, total_hi + tail)
        if n > C0:
            a, b = _norm_sq_interval(xl, xh)
            total_lo += a
            total_hi += b
        if n > 100000:
            raise ToleranceUnreachable("exponent sum did not reach the tail tolerance")


# ---------------------------------------------------------------------------
# decay diagnostics

GOLDEN = (math.sqrt(5) - 1) / 2


ANCHOR_MULTIPLIERS = (Fraction(1, 2), Fraction(1), Fraction(2))


def window_samples(spec: IFSpec, j: int, count: int, anchors: bool = True) -> list[Fraction]:
    """Golden-ratio rotation points in [2^j, 2^(j+1)) plus ladder anchors t beta^k."""
    lo = 1 << j
    pts = []
    for s in range(1, count + 1):
        t = (s * GOLDEN) % 1.0
        pts.append(Fraction(lo + lo * t))
    if anchors:
        beta = float(spec.beta)
        k = 0
        while beta**k < 4 * lo:
            for t in ANCHOR_MULTIPLIERS:
                v = float(t) * beta**k
                if lo <= v < 2 * lo:
                    if spec.r_is_rational:
                        pts.append(t * spec.beta.rational**k)
                    else:
                        pts.append(Fraction(v))
            k += 1
    return pts


def upper_envelope(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Line y = b + s x above every point minimising the summed gap.

    The optimum is the upper-hull edge over the mean abscissa.
    """
    pts = sorted(zip(xs, ys))
    if len(pts) < 2:
        raise ValidationError("need at least two points for an envelope")
    hull: list[tuple[float, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    xbar = sum(xs) / len(xs)
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= xbar <= x2:
            s = (y2 - y1) / (x2 - x1)
            return y1 - s * x1, s
    (x1, y1), (x2, y2) = hull[0], hull[-1]
    s = (y2 - y1) / (x2 - x1)
    return y1 - s * x1, s


@dataclass(frozen=True)
class WindowMax:
    j: int
    u: float
    value: float
    samples: int


@dataclass(frozen=True)
class DecayFit:
    gamma: float
    intercept: float
    power_exponent: float
    polynomial: bool
    maxima: tuple[WindowMax, ...]
    correlation: float
    samples: tuple[FourierSample, ...]
    exponent_sums: tuple[float, ...]

    def window(self, j: int) -> WindowMax:
        for w in self.maxima:
            if w.j == j:
                return w
        raise KeyError(j)

    def to_json(self) -> dict[str, object]:
        return {
            "gamma": self.gamma,
            "intercept": self.intercept,
            "power_exponent": self.power_exponent,
            "polynomial_decay": self.polynomial,
            "correlation": self.correlation,
            "windows": [{"j": w.j, "u": w.u, "max_abs": w.value, "samples": w.samples} for w in self.maxima],
        }


def _pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size < 2 or x.std() == 0 or y.std() == 0:
        return 0.0
    return float(np.corrcoef(x, y)[0, 1])


POLYNOMIAL_DECAY_EXPONENT = 0.5


def decay_fit(spec: IFSpec, j_range: tuple[int, int] = (4, 18), samples_per_window: int = 64,
              tol: float = 1e-8, anchors: bool = True) -> DecayFit:
    """Window maxima D_j of |mu^| over [2^j, 2^(j+1)) and the envelope log D_j <= b - gamma log j."""
    j0, j1 = j_range
    if j0 < 1 or j1 <= j0:
        raise ValidationError("window range must satisfy 1 <= j_min < j_max")
    hull = attractor_hull(spec)
    maxima = []
    all_samples: list[FourierSample] = []
    sums: list[float] = []
    for j in range(j0, j1 + 1):
        us = window_samples(spec, j, samples_per_window, anchors)
        got = mu_hat_many(spec, us, tol, hull)
        best = max(got, key=lambda s: s.abs_hi)
        maxima.append(WindowMax(j, best.u, best.abs_hi, len(got)))
        all_samples.extend(got)
        for uq in us:
            sums.append(float(theorem4_sum(spec, uq, 0, tol).mid))
    logs_j = [math.log(w.j) for w in maxima]
    logs_d = [math.log(max(w.value, tol)) for w in maxima]
    b, s = upper_envelope(logs_j, logs_d)
    _, s_pow = upper_envelope([w.j * math.log(2) for w in maxima], logs_d)
    power = -s_pow
    neg_log = [-math.log(max(abs(x.value), tol)) for x in all_samples]
    corr = _pearson(neg_log, sums)
    return DecayFit(-s, b, power, power >= POLYNOMIAL_DECAY_EXPONENT, tuple(maxima), corr,
                    tuple(all_samples), tuple(sums))


def lyons_partial_sum(spec: IFSpec, M: int, tol: float = 1e-8) -> Interval:
    """Enclosure of sum_{n=2}^{M} |mu^(n)| / (n log n)."""
    if M < 2:
        raise ValidationError("M must be at least 2")
    got = mu_hat_many(spec, list(range(2, M + 1)), tol / M)
    lo = 0.0
    hi = 0.0
    for n, s in zip(range(2, M + 1), got):
        w = n * math.log(n)
        lo += s.abs_lo / (w * (1 + 4 * _U))
        hi += s.abs_hi / (w * (1 - 4 * _U))
    slack = (M + 1) * 4 * _U * max(hi, 1e-300)
    return Interval(max(0.0, lo - slack), hi + slack)


BINARY = ("1/2", [[1, "0", "1/2"], [1, "1", "1/2"]])
CANTOR = ("1/3", [[1, "0", "1/2"], [1, "2/3", "1/2"]])


def binary_ifs() -> IFSpec:
    return make_ifs(*BINARY)


def cantor_ifs() -> IFSpec:
    return make_ifs(*CANTOR)


def sqrt13_ifs() -> IFSpec:
    """r^-1 the largest root of x^2 - x - 3, shifts 0 and 1."""
    return make_ifs({"inverse_of_root": [-3, -1, 1]}, [[1, "0", "1/2"], [1, "1", "1/2"]])

