"""Independent reference computations used to freeze expected values.

Nothing here imports the package's numerical code: each oracle reaches its
answer by a different route than the implementation it checks.
"""
from __future__ import annotations

import math
from fractions import Fraction

import mpmath


# -- binary digit streams ----------------------------------------------------


def lacunary_exponents(form: str, limit: int) -> list[int]:
    out = []
    k = 1
    while True:
        s = 2**k if form == "2^k" else math.factorial(k)
        out.append(s)
        if s > limit:
            return out
        k += 1


def digit_stream_count(form: str, N: int, delta: Fraction, window: int = 200) -> int:
    """#{n <= N : ||2^n xi|| >= delta} read off the binary expansion of xi.

    frac(2^n xi) has bit i equal to the digit of xi at position n + i; the
    first ``window`` bits leave a tail below 2^(1 - window).
    """
    exps = lacunary_exponents(form, N + window)
    one = 1 << window
    p, q = delta.numerator, delta.denominator
    count = 0
    first = 0
    for n in range(1, N + 1):
        while exps[first] <= n:
            first += 1
        F = 0
        for s in exps[first:]:
            if s > n + window:
                break
            F += 1 << (window - (s - n))
        d_lo = min(F, one - F - 2)
        d_hi = min(F + 2, one - F)
        if d_lo * q >= p * one:
            count += 1
        elif d_hi * q >= p * one:
            raise AssertionError(f"oracle undecided at n={n}")
    return count


# -- orbit of a real quadratic alpha directly in mpmath -----------------------


def mp_orbit_dist(xi: float | Fraction, poly: list[int], N: int, dps: int | None = None) -> list[float]:
    """||xi alpha^n|| for n = 1..N using mpmath at a generous fixed precision."""
    desc = list(reversed(poly))
    with mpmath.workdps(20):
        roots = [r for r in mpmath.polyroots(desc) if abs(mpmath.im(r)) < 1e-12]
        alpha0 = max(mpmath.re(r) for r in roots)
    digits = dps or int(N * math.log10(float(alpha0)) + 40)
    out = []
    with mpmath.workdps(digits):
        alpha = mpmath.findroot(lambda x: mpmath.polyval(desc, x), mpmath.mpf(alpha0))
        x = mpmath.mpf(xi.numerator) / xi.denominator if isinstance(xi, Fraction) else mpmath.mpf(xi)
        for _ in range(N):
            x *= alpha
            f = x - mpmath.floor(x)
            out.append(float(min(f, 1 - f)))
    return out


def runs_below(dists: list[float], delta: float) -> list[tuple[int, int]]:
    """Maximal blocks (start n, length) with dist < delta, 1-based n."""
    out = []
    start = None
    for i, d in enumerate(dists, start=1):
        if d < delta:
            if start is None:
                start = i
        elif start is not None:
            out.append((start, i - start))
            start = None
    if start is not None:
        out.append((start, len(dists) + 1 - start))
    return out


# -- Fourier transform via the infinite product -------------------------------


def product_abs(u: float | Fraction, r: float, shift: float, terms: int | None = None) -> float:
    """|mu^(u)| for two equal-weight branches with l = 1 and shifts {0, shift}.

    mu^(u) = prod_{n >= 0} (1 + e(u r^n shift)) / 2, so |mu^(u)| = prod |cos(pi u r^n shift)|.
    """
    with mpmath.workdps(40):
        u = mpmath.mpf(u.numerator) / u.denominator if isinstance(u, Fraction) else mpmath.mpf(u)
        acc = mpmath.mpf(1)
        x = u * shift
        n = 0
        while abs(x) > mpmath.mpf(10) ** -30 or (terms is not None and n < terms):
            acc *= abs(mpmath.cos(mpmath.pi * x))
            x *= r
            n += 1
        return float(acc)


def golden_grid(j: int, count: int, beta: float, multipliers=(0.5, 1.0, 2.0)) -> list[float]:
    g = (math.sqrt(5) - 1) / 2
    lo = 2**j
    pts = [lo + lo * ((s * g) % 1.0) for s in range(1, count + 1)]
    k = 0
    while beta**k < 4 * lo:
        for t in multipliers:
            v = t * beta**k
            if lo <= v < 2 * lo:
                pts.append(v)
        k += 1
    return pts


def brute_envelope_slope(xs: list[float], ys: list[float]) -> float:
    """Slope of the line above all points with the least summed gap, by checking every pair."""
    best = None
    n = len(xs)
    for i in range(n):
        for k in range(i + 1, n):
            if xs[i] == xs[k]:
                continue
            s = (ys[k] - ys[i]) / (xs[k] - xs[i])
            b = ys[i] - s * xs[i]
            if all(b + s * x >= y - 1e-12 for x, y in zip(xs, ys)):
                gap = sum(b + s * x - y for x, y in zip(xs, ys))
                if best is None or gap < best[0] - 1e-15:
                    best = (gap, s)
    assert best is not None
    return best[1]


def window_maxima(r: float, shift: float, beta: float, j_range, count: int) -> list[float]:
    return [max(product_abs(u, r, shift) for u in golden_grid(j, count, beta)) for j in range(j_range[0], j_range[1] + 1)]


def geometric_norm_sum(x: Fraction, r: Fraction, C0: int = 0, terms: int = 400) -> Fraction:
    """sum_{n > C0} ||x r^n||^2, truncated after ``terms`` terms (exact rationals)."""
    total = Fraction(0)
    v = x
    for n in range(1, terms + 1):
        v *= r
        if n > C0:
            f = v - math.floor(v)
            d = min(f, 1 - f)
            total += d * d
    return total
