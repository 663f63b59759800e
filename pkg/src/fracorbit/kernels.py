"""Array kernels with a numba implementation and a numpy reference.

All kernels operate on int64 fixed-point data (units of 2**-60) or float64
ladder values. Both implementations return identical results; the test suite
checks this, and ``benchmarks/bench_kernels.py`` times them.
"""
from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit

WINDOW_BITS = 60

_backend = "numba" if _accel.USE_NUMBA else "numpy"


def set_backend(name: str) -> str:
    """Select ``"numba"``, ``"numpy"`` or ``"auto"``; returns the previous choice."""
    global _backend
    prev = _backend
    if name == "auto":
        name = "numba" if _accel.HAVE_NUMBA else "numpy"
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not _accel.HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name
    return prev


def get_backend() -> str:
    return _backend


# ---------------------------------------------------------------------------
# lacunary windows: bits of frac(2^(m n) xi) for xi = sum 2^-s_k


@njit
def _lacunary_windows_nb(exps, m, n_max, infinite):
    W = 60
    out = np.zeros(n_max, dtype=np.int64)
    tail = np.zeros(n_max, dtype=np.int8)
    lo = 0
    hi = 0
    K = exps.shape[0]
    for i in range(n_max):
        shift = m * (i + 1)
        while lo < K and exps[lo] <= shift:
            lo += 1
        if hi < lo:
            hi = lo
        while hi < K and exps[hi] <= shift + W:
            hi += 1
        acc = np.int64(0)
        for k in range(lo, hi):
            acc += np.int64(1) << (W - (exps[k] - shift))
        out[i] = acc
        if infinite or hi < K:
            tail[i] = 1
    return out, tail


def _lacunary_windows_np(exps, m, n_max, infinite):
    W = WINDOW_BITS
    exps = np.asarray(exps, dtype=np.int64)
    top = m * n_max + W + 1
    present = np.zeros(top + 1, dtype=np.int64)
    sel = exps[exps <= top]
    present[sel] = 1
    weights = np.left_shift(np.int64(1), W - np.arange(1, W + 1, dtype=np.int64))
    out = np.empty(n_max, dtype=np.int64)
    chunk = 1 << 15
    for start in range(0, n_max, chunk):
        stop = min(start + chunk, n_max)
        shifts = m * np.arange(start + 1, stop + 1, dtype=np.int64)
        idx = shifts[:, None] + np.arange(1, W + 1, dtype=np.int64)[None, :]
        out[start:stop] = present[idx] @ weights
    if infinite:
        tail = np.ones(n_max, dtype=np.int8)
    else:
        last = exps[-1] if exps.size else -1
        tail = (last > m * np.arange(1, n_max + 1, dtype=np.int64) + W).astype(np.int8)
    return out, tail


def lacunary_windows(exps: np.ndarray, m: int, n_max: int, infinite: bool) -> tuple[np.ndarray, np.ndarray]:
    """For n = 1..n_max: floor(frac(2^(mn) xi) 2^60) and whether bits remain beyond."""
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    if _backend == "numba":
        return _lacunary_windows_nb(exps, np.int64(m), np.int64(n_max), bool(infinite))
    return _lacunary_windows_np(exps, m, n_max, infinite)


# ---------------------------------------------------------------------------
# threshold classification


@njit
def _classify_nb(dist_lo, dist_hi, d_lo, d_hi):
    n = dist_lo.shape[0]
    out = np.zeros(n, dtype=np.int8)
    for i in range(n):
        if dist_lo[i] >= d_hi:
            out[i] = 1
        elif dist_hi[i] < d_lo:
            out[i] = -1
    return out


def _classify_np(dist_lo, dist_hi, d_lo, d_hi):
    out = np.zeros(dist_lo.shape[0], dtype=np.int8)
    out[dist_lo >= d_hi] = 1
    out[dist_hi < d_lo] = -1
    return out


def classify_dist(dist_lo: np.ndarray, dist_hi: np.ndarray, d_lo: int, d_hi: int) -> np.ndarray:
    """+1 where dist >= delta is certain, -1 where dist < delta is certain, 0 otherwise."""
    if _backend == "numba":
        return _classify_nb(dist_lo, dist_hi, np.int64(d_lo), np.int64(d_hi))
    return _classify_np(dist_lo, dist_hi, d_lo, d_hi)


# ---------------------------------------------------------------------------
# maximal runs of -1 in a classification array


@njit
def _runs_nb(cls):
    n = cls.shape[0]
    starts = np.empty(n, dtype=np.int64)
    lengths = np.empty(n, dtype=np.int64)
    r = 0
    i = 0
    while i < n:
        if cls[i] == -1:
            j = i
            while j < n and cls[j] == -1:
                j += 1
            starts[r] = i
            lengths[r] = j - i
            r += 1
            i = j
        else:
            i += 1
    return starts[:r].copy(), lengths[:r].copy()


def _runs_np(cls):
    inside = np.concatenate(([0], (cls == -1).astype(np.int8), [0]))
    edges = np.diff(inside)
    starts = np.flatnonzero(edges == 1).astype(np.int64)
    stops = np.flatnonzero(edges == -1).astype(np.int64)
    return starts, stops - starts


def maximal_runs(cls: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """0-based starts and lengths of maximal blocks where ``cls == -1``."""
    cls = np.ascontiguousarray(cls, dtype=np.int8)
    if _backend == "numba":
        return _runs_nb(cls)
    return _runs_np(cls)


# ---------------------------------------------------------------------------
# Fourier ladder: mu(j) = sum_i p_i e(v_j a_i) mu(j + l_i)


@njit
def _ladder_nb(ph_re, ph_im, depth, probs, shifts, base_re, base_im):
    nu = ph_re.shape[0]
    m = probs.shape[0]
    lmax = base_re.shape[1]
    jmax = ph_re.shape[1]
    out_re = np.empty(nu, dtype=np.float64)
    out_im = np.empty(nu, dtype=np.float64)
    vr = np.empty(jmax + lmax, dtype=np.float64)
    vi = np.empty(jmax + lmax, dtype=np.float64)
    for s in range(nu):
        J = depth[s]
        for t in range(lmax):
            vr[J + t] = base_re[s, t]
            vi[J + t] = base_im[s, t]
        for j in range(J - 1, -1, -1):
            ar = 0.0
            ai = 0.0
            for i in range(m):
                k = j + shifts[i]
                cr = ph_re[s, j, i]
                ci = ph_im[s, j, i]
                ar += probs[i] * (cr * vr[k] - ci * vi[k])
                ai += probs[i] * (cr * vi[k] + ci * vr[k])
            vr[j] = ar
            vi[j] = ai
        out_re[s] = vr[0]
        out_im[s] = vi[0]
    return out_re, out_im


def _ladder_np(ph_re, ph_im, depth, probs, shifts, base_re, base_im):
    nu, jmax, m = ph_re.shape
    lmax = base_re.shape[1]
    vals = np.zeros((nu, jmax + lmax), dtype=np.complex128)
    rows = np.arange(nu)
    for t in range(lmax):
        vals[rows, depth + t] = base_re[:, t] + 1j * base_im[:, t]
    ph = ph_re + 1j * ph_im
    for j in range(jmax - 1, -1, -1):
        active = depth > j
        if not active.any():
            continue
        acc = np.zeros(nu, dtype=np.complex128)
        for i in range(m):
            acc += probs[i] * (ph[:, j, i] * vals[:, j + shifts[i]])
        vals[active, j] = acc[active]
    return vals[:, 0].real.copy(), vals[:, 0].imag.copy()


def ladder_dp(ph_re, ph_im, depth, probs, shifts, base_re, base_im) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the ladder recurrence downward from the base levels, one row per u.

    ``ph_*[s, j, i]`` is e(v_j a_i) for sample s; ``base_*[s, t]`` seeds level
    ``depth[s] + t``. Returns real and imaginary parts at level 0.
    """
    args = (
        np.ascontiguousarray(ph_re, dtype=np.float64),
        np.ascontiguousarray(ph_im, dtype=np.float64),
        np.ascontiguousarray(depth, dtype=np.int64),
        np.ascontiguousarray(probs, dtype=np.float64),
        np.ascontiguousarray(shifts, dtype=np.int64),
        np.ascontiguousarray(base_re, dtype=np.float64),
        np.ascontiguousarray(base_im, dtype=np.float64),
    )
    if _backend == "numba":
        return _ladder_nb(*args)
    return _ladder_np(*args)
