"""Deterministic CSV/JSON serialisation and run manifests.

Every writer produces the same bytes for the same inputs: fixed column
order, fixed decimal formatting, sorted JSON keys and ``\\n`` line endings.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
from fractions import Fraction
from typing import Iterable, Sequence

from .orbit import Orbit, units_to_decimal

ORBIT_COLUMNS = ("n", "A", "eps_lo", "eps_hi", "dist_lo", "dist_hi")
RUN_COLUMNS = ("start", "length")
FOURIER_COLUMNS = ("u", "re_lo", "re_hi", "im_lo", "im_hi", "abs_lo", "abs_hi")
DECIMALS = 20


def _csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def orbit_rows(orbit: Orbit, N: int | None = None) -> Iterable[list[str]]:
    """One row per n; ``A`` is blank when the orbit does not store the integers."""
    N = orbit.N if N is None else N
    keep_A = orbit.has_A()
    for i in range(N):
        n = i + 1
        yield [
            str(n),
            str(orbit.A(n)) if keep_A else "",
            units_to_decimal(int(orbit.eps_lo[i]), DECIMALS, up=False),
            units_to_decimal(int(orbit.eps_hi[i]), DECIMALS, up=True),
            units_to_decimal(int(orbit.dist_lo[i]), DECIMALS, up=False),
            units_to_decimal(int(orbit.dist_hi[i]), DECIMALS, up=True),
        ]


def orbit_csv(orbit: Orbit, N: int | None = None) -> str:
    return _csv(ORBIT_COLUMNS, orbit_rows(orbit, N))


def runs_csv(runs: Iterable[tuple[int, int]]) -> str:
    return _csv(RUN_COLUMNS, ([s, k] for s, k in runs))


def fourier_csv(samples) -> str:
    return _csv(FOURIER_COLUMNS, ([repr(float(v)) for v in s.row()] for s in samples))


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, default=_default, sort_keys=True, indent=2) + "\n"


def digest(text: str | bytes) -> str:
    data = text.encode() if isinstance(text, str) else text
    return hashlib.sha256(data).hexdigest()


def manifest(command: str, params: dict, argv: Sequence[str], output: str, version: str) -> dict:
    return {
        "command": command,
        "parameters": params,
        "argv": list(argv),
        "version": version,
        "output_sha256": digest(output),
    }
