"""Optional numba acceleration.

Set ``FRACORBIT_NUMBA=0`` to force the pure-numpy kernels even when numba is
installed. The flag is read once at import; ``kernels.set_backend`` switches at
runtime.
"""
from __future__ import annotations

import os

try:  # pragma: no cover - depends on the environment
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

_OFF = {"0", "false", "no", "off"}

USE_NUMBA = HAVE_NUMBA and os.environ.get("FRACORBIT_NUMBA", "1").strip().lower() not in _OFF


def njit(fn):
    """Compile with numba when available; otherwise return the function unchanged."""
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
