import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from fracorbit import kernels  # noqa: E402


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    from fracorbit._accel import HAVE_NUMBA

    if request.param == "numba" and not HAVE_NUMBA:
        pytest.skip("numba not installed")
    prev = kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(prev)
