import os
import subprocess
import sys

import numpy as np
import pytest

from ualslab import kernels
from ualslab._accel import HAVE_NUMBA


def test_james_kernels_agree():
    rng = np.random.Generator(np.random.PCG64(0))
    for k in (1, 2, 7, 50):
        a = rng.integers(-30, 31, size=k).astype(np.int64)
        np_out = kernels.james_suffix(a, use_numba=False)
        assert np.array_equal(np_out, kernels.james_suffix(a, use_numba=True))
        obj = np.array([int(v) for v in a], dtype=object)
        assert [int(v) for v in kernels.james_suffix(obj)] == [int(v) for v in np_out]


def test_group_norms_agree():
    rng = np.random.Generator(np.random.PCG64(1))
    vals, ids = rng.standard_normal(200), rng.integers(0, 7, size=200)
    for p in (1.0, 1.5, 2.0, 3.0, np.inf):
        a = kernels.group_norms(vals, ids, 7, p, use_numba=False)
        b = kernels.group_norms(vals, ids, 7, p, use_numba=True)
        assert np.allclose(a, b, rtol=1e-13, atol=0)


def test_fits_int64():
    assert kernels.fits_int64([2**20, -(2**20)])
    assert not kernels.fits_int64([2**40])


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_env_flag_disables_numba():
    env = dict(os.environ, UALSLAB_DISABLE_NUMBA="1")
    code = ("from ualslab._accel import backend; from ualslab.spaces import jt_norm_sq; "
            "from ualslab.core import DYADIC, FinVec; "
            "print(backend(), jt_norm_sq(FinVec(DYADIC, {'': 1, '0': 1, '1': 1})).value)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "5"]
