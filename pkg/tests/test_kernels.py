import os
import subprocess
import sys

import numpy as np
import pytest

from cohomtools import kernels
from cohomtools.liealg import build_model

MODELS = [("SL3C_SU3", None), ("G2C_G2", None), ("SO_2_NP2", 2), ("SO_2_NP2", 4)]


def tensors(preset, n):
    m = build_model(preset, n)
    C = np.ascontiguousarray(m.structure, dtype=np.int64)
    return C, np.ascontiguousarray(m.inner, dtype=np.int64), np.ascontiguousarray(m.theta, dtype=np.int64)


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba disabled")
@pytest.mark.parametrize("preset,n", MODELS)
def test_numba_matches_numpy(preset, n):
    C, P, T = tensors(preset, n)
    assert np.array_equal(kernels._killing(C), kernels.killing_form_numpy(C))
    rng = np.random.default_rng(1)
    Cb = C.copy()
    for _ in range(3):
        a, b, k = rng.integers(0, C.shape[0], size=3)
        Cb[a, b, k] += 1
    assert np.array_equal(np.argwhere(kernels._jacobi_flags(Cb)), kernels.jacobi_violations_numpy(Cb))
    assert np.array_equal(np.argwhere(kernels._theta_flags(Cb, T)), kernels.theta_violations_numpy(Cb, T))
    assert np.array_equal(np.argwhere(kernels._invariance_flags(Cb, P, T)),
                          kernels.invariance_violations_numpy(Cb, P, T))


@pytest.mark.parametrize("preset,n", MODELS)
def test_clean_tensors_have_no_violations(preset, n):
    C, P, T = tensors(preset, n)
    assert len(kernels.jacobi_violations(C)) == 0
    assert len(kernels.theta_violations(C, T)) == 0
    assert len(kernels.invariance_violations(C, P, T)) == 0
    assert len(kernels.antisymmetry_violations(C)) == 0


def test_broken_antisymmetry_detected():
    C, _, _ = tensors("SL3C_SU3", None)
    C = C.copy()
    C[0, 2, 2] += 1
    assert len(kernels.antisymmetry_violations(C)) > 0


def test_env_flag_selects_numpy():
    env = dict(os.environ, COHOMTOOLS_DISABLE_NUMBA="1")
    code = ("from cohomtools import kernels; from cohomtools.liealg import build_model;"
            "build_model('SO_2_NP2', 1).check_structure(); print(kernels.backend())")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
