"""Integer tensor kernels for the exhaustive structural checks.

Every preset has integral structure constants, so Jacobi, Killing form,
theta-automorphism and ad-invariance can be evaluated exactly on ``int64``
tensors.  Each kernel has a numba version and a numpy version; set
``COHOMTOOLS_DISABLE_NUMBA=1`` to force numpy.  ``NILCONS_THREADS`` caps the
numba thread pool.

Tensor convention: ``C[a, b, k]`` is the coefficient of basis vector ``k`` in
``[x_a, x_b]``.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

_DISABLED = os.environ.get("COHOMTOOLS_DISABLE_NUMBA", "").strip() not in ("", "0")

try:
    if _DISABLED:
        raise ImportError("disabled by COHOMTOOLS_DISABLE_NUMBA")
    import numba
    from numba import njit, prange
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised with the env flag
    HAVE_NUMBA = False
    numba = None

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

    prange = range
    if not _DISABLED:
        warnings.warn("numba unavailable; using numpy kernels")

if HAVE_NUMBA:
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # skip TBB: an outdated system TBB only produces a warning per process
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    _threads = os.environ.get("NILCONS_THREADS")
    if _threads:
        try:
            numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))
        except ValueError:
            warnings.warn(f"ignoring NILCONS_THREADS={_threads!r}")


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# numpy reference paths --------------------------------------------------

def jacobi_violations_numpy(C: np.ndarray) -> np.ndarray:
    """Triples ``(a, b, c)``, ``a < b < c``, where Jacobi fails."""
    C = np.asarray(C, dtype=np.int64)
    # J[a,b,c,m] = [a,[b,c]] + [b,[c,a]] + [c,[a,b]]
    t = np.einsum("bck,akm->abcm", C, C)
    J = t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))
    bad = np.argwhere(np.any(J != 0, axis=3))
    keep = (bad[:, 0] < bad[:, 1]) & (bad[:, 1] < bad[:, 2])
    return bad[keep]


def killing_form_numpy(C: np.ndarray) -> np.ndarray:
    C = np.asarray(C, dtype=np.int64)
    # ad(x_a)[k, b] = C[a, b, k]; B[a, b] = tr(ad a ad b)
    return np.einsum("amk,bkm->ab", C, C)


def theta_violations_numpy(C: np.ndarray, T: np.ndarray) -> np.ndarray:
    C = np.asarray(C, dtype=np.int64)
    T = np.asarray(T, dtype=np.int64)
    # T[:, a] is theta(x_a); compare theta[a,b] with [theta a, theta b]
    lhs = np.einsum("abk,mk->abm", C, T)
    tmp = np.einsum("xa,xyk->ayk", T, C)
    rhs = np.einsum("yb,ayk->abk", T, tmp)
    return np.argwhere(np.any(lhs != rhs, axis=2))


def invariance_violations_numpy(C: np.ndarray, P: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Triples where ``<[a,b],c> != -<b,[theta a, c]>``."""
    C = np.asarray(C, dtype=np.int64)
    P = np.asarray(P, dtype=np.int64)
    T = np.asarray(T, dtype=np.int64)
    lhs = np.einsum("abk,kc->abc", C, P)
    ct = np.einsum("xa,xck->ack", T, C)
    rhs = -np.einsum("bk,ack->abc", P, ct)
    return np.argwhere(lhs != rhs)


def antisymmetry_violations_numpy(C: np.ndarray) -> np.ndarray:
    C = np.asarray(C, dtype=np.int64)
    return np.argwhere(np.any(C + np.transpose(C, (1, 0, 2)) != 0, axis=2))


# numba paths -------------------------------------------------------------

@njit(cache=True, parallel=True)
def _jacobi_flags(C):
    n = C.shape[0]
    flags = np.zeros((n, n, n), dtype=np.uint8)
    for a in prange(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                for m in range(n):
                    s = 0
                    for k in range(n):
                        s += (C[b, c, k] * C[a, k, m] + C[c, a, k] * C[b, k, m]
                              + C[a, b, k] * C[c, k, m])
                    if s != 0:
                        flags[a, b, c] = 1
                        break
    return flags


@njit(cache=True, parallel=True)
def _killing(C):
    n = C.shape[0]
    B = np.zeros((n, n), dtype=np.int64)
    for a in prange(n):
        for b in range(n):
            s = 0
            for m in range(n):
                for k in range(n):
                    s += C[a, m, k] * C[b, k, m]
            B[a, b] = s
    return B


@njit(cache=True, parallel=True)
def _theta_flags(C, T):
    n = C.shape[0]
    flags = np.zeros((n, n), dtype=np.uint8)
    for a in prange(n):
        for b in range(n):
            for m in range(n):
                lhs = 0
                for k in range(n):
                    lhs += C[a, b, k] * T[m, k]
                rhs = 0
                for x in range(n):
                    if T[x, a] == 0:
                        continue
                    for y in range(n):
                        if T[y, b] == 0:
                            continue
                        rhs += T[x, a] * T[y, b] * C[x, y, m]
                if lhs != rhs:
                    flags[a, b] = 1
                    break
    return flags


@njit(cache=True, parallel=True)
def _invariance_flags(C, P, T):
    n = C.shape[0]
    flags = np.zeros((n, n, n), dtype=np.uint8)
    for a in prange(n):
        for b in range(n):
            for c in range(n):
                lhs = 0
                for k in range(n):
                    lhs += C[a, b, k] * P[k, c]
                rhs = 0
                for x in range(n):
                    if T[x, a] == 0:
                        continue
                    for k in range(n):
                        rhs += P[b, k] * T[x, a] * C[x, c, k]
                if lhs != -rhs:
                    flags[a, b, c] = 1
    return flags


def jacobi_violations(C: np.ndarray) -> np.ndarray:
    if not HAVE_NUMBA:
        return jacobi_violations_numpy(C)
    return np.argwhere(_jacobi_flags(np.ascontiguousarray(C, dtype=np.int64)))


def killing_form(C: np.ndarray) -> np.ndarray:
    if not HAVE_NUMBA:
        return killing_form_numpy(C)
    return _killing(np.ascontiguousarray(C, dtype=np.int64))


def theta_violations(C: np.ndarray, T: np.ndarray) -> np.ndarray:
    if not HAVE_NUMBA:
        return theta_violations_numpy(C, T)
    return np.argwhere(_theta_flags(np.ascontiguousarray(C, dtype=np.int64),
                                    np.ascontiguousarray(T, dtype=np.int64)))


def invariance_violations(C: np.ndarray, P: np.ndarray, T: np.ndarray) -> np.ndarray:
    if not HAVE_NUMBA:
        return invariance_violations_numpy(C, P, T)
    return np.argwhere(_invariance_flags(np.ascontiguousarray(C, dtype=np.int64),
                                         np.ascontiguousarray(P, dtype=np.int64),
                                         np.ascontiguousarray(T, dtype=np.int64)))


def antisymmetry_violations(C: np.ndarray) -> np.ndarray:
    return antisymmetry_violations_numpy(C)
