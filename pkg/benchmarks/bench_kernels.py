"""Compare the numba kernels with the numpy reference paths.

    python benchmarks/bench_kernels.py [--repeat 5]

Both paths are run on the structure tensors of the presets; results must
agree exactly, and the best wall time of each is reported.
"""

import argparse
import time

import numpy as np

from cohomtools import kernels
from cohomtools.liealg import build_model


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(C, P, T):
    flags = lambda f: (lambda: np.argwhere(f()))  # noqa: E731
    return [
        ("jacobi", lambda: kernels.jacobi_violations_numpy(C),
         flags(lambda: kernels._jacobi_flags(C))),
        ("killing", lambda: kernels.killing_form_numpy(C), lambda: kernels._killing(C)),
        ("theta", lambda: kernels.theta_violations_numpy(C, T),
         flags(lambda: kernels._theta_flags(C, T))),
        ("invariance", lambda: kernels.invariance_violations_numpy(C, P, T),
         flags(lambda: kernels._invariance_flags(C, P, T))),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba disabled (COHOMTOOLS_DISABLE_NUMBA set?); nothing to compare")

    models = [build_model("SL3C_SU3"), build_model("G2C_G2"),
              build_model("SO_2_NP2", 3), build_model("SO_2_NP2", 6)]
    print(f"{'model':14s} {'kernel':11s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for m in models:
        C = np.ascontiguousarray(m.structure, dtype=np.int64)
        T = np.ascontiguousarray(m.theta, dtype=np.int64)
        P = np.ascontiguousarray(m.inner, dtype=np.int64)
        for name, ref, fast in cases(C, P, T):
            fast()  # compile / load from cache
            t_np, r_np = best_of(ref, args.repeat)
            t_nb, r_nb = best_of(fast, args.repeat)
            assert np.array_equal(np.asarray(r_np), np.asarray(r_nb)), (m.key, name)
            print(f"{m.key:14s} {name:11s} {t_np * 1e3:10.2f} {t_nb * 1e3:10.2f} "
                  f"{t_np / max(t_nb, 1e-9):8.1f}x")


if __name__ == "__main__":
    main()
