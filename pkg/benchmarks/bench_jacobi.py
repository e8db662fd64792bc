"""Compare the compiled Jacobi kernel with the NumPy fallback.

Usage::

    python3 benchmarks/bench_jacobi.py --sizes 16 32 64 128 256 --repeat 3

Both kernels run the same sweep schedule on the same random Hermitian
matrix; the table reports the best wall time of ``--repeat`` runs, the
speedup, the sweep counts and the largest eigenvalue difference.
"""
import argparse
import time

import numpy as np

from subcap import _jacobi_py, linalg

try:
    from subcap import _jacobi_ext
except ImportError:
    _jacobi_ext = None


def random_hermitian(rng, n):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (x + x.conj().T)


def time_kernel(kernel, a, repeat):
    n = a.shape[0]
    sched = linalg._schedule(n)
    tol = linalg.OFFDIAG_TOL * np.linalg.norm(a)
    skip = 1e-3 * tol / n
    best = np.inf
    for _ in range(repeat):
        work = np.ascontiguousarray(a.copy())
        vt = np.eye(n, dtype=complex)
        t0 = time.perf_counter()
        sweeps, _ = kernel.jacobi_sweeps(work, vt, sched, linalg.MAX_SWEEPS, tol, skip)
        best = min(best, time.perf_counter() - t0)
    return best, sweeps, np.sort(np.diagonal(work).real)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128, 256])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    if _jacobi_ext is None:
        print("compiled kernel not built; only the NumPy fallback is timed")
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>5}{'numpy [s]':>12}{'cython [s]':>12}{'speedup':>9}{'sweeps':>9}{'max |dlam|':>12}")
    for n in args.sizes:
        a = random_hermitian(rng, n)
        t_py, s_py, e_py = time_kernel(_jacobi_py, a, args.repeat)
        if _jacobi_ext is None:
            print(f"{n:>5}{t_py:>12.4f}{'-':>12}{'-':>9}{s_py:>9}{'-':>12}")
            continue
        t_cy, s_cy, e_cy = time_kernel(_jacobi_ext, a, args.repeat)
        diff = float(np.max(np.abs(e_py - e_cy)))
        print(f"{n:>5}{t_py:>12.4f}{t_cy:>12.4f}{t_py / t_cy:>9.1f}{f'{s_py}/{s_cy}':>9}{diff:>12.1e}")


if __name__ == "__main__":
    main()
