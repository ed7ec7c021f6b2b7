"""Compare the compiled and pure-Python Jacobi eigensolvers.

    python benchmarks/bench_jacobi.py [--sizes 8 16 32 64] [--repeat 5]

Prints one row per size with the best wall time of each backend, their ratio
and the largest eigenvalue discrepancy against ``numpy.linalg.eigvalsh``.
"""
import argparse
import time

import numpy as np

from fermi_gig import matkernel
from fermi_gig.rng import SplitMix64, random_hermitian


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    backends = ["python"] + (["compiled"] if matkernel.BACKEND == "compiled" else [])
    print(f"{'n':>4} " + " ".join(f"{b + ' [ms]':>14}" for b in backends) + f" {'speedup':>8} {'max err':>9}")
    for n in args.sizes:
        a = random_hermitian(n, SplitMix64(n))
        ref = np.linalg.eigvalsh(a)
        times, err = {}, 0.0
        for b in backends:
            times[b] = best_time(lambda: matkernel.hermitian_eig(a, backend=b), args.repeat) * 1e3
            err = max(err, np.abs(matkernel.hermitian_eig(a, backend=b).values - ref).max())
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{n:>4} " + " ".join(f"{times[b]:>14.3f}" for b in backends) + f" {speed:>8.1f} {err:>9.1e}")


if __name__ == "__main__":
    main()
