"""Compare the compiled and pure-Python Jacobi kernels.

    python3 benchmarks/bench_backends.py --ns 16,32,64 --repeats 3
"""

import argparse
import time

import numpy as np

from isoread import symlinalg


def time_backend(S: np.ndarray, backend: str, repeats: int) -> tuple[float, np.ndarray]:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        eig = symlinalg.sym_eig(S, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, eig.eigenvalues


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", default="16,32,64")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = sorted(symlinalg.KERNELS)
    print("n," + ",".join(f"{b}_seconds" for b in backends) + ",speedup,max_eig_diff")
    rng = np.random.default_rng(args.seed)
    for n in (int(x) for x in args.ns.split(",")):
        X = rng.standard_normal((n, n))
        S = (X + X.T) / 2
        times, eigs = {}, {}
        for b in backends:
            times[b], eigs[b] = time_backend(S, b, args.repeats)
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        diff = max(float(np.abs(eigs[b] - eigs["python"]).max()) for b in backends)
        print(f"{n}," + ",".join(f"{times[b]:.4f}" for b in backends) + f",{speed:.1f},{diff:.2e}")


if __name__ == "__main__":
    main()
