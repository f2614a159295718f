"""Time the numba and pure-numpy kernel paths on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from fermitangle import _accel, kernels
from fermitangle.fock import FermionState, basis_dim
from fermitangle.rdm import reduce
from fermitangle.trap import TrapGrid, one_body_kernel


def cases():
    rng = np.random.default_rng(0)
    d, n, m = 12, 6, 3
    amps = rng.normal(size=basis_dim(d, n)) + 1j * rng.normal(size=basis_dim(d, n))
    psi = FermionState.from_amplitudes(d, n, amps)
    grid = TrapGrid(6.0, 600)
    k = one_body_kernel("labeled", grid)
    w = grid.weights
    return {
        f"reduce d={d} N={n} M={m}": lambda: reduce(psi, m),
        "one_body_kernel labeled n=600": lambda: one_body_kernel("labeled", grid),
        "weighted_square_sum n=600": lambda: kernels.weighted_square_sum(k.values, w),
    }


def bench(repeat):
    rows = []
    for name, fn in cases().items():
        timings = {}
        for use_numba in (True, False):
            if use_numba and not _accel.HAS_NUMBA:
                continue
            kernels.USE_NUMBA = use_numba
            fn()  # warm-up, triggers compilation
            timings["numba" if use_numba else "numpy"] = min(timeit.repeat(fn, number=1, repeat=repeat))
        rows.append((name, timings))
    kernels.USE_NUMBA = _accel.USE_NUMBA
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"{'case':34s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for name, t in bench(args.repeat):
        nb, np_ = t.get("numba"), t["numpy"]
        speed = f"{np_ / nb:7.1f}x" if nb else "     n/a"
        nb_s = f"{1e3 * nb:11.2f}" if nb else f"{'-':>11s}"
        print(f"{name:34s} {nb_s} {1e3 * np_:11.2f} {speed}")


if __name__ == "__main__":
    main()
