"""Time the numba kernels against their numpy fallbacks.

Inputs are captured from real workloads (the density of a refined square,
the LP and oracle on the cone instance) so the sizes are representative.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import copy
import itertools
import time

import numpy as np

from calibra import _kernels
from calibra.currents import density_estimate
from calibra.demos import cone_16gon, full_chain, grid_square
from calibra.plateau import brute_force_oracle, solve


def capture(name, workload):
    """Run ``workload`` and return deep copies of every argument tuple passed to kernel ``name``."""
    seen = []
    orig = getattr(_kernels, name)

    def spy(*args):
        seen.append(copy.deepcopy(args))
        return orig(*args)

    setattr(_kernels, name, spy)
    try:
        workload()
    finally:
        setattr(_kernels, name, orig)
    return seen


def plucker_inputs():
    rng = np.random.default_rng(0)
    combos = np.array(list(itertools.combinations(range(7), 3)))
    return [(rng.normal(size=(20_000, 7, 3)), combos)]


def clipped_inputs():
    T = full_chain(grid_square(32), 2)
    return capture("clipped_mass", lambda: density_estimate(T, [0.5, 0.5], [0.05, 0.1, 0.2]))


def simplex_inputs():
    return capture("simplex_iterate", lambda: solve(cone_16gon()))


def enumerate_inputs():
    inst = cone_16gon()
    return capture("enumerate_chains", lambda: brute_force_oracle(inst, coeff_bound=1, max_simplices=40))


KERNELS = [
    ("plucker", _kernels.plucker_np, _kernels.plucker_nb, plucker_inputs),
    ("clipped_mass", _kernels.clipped_mass_np, _kernels.clipped_mass_nb, clipped_inputs),
    ("simplex_iterate", _kernels.simplex_iterate_np, _kernels.simplex_iterate_nb, simplex_inputs),
    ("enumerate_chains", _kernels.enumerate_chains_np, _kernels.enumerate_chains_nb, enumerate_inputs),
]


def best_time(fn, inputs, repeat):
    best = float("inf")
    for _ in range(repeat):
        # kernels may update their arguments in place
        args = copy.deepcopy(inputs)
        t0 = time.perf_counter()
        for a in args:
            fn(*a)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'kernel':<18}{'calls':>6}{'numpy [ms]':>13}{'numba [ms]':>13}{'speedup':>9}")
    for name, f_np, f_nb, make in KERNELS:
        inputs = make()
        best_time(f_nb, inputs[:1], 1)  # compile outside the timing
        t_np = best_time(f_np, inputs, args.repeat)
        t_nb = best_time(f_nb, inputs, args.repeat)
        print(f"{name:<18}{len(inputs):>6}{t_np * 1e3:>13.2f}{t_nb * 1e3:>13.2f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
