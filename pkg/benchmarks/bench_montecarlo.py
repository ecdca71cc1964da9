"""Compare the compiled and pure-Python Monte Carlo kernels.

    python benchmarks/bench_montecarlo.py [--n 4] [--trials 200000] [--repeat 3]
"""

import argparse
import math
import timeit

import numpy as np

from entangling_ops import _kernels
from entangling_ops.gates import binary_phase
from entangling_ops.states import resource_entropy


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    e = np.array([resource_entropy(math.ldexp(binary_phase(args.n), k - 1)) for k in range(1, args.n + 1)])
    backends = {"python": _kernels.python_impl}
    if _kernels.compiled_impl is not None:
        backends["cython"] = _kernels.compiled_impl
    else:
        print("compiled kernel not built; timing the Python kernel only")

    results, times = {}, {}
    for name, mod in backends.items():
        times[name] = min(timeit.repeat(lambda: mod.simulate_trials(args.n, args.trials, args.seed, e),
                                        number=1, repeat=args.repeat))
        results[name] = mod.simulate_trials(args.n, args.trials, args.seed, e)
        rate = args.trials / times[name]
        print(f"{name:7s} {times[name]:9.4f} s   {rate:14,.0f} trials/s")

    if len(results) == 2:
        same = results["python"] == results["cython"]
        print(f"speedup {times['python'] / times['cython']:.1f}x, identical results: {same}")


if __name__ == "__main__":
    main()
