"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from segalwick import _pykernels

try:
    from segalwick import _ckernels
except ImportError:
    _ckernels = None

CASES = {
    "enumerate_tables 3x3, margins (4,4,4)": ("enumerate_tables", ((4, 4, 4), (4, 4, 4))),
    "enumerate_tables 3x4, margins (6,5,5)/(4,4,4,4)": ("enumerate_tables", ((6, 5, 5), (4, 4, 4, 4))),
    "enumerate_tables 2x2, margins (4,4)": ("enumerate_tables", ((4, 4), (4, 4))),
}


def min_kernel_args(n):
    rng = np.random.default_rng(0)
    s = np.sort(rng.random(n))
    return rng.standard_normal(n), rng.standard_normal(n), s


def time_call(func, args, repeat):
    number = 1
    while timeit.timeit(lambda: func(*args), number=number) < 0.05:
        number *= 2
    best = min(timeit.repeat(lambda: func(*args), number=number, repeat=repeat))
    return best / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    cases = dict(CASES)
    for n in (4096, 262144):
        cases[f"min_kernel_form n={n}"] = ("min_kernel_form", min_kernel_args(n))
    if _ckernels is None:
        print("compiled kernels are not built; timing the pure-Python fallback only")
    print(f"{'case':<50} {'python':>12} {'cython':>12} {'speedup':>9}")
    for label, (name, call_args) in cases.items():
        py = time_call(getattr(_pykernels, name), call_args, args.repeat)
        if _ckernels is None:
            print(f"{label:<50} {py * 1e6:>10.1f}us {'-':>12} {'-':>9}")
            continue
        cy = time_call(getattr(_ckernels, name), call_args, args.repeat)
        print(f"{label:<50} {py * 1e6:>10.1f}us {cy * 1e6:>10.1f}us {py / cy:>8.1f}x")


if __name__ == "__main__":
    main()
