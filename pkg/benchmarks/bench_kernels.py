"""Compiled kernel against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import itertools
import timeit

import numpy as np

from ybfock import _kernels_py as py

try:
    from ybfock import _kernels as cy
except ImportError:
    cy = None


def cases():
    for d, n in ((2, 4), (2, 6), (3, 4), (3, 5)):
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
        # q-flip weights at q = 0.5
        yield d, n, perms, np.full((d, d), 0.5, dtype=complex)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if cy is None:
        print("compiled extension not built; run `python3 setup.py build_ext --inplace`")
    print(f"{'kernel':<20}{'d':>3}{'n':>3}{'python s':>12}{'compiled s':>12}{'speedup':>9}{'max diff':>10}")
    for d, n, perms, w in cases():
        for name in ("monomial_perm_sum", "permutation_matrix"):
            if name == "monomial_perm_sum":
                args_ = (perms, w, d, n)
            else:
                args_ = (perms[-1], d, n)
            t_py = min(timeit.repeat(lambda: getattr(py, name)(*args_), number=1, repeat=args.repeat))
            if cy is None:
                print(f"{name:<20}{d:>3}{n:>3}{t_py:>12.4f}{'-':>12}{'-':>9}{'-':>10}")
                continue
            t_cy = min(timeit.repeat(lambda: getattr(cy, name)(*args_), number=1, repeat=args.repeat))
            diff = np.max(np.abs(getattr(py, name)(*args_) - getattr(cy, name)(*args_)))
            print(f"{name:<20}{d:>3}{n:>3}{t_py:>12.4f}{t_cy:>12.4f}{t_py / t_cy:>9.1f}{diff:>10.1e}")


if __name__ == "__main__":
    main()
