"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import random
import timeit

import numpy as np

from promise_lab import _fallback
from promise_lab.numtheory import prime_window

try:
    from promise_lab import _kernels
except ImportError:
    _kernels = None


def i64(x):
    return np.ascontiguousarray(x, dtype=np.int64)


def random_csr(n, seed=1):
    rng = random.Random(seed)
    indptr, indices = [0], []
    for _ in range(n):
        indices.extend(sorted({rng.randrange(n) for _ in range(2)}))
        indptr.append(len(indices))
    return i64(indptr), i64(indices)


def cases():
    primes = i64(prime_window(2, 6))
    nxt = i64([(i + 1) % 10007 for i in range(10007)])
    acc = np.zeros(10007, dtype=np.uint8)
    acc[0] = 1
    indptr, indices = random_csr(50_000)
    cycle_ptr = i64(range(20_001))
    cycle_idx = i64([(i + 1) % 20_000 for i in range(20_000)])
    comp0 = np.zeros(20_000, dtype=np.int64)
    return {
        "lkn_labels (10^5 lengths)": lambda impl: impl.lkn_labels(primes, 0, 100_000),
        "divisor_counts (10^5 lengths)": lambda impl: impl.divisor_counts(primes, 0, 100_000),
        "dfa_trace (10^5 steps)": lambda impl: impl.dfa_trace(nxt, 0, acc, 100_000),
        "bottom_sccs (5e4 states)": lambda impl: impl.bottom_sccs(indptr, indices),
        "component_period (2e4 cycle)": lambda impl: impl.component_period(cycle_ptr, cycle_idx, comp0, 0),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    impls = [("python", _fallback)] + ([("cython", _kernels)] if _kernels else [])
    print(f"{'kernel':32s}" + "".join(f"{name:>12s}" for name, _ in impls) + ("     speedup" if _kernels else ""))
    for label, fn in cases().items():
        times = [min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat)) for _, impl in impls]
        row = f"{label:32s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if _kernels:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)
    if _kernels is None:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
