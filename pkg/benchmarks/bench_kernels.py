"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints the best-of-``repeat`` wall time per call for each kernel and backend,
and the largest disagreement between the two backends.
"""
import argparse
import timeit

import numpy as np

from refprob import _fallback
from refprob.designs import mub_qubit, stabilizer_states
from refprob.operators import random_hermitian
from refprob.refdevice import device_from_design

try:
    from refprob import _kernels
except ImportError:
    _kernels = None


def best(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.2 and number < 1000:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def cases():
    for d in (4, 8, 16):
        A = random_hermitian(d, seed=d)
        yield f"jacobi_eigh d={d}", "jacobi_eigh", (A,)
    for name, ens in (("mub", mub_qubit()), ("stabilizer", stabilizer_states(2))):
        dev = device_from_design(ens)
        yield f"triple_from_p {name} n={dev.n}", "triple_from_p", (dev.P, dev.d)


def compare(kernel, a, b):
    if kernel == "jacobi_eigh":
        return float(np.abs(np.sort(a[0]) - np.sort(b[0])).max())
    return float(np.abs(a - b).max())


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'case':<28}{'python':>12}{'cython':>12}{'speedup':>10}{'max diff':>11}")
    for label, kernel, inputs in cases():
        slow = getattr(_fallback, kernel)
        t_py = best(lambda: slow(*inputs), args.repeat)
        if _kernels is None:
            print(f"{label:<28}{t_py * 1e3:>10.3f}ms")
            continue
        fast = getattr(_kernels, kernel)
        t_cy = best(lambda: fast(*inputs), args.repeat)
        diff = compare(kernel, slow(*inputs), fast(*inputs))
        print(f"{label:<28}{t_py * 1e3:>10.3f}ms{t_cy * 1e3:>10.3f}ms{t_py / t_cy:>9.1f}x{diff:>11.1e}")


if __name__ == "__main__":
    main()
