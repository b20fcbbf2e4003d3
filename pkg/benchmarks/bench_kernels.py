"""Time the compiled and pure-Python constant-term kernels side by side.

    python benchmarks/bench_kernels.py [--repeat 5] [--degrees 8,12,16,20] [--number N]
"""

import argparse
import timeit

from qperiods import catalog, kernels, period
from qperiods.laurent import parse

EXTRA = {
    "mutated-cp2": parse("x + y + 2*x^-1 + x^-1*y + x^-1*y^-1"),
    "dense-3d": parse("x + y + z + x^-1 + y^-1 + z^-1 + x*y^-1*z"),
}


def bench(W, d, backend, repeat, number=None):
    timer = timeit.Timer(lambda: period(W, d, backend=backend))
    if number is None:
        number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--degrees", default="8,12,16,20")
    ap.add_argument("--number", type=int, help="calls per timing (default: autorange)")
    args = ap.parse_args()
    degrees = [int(x) for x in args.degrees.split(",")]

    if not kernels.HAVE_COMPILED:
        print("compiled kernel not built; only the Python kernel is available")
    potentials = {**catalog(), **EXTRA}
    print(f"{'potential':<14}{'d':>4}{'period':>24}{'compiled (s)':>15}{'python (s)':>13}{'speedup':>9}")
    for name, W in potentials.items():
        for d in degrees:
            value = period(W, d, backend="python")
            t_py = bench(W, d, "python", args.repeat, args.number)
            if kernels.HAVE_COMPILED:
                assert period(W, d, backend="compiled") == value
                t_c = bench(W, d, "compiled", args.repeat, args.number)
                print(f"{name:<14}{d:>4}{value:>24}{t_c:>15.2e}{t_py:>13.2e}{t_py / t_c:>8.1f}x")
            else:
                print(f"{name:<14}{d:>4}{value:>24}{'-':>15}{t_py:>13.2e}{'-':>9}")


if __name__ == "__main__":
    main()
