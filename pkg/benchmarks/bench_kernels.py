"""Compare the compiled and pure-Python kernels.

Run with ``python3 benchmarks/bench_kernels.py``. Each row is the best of
``--repeat`` runs in milliseconds.
"""

import argparse
import timeit

import numpy as np

from arrowhead import curve, kernels


def cases():
    for m in (9, 10, 11):
        prog = curve.turtle_program(m)
        yield f"turtle_walk m={m}", lambda impl, p=prog, m=m: impl.turtle_walk(p, m % 2)
    for m in (6, 7):
        n = 3 ** (m - 1) - 1
        diag, off = np.full(n, 2.0), np.full(n - 1, -1.0)
        yield f"bisection block m={m} (n={n})", lambda impl, d=diag, o=off: impl.tridiag_eigvalsh(d, o)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = [n for n in ("compiled", "python") if n in kernels.BACKENDS]
    if len(names) < 2:
        print("compiled extension not built; only the Python kernels are available")
    print(f"{'case':34s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, fn in cases():
        times = []
        for name in names:
            impl = kernels.get_backend(name)
            times.append(min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat)) * 1e3)
        line = f"{label:34s}" + "".join(f"{t:12.2f}" for t in times)
        if len(times) == 2:
            line += f"{times[1] / times[0]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
