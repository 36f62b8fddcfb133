"""Time the compiled kernels against the numpy / pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Each kernel is timed with
timeit on identical inputs and the two backends' outputs are compared.
"""
import argparse
import timeit

import numpy as np

from fgverify.kernels import available_backends


def cases(window):
    rng = np.random.default_rng(0)
    n = 2 * window + 1
    lam = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    lam = lam - lam.T
    c = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return {
        "qprod(a, q, 80)": ("qprod", (0.7 + 0.2j, 0.45, 80)),
        "theta_prod(x, q, 80)": ("theta_prod", (1.3 - 0.4j, 0.3, 80)),
        "jacobi_sum(x, q, 60)": ("jacobi_sum", (0.9 + 0.1j, 0.3, 60)),
        f"self_orth_max({n}x{n})": ("self_orth_max", (lam,)),
        f"cross_orth_max({n}x{n})": ("cross_orth_max", (c, lam)),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--window", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = available_backends()
    if "cython" not in backends:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':28s}" + "".join(f"{b:>14s}" for b in backends) + "   speedup  agree")
    for label, (fn, fargs) in cases(args.window).items():
        times, values = {}, {}
        for b, mod in backends.items():
            f = getattr(mod, fn)
            t = timeit.Timer(lambda: f(*fargs))
            number, _ = t.autorange()
            times[b] = min(t.repeat(args.repeat, number)) / number
            values[b] = f(*fargs)
        row = f"{label:28s}" + "".join(f"{1e6 * times[b]:12.1f}us" for b in backends)
        if "cython" in times:
            agree = abs(values["cython"] - values["python"]) <= 1e-12 * max(1.0, abs(values["python"]))
            row += f"   {times['python'] / times['cython']:6.1f}x  {agree}"
        print(row)


if __name__ == "__main__":
    main()
