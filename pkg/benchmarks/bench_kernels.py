"""Compare the compiled and pure-Python kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--steps N] [--repeat R]

Times tangency-coordinate iteration, apex evaluation and single exit-angle
solves on three tables, checks that both backends agree, and prints a table
of best-of-R timings with the speedup.
"""

import argparse
import timeit

import numpy as np

from olb import kernel
from olb.geometry import Oval
from olb.olbmap import tangency_pairs

TABLES = {
    "ellipse(2,1)": Oval.ellipse(2.0, 1.0),
    "lp(1.5)": Oval.lp(1.5),
    "fourier": Oval.fourier(3.0, a2=0.2, b3=0.1),
}


def _cases(oval, steps):
    code, prm = oval.code, oval.kparams
    a1, a2 = tangency_pairs(oval, np.array([30.0, 5.0]), 1)[0]
    pairs = tangency_pairs(oval, np.array([30.0, 5.0]), 200)
    return {
        f"iterate x{steps}": lambda mod: mod.iterate(code, prm, a1, a2, steps),
        "apexes x201": lambda mod: mod.apexes(code, prm, pairs),
        "exit_angle": lambda mod: mod.exit_angle(code, prm, a1, a2),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    mods = {m.BACKEND: m for m in kernel.backends()}
    if len(mods) < 2:
        print("compiled kernel not built; only the python backend is available")
    header = f"{'table':<14}{'case':<16}" + "".join(f"{b + ' [ms]':>14}" for b in mods) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for tname, oval in TABLES.items():
        for cname, fn in _cases(oval, args.steps).items():
            results = {b: np.asarray(fn(m), dtype=float) for b, m in mods.items()}
            ref = next(iter(results.values()))
            agree = all(np.allclose(r, ref, rtol=1e-9, atol=1e-9) for r in results.values())
            times = {
                b: 1e3 * min(timeit.repeat(lambda m=m: fn(m), number=1, repeat=args.repeat)) for b, m in mods.items()
            }
            row = f"{tname:<14}{cname:<16}" + "".join(f"{t:>14.3f}" for t in times.values())
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(row + f"{speed:>9.1f}x" + ("" if agree else "  MISMATCH"))


if __name__ == "__main__":
    main()
