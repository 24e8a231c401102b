"""Compare the compiled and pure-Python radial integrators.

    python3 benchmarks/bench_integrator.py [--repeat N]

Both backends run the same Dormand-Prince arithmetic, so results must agree
to the last bit; the table reports wall time per call and the speed-up.
"""
import argparse
import sys
import timeit

import numpy as np

from henon_lane_emden.regions import ExponentPair, WeightPair
from henon_lane_emden.solver.ivp import BACKENDS, solve_ivp_raw
from henon_lane_emden.solver.shooting import shoot_radial

CASES = {
    "first zero, n=3 p=q=3": (ExponentPair(3, 3, 3), WeightPair(0, 0), dict(r_end=10.0)),
    "to r=1, n=3 p=3 q=4 a=-0.5 b=0.5": (
        ExponentPair(3, 3, 4), WeightPair(-0.5, 0.5),
        dict(r_end=1.0, stop_at_zero=False, radii=np.linspace(0, 1, 4097)[1:]),
    ),
}


def run_ivp(e, w, kw, backend):
    return solve_ivp_raw(e, w, 1.0, 1.0, 9.68, 9.89, rtol=1e-12, backend=backend, **kw)


def best_time(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if "cython" not in BACKENDS:
        print("compiled kernel not available; rebuild with `pip install -e . --no-build-isolation`")
        return 1

    print(f"{'case':42s} {'python':>11s} {'cython':>11s} {'speed-up':>9s}  identical")
    rows = []
    for name, (e, w, kw) in CASES.items():
        res = {b: run_ivp(e, w, kw, b) for b in ("python", "cython")}
        same = (np.array_equal(res["python"].states, res["cython"].states)
                and res["python"].r_stop == res["cython"].r_stop)
        t = {b: best_time(lambda b=b: run_ivp(e, w, kw, b), args.repeat) for b in ("python", "cython")}
        rows.append((name, t, same))
    name = "shooting, n=3 p=3 q=4 a=-0.5 b=0.5"
    e, w = ExponentPair(3, 3, 4), WeightPair(-0.5, 0.5)
    g = {b: shoot_radial(e, w, backend=b).info["gamma"] for b in ("python", "cython")}
    t = {b: best_time(lambda b=b: shoot_radial(e, w, backend=b), 1) for b in ("python", "cython")}
    rows.append((name, t, g["python"] == g["cython"]))

    for name, t, same in rows:
        print(f"{name:42s} {t['python'] * 1e3:9.2f}ms {t['cython'] * 1e3:9.2f}ms "
              f"{t['python'] / t['cython']:8.1f}x  {same}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
