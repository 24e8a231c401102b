"""Command-line front end.

Exit codes: 0 success, 1 computational failure (single-line JSON error on
stdout), 2 usage error.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import power, regions, verify
from .errors import HLEError, HomogeneousRegime
from .formatting import dumps, fmt_float
from .regions import ExponentPair, WeightPair

REGION_CODES = {"outside": 0, "E_only": 1, "Q": 2, "boundary": 3}

REGION_HELP = """\
Writes one a,b,code row per cell centre (b slow, a fast).  Cell codes:
  0 = outside E
  1 = in E but not in Q
  2 = in Q (positive power solutions exist)
  3 = on the boundary of E or Q within eps"""


def _dimension(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 3:
        raise argparse.ArgumentTypeError("must be >= 3")
    return n


def _exponent(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not x > 1:
        raise argparse.ArgumentTypeError("must be > 1")
    return x


def _positive_int(text):
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return k


def _add_exponents(p):
    p.add_argument("--n", type=_dimension, required=True, help="space dimension (>= 3)")
    p.add_argument("--p", type=_exponent, required=True, help="exponent p (> 1)")
    p.add_argument("--q", type=_exponent, required=True, help="exponent q (> 1)")


def _add_weights(p, required=True):
    p.add_argument("--a", type=float, required=required, help="weight exponent a")
    p.add_argument("--b", type=float, required=required, help="weight exponent b")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hle", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file of default option values; flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="regime and E/E+/Q membership as JSON")
    _add_exponents(p)
    _add_weights(p)
    p.add_argument("--eps", type=float, default=regions.DEFAULT_EPS)

    p = sub.add_parser("power", help="power-type solution (or homogeneous family) as JSON")
    _add_exponents(p)
    _add_weights(p)
    p.add_argument("--eps", type=float, default=regions.DEFAULT_EPS)
    p.add_argument("--alpha", type=float, help="homogeneous regime: evaluate the family at alpha")

    p = sub.add_parser("kelvin", help="Kelvin image of (a, b) and the fixed point F")
    _add_exponents(p)
    _add_weights(p)

    p = sub.add_parser("solve", help="radial Dirichlet solution on the unit ball")
    _add_exponents(p)
    _add_weights(p)
    p.add_argument("--method", choices=("shooting", "rayleigh"), default="shooting")
    p.add_argument("--grid", type=_positive_int, default=2048, help="number of radial cells")
    p.add_argument("--tol", type=float, default=None, help="boundary defect (shooting) or iteration tolerance (rayleigh)")
    p.add_argument("--out", help="CSV file for the profile (r,u,v)")

    p = sub.add_parser("region", help="region grid as a,b,code CSV", description=REGION_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_exponents(p)
    p.add_argument("--grid", type=_positive_int, default=200, help="cells per axis")
    p.add_argument("--bounds", type=float, nargs=4, metavar=("A_MIN", "A_MAX", "B_MIN", "B_MAX"))
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--out", help="output CSV (default: stdout)")

    p = sub.add_parser("verify", help="residual statistics of a profile CSV")
    _add_exponents(p)
    _add_weights(p)
    p.add_argument("--profile", required=True, help="CSV with header r,u,v")
    p.add_argument("--lambda1", type=float, default=1.0)
    p.add_argument("--lambda2", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--mass-radius", type=float, help="also report U_R, V_R at this radius")
    return parser


def read_config(path) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        cfg = read_config(known.config)
    except (OSError, ValueError) as exc:
        parser.error(f"argument --config: {exc}")
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in subparsers.choices.values():
        conv = {a.dest: a.type for a in sp._actions}
        defaults = {}
        for k, v in cfg.items():
            if k in conv:
                defaults[k] = conv[k](v) if conv[k] else v
        sp.set_defaults(**defaults)
        for a in sp._actions:
            if a.dest in defaults:
                a.required = False


# ---------------------------------------------------------------------------


def cmd_classify(args):
    e, w = ExponentPair(args.n, args.p, args.q), WeightPair(args.a, args.b)
    return regions.membership_E(e, w, args.eps).to_dict()


def cmd_power(args):
    e, w = ExponentPair(args.n, args.p, args.q), WeightPair(args.a, args.b)
    regime = regions.classify_regime(e)
    if regime is regions.Regime.HOMOGENEOUS:
        fam = power.power_family_h(e, w, args.eps)
        out = {"regime": regime.value, "family": fam.to_dict()}
        if args.alpha is not None:
            out["solution"] = fam.solution(args.alpha).to_dict()
        return out
    return power.power_solution(e, w).to_dict()


def cmd_kelvin(args):
    e, w = ExponentPair(args.n, args.p, args.q), WeightPair(args.a, args.b)
    return power.kelvin_map(e, w).to_dict()


def cmd_solve(args):
    from .solver.rayleigh import minimize_rayleigh
    from .solver.shooting import shoot_radial

    e, w = ExponentPair(args.n, args.p, args.q), WeightPair(args.a, args.b)
    if args.method == "shooting":
        prof = shoot_radial(e, w, tol=args.tol or 1e-8, grid_size=args.grid)
        summary = {"method": "shooting", "gamma": prof.info["gamma"]}
    else:
        m, state, prof = minimize_rayleigh(e, w, grid_size=args.grid, tol=args.tol or 1e-10)
        summary = {"method": "rayleigh", "m_value": m, "mu": list(state.multipliers),
                   "iterations": state.iterations}
    summary.update({
        "lambdas": list(prof.lambdas),
        "central": list(prof.central),
        "residual_sup": prof.residual_sup,
        "boundary_defect": prof.boundary_defect,
        "nodes": len(prof),
    })
    if args.out:
        prof.to_csv(args.out)
        summary["out"] = args.out
    return summary


def region_bounds(e: ExponentPair):
    n = e.n
    return (-n - 1.0, e.p * (n - 2) - n + 1.0, -n - 1.0, e.q * (n - 2) - n + 1.0)


def region_grid(e: ExponentPair, cells: int, bounds=None, eps: float = 1e-9):
    """Cell-centre coordinates and codes, row-major with ``b`` as the slow index."""
    a_min, a_max, b_min, b_max = bounds or region_bounds(e)
    a = a_min + (np.arange(cells) + 0.5) * (a_max - a_min) / cells
    b = b_min + (np.arange(cells) + 0.5) * (b_max - b_min) / cells
    B, A = np.meshgrid(b, a, indexing="ij")
    inE = regions.membership_E_array(e.n, e.p, e.q, A, B, eps)
    inQ = power.membership_Q_array(e.n, e.p, e.q, A, B, eps)
    code = np.full(A.shape, REGION_CODES["outside"])
    code[inE == regions.INSIDE] = REGION_CODES["E_only"]
    code[inQ == regions.INSIDE] = REGION_CODES["Q"]
    code[(inE == regions.BOUNDARY) | (inQ == regions.BOUNDARY)] = REGION_CODES["boundary"]
    return A.ravel(), B.ravel(), code.ravel()


def cmd_region(args):
    e = ExponentPair(args.n, args.p, args.q)
    A, B, code = region_grid(e, args.grid, args.bounds, args.eps)
    lines = ["a,b,code"] + [f"{fmt_float(x)},{fmt_float(y)},{c}" for x, y, c in zip(A, B, code)]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        counts = {k: int(np.sum(code == v)) for k, v in REGION_CODES.items()}
        return {"out": args.out, "cells": int(code.size), "counts": counts}
    sys.stdout.write(text)
    return None


def cmd_verify(args):
    from .solver.profile import RadialProfile

    e, w = ExponentPair(args.n, args.p, args.q), WeightPair(args.a, args.b)
    try:
        prof = RadialProfile.from_csv(args.profile)
    except OSError as exc:
        raise HLEError(f"cannot read profile: {exc}") from exc
    out = verify.residual_check(e, w, prof, args.lambda1, args.lambda2, tol=args.tol)
    if args.mass_radius is not None:
        out["mass"] = verify.local_mass(e, w, prof, args.mass_radius).to_dict()
    return out


COMMANDS = {
    "classify": cmd_classify,
    "power": cmd_power,
    "kelvin": cmd_kelvin,
    "solve": cmd_solve,
    "region": cmd_region,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    _apply_config(parser, argv)
    args = parser.parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except HomogeneousRegime as exc:
        print(dumps({"error": "HomogeneousRegime", "detail": str(exc)}, indent=None))
        return 1
    except (HLEError, ValueError) as exc:
        print(dumps({"error": type(exc).__name__, "detail": str(exc)}, indent=None))
        return 1
    if result is not None:
        print(dumps(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
