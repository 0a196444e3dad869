"""Command-line front end.

Subcommands
    analyze      invariant report (G, c*, Lambda, per-vertex rows) as JSON/CSV
    polar        polar polytope as JSON
    verify       convergence table of (delta, d_P, normalized, best delta') as CSV
    check-bound  uniform floating-body distance bound report

All file I/O lives here; the library modules are pure. Outputs are
deterministic: floats are serialized with 17 significant digits, so
identical inputs and configuration produce byte-identical files.

Exit codes: 0 ok, 2 parse/usage error, 3 geometry error (the message names
the failed invariant), 4 inclusion-chain violation during verify, 5 bound
violation in check-bound.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .config import RunConfig
from .errors import GeometryError
from .geometry import VPolytope, validate_vpolytope
from .invariants import generator, invariant_g
from .oracles import (
    SearchConfig,
    convergence_table,
    direction_grid,
    inclusion_chain,
    uniform_bound_check,
)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _load_polytope(args) -> VPolytope:
    if args.gen is not None:
        P = generator(args.gen, dim=args.dim, eps=args.eps)
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict) or "dim" not in data or "vertices" not in data:
            raise ValueError("polytope JSON needs 'dim' and 'vertices'")
        P = VPolytope(int(data["dim"]), np.asarray(data["vertices"], dtype=float))
    validate_vpolytope(P)
    return P


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    if args.tol_incidence is not None:
        cfg.incidence_tolerance = args.tol_incidence
    if args.tol_bisection is not None:
        cfg.bisection_tolerance = args.tol_bisection
    if args.tol_santalo is not None:
        cfg.santalo_residual = args.tol_santalo
    if args.grid is not None:
        cfg.grid_sizes = {2: args.grid, 3: args.grid, 4: args.grid}
    if args.seed is not None:
        cfg.rng_seed = args.seed
    if args.format is not None:
        cfg.output_format = args.format
    return cfg.validate()


def _parse_deltas(text: str) -> list:
    if text.strip() == "":
        return []
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


def cmd_analyze(args) -> int:
    cfg = _config_from_args(args)
    P = _load_polytope(args)
    rep = invariant_g(P, cfg.incidence_tolerance, cfg.santalo_residual)
    if cfg.output_format == "csv":
        lines = ["vertex,alpha,beta,cone_density,cone_density_polar"]
        for row in rep.per_vertex:
            coords = ";".join(_fmt(c) for c in row.vertex)
            lines.append(
                f"{coords},{_fmt(row.alpha)},{_fmt(row.beta)},"
                f"{_fmt(row.cone_density)},{_fmt(row.cone_density_polar)}"
            )
        lines.append(f"G,{_fmt(rep.g)}")
        lines.append(f"c_star,{_fmt(rep.c_star)}")
        lines.append(f"lambda,{_fmt(rep.lambda_)}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(json.dumps(rep.to_dict(), indent=2), args.out)
    return 0


def cmd_polar(args) -> int:
    cfg = _config_from_args(args)
    P = _load_polytope(args)
    from .duality import polar
    Q = polar(P, cfg.incidence_tolerance)
    payload = {"dim": Q.dim, "vertices": [list(v) for v in Q.vertices.tolist()]}
    _emit(json.dumps(payload, indent=2), args.out)
    return 0


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    P = _load_polytope(args)
    deltas = _parse_deltas(args.deltas)
    header = "delta,d_P,normalized,best_delta_prime,G_closed_form"
    if not deltas:
        _emit(header + "\n", args.out)
        return 0
    grid = direction_grid(P.dim, cfg.grid_size(P.dim), bodies=(P,),
                          seed=cfg.rng_seed, tol=cfg.incidence_tolerance)
    result = convergence_table(P, deltas, grid, SearchConfig(),
                               cfg.incidence_tolerance, cfg.bisection_tolerance)
    chains = []
    for row in result.rows:
        chain = inclusion_chain(P, row.delta, max(row.best_delta_prime, 1e-12),
                                grid, cfg.incidence_tolerance,
                                cfg.bisection_tolerance)
        chains.append((row.delta, chain))
    if args.chain_report is not None:
        payload = [
            {
                "delta": d,
                "floating_inside": c.floating_inside,
                "polar_illumination_inside": c.polar_illumination_inside,
                "illumination_outside": c.illumination_outside,
                "worst_floating_margin": c.worst_floating_margin,
                "worst_polar_illumination_margin": c.worst_polar_illumination_margin,
                "worst_illumination_margin": c.worst_illumination_margin,
            }
            for d, c in chains
        ]
        with open(args.chain_report, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, indent=2))
    for d, chain in chains:
        if not chain.ok:
            print("inclusion-chain violation at delta="
                  f"{d:g} (floating_inside={chain.floating_inside}, "
                  f"polar_illumination_inside={chain.polar_illumination_inside}, "
                  f"illumination_outside={chain.illumination_outside})",
                  file=sys.stderr)
            return 4
    lines = [header]
    for row in result.rows:
        lines.append(
            f"{_fmt(row.delta)},{_fmt(row.d_value)},{_fmt(row.normalized)},"
            f"{_fmt(row.best_delta_prime)},{_fmt(result.closed_form)}"
        )
    if result.extrapolated is not None:
        lines.append(
            f"{_fmt(0.0)},nan,{_fmt(result.extrapolated)},nan,"
            f"{_fmt(result.closed_form)}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_check_bound(args) -> int:
    cfg = _config_from_args(args)
    P = _load_polytope(args)
    deltas = _parse_deltas(args.deltas)
    grid = direction_grid(P.dim, cfg.grid_size(P.dim), bodies=(P,),
                          seed=cfg.rng_seed, tol=cfg.incidence_tolerance)
    report = uniform_bound_check(P, deltas, grid, cfg.incidence_tolerance,
                                 cfg.bisection_tolerance)
    if cfg.output_format == "csv":
        lines = ["delta,distance,bound,margin"]
        for row in report.rows:
            lines.append(f"{_fmt(row.delta)},{_fmt(row.distance)},"
                         f"{_fmt(row.bound)},{_fmt(row.margin)}")
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({
            "constant": report.constant,
            "rows": [
                {"delta": r.delta, "distance": r.distance,
                 "bound": r.bound, "margin": r.margin}
                for r in report.rows
            ],
            "passed": report.passed,
        }, indent=2)
    _emit(text, args.out)
    if not report.passed:
        print("uniform bound violated", file=sys.stderr)
        return 5
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floatdual",
        description="Floating/illumination body duality toolkit for "
                    "centrally symmetric polytopes",
    )
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="polytope JSON file with dim and vertices")
    src.add_argument("--gen", choices=("cube", "cross", "hexagon"),
                     help="named generator")
    common.add_argument("--dim", type=int, default=None)
    common.add_argument("--eps", type=float, default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--grid", type=int, default=None,
                        help="direction-grid size override")
    common.add_argument("--tol-incidence", type=float, default=None)
    common.add_argument("--tol-bisection", type=float, default=None)
    common.add_argument("--tol-santalo", type=float, default=None)
    common.add_argument("--format", choices=("json", "csv"), default=None)

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("analyze", parents=[common],
                       help="invariant report for a polytope")
    p.set_defaults(func=cmd_analyze)
    p = sub.add_parser("polar", parents=[common], help="polar polytope")
    p.set_defaults(func=cmd_polar)
    p = sub.add_parser("verify", parents=[common],
                       help="floating vs polar-illumination convergence table")
    p.add_argument("--deltas", default="1e-4,1e-5,1e-6")
    p.add_argument("--chain-report", default=None,
                   help="also write the per-delta inclusion-chain report (JSON)")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("check-bound", parents=[common],
                       help="uniform floating-body distance bound")
    p.add_argument("--deltas", default="1e-2,1e-3,1e-4")
    p.set_defaults(func=cmd_check_bound)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except GeometryError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (json.JSONDecodeError, ValueError, OSError, KeyError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
