"""Command-line front end.

Exit codes: 0 success, 2 usage/validation error, 1 runtime error.
Diagnostics are a single ``error: ...`` line on stderr. Wall times only
go to stderr, so stdout of deterministic commands is byte-stable.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import analysis, bench
from .routing import INF, PERCOLATION, SOLVERS, extract_path
from .topology import (
    ExplicitWeights,
    GridSpec,
    GridSpecError,
    UniformWeights,
    build_grid,
    load_grid_spec,
    spec_from_mapping,
)

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _add_grid_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("grid")
    g.add_argument("--config", help="grid config file (JSON or key=value lines)")
    g.add_argument("--planes", type=int, help="orbital planes P (>= 3)")
    g.add_argument("--slots", type=int, help="satellites per plane S (>= 3)")
    g.add_argument("--seam", choices=["torus", "seam"], help="drop plane P-1 <-> 0 links with 'seam'")
    g.add_argument("--weights", dest="weight_model", choices=["unit", "uniform"])
    g.add_argument("--lo", type=float, help="uniform weight lower bound")
    g.add_argument("--hi", type=float, help="uniform weight upper bound")
    g.add_argument("--seed", type=int, help="weight seed")


def _grid_spec(args: argparse.Namespace) -> GridSpec:
    cfg: dict = {}
    if args.config:
        try:
            base = load_grid_spec(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from None
        cfg = _spec_to_mapping(base)
    for key in ("planes", "slots", "seam", "weight_model", "lo", "hi", "seed"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if "planes" not in cfg or "slots" not in cfg:
        raise UsageError("--planes and --slots are required (or a --config providing them)")
    if cfg.get("weight_model") == "uniform":
        cfg.setdefault("lo", 0.5)
        cfg.setdefault("hi", 1.5)
    elif cfg.get("weight_model") != "explicit":
        for key in ("lo", "hi", "seed"):
            cfg.pop(key, None)
    return spec_from_mapping(cfg)


def _spec_to_mapping(spec: GridSpec) -> dict:
    wm = spec.weight_model
    cfg = {"planes": spec.planes, "slots": spec.slots, "seam": spec.seam_policy.value}
    if isinstance(wm, UniformWeights):
        cfg.update(weight_model="uniform", lo=wm.lo, hi=wm.hi, seed=wm.seed)
    elif isinstance(wm, ExplicitWeights):
        cfg.update(weight_model="explicit", weights=[[u, v, w] for (u, v), w in wm.table.items()])
    return cfg


def _parse_node(text: str, grid) -> int:
    """Accept ``plane,slot`` or a flat node id."""
    try:
        if "," in text:
            plane, slot = (int(part) for part in text.split(","))
            return grid.node_id(plane, slot)
        node = int(text)
    except ValueError:
        raise UsageError(f"bad node {text!r}; use 'plane,slot' or a node id") from None
    except IndexError as exc:
        raise UsageError(str(exc)) from None
    if not 0 <= node < grid.node_count:
        raise UsageError(f"node {node} outside [0, {grid.node_count})")
    return node


def _fmt_node(grid, node: int) -> str:
    plane, slot = grid.coords(node)
    return f"{plane},{slot}"


def _fmt_num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(x)


# -- subcommands -------------------------------------------------------------


def cmd_route(args: argparse.Namespace) -> int:
    grid = build_grid(_grid_spec(args))
    source = _parse_node(args.source, grid)
    target = _parse_node(args.target, grid) if args.target is not None else None
    result = SOLVERS[args.algorithm](grid, source)
    out = sys.stdout
    print(f"algorithm: {args.algorithm}", file=out)
    print(f"grid: {grid.planes}x{grid.slots} n={grid.node_count} seam={grid.spec.seam_policy.value}", file=out)
    print(f"source: {_fmt_node(grid, source)} (id {source})", file=out)
    if target is not None:
        path = extract_path(result, target)
        print(f"target: {_fmt_node(grid, target)} (id {target})", file=out)
        print(f"distance: {_fmt_num(result.distance[target])}", file=out)
        print(f"hops: {len(path) - 1}", file=out)
        print("path: " + " -> ".join(_fmt_node(grid, v) for v in path), file=out)
    else:
        reached = [d for d in result.distance if d != INF]
        print(f"reachable: {len(reached)}", file=out)
        print(f"max distance: {_fmt_num(max(reached))}", file=out)
    for key, value in result.counters.as_dict().items():
        print(f"{key}: {value}", file=out)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    fmt = args.format or bench.format_for_path(args.out)
    if args.repetitions < 1:
        raise UsageError("--repetitions must be >= 1")
    if args.sweep:
        records = bench.run_scaling_sweep(args.repetitions, args.seed, weighted=args.weighted)
    else:
        records = bench.run_typical_constellations(args.repetitions, args.seed, weighted=args.weighted)
    bench.emit_results(records, fmt, args.out)

    print(f"{'label':<16}{'n':>6}  {'algorithm':<12}{'ops':>10}{'peak':>7}{'x':>10}")
    for r in records:
        print(f"{r.label:<16}{r.n:>6}  {r.algorithm:<12}{r.total_ops:>10}{r.frontier_peak:>7}{r.measured_x:>10.3f}")
    cross = bench.ops_crossover(records)
    print(f"op-count crossover vs heap: {'none' if cross is None else f'n={cross}'}")
    print(f"wrote {len(records)} records to {args.out}")

    tcross = bench.time_crossover(records)
    print(f"wall-time crossover vs heap: {'none' if tcross is None else f'n={tcross}'}", file=sys.stderr)
    for r in records:
        print(f"timing {r.label} {r.algorithm} median_ns={r.median_ns}", file=sys.stderr)
    return EXIT_OK


def cmd_estimate_x(args: argparse.Namespace) -> int:
    if args.trials < 1:
        raise UsageError(f"--trials must be >= 1 (got {args.trials})")
    spec = _grid_spec(args)
    est = analysis.estimate_x(spec, args.trials, args.mc_seed, workers=args.workers)
    n = spec.node_count
    print(f"grid: {spec.planes}x{spec.slots} n={n}")
    print(f"trials: {est.trials}")
    print(f"mean_x: {est.mean_x:.6f}")
    print(f"std_x: {est.std_x:.6f}")
    print(f"ratio_to_n: {est.ratio_to_n:.6f}")
    print(f"reference_ratio: {analysis.REFERENCE_X_RATIO:.6f} (1/7.5)")
    pred = analysis.efficiency(n, est.mean_x)
    print(f"eta: {pred.eta:.6f} (speedup {pred.speedup:.3f})")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    grid = build_grid(_grid_spec(args))
    text = json.dumps(grid.to_adjacency(), indent=None if args.compact else 2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="constellation-route", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("route", help="shortest path from one satellite")
    _add_grid_args(p)
    p.add_argument("--from", dest="source", default="0,0", help="source as plane,slot or id")
    p.add_argument("--to", dest="target", help="target as plane,slot or id")
    p.add_argument("--algorithm", choices=sorted(SOLVERS), default=PERCOLATION)
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("bench", help="run benchmark sweeps")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--sweep", action="store_true", help="3..36 planes x 18 slots")
    mode.add_argument("--typical", action="store_true", help="OneWeb, Kuiper, Starlink layers")
    p.add_argument("--out", required=True, help="results file (.csv or .json)")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--repetitions", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weighted", action="store_true", help="uniform [0.5, 1.5] weights")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("estimate-x", help="Monte Carlo frontier-size estimate")
    _add_grid_args(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--mc-seed", type=int, default=None, help="source sampling seed (defaults to --seed or 0)")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_estimate_x)

    p = sub.add_parser("generate", help="dump a grid as JSON adjacency")
    _add_grid_args(p)
    p.add_argument("--out")
    p.add_argument("--compact", action="store_true")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "command", None) == "estimate-x" and args.mc_seed is None:
            args.mc_seed = args.seed if args.seed is not None else 0
        return args.func(args)
    except (UsageError, GridSpecError, ValueError, IndexError) as exc:
        print(f"error: {_one_line(exc)}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, RuntimeError, LookupError) as exc:
        print(f"error: {_one_line(exc)}", file=sys.stderr)
        return EXIT_RUNTIME


def _one_line(exc: BaseException) -> str:
    return " ".join(str(exc).split()) or type(exc).__name__


if __name__ == "__main__":
    sys.exit(main())
