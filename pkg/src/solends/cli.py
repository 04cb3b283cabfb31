"""Command-line front end.

Exit codes: 0 success, 2 bad configuration, 3 budget-exhausted or unstable
verdicts under --strict (without --strict those still exit 0, with the
verdict spelled out in the report).
"""

from __future__ import annotations

import argparse
import os
import sys

from .io import ConfigError, RunConfig, export_graph, export_report
from .leaves import (
    FiberPoint,
    classify_fiber_point,
    estimate_ends,
    make_policy,
    sample_fiber_points,
)
from .towers import (
    LevelBudgetError,
    Tower,
    build_dyadic_tower,
    build_generalized_schori_tower,
    build_mixed_tower,
    build_rt_tower,
    build_schori_tower,
    build_torus_tower,
    mixed_degree_sequence,
)


def tower_from_config(cfg: RunConfig) -> Tower:
    kw = {}
    if cfg.max_level is not None:
        kw["max_level"] = cfg.max_level
    K = cfg.levels
    if cfg.tower == "dyadic":
        return build_dyadic_tower(K, **kw)
    if cfg.tower == "torus":
        return build_torus_tower(K, **kw)
    if cfg.tower == "rt":
        return build_rt_tower(K, **kw)
    if cfg.tower == "schori":
        return build_schori_tower(K, method=cfg.method, **kw)
    if cfg.tower == "generalized":
        return build_generalized_schori_tower(cfg.n, cfg.variant, K, **kw)
    if cfg.tower == "mixed":
        degrees = cfg.degrees or mixed_degree_sequence(max(K, 10))
        return build_mixed_tower(degrees, K=min(K, len(degrees)), **kw)
    raise ConfigError(f"unknown tower {cfg.tower!r}")


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        tower=args.tower,
        levels=args.levels,
        method=args.method,
        n=args.n,
        variant=args.variant,
        degrees=tuple(int(x) for x in args.degrees.split(",")) if args.degrees else None,
        policy=getattr(args, "policy", "id"),
        r_schedule=tuple(int(x) for x in args.r.split(",")) if getattr(args, "r", None) else (2, 4, 8, 16),
        R_factor=getattr(args, "R_factor", 4),
        confirm=getattr(args, "confirm", 2),
        budget=getattr(args, "budget", 20),
        samples=getattr(args, "samples", 100),
        seed=getattr(args, "seed", None),
        level=getattr(args, "level", None),
        fmt=args.format,
        out=args.out,
        strict=args.strict,
        max_level=args.max_level,
    )
    return cfg.validate()


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="solends", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_levels=6):
        p.add_argument("--tower", required=True)
        p.add_argument("--levels", type=int, default=default_levels, help="eagerly built levels")
        p.add_argument("--method", default="voltage", choices=("voltage", "folding"))
        p.add_argument("--n", dest="n", type=int, default=1, help="handle parameter for generalized towers")
        p.add_argument("--variant", default="4n", help="generalized variant: 4n or 4n+2")
        p.add_argument("--degrees", default=None, help="mixed tower degree sequence, e.g. 5,3,3,5")
        p.add_argument("--format", default="table", choices=("table", "json", "dot"))
        p.add_argument("--out", default=None, help=f"output path (default: ${RunConfig().out or 'SOLENDS_OUT'} or cwd)")
        p.add_argument("--strict", action="store_true")
        p.add_argument("--max-level", dest="max_level", type=int, default=None)
        p.add_argument("--seed", default=None)

    p = sub.add_parser("build", help="build levels and write them as JSON files")
    common(p, default_levels=3)

    p = sub.add_parser("ends", help="estimate the number of ends of a fiber point's leaf")
    common(p)
    p.add_argument("--policy", default="id")
    p.add_argument("--r", default=None, help="comma-separated inner radii, default 2,4,8,16")
    p.add_argument("--R-factor", dest="R_factor", type=int, default=4)
    p.add_argument("--confirm", type=int, default=2)

    p = sub.add_parser("classify", help="classify a fiber point (special/dyadic/flipflopping)")
    common(p)
    p.add_argument("--policy", default="id")
    p.add_argument("--budget", type=int, default=20)

    p = sub.add_parser("sample", help="sample random fiber points and aggregate verdicts")
    common(p)
    p.add_argument("--n-samples", dest="samples", type=int, default=100)
    p.add_argument("--budget", type=int, default=20)

    p = sub.add_parser("export", help="export one level graph as dot or json")
    common(p)
    p.add_argument("--level", type=int, required=True)
    return parser


def run_cli(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _dispatch(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LevelBudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3 if cfg.strict else 0


def _dispatch(cfg: RunConfig) -> int:
    tower = tower_from_config(cfg)
    if cfg.command == "build":
        outdir = cfg.out_dir()
        os.makedirs(outdir, exist_ok=True)
        for k in range(cfg.levels + 1):
            path = os.path.join(outdir, f"level_{k}.json")
            with open(path, "w") as fh:
                fh.write(export_graph(tower.level(k), "json"))
            print(path)
        return 0

    if cfg.command == "export":
        fmt = cfg.fmt if cfg.fmt in ("dot", "json") else "json"
        text = export_graph(tower.level(cfg.level), fmt)
        _emit(text, cfg)
        return 0

    if cfg.command == "ends":
        point = FiberPoint(tower, make_policy(cfg.policy, tower))
        try:
            report = estimate_ends(
                point,
                r_schedule=cfg.r_schedule,
                R_factor=cfg.R_factor,
                confirm=cfg.confirm,
                max_level=cfg.max_level,
            )
        except LevelBudgetError as exc:
            print(f"unstable: {exc}")
            return 3 if cfg.strict else 0
        _emit(export_report(report, _report_fmt(cfg)), cfg)
        if cfg.strict and not report.stable:
            return 3
        return 0

    if cfg.command == "classify":
        point = FiberPoint(tower, make_policy(cfg.policy, tower))
        trace = classify_fiber_point(point, budget=cfg.budget)
        _emit(export_report(trace, _report_fmt(cfg)), cfg)
        if cfg.strict and trace.verdict == "undetermined":
            return 3
        return 0

    if cfg.command == "sample":
        report = sample_fiber_points(tower, cfg.samples, cfg.seed, budget=cfg.budget)
        _emit(export_report(report, _report_fmt(cfg)), cfg)
        bad = report.ends_histogram.get("unstable", 0) + report.class_histogram.get("undetermined", 0)
        if cfg.strict and bad:
            return 3
        return 0

    raise ConfigError(f"unknown command {cfg.command!r}")


def _report_fmt(cfg: RunConfig) -> str:
    return "json" if cfg.fmt == "json" else "table"


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out and cfg.command != "build":
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    code = run_cli(argv)
    if argv is None:
        sys.exit(code)
    return code
