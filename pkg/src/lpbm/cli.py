"""Command-line front end: run scenario suites, list checks, emit curves."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import ConfigError, load_config, resolve_config_path
from .runner import emit_curve, exit_status, run_all, write_artifacts
from .verify import CHECKS, EXPLORATORY


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpbm",
        description="Numerical checks for Minkowski-type combination "
                    "inequalities of convex measures.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run every check of a scenario config")
    run_p.add_argument("config", help="path to a scenario JSON (or a bundled name "
                                      "such as 'acceptance')")
    run_p.add_argument("--strict", action="store_true",
                       help="treat boundary verdicts as failures")
    run_p.add_argument("--jobs", type=int, default=1, metavar="K",
                       help="run up to K checks concurrently")
    run_p.add_argument("--seed", type=int, default=None,
                       help="override the scenario seed")
    run_p.add_argument("--out", default=None, metavar="DIR",
                       help="override the output directory")
    run_p.add_argument("--no-figures", action="store_true",
                       help="skip figure rendering")

    sub.add_parser("list-checks", help="list the available checks")

    curve_p = sub.add_parser("emit-curve", help="emit one configured curve as CSV")
    curve_p.add_argument("config")
    curve_p.add_argument("curve", help="curve name from the config")
    curve_p.add_argument("--out", default=None, metavar="DIR")
    curve_p.add_argument("--no-figures", action="store_true")
    return parser


def _cmd_run(args) -> int:
    cfg = load_config(resolve_config_path(args.config))
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=int(args.seed))
        for entry in cfg.checks:
            if "seed" in entry:
                entry["seed"] = int(args.seed)
    out_dir = args.out or cfg.output_dir
    reports = run_all(cfg, jobs=max(1, args.jobs))
    paths = write_artifacts(cfg, reports, out_dir)
    if not args.no_figures:
        from .figures import render_run_figures

        render_run_figures(reports, out_dir)
    sys.stdout.write(paths["summary"].read_text())
    return exit_status(reports, strict=args.strict)


def _cmd_list_checks() -> int:
    width = max(len(c.name) for c in CHECKS) + 2
    print(f"available checks ({len(CHECKS)}):")
    for c in CHECKS:
        print(f"  {c.name:<{width}} {c.anchor}")
    print()
    print("exploratory / auxiliary (not acceptance gated):")
    for c in EXPLORATORY:
        print(f"  {c.name:<{width}} {c.anchor}")
    return 0


def _cmd_emit_curve(args) -> int:
    cfg = load_config(resolve_config_path(args.config))
    out_dir = args.out or cfg.output_dir
    path = emit_curve(cfg, args.curve, out_dir)
    if not args.no_figures:
        from .figures import render_curve_figure

        render_curve_figure(path)
    print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "list-checks":
            return _cmd_list_checks()
        return _cmd_emit_curve(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
