"""Executes the checks of a scenario and writes the run artifacts."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import verify
from .certify import Region, certify_region
from .config import ConfigError, ScenarioConfig
from .measures import NumericsConfig, functional_B_curve, make_density, measure_curve
from .verify import Report, verdict_of

CSV_COLUMNS = ["check", "params_digest", "lhs", "lhs_err", "rhs", "rhs_err",
               "margin", "verdict"]


def _numerics(cfg: ScenarioConfig, entry: dict, dim: int) -> NumericsConfig:
    num = NumericsConfig(seed=int(entry.get("seed", cfg.seed)),
                         tolerance_scale=cfg.tolerance_scale)
    if "resolution" in entry:
        num = num.with_resolution(dim, int(entry["resolution"]))
    return num


def _density_or_indicator(cfg: ScenarioConfig, ref):
    if isinstance(ref, dict):
        return make_density("uniform", body=cfg.build_body(ref["indicator_of"]))
    return cfg.build_density(ref)


def run_check(cfg: ScenarioConfig, entry: dict) -> list[Report]:
    """Run one materialized check entry and return its reports."""
    kind = entry["check"]
    if kind == "check_bmi":
        a, b = cfg.build_body(entry["a"]), cfg.build_body(entry["b"])
        mu = cfg.build_density(entry["density"])
        num = _numerics(cfg, entry, a.dim)
        reports = verify.check_bmi(a, b, mu, entry["p"], entry["lambdas"], num)
    elif kind == "check_bmi_mset":
        bodies = [cfg.build_body(n) for n in entry["bodies"]]
        mu = cfg.build_density(entry["density"])
        num = _numerics(cfg, entry, bodies[0].dim)
        reports = [verify.check_bmi_mset(bodies, entry["weights"], mu, entry["p"], num)]
    elif kind == "check_inclusion":
        a, b = cfg.build_body(entry["a"]), cfg.build_body(entry["b"])
        num = _numerics(cfg, entry, a.dim)
        reports = [verify.check_inclusion(a, b, entry["p"], entry["lambda"],
                                          entry.get("samples", 10_000),
                                          int(entry.get("seed", cfg.seed)), num)]
    elif kind == "check_plus1_is_minkowski":
        a, b = cfg.build_body(entry["a"]), cfg.build_body(entry["b"])
        num = _numerics(cfg, entry, a.dim)
        reports = [verify.check_plus1_is_minkowski(a, b, entry["lambda"], num)]
    elif kind == "check_firey_corollary":
        a, b = cfg.build_body(entry["a"]), cfg.build_body(entry["b"])
        mu = cfg.build_density(entry["density"])
        num = _numerics(cfg, entry, a.dim)
        reports = verify.check_firey_corollary(a, b, mu, entry["p"], entry["lambdas"], num)
    elif kind in ("check_power_dilation_concavity", "check_dilation_concavity"):
        a = cfg.build_body(entry["body"])
        mu = cfg.build_density(entry["density"])
        num = _numerics(cfg, entry, a.dim)
        fn = (verify.check_power_dilation_concavity
              if kind == "check_power_dilation_concavity"
              else verify.check_dilation_concavity)
        reports = [fn(a, mu, entry["p"], entry["t_range"],
                      entry.get("triples", 50), num,
                      seed=int(entry.get("seed", cfg.seed)))]
    elif kind == "check_gaussian_improvement":
        a, b = cfg.build_body(entry["a"]), cfg.build_body(entry["b"])
        num = _numerics(cfg, entry, a.dim)
        reports = verify.check_gaussian_improvement(a, b, entry["gamma"],
                                                    entry["lambdas"], num)
    elif kind == "check_B_property":
        mu = cfg.build_density(entry["density"])
        a = cfg.build_body(entry["body"])
        num = _numerics(cfg, entry, a.dim)
        reports = [verify.check_B_property(mu, a, entry["t_range"],
                                           entry.get("triples", 40), num,
                                           seed=int(entry.get("seed", cfg.seed)))]
    elif kind == "check_functional_B":
        f = _density_or_indicator(cfg, entry["f"])
        g = _density_or_indicator(cfg, entry["g"])
        num = _numerics(cfg, entry, f.dim)
        reports = [verify.check_functional_B(f, g, entry["t_range"],
                                             entry.get("triples", 40), num,
                                             seed=int(entry.get("seed", cfg.seed)))]
    elif kind == "uhrin_functional_check":
        f = _density_or_indicator(cfg, entry["f"])
        g = _density_or_indicator(cfg, entry["g"])
        num = NumericsConfig(seed=int(entry.get("seed", cfg.seed)),
                             tolerance_scale=cfg.tolerance_scale)
        reports = [verify.uhrin_functional_check(
            f, g, entry["alpha"], entry["p"], entry["lambda"],
            entry["f_box"], entry["g_box"], num,
            resolution=entry.get("resolution"))]
    elif kind == "lift_to_uniform":
        pot = cfg.build_potential(entry["potential"])
        reports = [verify.check_lifting(pot, entry["ps"], entry["box"],
                                        entry.get("max_final_distance", 0.01),
                                        entry.get("grid", 129),
                                        int(entry.get("seed", cfg.seed)))]
    elif kind == "certify_region":
        pot = cfg.build_potential(entry["potential"])
        spec = entry["region"]
        region = Region(spec["kind"], radius=spec.get("radius"),
                        bounds=tuple(spec["bounds"]) if "bounds" in spec else None)
        cert = certify_region(pot, entry["gamma"], region,
                              seed=int(entry.get("seed", cfg.seed)))
        expect = entry.get("expect", "certified")
        matched = cert.verdict == expect
        margin = 1.0 if matched else -1.0
        reports = [Report(
            check="certify_region", point=cert.region,
            params={"potential": entry["potential"], "gamma": float(entry["gamma"]),
                    "region": cert.region, "expect": expect,
                    "seed": int(entry.get("seed", cfg.seed))},
            lhs=cert.max_eigenvalue, lhs_error=0.0, rhs=cert.tolerance, rhs_error=0.0,
            margin=margin, tolerance=0.0, verdict="pass" if matched else "fail",
            method="scan", resolution=cert.points_scanned,
            seed=int(entry.get("seed", cfg.seed)),
            notes={"certificate": cert.verdict, "witness": cert.witness,
                   "max_eigenvalue": cert.max_eigenvalue,
                   "at_boundary": cert.at_boundary},
        )]
    elif kind == "scan_log_bm":
        reports = [verify.scan_log_bm(
            lam_grid=entry.get("lam_grid", (0.3, 0.5, 0.7)),
            budget=entry.get("budget", 300),
            seed=int(entry.get("seed", cfg.seed)),
            harmonics=entry.get("harmonics", 3),
            n_dirs=entry.get("directions", 256),
            restarts=entry.get("restarts", 6))]
    else:
        raise ConfigError(f"checks.{kind}", f"no runner for check {kind!r}")
    section = entry.get("section", kind)
    for r in reports:
        r.notes.setdefault("section", section)
    return reports


def run_all(cfg: ScenarioConfig, jobs: int = 1) -> list[Report]:
    """Run every check; reports are merged in config order regardless of
    the number of workers."""
    if jobs <= 1:
        out = []
        for entry in cfg.checks:
            out.extend(run_check(cfg, entry))
        return out
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(run_check, cfg, entry) for entry in cfg.checks]
        out = []
        for fut in futures:
            out.extend(fut.result())
        return out


def summarize(reports: list[Report]) -> str:
    """Section-by-section text table of pass/fail/boundary counts."""
    sections = {}
    for r in reports:
        sec = r.notes.get("section", r.check)
        row = sections.setdefault(sec, {"pass": 0, "fail": 0, "boundary": 0,
                                        "worst": math.inf})
        row[r.verdict] += 1
        row["worst"] = min(row["worst"], r.margin)
    width = max([len(s) for s in sections] + [7])
    lines = [f"{'section':<{width}}  {'pass':>5} {'fail':>5} {'bound':>5}  worst margin",
             "-" * (width + 32)]
    for sec, row in sections.items():
        lines.append(f"{sec:<{width}}  {row['pass']:>5} {row['fail']:>5} "
                     f"{row['boundary']:>5}  {row['worst']:.3e}")
    total = {"pass": 0, "fail": 0, "boundary": 0}
    for row in sections.values():
        for k in total:
            total[k] += row[k]
    lines.append("-" * (width + 32))
    lines.append(f"{'total':<{width}}  {total['pass']:>5} {total['fail']:>5} "
                 f"{total['boundary']:>5}")
    status = "FAIL" if total["fail"] else "OK"
    lines.append(f"overall: {status} ({len(sections)} sections, {len(reports)} reports)")
    return "\n".join(lines) + "\n"


def write_artifacts(cfg: ScenarioConfig, reports: list[Report], out_dir) -> dict:
    """Write report.json, detail.csv and summary.txt; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "version": 1,
        "config_digest": cfg.digest(),
        "seed": cfg.seed,
        "reports": [r.to_dict() for r in reports],
    }
    report_path = out / "report.json"
    report_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    detail_path = out / "detail.csv"
    with detail_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in reports:
            writer.writerows(r.csv_rows())
    summary_path = out / "summary.txt"
    summary_path.write_text(summarize(reports))
    return {"report": report_path, "detail": detail_path, "summary": summary_path}


def exit_status(reports: list[Report], strict: bool = False) -> int:
    bad = any(r.verdict == "fail" for r in reports)
    if strict:
        bad = bad or any(r.verdict == "boundary" for r in reports)
    return 1 if bad else 0


def emit_curve(cfg: ScenarioConfig, name: str, out_dir) -> Path:
    """Compute a configured curve and write `<name>.csv` (t, value, error)."""
    if name not in cfg.curves:
        raise ConfigError(f"curves.{name}", "curve name does not resolve")
    spec = cfg.curves[name]
    grid = spec["t_grid"]
    ts = np.linspace(float(grid["start"]), float(grid["stop"]), int(grid["count"]))
    if spec["kind"] == "measure_curve":
        body = cfg.build_body(spec["body"])
        mu = cfg.build_density(spec["density"])
        num = _numerics(cfg, spec, body.dim)
        points = measure_curve(body, mu, spec["transform"], ts, num,
                               p=spec.get("p"))
    else:
        f = _density_or_indicator(cfg, spec["f"])
        g = _density_or_indicator(cfg, spec["g"])
        num = _numerics(cfg, spec, f.dim)
        points = list(functional_B_curve(f, g, ts, num).points)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{name}.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "value", "abs_error"])
        for t, est in points:
            writer.writerow([t, est.value, est.abs_error])
    return path
