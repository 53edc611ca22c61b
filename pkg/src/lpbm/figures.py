"""Figure rendering for run artifacts (margins per section, curves)."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_VERDICT_COLORS = {"pass": "#2a7e3b", "boundary": "#c78a00", "fail": "#b22222"}


def _margin_panel(ax, rows, title):
    xs = range(len(rows))
    margins = [r["margin"] for r in rows]
    tols = [r["tolerance"] for r in rows]
    colors = [_VERDICT_COLORS.get(r["verdict"], "#555555") for r in rows]
    ax.fill_between(xs, [-t for t in tols], tols, color="#cccccc", alpha=0.5,
                    label="tolerance band", step="mid")
    ax.scatter(xs, margins, c=colors, s=18, zorder=3)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_title(title, fontsize=9)
    ax.set_ylabel("margin")


def render_run_figures(reports, out_dir) -> list[Path]:
    """One margin figure per section; returns the written paths."""
    out = Path(out_dir) / "figures"
    out.mkdir(parents=True, exist_ok=True)
    sections = {}
    for r in reports:
        sec = r.notes.get("section", r.check)
        rows = sections.setdefault(sec, [])
        triples = r.notes.get("triples")
        if triples:
            rows.extend({"margin": t["margin"], "tolerance": t["tolerance"],
                         "verdict": t["verdict"]} for t in triples)
        else:
            rows.append({"margin": r.margin, "tolerance": r.tolerance,
                         "verdict": r.verdict})
    paths = []
    for sec, rows in sections.items():
        fig, ax = plt.subplots(figsize=(6.0, 3.2), dpi=110)
        _margin_panel(ax, rows, f"{sec}: margin per report point")
        ax.set_xlabel("report point")
        fig.tight_layout()
        path = out / f"{sec}.png"
        fig.savefig(path)
        plt.close(fig)
        paths.append(path)
    return paths


def render_curve_figure(csv_path, out_path=None) -> Path:
    """Plot an emitted (t, value, error) curve next to its CSV."""
    csv_path = Path(csv_path)
    ts, vals, errs = [], [], []
    with csv_path.open() as fh:
        for row in csv.DictReader(fh):
            ts.append(float(row["t"]))
            vals.append(float(row["value"]))
            errs.append(float(row["abs_error"]))
    out_path = Path(out_path) if out_path else csv_path.with_suffix(".png")
    fig, ax = plt.subplots(figsize=(6.0, 3.2), dpi=110)
    ax.errorbar(ts, vals, yerr=errs, fmt="-o", markersize=3, linewidth=1.0,
                color="#1f4e8c", ecolor="#888888", capsize=2)
    ax.set_xlabel("t")
    ax.set_ylabel("value")
    ax.set_title(csv_path.stem, fontsize=9)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path
