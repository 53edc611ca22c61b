"""Numerical verification of the combination inequalities and concavity
statements, producing structured pass/fail reports.

Every check compares a measured left-hand side against a mean of measured
right-hand values; the margin is lhs - rhs and the tolerance defaults to
3x the combined absolute-error estimate (plus a round-off floor). Margins
inside the tolerance band are reported as "boundary", never as silent
passes, because several statements are exact equalities for homothets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .bodies import (
    Body,
    CombinationSpec,
    GridSet,
    TrigSupportBody,
    coord_combine,
    firey_combine,
    hausdorff_distance,
    minkowski_combine,
    octant_directions,
    wulff_area,
)
from .certify import gaussian_improved_exponent
from .extreal import ExtReal, NEG_INF, ZERO
from .means import exponent_compare, gamma_compose, p_mean, p_mean_grid, p_mean_m
from .measures import (
    Density,
    MeasureEstimate,
    NumericsConfig,
    Potential,
    functional_B_curve,
    make_density,
    measure,
    measure_curve,
)

_ROUNDOFF = 1e-12
_UHRIN_RESOLUTION = {1: 2048, 2: 64, 3: 16}


# ---------------------------------------------------------------------------
# reports


def combined_tolerance(lhs: float, lhs_err: float, rhs: float, rhs_err: float,
                       scale: float = 3.0) -> float:
    return scale * (lhs_err + rhs_err) + _ROUNDOFF * (abs(lhs) + abs(rhs) + 1.0)


def verdict_of(margin: float, tolerance: float) -> str:
    if margin < -tolerance:
        return "fail"
    if tolerance > 0.0 and margin <= tolerance:
        return "boundary"
    return "pass"


@dataclass
class Report:
    """Outcome of one checked inequality at one parameter point."""

    check: str
    point: str
    params: dict
    lhs: float
    lhs_error: float
    rhs: float
    rhs_error: float
    margin: float
    tolerance: float
    verdict: str
    method: str = "grid"
    resolution: int | None = None
    seed: int | None = None
    notes: dict = field(default_factory=dict)

    @property
    def digest(self) -> str:
        parts = [f"{k}={_compact(v)}" for k, v in self.params.items()]
        return "|".join(parts)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "point": self.point,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "lhs": self.lhs,
            "lhs_error": self.lhs_error,
            "rhs": self.rhs,
            "rhs_error": self.rhs_error,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "method": self.method,
            "resolution": self.resolution,
            "seed": self.seed,
            "notes": _jsonable(self.notes),
        }

    def csv_rows(self) -> list[list]:
        """Flat rows (one per parameter point); concavity checks expand to
        one row per midpoint triple."""
        triples = self.notes.get("triples")
        if not triples:
            return [[self.check, self.digest, self.lhs, self.lhs_error,
                     self.rhs, self.rhs_error, self.margin, self.verdict]]
        rows = []
        for tr in triples:
            digest = self.digest + f"|triple=({tr['t1']:g},{tr['t2']:g})"
            rows.append([self.check, digest, tr["lhs"], tr["lhs_error"],
                         tr["rhs"], tr["rhs_error"], tr["margin"], tr["verdict"]])
        return rows


def _compact(v) -> str:
    if isinstance(v, float):
        return format(v, "g")
    if isinstance(v, (tuple, list)):
        return "(" + ",".join(_compact(x) for x in v) + ")"
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, ExtReal):
        return str(v)
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    return v


def mean_with_error(exponent, lam: float, a: MeasureEstimate, b: MeasureEstimate
                    ) -> tuple[float, float]:
    """M_exponent of two estimates with the error propagated through the
    monotone dependence on each operand (corner evaluation)."""
    c = p_mean(exponent, lam, a.value, b.value)
    lo = p_mean(exponent, lam, max(a.value - a.abs_error, 0.0),
                max(b.value - b.abs_error, 0.0))
    hi = p_mean(exponent, lam, a.value + a.abs_error, b.value + b.abs_error)
    return c, max(hi - c, c - lo, 0.0)


# ---------------------------------------------------------------------------
# midpoint triples


@dataclass(frozen=True)
class TripleGrid:
    """Midpoint triples (t1, (t1+t2)/2, t2) inside a declared range."""

    triples: tuple

    @classmethod
    def from_range(cls, t_range: Sequence[float], count: int, seed: int = 0
                   ) -> "TripleGrid":
        lo, hi = float(t_range[0]), float(t_range[1])
        if not hi > lo:
            raise ValueError(f"empty t-range {t_range}")
        span = hi - lo
        k1 = max(count // 2, 1)
        golden = (math.sqrt(5.0) - 1.0) / 2.0
        triples = []
        for j in range(k1):
            c = lo + (j + 0.5) / k1 * span
            w = min(c - lo, hi - c) * (0.25 + 0.65 * ((j * golden) % 1.0))
            if w <= 0:
                continue
            t1, t2 = c - w, c + w
            triples.append((t1, (t1 + t2) / 2.0, t2))
        rng = np.random.default_rng(seed)
        while len(triples) < count:
            t1, t2 = np.sort(rng.uniform(lo, hi, size=2))
            if t2 - t1 < 1e-9 * span:
                continue
            t1, t2 = float(t1), float(t2)
            triples.append((t1, (t1 + t2) / 2.0, t2))
        return cls(tuple(triples[:count]))

    def all_nodes(self) -> list[float]:
        seen = {}
        for tr in self.triples:
            for t in tr:
                seen[t] = None
        return sorted(seen)


def _concavity_report(name: str, params: dict, exponent, node_map: Mapping[float, MeasureEstimate],
                      triples: TripleGrid, cfg: NumericsConfig, notes: dict) -> Report:
    rows = []
    worst = None
    n_fail = 0
    for t1, tm, t2 in triples.triples:
        fm = node_map[tm]
        rhs, rhs_err = mean_with_error(exponent, 0.5, node_map[t1], node_map[t2])
        margin = fm.value - rhs
        tol = combined_tolerance(fm.value, fm.abs_error, rhs, rhs_err, cfg.tolerance_scale)
        v = verdict_of(margin, tol)
        n_fail += v == "fail"
        row = {"t1": t1, "t_mid": tm, "t2": t2, "lhs": fm.value, "lhs_error": fm.abs_error,
               "rhs": rhs, "rhs_error": rhs_err, "margin": margin, "tolerance": tol,
               "verdict": v}
        rows.append(row)
        if worst is None or margin - tol < worst["margin"] - worst["tolerance"]:
            worst = row
    verdict = "fail" if n_fail else worst["verdict"]
    notes = dict(notes)
    notes["triples"] = rows
    notes["violations"] = n_fail
    notes["exponent"] = str(ExtReal.of(exponent))
    some = next(iter(node_map.values()))
    return Report(
        check=name, point=f"t in [{params.get('t_range')}]", params=params,
        lhs=worst["lhs"], lhs_error=worst["lhs_error"], rhs=worst["rhs"],
        rhs_error=worst["rhs_error"], margin=worst["margin"],
        tolerance=worst["tolerance"], verdict=verdict, method=some.method,
        resolution=some.resolution, seed=cfg.seed, notes=notes,
    )


# ---------------------------------------------------------------------------
# combination inequality checks


def check_bmi(a: Body, b: Body, mu: Density, p, lam_grid: Sequence[float],
              cfg: NumericsConfig | None = None) -> list[Report]:
    """Coordinate-wise combination inequality
    mu((1-lam) A +_p lam B) >= M_gamma^lam(mu(A), mu(B))."""
    cfg = cfg or NumericsConfig()
    p_vec = tuple(ExtReal.of(x) for x in p)
    gamma = gamma_compose(p_vec, mu.alpha)  # admissibility enforced before integration
    est_a = measure(a, mu, cfg)
    est_b = measure(b, mu, cfg)
    n = cfg.resolution_for(a.dim)
    cross_exp = ZERO if gamma.value > 0 else NEG_INF
    reports = []
    for lam in lam_grid:
        lam = float(lam)
        grid = coord_combine(CombinationSpec.coord(a, b, lam, p_vec), n)
        lhs = measure(grid, mu, cfg)
        rhs, rhs_err = mean_with_error(gamma, lam, est_a, est_b)
        margin = lhs.value - rhs
        tol = combined_tolerance(lhs.value, lhs.abs_error, rhs, rhs_err, cfg.tolerance_scale)
        notes = {
            "gamma": str(gamma),
            "mu_a": est_a.value, "mu_b": est_b.value,
            "rhs_at_weaker_exponent": p_mean(cross_exp, lam, est_a.value, est_b.value),
        }
        if gamma.is_neg_inf:
            notes["boundary_exponent"] = True
        reports.append(Report(
            check="check_bmi", point=f"lam={lam:g}",
            params={"a": a.describe(), "b": b.describe(), "density": mu.describe(),
                    "p": tuple(str(x) for x in p_vec), "lam": lam, "N": n, "seed": cfg.seed},
            lhs=lhs.value, lhs_error=lhs.abs_error, rhs=rhs, rhs_error=rhs_err,
            margin=margin, tolerance=tol, verdict=verdict_of(margin, tol),
            method=lhs.method, resolution=n, seed=cfg.seed, notes=notes,
        ))
    return reports


def check_bmi_mset(bodies: Sequence[Body], weights: Sequence[float], mu: Density,
                   p, cfg: NumericsConfig | None = None) -> Report:
    """m-operand extension: the combination is built left-associated and
    compared against the m-term gamma-mean of the measures."""
    cfg = cfg or NumericsConfig()
    if len(bodies) < 2:
        raise ValueError("need at least two operands")
    if len(bodies) != len(weights):
        raise ValueError("weights and bodies must have equal length")
    total = math.fsum(float(w) for w in weights)
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"weights must sum to 1, got {total!r}")
    p_vec = tuple(ExtReal.of(x) for x in p)
    gamma = gamma_compose(p_vec, mu.alpha)
    n = cfg.resolution_for(bodies[0].dim)
    combined: Body = bodies[0]
    acc = float(weights[0])
    for body, w in zip(bodies[1:], weights[1:]):
        lam = float(w) / (acc + float(w))
        combined = coord_combine(CombinationSpec.coord(combined, body, lam, p_vec), n)
        acc += float(w)
    lhs = measure(combined, mu, cfg)
    ests = [measure(body, mu, cfg) for body in bodies]
    rhs = p_mean_m(gamma, weights, [e.value for e in ests])
    lo = p_mean_m(gamma, weights, [max(e.value - e.abs_error, 0.0) for e in ests])
    hi = p_mean_m(gamma, weights, [e.value + e.abs_error for e in ests])
    rhs_err = max(hi - rhs, rhs - lo, 0.0)
    margin = lhs.value - rhs
    tol = combined_tolerance(lhs.value, lhs.abs_error, rhs, rhs_err, cfg.tolerance_scale)
    return Report(
        check="check_bmi_mset", point=f"m={len(bodies)}",
        params={"bodies": tuple(b.describe() for b in bodies),
                "weights": tuple(float(w) for w in weights),
                "density": mu.describe(), "p": tuple(str(x) for x in p_vec),
                "N": n, "seed": cfg.seed},
        lhs=lhs.value, lhs_error=lhs.abs_error, rhs=rhs, rhs_error=rhs_err,
        margin=margin, tolerance=tol, verdict=verdict_of(margin, tol),
        method=lhs.method, resolution=n, seed=cfg.seed,
        notes={"gamma": str(gamma), "measures": [e.value for e in ests]},
    )


def check_inclusion(a: Body, b: Body, p: float, lam: float, samples: int = 10_000,
                    seed: int = 0, cfg: NumericsConfig | None = None) -> Report:
    """Containment of the coordinate-wise combination in the Firey body.

    Samples marked cells of the grid combination, shrinks each center one
    cell toward the origin (guaranteeing true membership by downward
    closure), and demands 100% containment in the halfspace cut.
    """
    cfg = cfg or NumericsConfig()
    p = float(p)
    n = cfg.resolution_for(a.dim)
    p_vec = (p,) * a.dim
    grid = coord_combine(CombinationSpec.coord(a, b, lam, p_vec), n)
    wulff = firey_combine(CombinationSpec.firey(a, b, lam, p),
                          octant_directions(a.dim, cfg.directions_for(a.dim)))
    cells = np.argwhere(grid.indicator)
    rng = np.random.default_rng(seed)
    chosen = cells[rng.integers(0, len(cells), size=int(samples))]
    pts = np.maximum((chosen - 0.5) * grid.cell, 0.0)
    inside = wulff.contains_many(pts)
    frac = float(inside.mean())
    margin = frac - 1.0
    return Report(
        check="check_inclusion", point=f"p={p:g},lam={lam:g}",
        params={"a": a.describe(), "b": b.describe(), "p": p, "lam": float(lam),
                "samples": int(samples), "N": n, "seed": seed},
        lhs=frac, lhs_error=0.0, rhs=1.0, rhs_error=0.0, margin=margin,
        tolerance=0.0, verdict=verdict_of(margin, 0.0), method="sampling",
        resolution=n, seed=seed,
        notes={"outside": int(samples - inside.sum()),
               "directions": len(octant_directions(a.dim, cfg.directions_for(a.dim)))},
    )


def check_plus1_is_minkowski(a: Body, b: Body, lam: float,
                             cfg: NumericsConfig | None = None) -> Report:
    """Hausdorff agreement of the exponent-one coordinate combination with
    the classical Minkowski sum, within a two-cell band."""
    cfg = cfg or NumericsConfig()
    n = cfg.resolution_for(a.dim)
    grid = coord_combine(CombinationSpec.coord(a, b, lam, (1.0,) * a.dim), n)
    mk = minkowski_combine(a, b, lam, octant_directions(a.dim, cfg.directions_for(a.dim)))
    dirs = octant_directions(a.dim, cfg.directions_for(a.dim))
    dist = hausdorff_distance(grid, mk, dirs)
    band = 2.0 * float(np.linalg.norm(grid.cell))
    margin = band - dist
    return Report(
        check="check_plus1_is_minkowski", point=f"lam={lam:g}",
        params={"a": a.describe(), "b": b.describe(), "lam": float(lam),
                "N": n, "seed": cfg.seed},
        lhs=band, lhs_error=0.0, rhs=dist, rhs_error=0.0, margin=margin,
        tolerance=0.0, verdict=verdict_of(margin, 0.0), method="support",
        resolution=n, seed=cfg.seed,
        notes={"hausdorff": dist, "cell_diagonal": float(np.linalg.norm(grid.cell)),
               "inequality": "allowed band >= observed distance"},
    )


def check_firey_corollary(a: Body, b: Body, mu: Density, p: float,
                          lam_grid: Sequence[float],
                          cfg: NumericsConfig | None = None) -> list[Report]:
    """Firey combination inequality with gamma = (n/p + 1/alpha)^(-1).

    The halfspace cut is an outer body, so its measure is biased upward;
    the verdict therefore comes from the conservative lower bound through
    the contained coordinate-wise combination, with the outer measures at
    two direction counts reported for the trend.
    """
    cfg = cfg or NumericsConfig()
    p = float(p)
    dim = a.dim
    gamma = gamma_compose((p,) * dim, mu.alpha)
    est_a = measure(a, mu, cfg)
    est_b = measure(b, mu, cfg)
    n = cfg.resolution_for(dim)
    m_dirs = cfg.directions_for(dim)
    reports = []
    for lam in lam_grid:
        lam = float(lam)
        lower = measure(coord_combine(CombinationSpec.coord(a, b, lam, (p,) * dim), n), mu, cfg)
        spec = CombinationSpec.firey(a, b, lam, p)
        outer1 = measure(firey_combine(spec, octant_directions(dim, m_dirs)), mu, cfg)
        outer2 = measure(firey_combine(spec, octant_directions(dim, 2 * m_dirs)), mu, cfg)
        rhs, rhs_err = mean_with_error(gamma, lam, est_a, est_b)
        margin = lower.value - rhs
        tol = combined_tolerance(lower.value, lower.abs_error, rhs, rhs_err, cfg.tolerance_scale)
        trend_ok = outer2.value <= outer1.value + outer1.abs_error + outer2.abs_error + _ROUNDOFF
        outer_ok = (outer1.value - rhs >= -tol) and (outer2.value - rhs >= -tol)
        verdict = verdict_of(margin, tol)
        if verdict != "fail" and not outer_ok:
            verdict = "fail"
        reports.append(Report(
            check="check_firey_corollary", point=f"lam={lam:g}",
            params={"a": a.describe(), "b": b.describe(), "density": mu.describe(),
                    "p": p, "lam": lam, "N": n, "directions": m_dirs, "seed": cfg.seed},
            lhs=lower.value, lhs_error=lower.abs_error, rhs=rhs, rhs_error=rhs_err,
            margin=margin, tolerance=tol, verdict=verdict, method=lower.method,
            resolution=n, seed=cfg.seed,
            notes={"gamma": str(gamma), "outer_measure": outer1.value,
                   "outer_measure_refined": outer2.value, "outer_trend_ok": bool(trend_ok),
                   "lhs_is_lower_bound": True},
        ))
    return reports


# ---------------------------------------------------------------------------
# dilation concavity checks


def check_power_dilation_concavity(a: Body, mu: Density, p: float,
                                   t_range: Sequence[float], triples: int = 50,
                                   cfg: NumericsConfig | None = None,
                                   seed: int | None = None) -> Report:
    """gamma-concavity of t -> mu(t^(1/p) A) for negative density exponents."""
    cfg = cfg or NumericsConfig()
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    if mu.alpha.value >= 0:
        raise ValueError(
            "out of hypothesis: the density exponent must be negative "
            "(use check_B_property for log-concave densities)")
    gamma = gamma_compose((p,) * a.dim, mu.alpha)
    if float(t_range[0]) <= 0:
        raise ValueError("power dilation needs a positive t-range")
    grid = TripleGrid.from_range(t_range, triples, cfg.seed if seed is None else seed)
    nodes = grid.all_nodes()
    node_map = dict(measure_curve(a, mu, "dilate_t_pow_inv_p", nodes, cfg, p=p))
    params = {"body": a.describe(), "density": mu.describe(), "p": p,
              "t_range": f"{t_range[0]:g},{t_range[1]:g}", "triples": triples,
              "N": cfg.resolution_for(a.dim), "seed": cfg.seed if seed is None else seed}
    return _concavity_report("check_power_dilation_concavity", params, gamma,
                             node_map, grid, cfg, {"gamma": str(gamma)})


def check_dilation_concavity(a: Body, mu: Density, p: float,
                             t_range: Sequence[float], triples: int = 50,
                             cfg: NumericsConfig | None = None,
                             seed: int | None = None) -> Report:
    """((1-p)/n + gamma)-concavity of t -> mu(t A), same hypotheses as the
    power-dilation variant."""
    cfg = cfg or NumericsConfig()
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    if mu.alpha.value >= 0:
        raise ValueError(
            "out of hypothesis: the density exponent must be negative "
            "(use check_B_property for log-concave densities)")
    gamma = gamma_compose((p,) * a.dim, mu.alpha)
    kappa = NEG_INF if gamma.is_neg_inf else ExtReal((1.0 - p) / a.dim + gamma.value)
    if float(t_range[0]) <= 0:
        raise ValueError("dilation needs a positive t-range")
    grid = TripleGrid.from_range(t_range, triples, cfg.seed if seed is None else seed)
    node_map = dict(measure_curve(a, mu, "dilate_t", grid.all_nodes(), cfg))
    cmp = exponent_compare(p, mu.alpha, a.dim)
    notes = {"gamma": str(gamma), "kappa": str(kappa),
             "stronger_than_ambient": cmp.satisfied,
             "ambient_exponent": str(cmp.ambient_exponent)}
    params = {"body": a.describe(), "density": mu.describe(), "p": p,
              "t_range": f"{t_range[0]:g},{t_range[1]:g}", "triples": triples,
              "N": cfg.resolution_for(a.dim), "seed": cfg.seed if seed is None else seed}
    return _concavity_report("check_dilation_concavity", params, kappa,
                             node_map, grid, cfg, notes)


def check_gaussian_improvement(a: Body, b: Body, gamma: float,
                               lam_grid: Sequence[float],
                               cfg: NumericsConfig | None = None) -> list[Report]:
    """Improved Gaussian concavity with exponent gamma/(1 + gamma n) for
    operands inside the ball of radius 1/sqrt(gamma)."""
    cfg = cfg or NumericsConfig()
    gamma = float(gamma)
    bound = 1.0 / math.sqrt(gamma)
    for name, body in (("A", a), ("B", b)):
        if body.out_radius > bound + 1e-12:
            raise ValueError(
                f"operand {name} (out_radius={body.out_radius:g}) escapes the "
                f"ball of radius 1/sqrt(gamma) = {bound:g}")
    mu = make_density("gaussian", dim=a.dim)
    expo = gaussian_improved_exponent(gamma, a.dim)
    est_a = measure(a, mu, cfg)
    est_b = measure(b, mu, cfg)
    dirs = octant_directions(a.dim, cfg.directions_for(a.dim))
    n = cfg.resolution_for(a.dim)
    reports = []
    for lam in lam_grid:
        lam = float(lam)
        comb = minkowski_combine(a, b, lam, dirs)
        lhs = measure(comb, mu, cfg)
        rhs, rhs_err = mean_with_error(expo, lam, est_a, est_b)
        margin = lhs.value - rhs
        tol = combined_tolerance(lhs.value, lhs.abs_error, rhs, rhs_err, cfg.tolerance_scale)
        reports.append(Report(
            check="check_gaussian_improvement", point=f"lam={lam:g}",
            params={"a": a.describe(), "b": b.describe(), "gamma": gamma,
                    "lam": lam, "N": n, "seed": cfg.seed},
            lhs=lhs.value, lhs_error=lhs.abs_error, rhs=rhs, rhs_error=rhs_err,
            margin=margin, tolerance=tol, verdict=verdict_of(margin, tol),
            method=lhs.method, resolution=n, seed=cfg.seed,
            notes={"exponent": expo, "radius_bound": bound},
        ))
    return reports


# ---------------------------------------------------------------------------
# (B)-property checks


def check_B_property(mu: Density, a: Body, t_range: Sequence[float], triples: int = 40,
                     cfg: NumericsConfig | None = None, seed: int | None = None) -> Report:
    """Midpoint log-concavity of t -> mu(e^t A) for a log-concave density."""
    cfg = cfg or NumericsConfig()
    if mu.alpha.value < 0:
        raise ValueError("the (B)-property check needs a log-concave density")
    grid = TripleGrid.from_range(t_range, triples, cfg.seed if seed is None else seed)
    nodes = grid.all_nodes()
    node_map = dict(measure_curve(a, mu, "dilate_exp_t", nodes, cfg))
    params = {"body": a.describe(), "density": mu.describe(),
              "t_range": f"{t_range[0]:g},{t_range[1]:g}", "triples": triples,
              "N": cfg.resolution_for(a.dim), "seed": cfg.seed if seed is None else seed}
    notes = {"curve": [(t, node_map[t].value, node_map[t].abs_error) for t in nodes]}
    return _concavity_report("check_B_property", params, ZERO, node_map, grid, cfg, notes)


def check_functional_B(f: Density, g: Density, t_range: Sequence[float], triples: int = 40,
                       cfg: NumericsConfig | None = None, seed: int | None = None) -> Report:
    """Midpoint log-concavity of t -> integral f(e^-t x) g(x) dx."""
    cfg = cfg or NumericsConfig()
    grid = TripleGrid.from_range(t_range, triples, cfg.seed if seed is None else seed)
    nodes = grid.all_nodes()
    curve = functional_B_curve(f, g, nodes, cfg)
    node_map = dict(curve.points)
    params = {"f": f.describe(), "g": g.describe(),
              "t_range": f"{t_range[0]:g},{t_range[1]:g}", "triples": triples,
              "N": cfg.resolution_for(f.dim), "seed": cfg.seed if seed is None else seed}
    notes = {"truncation_box": [float(x) for x in curve.truncation_box],
             "curve": [(t, node_map[t].value, node_map[t].abs_error) for t in nodes]}
    return _concavity_report("check_functional_B", params, ZERO, node_map, grid, cfg, notes)


# ---------------------------------------------------------------------------
# integral hypothesis sweep


def _octant_samples(mu: Density, box: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    dim = len(box)
    axes = [(np.arange(n) + 0.5) * box[i] / n for i in range(dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    return pts, mu(pts)


def _uhrin_integrals(f: Density, g: Density, alpha, p_vec, lam: float,
                     f_box: np.ndarray, g_box: np.ndarray, n: int) -> tuple[float, float, float]:
    dim = len(f_box)
    pf, fv = _octant_samples(f, f_box, n)
    pg, gv = _octant_samples(g, g_box, n)
    extent = np.array([p_mean(p_vec[i], lam, f_box[i], g_box[i]) for i in range(dim)])
    cell = extent / n
    h = np.zeros(n ** dim)
    strides = np.array([n ** (dim - 1 - i) for i in range(dim)], dtype=np.int64)
    rows = max(1, (1 << 21) // len(pg))
    for lo in range(0, len(pf), rows):
        pf_c, fv_c = pf[lo:lo + rows], fv[lo:lo + rows]
        flat_idx = np.zeros((len(pf_c), len(pg)), dtype=np.int64)
        for i in range(dim):
            z = p_mean_grid(p_vec[i], lam, pf_c[:, i][:, None], pg[:, i][None, :])
            flat_idx += np.minimum((z / cell[i]).astype(np.int64), n - 1) * strides[i]
        vals = p_mean_grid(alpha, lam, fv_c[:, None], gv[None, :])
        vals = np.where((fv_c[:, None] > 0) & (gv[None, :] > 0), vals, 0.0)
        fi = flat_idx.ravel()
        va = vals.ravel()
        order = np.argsort(fi, kind="stable")
        fi, va = fi[order], va[order]
        starts = np.flatnonzero(np.r_[True, fi[1:] != fi[:-1]])
        np.maximum.at(h, fi[starts], np.maximum.reduceat(va, starts))
    int_h = float(h.sum() * np.prod(cell))
    int_f = float(fv.sum() * np.prod(f_box / n))
    int_g = float(gv.sum() * np.prod(g_box / n))
    return int_h, int_f, int_g


def uhrin_functional_check(f: Density, g: Density, alpha, p, lam: float,
                           f_box, g_box, cfg: NumericsConfig | None = None,
                           resolution: int | None = None) -> Report:
    """Grid sweep of the integral hypothesis: build the minimal admissible
    h(z) = sup{M_alpha^lam(f(x), g(y)) : (1-lam)x +_p lam y in cell(z)} on
    the positive octant and verify int h >= M_gamma^lam(int f, int g).

    Pairs with f(x) g(y) = 0 are skipped, matching the measure-theoretic
    use where both factors are positive.
    """
    cfg = cfg or NumericsConfig()
    if f.dim != g.dim:
        raise ValueError("dimension mismatch between f and g")
    dim = f.dim
    p_vec = tuple(ExtReal.of(x) for x in p)
    if len(p_vec) != dim:
        raise ValueError("need one coordinate exponent per axis")
    alpha = ExtReal.of(alpha)
    gamma = gamma_compose(p_vec, alpha)
    lam = float(lam)
    f_box = np.asarray(f_box, dtype=float)
    g_box = np.asarray(g_box, dtype=float)
    n = int(resolution or _UHRIN_RESOLUTION.get(dim, 16))
    fine = _uhrin_integrals(f, g, alpha, p_vec, lam, f_box, g_box, n)
    coarse = _uhrin_integrals(f, g, alpha, p_vec, lam, f_box, g_box, max(n // 2, 2))
    if fine[1] <= 0 or fine[2] <= 0:
        raise ValueError("degenerate inputs: one factor has empty effective support")
    lhs_err = abs(fine[0] - coarse[0])
    rhs = p_mean(gamma, lam, fine[1], fine[2])
    rhs_err = abs(rhs - p_mean(gamma, lam, coarse[1], coarse[2]))
    margin = fine[0] - rhs
    tol = combined_tolerance(fine[0], lhs_err, rhs, rhs_err, cfg.tolerance_scale)
    return Report(
        check="uhrin_functional_check", point=f"lam={lam:g}",
        params={"f": f.describe(), "g": g.describe(), "alpha": str(alpha),
                "p": tuple(str(x) for x in p_vec), "lam": lam, "N": n,
                "f_box": tuple(float(x) for x in f_box),
                "g_box": tuple(float(x) for x in g_box), "seed": cfg.seed},
        lhs=fine[0], lhs_error=lhs_err, rhs=rhs, rhs_error=rhs_err,
        margin=margin, tolerance=tol, verdict=verdict_of(margin, tol),
        method="grid", resolution=n, seed=cfg.seed,
        notes={"gamma": str(gamma), "int_f": fine[1], "int_g": fine[2]},
    )


# ---------------------------------------------------------------------------
# lifting log-concave densities to uniform measures


@dataclass(frozen=True)
class KpDescription:
    """The convex lift {(x, y) : |y| <= (1 - V(x)/p)_+} in n + p dimensions."""

    base_dim: int
    fiber_dim: int
    box: tuple
    potential: Potential

    def radius(self, pts) -> np.ndarray:
        v = np.asarray(self.potential.value(np.atleast_2d(pts)), dtype=float)
        return np.maximum(1.0 - v / self.fiber_dim, 0.0)

    def contains(self, x, y) -> bool:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return bool(np.linalg.norm(y) <= self.radius(x[None, :])[0] + 1e-12)


@dataclass(frozen=True)
class LiftComparison:
    fiber_dim: int
    sup_distance: float
    grid: int
    box: tuple


def _check_even_convex(potential: Potential, box: np.ndarray, seed: int = 0):
    rng = np.random.default_rng(seed)
    x = rng.uniform(-box, box, size=(128, len(box)))
    y = rng.uniform(-box, box, size=(128, len(box)))
    vx = np.asarray(potential.value(x), dtype=float)
    vy = np.asarray(potential.value(y), dtype=float)
    vm = np.asarray(potential.value(0.5 * (x + y)), dtype=float)
    if not np.allclose(vx, np.asarray(potential.value(-x), dtype=float), rtol=1e-9, atol=1e-9):
        raise ValueError("potential is not even on the sampled box")
    if np.any(vm > 0.5 * (vx + vy) + 1e-9 * (1.0 + np.abs(vx) + np.abs(vy))):
        raise ValueError("potential failed the sampled convexity check")


def lift_to_uniform(potential: Potential, p: int, box,
                    grid: int = 129, seed: int = 0) -> tuple[KpDescription, LiftComparison]:
    """Lift e^{-V} to the uniform measure on K_p and report the sup-grid
    distance between (1 - V/p)_+^p and e^{-V} over the box."""
    p = int(p)
    if p < 1:
        raise ValueError(f"fiber dimension must be a positive integer, got {p}")
    box = np.asarray(box, dtype=float)
    _check_even_convex(potential, box, seed)
    axes = [np.linspace(-box[i], box[i], grid) for i in range(len(box))]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    v = np.asarray(potential.value(pts), dtype=float)
    approx = np.maximum(1.0 - v / p, 0.0) ** p
    target = np.exp(-v)
    dist = float(np.abs(approx - target).max())
    kp = KpDescription(len(box), p, tuple(float(x) for x in box), potential)
    return kp, LiftComparison(p, dist, grid, tuple(float(x) for x in box))


def check_lifting(potential: Potential, ps: Sequence[int], box,
                  max_final_distance: float = 0.01, grid: int = 129,
                  seed: int = 0) -> Report:
    """Run the lift over an increasing fiber sequence: the sup distance
    must decrease strictly and fall below the threshold at the end."""
    ps = [int(x) for x in ps]
    if sorted(ps) != ps or len(ps) < 2:
        raise ValueError("fiber sequence must be increasing with length >= 2")
    dists = []
    for p in ps:
        _, cmp = lift_to_uniform(potential, p, box, grid, seed)
        dists.append(cmp.sup_distance)
    decreasing = all(d2 < d1 for d1, d2 in zip(dists, dists[1:]))
    margin = max_final_distance - dists[-1]
    verdict = verdict_of(margin, 0.0)
    if not decreasing:
        verdict = "fail"
    return Report(
        check="lift_to_uniform", point=f"p={ps[-1]}",
        params={"potential": potential.name, "ps": tuple(ps),
                "box": tuple(float(x) for x in np.asarray(box, dtype=float)),
                "grid": grid, "seed": seed},
        lhs=max_final_distance, lhs_error=0.0, rhs=dists[-1], rhs_error=0.0,
        margin=margin, tolerance=0.0, verdict=verdict, method="grid",
        resolution=grid, seed=seed,
        notes={"distances": dists, "strictly_decreasing": bool(decreasing),
               "inequality": "threshold >= final sup distance"},
    )


# ---------------------------------------------------------------------------
# exploratory scanner (never an acceptance gate)


def _scan_margin(coeffs_a, coeffs_b, thetas: np.ndarray, lam_grid) -> tuple[float, float] | None:
    a = TrigSupportBody(coeffs_a)
    b = TrigSupportBody(coeffs_b)
    if not (a.is_valid() and b.is_valid()):
        return None
    ha = a.support_values(thetas)
    hb = b.support_values(thetas)
    area_a = wulff_area(thetas, ha)
    area_b = wulff_area(thetas, hb)
    best, best_lam = math.inf, lam_grid[0]
    for lam in lam_grid:
        gauge = ha ** (1.0 - lam) * hb ** lam
        m = wulff_area(thetas, gauge) - area_a ** (1.0 - lam) * area_b ** lam
        if m < best:
            best, best_lam = m, lam
    return best, best_lam


def scan_log_bm(lam_grid: Sequence[float] = (0.3, 0.5, 0.7), budget: int = 300,
                seed: int = 0, harmonics: int = 3, n_dirs: int = 256,
                restarts: int = 6, init_pairs: Sequence | None = None) -> Report:
    """Exploratory minimization of the geometric-mean combination margin
    |W(h_A^(1-lam) h_B^lam)| - |A|^(1-lam) |B|^lam over symmetric planar
    bodies given by trigonometric support coefficients.

    Random restarts plus coordinate descent within an evaluation budget;
    invalid (non-convex) candidates are rejected and counted. The result
    documents the exploration; it is not an acceptance gate.
    """
    rng = np.random.default_rng(seed)
    thetas = np.linspace(0.0, 2.0 * math.pi, n_dirs, endpoint=False)
    lam_grid = [float(x) for x in lam_grid]
    n_coef = 1 + 2 * harmonics

    def random_coeffs():
        c = np.zeros(n_coef)
        c[0] = rng.uniform(0.8, 1.2)
        for k in range(1, harmonics + 1):
            scale = 0.05 / (k * k)
            c[2 * k - 1] = rng.normal(0.0, scale)
            c[2 * k] = rng.normal(0.0, scale)
        return c

    starts = list(init_pairs or [])
    while len(starts) < restarts:
        starts.append((random_coeffs(), random_coeffs()))

    evals = 0
    rejected = 0
    best = None  # (margin, lam, coeffs_a, coeffs_b)
    for ca0, cb0 in starts:
        if evals >= budget:
            break
        ca = np.array(ca0, dtype=float)
        cb = np.array(cb0, dtype=float)
        cur = _scan_margin(ca, cb, thetas, lam_grid)
        evals += 1
        if cur is None:
            rejected += 1
            continue
        step = 0.08
        while step > 1e-3 and evals < budget:
            improved = False
            for which, vec in (("a", ca), ("b", cb)):
                for i in range(n_coef):
                    for sgn in (1.0, -1.0):
                        if evals >= budget:
                            break
                        trial = vec.copy()
                        trial[i] += sgn * step * max(abs(vec[0]), 0.5)
                        pair = (trial, cb) if which == "a" else (ca, trial)
                        res = _scan_margin(pair[0], pair[1], thetas, lam_grid)
                        evals += 1
                        if res is None:
                            rejected += 1
                            continue
                        if res[0] < cur[0]:
                            cur = res
                            if which == "a":
                                ca = trial
                            else:
                                cb = trial
                            improved = True
            if not improved:
                step *= 0.5
        if best is None or cur[0] < best[0]:
            best = (cur[0], cur[1], ca.copy(), cb.copy())

    if best is None:
        raise ValueError("every scanner candidate was rejected as non-convex")
    coarse = _scan_margin(best[2], best[3], thetas[::2], lam_grid)
    tol = 3.0 * abs(best[0] - coarse[0]) + 1e-9 if coarse else 1e-9
    margin = best[0]
    return Report(
        check="scan_log_bm", point="scan",
        params={"lam_grid": tuple(lam_grid), "budget": budget, "seed": seed,
                "harmonics": harmonics, "directions": n_dirs},
        lhs=margin, lhs_error=tol / 3.0, rhs=0.0, rhs_error=0.0,
        margin=margin, tolerance=tol, verdict=verdict_of(margin, tol),
        method="scan", resolution=n_dirs, seed=seed,
        notes={"best_lam": best[1], "coeffs_a": [float(x) for x in best[2]],
               "coeffs_b": [float(x) for x in best[3]], "evaluations": evals,
               "rejected": rejected},
    )


def trig_coeffs_from_support(support_fn, harmonics: int = 3, samples: int = 1024
                             ) -> np.ndarray:
    """Project a support function onto even trigonometric harmonics,
    damping until the truncation is a valid (convex) support function."""
    theta = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    h = np.asarray([support_fn(t) for t in theta], dtype=float)
    coeffs = np.zeros(1 + 2 * harmonics)
    coeffs[0] = h.mean()
    for k in range(1, harmonics + 1):
        sigma = math.sin(math.pi * k / (harmonics + 1)) / (math.pi * k / (harmonics + 1))
        coeffs[2 * k - 1] = 2.0 * float(np.mean(h * np.cos(2 * k * theta))) * sigma
        coeffs[2 * k] = 2.0 * float(np.mean(h * np.sin(2 * k * theta))) * sigma
    for _ in range(40):
        if TrigSupportBody(coeffs).is_valid():
            break
        coeffs[1:] *= 0.85
    return coeffs


# ---------------------------------------------------------------------------
# check catalogue (for the CLI listing)


@dataclass(frozen=True)
class CheckInfo:
    name: str
    anchor: str


CHECKS = (
    CheckInfo("check_bmi",
              "theorem: mu((1-l)A +_p lB) >= M_gamma^l(mu(A), mu(B)), "
              "gamma = (sum 1/p_i + 1/alpha)^-1"),
    CheckInfo("check_bmi_mset",
              "m-set extension of the theorem by induction over operands"),
    CheckInfo("check_inclusion",
              "lemma: the coordinate-wise +_p combination sits inside the Firey body"),
    CheckInfo("check_plus1_is_minkowski",
              "proposition: +_(1,...,1) coincides with the Minkowski sum"),
    CheckInfo("check_firey_corollary",
              "corollary: mu((1-l)A o+_p lB) >= M_gamma with gamma = (n/p + 1/alpha)^-1"),
    CheckInfo("check_power_dilation_concavity",
              "proposition: t -> mu(t^(1/p) A) is gamma-concave for alpha in [-p/n, 0)"),
    CheckInfo("check_dilation_concavity",
              "corollary: t -> mu(tA) is ((1-p)/n + gamma)-concave"),
    CheckInfo("check_gaussian_improvement",
              "improvement: Gaussian exponent gamma/(1+gamma n) inside the 1/sqrt(gamma) ball"),
    CheckInfo("check_B_property",
              "(B)-property: t -> mu(e^t A) is log-concave (unconditional/Gaussian cases)"),
    CheckInfo("check_functional_B",
              "functional (B): t -> integral f(e^-t x) g(x) dx is log-concave"),
    CheckInfo("uhrin_functional_check",
              "integral hypothesis: minimal admissible h has int h >= M_gamma(int f, int g)"),
    CheckInfo("lift_to_uniform",
              "reduction step 2: (1 - V/p)_+^p -> e^-V via uniform measures on the lift K_p"),
)

EXPLORATORY = (
    CheckInfo("scan_log_bm",
              "scanner for the geometric-mean combination margin over symmetric planar bodies"),
    CheckInfo("certify_region",
              "eigenvalue certificate for gamma-concavity of e^-V on a region"),
)
