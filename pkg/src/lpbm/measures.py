"""Concave density families and deterministic measure evaluation.

Integration over a body runs on a positive-octant cell grid (cell-center
rule) and multiplies by 2^dim, valid because both the set and the density
are unconditional. The absolute-error estimate is the change under halving
the resolution; Monte Carlo takes over beyond dimension 3.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bodies import Body, DilateBody, dilate
from .extreal import ExtReal, POS_INF

_SUPPORT_EPS = 1e-12


@dataclass(frozen=True)
class NumericsConfig:
    """Resolutions, sample counts and seeds for every numeric pass."""

    resolution_1d: int = 2048
    resolution_2d: int = 256
    resolution_3d: int = 64
    mc_samples: int = 2_000_000
    directions_2d: int = 256
    directions_3d: int = 512
    seed: int = 0
    tolerance_scale: float = 3.0

    def resolution_for(self, dim: int) -> int:
        if dim == 1:
            return self.resolution_1d
        if dim == 2:
            return self.resolution_2d
        if dim == 3:
            return self.resolution_3d
        raise ValueError(f"grid integration supports dim <= 3, got {dim}")

    def directions_for(self, dim: int) -> int:
        if dim <= 2:
            return self.directions_2d
        return self.directions_3d

    def scaled(self, factor: float) -> "NumericsConfig":
        """Copy with all grid resolutions scaled by factor."""
        return dataclasses.replace(
            self,
            resolution_1d=max(2, int(self.resolution_1d * factor)),
            resolution_2d=max(2, int(self.resolution_2d * factor)),
            resolution_3d=max(2, int(self.resolution_3d * factor)),
        )

    def with_resolution(self, dim: int, n: int) -> "NumericsConfig":
        key = {1: "resolution_1d", 2: "resolution_2d", 3: "resolution_3d"}[dim]
        return dataclasses.replace(self, **{key: int(n)})


@dataclass(frozen=True)
class MeasureEstimate:
    """A measure value with a numerical error estimate attached."""

    value: float
    abs_error: float
    method: str
    resolution: int
    seed: int | None = None

    def __post_init__(self):
        if self.abs_error < 0:
            raise ValueError("abs_error must be non-negative")


class Potential:
    """Potential V with e^{-V} the density; gradient and Hessian oracles
    are optional (finite differences fill in when absent)."""

    def __init__(self, dim: int, value: Callable, grad: Callable | None = None,
                 hess: Callable | None = None, name: str = "custom"):
        self.dim = dim
        self.value = value
        self.grad = grad
        self.hess = hess
        self.name = name


class Density:
    """Non-negative unconditional density with a known concavity exponent."""

    def __init__(self, dim: int, alpha, eval_fn: Callable, family: str,
                 potential: Potential | None = None,
                 support_box: np.ndarray | None = None,
                 label: str | None = None):
        self.dim = int(dim)
        self.alpha = ExtReal.of(alpha)
        self._eval = eval_fn
        self.family = family
        self.potential = potential
        self._support_box = support_box
        self.label = label or family

    def __call__(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.asarray(self._eval(pts), dtype=float)

    def octant_support_box(self) -> np.ndarray:
        """Per-axis truncation box outside which the density is below
        1e-12 of its maximum (infinite for flat families)."""
        if self._support_box is None:
            return np.full(self.dim, math.inf)
        return np.asarray(self._support_box, dtype=float)

    def describe(self) -> str:
        return self.label


def make_density(family: str, **params) -> Density:
    """Construct a built-in density family.

    lebesgue(dim); gaussian(dim); power_convex(dim, alpha < 0, beta > 0)
    with profile (1 + beta sum_i |x_i|)^(1/alpha); uniform(body) as the
    indicator of an unconditional convex body; custom(dim, alpha, eval).
    """
    family = family.lower()
    if family == "lebesgue":
        dim = int(params.pop("dim"))
        _reject_extra(family, params)
        return Density(dim, POS_INF, lambda pts: np.ones(len(pts)), "lebesgue")
    if family == "gaussian":
        dim = int(params.pop("dim"))
        _reject_extra(family, params)
        norm = (2.0 * math.pi) ** (-dim / 2.0)
        c_n = 0.5 * dim * math.log(2.0 * math.pi)
        pot = Potential(
            dim,
            value=lambda pts: 0.5 * np.sum(np.atleast_2d(pts) ** 2, axis=1) + c_n,
            grad=lambda x: np.asarray(x, dtype=float),
            hess=lambda x: np.eye(dim),
            name="gaussian",
        )
        radius = math.sqrt(-2.0 * math.log(_SUPPORT_EPS))
        return Density(
            dim, 0.0,
            lambda pts: norm * np.exp(-0.5 * np.sum(pts ** 2, axis=1)),
            "gaussian", potential=pot, support_box=np.full(dim, radius),
        )
    if family == "power_convex":
        dim = int(params.pop("dim"))
        alpha = float(params.pop("alpha"))
        beta = float(params.pop("beta", 1.0))
        _reject_extra(family, params)
        if alpha >= 0:
            raise ValueError(f"power_convex requires alpha < 0, got {alpha}")
        if beta <= 0:
            raise ValueError(f"power_convex requires beta > 0, got {beta}")
        cutoff = (_SUPPORT_EPS ** alpha - 1.0) / beta
        return Density(
            dim, alpha,
            lambda pts: (1.0 + beta * np.sum(np.abs(pts), axis=1)) ** (1.0 / alpha),
            "power_convex", support_box=np.full(dim, cutoff),
            label=f"power_convex(alpha={alpha:g}, beta={beta:g})",
        )
    if family == "uniform":
        body: Body = params.pop("body")
        _reject_extra(family, params)
        if not body.unconditional:
            raise ValueError("uniform density requires an unconditional body")
        return Density(
            body.dim, POS_INF,
            lambda pts: body.contains_many(pts).astype(float),
            "uniform", support_box=body.octant_box(),
            label=f"uniform({body.describe()})",
        )
    if family == "custom":
        dim = int(params.pop("dim"))
        alpha = params.pop("alpha")
        eval_fn = params.pop("eval")
        box = params.pop("support_box", None)
        _reject_extra(family, params)
        return Density(dim, alpha, eval_fn, "custom", support_box=box)
    raise ValueError(f"unknown density family {family!r}")


def _reject_extra(family: str, params: dict):
    if params:
        raise ValueError(f"unexpected parameters for {family}: {sorted(params)}")


def _octant_grid_value(s: Body, mu: Density, box: np.ndarray, n: int) -> float:
    axes = [(np.arange(n) + 0.5) * box[i] / n for i in range(s.dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    inside = s.contains_many(pts)
    if not inside.any():
        return 0.0
    vals = mu(pts[inside])
    cell_vol = float(np.prod(box / n))
    return float(2 ** s.dim * vals.sum() * cell_vol)


def measure(s: Body, mu: Density, cfg: NumericsConfig | None = None) -> MeasureEstimate:
    """Measure of a bounded unconditional set under an unconditional density.

    Deterministic grid integration through dimension 3 (error = change
    under halving the resolution); Monte Carlo with a 3-sigma error bar
    beyond that.
    """
    cfg = cfg or NumericsConfig()
    if s.dim != mu.dim:
        raise ValueError(f"dimension mismatch: set {s.dim}, density {mu.dim}")
    if s.degenerate:
        return MeasureEstimate(0.0, 0.0, "grid", 0)
    box = s.octant_box()
    if not np.all(np.isfinite(box)):
        raise ValueError("set must be bounded")
    if np.any(box <= 0):
        return MeasureEstimate(0.0, 0.0, "grid", 0)
    if s.dim <= 3:
        n = cfg.resolution_for(s.dim)
        fine = _octant_grid_value(s, mu, box, n)
        coarse = _octant_grid_value(s, mu, box, max(n // 2, 1))
        return MeasureEstimate(fine, abs(fine - coarse), "grid", n)
    rng = np.random.default_rng(cfg.seed)
    total = 0.0
    total_sq = 0.0
    m = int(cfg.mc_samples)
    chunk = 1 << 18
    done = 0
    vol_box = float(np.prod(box))
    while done < m:
        k = min(chunk, m - done)
        pts = rng.uniform(0.0, box, size=(k, s.dim))
        f = np.where(s.contains_many(pts), mu(pts), 0.0)
        total += float(f.sum())
        total_sq += float((f ** 2).sum())
        done += k
    mean = total / m
    var = max(total_sq / m - mean * mean, 0.0)
    scale = 2 ** s.dim * vol_box
    return MeasureEstimate(scale * mean, 3.0 * scale * math.sqrt(var / m), "mc", m, cfg.seed)


_TRANSFORMS = ("dilate_t", "dilate_t_pow_inv_p", "dilate_exp_t")


def measure_curve(a: Body, mu: Density, transform: str, t_grid: Sequence[float],
                  cfg: NumericsConfig | None = None, p: float | None = None
                  ) -> list[tuple[float, MeasureEstimate]]:
    """Sample F(t) = mu(scale(t) A) over a t-grid at consistent resolution.

    transform picks scale(t) = t, t^(1/p) or e^t.
    """
    cfg = cfg or NumericsConfig()
    if transform not in _TRANSFORMS:
        raise ValueError(f"unknown transform {transform!r}; choose from {_TRANSFORMS}")
    if transform == "dilate_t_pow_inv_p":
        if p is None or not 0 < p <= 1:
            raise ValueError("power transform needs an exponent p in (0, 1]")
    out = []
    for t in t_grid:
        t = float(t)
        if transform == "dilate_t":
            if t < 0:
                raise ValueError(f"dilation needs t >= 0, got {t}")
            scale = t
        elif transform == "dilate_t_pow_inv_p":
            if t <= 0:
                raise ValueError(f"power transform needs t > 0, got {t}")
            scale = t ** (1.0 / p)
        else:
            scale = math.exp(t)
        out.append((t, measure(dilate(a, scale), mu, cfg)))
    return out


@dataclass(frozen=True)
class CurveResult:
    """Sampled curve together with the truncation box actually used."""

    points: tuple
    truncation_box: np.ndarray


def _full_grid_value(f: Density, g: Density, t: float, box: np.ndarray, n: int) -> float:
    axes = [(np.arange(2 * n) + 0.5) * box[i] / n - box[i] for i in range(len(box))]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    vals = f(pts * math.exp(-t)) * g(pts)
    return float(vals.sum() * np.prod(box / n))


def _sampled_even_logconcave_check(h: Density, seed: int = 0):
    rng = np.random.default_rng(seed)
    box = h.octant_support_box()
    scale = np.where(np.isfinite(box), box, 4.0)
    x = rng.uniform(-scale, scale, size=(64, h.dim))
    if not np.allclose(h(x), h(-x), rtol=1e-9, atol=1e-12):
        raise ValueError(f"{h.describe()} is not even")
    y = rng.uniform(-scale, scale, size=(64, h.dim))
    fx, fy, fm = h(x), h(y), h(0.5 * (x + y))
    pos = (fx > 0) & (fy > 0)
    if np.any(fm[pos] < np.sqrt(fx[pos] * fy[pos]) * (1.0 - 1e-9)):
        raise ValueError(f"{h.describe()} failed the sampled log-concavity check")


def functional_B_curve(f: Density, g: Density, t_grid: Sequence[float],
                       cfg: NumericsConfig | None = None,
                       validate: bool = True) -> CurveResult:
    """Sample G(t) = integral of f(e^-t x) g(x) dx on a fixed truncation box.

    The box is the tightest per-axis region supporting the integrand over
    the whole grid; a divergent integrand (both factors flat) is refused.
    Integration runs over the full box so merely-even inputs are handled.
    """
    cfg = cfg or NumericsConfig()
    if f.dim != g.dim:
        raise ValueError("dimension mismatch between the two functions")
    if validate:
        _sampled_even_logconcave_check(f, cfg.seed)
        _sampled_even_logconcave_check(g, cfg.seed + 1)
    t_grid = [float(t) for t in t_grid]
    t_max = max(t_grid)
    box = np.minimum(math.exp(t_max) * f.octant_support_box(), g.octant_support_box())
    if not np.all(np.isfinite(box)):
        raise ValueError("divergent integrand: both factors have unbounded support")
    n = cfg.resolution_for(f.dim)
    points = []
    for t in t_grid:
        fine = _full_grid_value(f, g, t, box, n)
        coarse = _full_grid_value(f, g, t, box, max(n // 2, 1))
        points.append((t, MeasureEstimate(fine, abs(fine - coarse), "grid", n)))
    return CurveResult(tuple(points), box)
