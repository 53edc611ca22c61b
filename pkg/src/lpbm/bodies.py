"""Unconditional convex bodies and their Minkowski-type combinations.

Bodies are immutable, carry a membership oracle, and the closed-form
families also carry a support oracle. Everything is determined by the
trace on the positive octant, which the combination constructions
exploit: coordinate-wise p-mean combinations are built as downward-closed
grid sets, Firey combinations as halfspace cuts over positive-octant
direction sets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .extreal import ExtReal
from .means import p_mean, p_mean_grid

_MEMBERSHIP_TOL = 1e-12
_CHUNK = 1 << 16  # points per chunk in direction-cut membership tests
_PAIR_CHUNK = 1 << 22  # frontier pairs per chunk in grid image sweeps


class Family(str, Enum):
    LQ_BALL = "LqBall"
    H_POLYTOPE = "HPolytope"
    GRID_SET = "GridSet"
    WULFF_SET = "WulffSet"
    DILATE = "Dilate"
    SUM = "Sum"


class Body:
    """Compact convex set, closed under coordinate sign flips, with the
    origin in its interior."""

    dim: int
    family: Family
    unconditional: bool = True
    degenerate: bool = False

    def contains(self, x) -> bool:
        raise NotImplementedError

    def contains_many(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.fromiter((self.contains(p) for p in pts), dtype=bool, count=len(pts))

    @property
    def has_support(self) -> bool:
        return False

    def support(self, u) -> float:
        raise ValueError(f"{self.family.value} body has no support oracle")

    def octant_box(self) -> np.ndarray:
        """Per-axis extent of the positive-octant trace."""
        raise NotImplementedError

    @property
    def out_radius(self) -> float:
        return float(np.linalg.norm(self.octant_box()))

    def describe(self) -> str:
        return f"{self.family.value}(dim={self.dim})"


class LqBall(Body):
    """The ball {x : sum_i (|x_i| / r_i)^q <= 1} with q in [1, inf]."""

    family = Family.LQ_BALL

    def __init__(self, q, radii: Sequence[float]):
        q = float(q)
        if not q >= 1.0:
            raise ValueError(f"q must lie in [1, inf], got {q}")
        radii = np.asarray(radii, dtype=float)
        if radii.ndim != 1 or radii.size == 0 or np.any(radii <= 0):
            raise ValueError("radii must be a non-empty vector of positive reals")
        self.q = q
        self.radii = radii
        self.dim = radii.size
        if q == math.inf:
            self._qd = 1.0
        elif q == 1.0:
            self._qd = math.inf
        else:
            self._qd = q / (q - 1.0)

    def contains(self, x) -> bool:
        return bool(self.contains_many(np.asarray(x, dtype=float))[0])

    def contains_many(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        z = np.abs(pts) / self.radii
        if self.q == math.inf:
            return z.max(axis=1) <= 1.0 + _MEMBERSHIP_TOL
        return (z ** self.q).sum(axis=1) <= 1.0 + _MEMBERSHIP_TOL

    @property
    def has_support(self) -> bool:
        return True

    def support(self, u) -> float:
        w = self.radii * np.abs(np.asarray(u, dtype=float))
        if self._qd == math.inf:
            return float(w.max())
        if self._qd == 1.0:
            return float(w.sum())
        return float((w ** self._qd).sum() ** (1.0 / self._qd))

    def octant_box(self) -> np.ndarray:
        return self.radii.copy()

    def describe(self) -> str:
        radii = ",".join(format(r, "g") for r in self.radii)
        return f"LqBall(q={self.q:g}, r=({radii}))"


def _octant_vertices(u_abs: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Vertices of {x >= 0, u_abs @ x <= offsets} by constraint enumeration.

    Practical for dim <= 3 with a handful of halfspaces.
    """
    m, n = u_abs.shape
    rows = np.vstack([u_abs, np.eye(n)])
    rhs = np.concatenate([offsets, np.zeros(n)])
    verts = []
    for idx in itertools.combinations(range(m + n), n):
        a = rows[list(idx)]
        b = rhs[list(idx)]
        try:
            x = np.linalg.solve(a, b)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(x)):
            continue
        if np.any(x < -1e-9) or np.any(u_abs @ x > offsets + 1e-9):
            continue
        verts.append(np.maximum(x, 0.0))
    if not verts:
        raise ValueError("halfspace system has an empty positive-octant trace")
    verts = np.array(verts)
    # dedupe on a fine grid
    _, keep = np.unique(np.round(verts / 1e-9).astype(np.int64), axis=0, return_index=True)
    return verts[np.sort(keep)]


class HPolytope(Body):
    """Intersection of the sign-flip closures of halfspaces <x, u_j> <= c_j.

    Because all sign flips of each normal are included, membership reduces
    to <|x|, |u_j|> <= c_j, and the positive-octant trace is the polytope
    {x >= 0 : |U| x <= c}.
    """

    family = Family.H_POLYTOPE

    def __init__(self, halfspaces: Sequence):
        dirs = []
        offs = []
        for u, c in halfspaces:
            u = np.asarray(u, dtype=float)
            c = float(c)
            if c <= 0:
                raise ValueError("halfspace offsets must be positive (origin interior)")
            if not np.any(u != 0):
                raise ValueError("halfspace direction must be nonzero")
            dirs.append(np.abs(u))
            offs.append(c)
        self._u = np.array(dirs)
        self._c = np.array(offs)
        self.dim = self._u.shape[1]
        if self.dim > 3:
            raise ValueError("HPolytope supports dim <= 3")
        if np.any(self._u.max(axis=0) <= 0):
            raise ValueError("polytope is unbounded: some axis is uncut")
        self._verts = _octant_vertices(self._u, self._c)

    def contains(self, x) -> bool:
        return bool(self.contains_many(np.asarray(x, dtype=float))[0])

    def contains_many(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.all(np.abs(pts) @ self._u.T <= self._c + _MEMBERSHIP_TOL, axis=1)

    @property
    def has_support(self) -> bool:
        return True

    def support(self, u) -> float:
        return float((self._verts @ np.abs(np.asarray(u, dtype=float))).max())

    def octant_box(self) -> np.ndarray:
        return self._verts.max(axis=0)

    def describe(self) -> str:
        return f"HPolytope({len(self._c)} halfspaces, dim={self.dim})"


class GridSet(Body):
    """Unconditional set stored as a downward-closed cell indicator on the
    positive octant.

    Cells are half-open boxes tiling [0, extent_i] with the same count per
    axis; cell centers decide membership at construction time.
    """

    family = Family.GRID_SET

    def __init__(self, indicator: np.ndarray, extent: Sequence[float]):
        indicator = np.asarray(indicator, dtype=bool)
        extent = np.asarray(extent, dtype=float)
        if indicator.ndim != extent.size:
            raise ValueError("indicator rank must match extent length")
        if len(set(indicator.shape)) != 1:
            raise ValueError("indicator must have equal cells per axis")
        if np.any(extent <= 0):
            raise ValueError("extent must be positive on every axis")
        self.indicator = indicator
        self.extent = extent
        self.dim = indicator.ndim
        self.cells_per_axis = indicator.shape[0]
        self.cell = extent / self.cells_per_axis
        self._centers = None

    @classmethod
    def from_body(cls, body: Body, resolution: int) -> "GridSet":
        """Rasterize a body on its octant box using the cell-center rule."""
        box = body.octant_box()
        n = int(resolution)
        axes = [(np.arange(n) + 0.5) * box[i] / n for i in range(body.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        ind = body.contains_many(pts).reshape((n,) * body.dim)
        return cls(downward_closure(ind), box)

    def contains(self, x) -> bool:
        return bool(self.contains_many(np.asarray(x, dtype=float))[0])

    def contains_many(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        z = np.abs(pts) / self.cell
        idx = np.floor(z).astype(np.int64)
        ok = np.all(idx < self.cells_per_axis, axis=1)
        out = np.zeros(len(pts), dtype=bool)
        if np.any(ok):
            sel = idx[ok]
            out[ok] = self.indicator[tuple(sel[:, i] for i in range(self.dim))]
        return out

    def volume(self) -> float:
        return float(2 ** self.dim * self.indicator.sum() * np.prod(self.cell))

    def marked_centers(self) -> np.ndarray:
        if self._centers is None:
            idx = np.argwhere(self.indicator)
            self._centers = (idx + 0.5) * self.cell
        return self._centers

    @property
    def has_support(self) -> bool:
        return True

    def support(self, u) -> float:
        c = self.marked_centers()
        if c.size == 0:
            return 0.0
        return float((c @ np.abs(np.asarray(u, dtype=float))).max())

    def octant_box(self) -> np.ndarray:
        return self.extent.copy()

    def octant_frontier(self) -> np.ndarray:
        """Centers of the top cells of each occupied column: a height-field
        sample of the staircase boundary that dominates every marked cell."""
        ind = self.indicator
        n = self.cells_per_axis
        if self.dim == 1:
            if not ind.any():
                return np.zeros((0, 1))
            top = int(np.flatnonzero(ind).max())
            return np.array([[(top + 0.5) * self.cell[0]]])
        flipped = np.flip(ind, axis=-1)
        has = ind.any(axis=-1)
        top = n - 1 - np.argmax(flipped, axis=-1)
        base_idx = np.argwhere(has)
        cols = (base_idx + 0.5) * self.cell[:-1]
        heights = (top[has] + 0.5) * self.cell[-1]
        return np.column_stack([cols, heights])

    def describe(self) -> str:
        return f"GridSet(N={self.cells_per_axis}, dim={self.dim})"


def downward_closure(indicator: np.ndarray) -> np.ndarray:
    """Mark every cell dominated coordinate-wise by a marked cell."""
    out = indicator.copy()
    for axis in range(out.ndim):
        out = np.flip(np.maximum.accumulate(np.flip(out, axis=axis), axis=axis), axis=axis)
    return out


class WulffBody(Body):
    """Outer body cut by halfspaces <x, u> <= gauge(u) over a direction set
    restricted to the positive octant (sufficient for unconditional sets)."""

    family = Family.WULFF_SET

    def __init__(self, directions: np.ndarray, gauge: np.ndarray, dim: int):
        directions = np.asarray(directions, dtype=float)
        gauge = np.asarray(gauge, dtype=float)
        if directions.ndim != 2 or directions.shape[1] != dim:
            raise ValueError("directions must be a (k, dim) array")
        if gauge.shape != (directions.shape[0],):
            raise ValueError("gauge must have one value per direction")
        if np.any(gauge <= 0):
            raise ValueError("gauge must be positive (origin interior)")
        self.dim = dim
        self._dirs = directions
        self._gauge = gauge
        box = np.empty(dim)
        for i in range(dim):
            axis_rows = np.isclose(directions, np.eye(dim)[i], atol=1e-12).all(axis=1)
            if not axis_rows.any():
                raise ValueError("direction set must include the coordinate axes")
            box[i] = gauge[axis_rows].min()
        self._box = box

    def contains(self, x) -> bool:
        return bool(self.contains_many(np.asarray(x, dtype=float))[0])

    def contains_many(self, pts) -> np.ndarray:
        pts = np.abs(np.atleast_2d(np.asarray(pts, dtype=float)))
        out = np.empty(len(pts), dtype=bool)
        for lo in range(0, len(pts), _CHUNK):
            hi = min(lo + _CHUNK, len(pts))
            proj = pts[lo:hi] @ self._dirs.T
            out[lo:hi] = np.all(proj <= self._gauge + _MEMBERSHIP_TOL, axis=1)
        return out

    def octant_box(self) -> np.ndarray:
        return self._box.copy()

    def describe(self) -> str:
        return f"WulffSet({len(self._gauge)} directions, dim={self.dim})"


class MinkowskiBody(Body):
    """Weighted Minkowski sum via its exact support function
    (1-lam) h_A + lam h_B; membership uses a direction-set cut."""

    family = Family.SUM

    def __init__(self, a: Body, b: Body, lam: float, directions: np.ndarray | None = None):
        if a.dim != b.dim:
            raise ValueError("operand dimensions differ")
        if not (a.has_support and b.has_support):
            raise ValueError("Minkowski combination needs support oracles")
        self.dim = a.dim
        self._a = a
        self._b = b
        self.lam = float(lam)
        dirs = directions if directions is not None else octant_directions(a.dim)
        gauge = np.array([self.support(u) for u in dirs])
        self._cut = WulffBody(dirs, gauge, a.dim)

    def contains(self, x) -> bool:
        return self._cut.contains(x)

    def contains_many(self, pts) -> np.ndarray:
        return self._cut.contains_many(pts)

    @property
    def has_support(self) -> bool:
        return True

    def support(self, u) -> float:
        return (1.0 - self.lam) * self._a.support(u) + self.lam * self._b.support(u)

    def octant_box(self) -> np.ndarray:
        eye = np.eye(self.dim)
        return np.array([self.support(eye[i]) for i in range(self.dim)])

    def describe(self) -> str:
        return f"Sum(lam={self.lam:g}, {self._a.describe()}, {self._b.describe()})"


class DilateBody(Body):
    """Scaling t * body; t = 0 degenerates to the origin singleton."""

    family = Family.DILATE

    def __init__(self, inner: Body, t: float):
        t = float(t)
        if t < 0:
            raise ValueError(f"dilation factor must be non-negative, got {t}")
        self.dim = inner.dim
        self.inner = inner
        self.t = t
        self.degenerate = t == 0.0

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        if self.degenerate:
            return bool(np.all(x == 0.0))
        return self.inner.contains(x / self.t)

    def contains_many(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if self.degenerate:
            return np.all(pts == 0.0, axis=1)
        return self.inner.contains_many(pts / self.t)

    @property
    def has_support(self) -> bool:
        return self.inner.has_support

    def support(self, u) -> float:
        return self.t * self.inner.support(u)

    def octant_box(self) -> np.ndarray:
        return self.t * self.inner.octant_box()

    def describe(self) -> str:
        return f"Dilate(t={self.t:g}, {self.inner.describe()})"


def dilate(body: Body, t: float) -> Body:
    if isinstance(body, DilateBody) and not body.degenerate:
        return DilateBody(body.inner, body.t * float(t))
    return DilateBody(body, t)


def octant_directions(dim: int, count: int | None = None) -> np.ndarray:
    """Unit directions covering the closed positive octant, axes included.

    2D uses an equiangular fan, 3D a golden-spiral set folded into the
    octant. Both are deterministic.
    """
    if dim == 1:
        return np.array([[1.0]])
    if dim == 2:
        m = count or 256
        theta = np.linspace(0.0, math.pi / 2.0, m)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if dim == 3:
        m = count or 512
        k = np.arange(max(m - 3, 1))
        z = (2.0 * k + 1.0) / max(m - 3, 1) - 1.0
        phi = k * math.pi * (3.0 - math.sqrt(5.0))
        r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        pts = np.abs(np.column_stack([r * np.cos(phi), r * np.sin(phi), z]))
        pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
        return np.vstack([np.eye(3), pts])
    raise ValueError(f"direction sets support dim <= 3, got {dim}")


class CombinationKind(Enum):
    COORD = "coord_plus_p"
    FIREY = "firey"
    MINKOWSKI = "minkowski"


@dataclass(frozen=True)
class CombinationSpec:
    """Operands, weight and exponents of one combination.

    The coordinate-wise kind takes one exponent per axis; the Firey kind a
    single scalar exponent; the Minkowski kind none.
    """

    a: Body
    b: Body
    lam: float
    kind: CombinationKind
    p: tuple | None = None

    def __post_init__(self):
        if self.a.dim != self.b.dim:
            raise ValueError("operand dimensions differ")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"weight must lie in [0, 1], got {self.lam}")
        if self.kind is CombinationKind.COORD:
            if self.p is None or len(self.p) != self.a.dim:
                raise ValueError("coordinate combination needs one exponent per axis")
            for pi in self.p:
                v = ExtReal.of(pi).value
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"coordinate exponents must lie in [0, 1], got {v}")
        elif self.kind is CombinationKind.FIREY:
            if self.p is None or len(self.p) != 1:
                raise ValueError("Firey combination needs a single scalar exponent")
            v = ExtReal.of(self.p[0]).value
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"Firey exponent must lie in [0, 1], got {v}")
        elif self.p is not None:
            raise ValueError("Minkowski combination takes no exponent")

    @classmethod
    def coord(cls, a: Body, b: Body, lam: float, p) -> "CombinationSpec":
        return cls(a, b, float(lam), CombinationKind.COORD, tuple(p))

    @classmethod
    def firey(cls, a: Body, b: Body, lam: float, p) -> "CombinationSpec":
        return cls(a, b, float(lam), CombinationKind.FIREY, (p,))

    @classmethod
    def minkowski(cls, a: Body, b: Body, lam: float) -> "CombinationSpec":
        return cls(a, b, float(lam), CombinationKind.MINKOWSKI, None)


def _frontier_heights(body: Body, base: np.ndarray, hi0: float, steps: int = 50) -> np.ndarray:
    """Vectorized bisection for the octant boundary height above base points."""
    m = len(base)
    lo = np.zeros(m)
    hi = np.full(m, hi0)
    pts0 = np.column_stack([base, lo])
    inside0 = body.contains_many(pts0)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        inside = body.contains_many(np.column_stack([base, mid]))
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    lo[~inside0] = -1.0  # base point outside the shadow
    return lo


def octant_frontier(body: Body, samples: int) -> np.ndarray:
    """Boundary samples of the positive-octant trace that dominate the
    trace coordinate-wise (the upper height field)."""
    if isinstance(body, GridSet):
        return body.octant_frontier()
    box = body.octant_box()
    if body.dim == 1:
        return np.array([[box[0]]])
    if body.dim == 2:
        xs = np.linspace(0.0, box[0], samples)
        h = _frontier_heights(body, xs[:, None], box[1] * (1.0 + 1e-12))
        keep = h >= 0.0
        return np.column_stack([xs[keep], h[keep]])
    if body.dim == 3:
        side = max(int(math.sqrt(samples)), 8)
        xs = np.linspace(0.0, box[0], side)
        ys = np.linspace(0.0, box[1], side)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        base = np.column_stack([gx.ravel(), gy.ravel()])
        h = _frontier_heights(body, base, box[2] * (1.0 + 1e-12))
        keep = h >= 0.0
        return np.column_stack([base[keep], h[keep]])
    raise ValueError("frontier sampling supports dim <= 3")


def coord_combine(spec: CombinationSpec, resolution: int) -> GridSet:
    """Grid image of the coordinate-wise p-mean combination.

    Marks every cell hit by a p-mean of frontier samples of the operands,
    then takes the downward closure; by homogeneity and monotonicity of
    the means this is exactly the grid trace of the combined set, up to
    one cell band.
    """
    if spec.kind is not CombinationKind.COORD:
        raise ValueError("spec kind must be the coordinate-wise combination")
    a, b, lam = spec.a, spec.b, spec.lam
    if a.dim > 3:
        raise ValueError("deterministic combination supports dim <= 3")
    n = int(resolution)
    if lam == 0.0:
        return GridSet.from_body(a, n)
    if lam == 1.0:
        return GridSet.from_body(b, n)
    p = [ExtReal.of(pi) for pi in spec.p]
    fa = octant_frontier(a, n)
    fb = octant_frontier(b, n)
    box_a, box_b = a.octant_box(), b.octant_box()
    extent = np.array([p_mean(p[i], lam, box_a[i], box_b[i]) for i in range(a.dim)])
    cell = extent / n
    ind = np.zeros((n,) * a.dim, dtype=bool)
    flat = ind.reshape(-1)
    strides = np.array([n ** (a.dim - 1 - i) for i in range(a.dim)], dtype=np.int64)
    rows = max(1, _PAIR_CHUNK // max(len(fb), 1))
    for lo in range(0, len(fa), rows):
        fa_chunk = fa[lo:lo + rows]
        flat_idx = np.zeros((len(fa_chunk), len(fb)), dtype=np.int64)
        for i in range(a.dim):
            z = p_mean_grid(p[i], lam, fa_chunk[:, i][:, None], fb[:, i][None, :])
            idx = np.minimum((z / cell[i]).astype(np.int64), n - 1)
            flat_idx += idx * strides[i]
        flat[flat_idx.ravel()] = True
    return GridSet(downward_closure(ind), extent)


def firey_combine(spec: CombinationSpec, directions: np.ndarray | None = None) -> WulffBody:
    """Outer approximation of the Firey combination: the body cut by
    <x, u> <= M_p^lam(h_A(u), h_B(u)) over the direction set.

    The approximation shrinks monotonically as the direction set grows.
    """
    if spec.kind is not CombinationKind.FIREY:
        raise ValueError("spec kind must be the Firey combination")
    a, b = spec.a, spec.b
    if not (a.has_support and b.has_support):
        raise ValueError("Firey combination needs support oracles")
    dirs = directions if directions is not None else octant_directions(a.dim)
    p = spec.p[0]
    gauge = np.array([p_mean(p, spec.lam, a.support(u), b.support(u)) for u in dirs])
    return WulffBody(dirs, gauge, a.dim)


def minkowski_combine(a: Body, b: Body, lam: float,
                      directions: np.ndarray | None = None) -> MinkowskiBody:
    """Weighted Minkowski sum (1-lam) A + lam B through support functions."""
    return MinkowskiBody(a, b, lam, directions)


def sample_points(body: Body, count: int, mode: str = "interior", seed: int = 0) -> np.ndarray:
    """Deterministic-under-seed point samples from a body.

    Interior mode rejects uniform draws from the bounding box; boundary
    mode bisects along random rays so that each returned x satisfies
    contains(x) and not contains((1 + 1e-6) x).
    """
    if mode not in ("interior", "boundary"):
        raise ValueError(f"unknown sampling mode {mode!r}")
    rng = np.random.default_rng(seed)
    box = body.octant_box()
    if mode == "interior":
        out = []
        have = 0
        attempts = 0
        while have < count:
            batch = max(count, 1024)
            attempts += batch
            if attempts > 2000 * count + 10000:
                raise RuntimeError("rejection sampling failed: body too thin for its box")
            pts = rng.uniform(-box, box, size=(batch, body.dim))
            good = pts[body.contains_many(pts)]
            out.append(good[: count - have])
            have += len(good[: count - have])
        return np.vstack(out)
    u = rng.standard_normal((count, body.dim))
    norms = np.linalg.norm(u, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    u /= norms
    lo = np.zeros(count)
    hi = np.full(count, body.out_radius * (1.0 + 1e-3))
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        inside = body.contains_many(u * mid[:, None])
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return u * lo[:, None]


def hausdorff_distance(a: Body, b: Body, directions: np.ndarray | None = None) -> float:
    """Support-function sup-distance over sampled directions, which equals
    the Hausdorff distance for convex bodies as the set grows dense."""
    if a.dim != b.dim:
        raise ValueError("operand dimensions differ")
    dirs = directions if directions is not None else octant_directions(a.dim)
    ha = np.array([a.support(u) for u in dirs])
    hb = np.array([b.support(u) for u in dirs])
    return float(np.abs(ha - hb).max())


class TrigSupportBody:
    """Centrally symmetric planar body from an even trigonometric support
    expansion h(theta) = c0 + sum_k a_k cos(2k theta) + b_k sin(2k theta).

    Used by the counterexample scanner; not necessarily unconditional.
    """

    def __init__(self, coeffs: Sequence[float]):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.size % 2 == 0:
            raise ValueError("coefficients must be (c0, a1, b1, ..., aK, bK)")
        self.coeffs = coeffs
        self.dim = 2

    def support_values(self, theta: np.ndarray) -> np.ndarray:
        h = np.full_like(theta, self.coeffs[0])
        k = 1
        for i in range(1, self.coeffs.size, 2):
            h += self.coeffs[i] * np.cos(2 * k * theta) + self.coeffs[i + 1] * np.sin(2 * k * theta)
            k += 1
        return h

    def curvature_values(self, theta: np.ndarray) -> np.ndarray:
        """h + h'' sampled; non-negative iff the expansion is a valid
        support function of a convex body."""
        c = np.full_like(theta, self.coeffs[0])
        k = 1
        for i in range(1, self.coeffs.size, 2):
            w = 1.0 - 4.0 * k * k
            c += w * (self.coeffs[i] * np.cos(2 * k * theta) + self.coeffs[i + 1] * np.sin(2 * k * theta))
            k += 1
        return c

    def is_valid(self, grid: int = 720) -> bool:
        theta = np.linspace(0.0, math.pi, grid, endpoint=False)
        h = self.support_values(theta)
        return bool(h.min() > 1e-9 and self.curvature_values(theta).min() >= -1e-9 * max(self.coeffs[0], 1.0))


def clip_halfplanes(thetas: np.ndarray, gauge: np.ndarray) -> np.ndarray:
    """Polygon of {x : <x, u(theta)> <= gauge(theta)} by successive clipping."""
    r = 4.0 * float(np.max(gauge))
    poly = np.array([[r, r], [-r, r], [-r, -r], [r, -r]])
    for t, g in zip(thetas, gauge):
        u = np.array([math.cos(t), math.sin(t)])
        d = poly @ u - g
        inside = d <= 1e-12
        if inside.all():
            continue
        if not inside.any():
            return np.zeros((0, 2))
        nxt = np.roll(np.arange(len(poly)), -1)
        pieces = []
        for i, j in zip(range(len(poly)), nxt):
            if inside[i]:
                pieces.append(poly[i])
            if inside[i] != inside[j]:
                s = d[i] / (d[i] - d[j])
                pieces.append(poly[i] + s * (poly[j] - poly[i]))
        poly = np.array(pieces)
    return poly


def polygon_area(poly: np.ndarray) -> float:
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return float(0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def wulff_area(thetas: np.ndarray, gauge: np.ndarray) -> float:
    """Area of the planar Wulff shape of a positive gauge over directions."""
    return polygon_area(clip_halfplanes(thetas, gauge))
