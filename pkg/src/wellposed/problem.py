"""Vector problems on box domains, lattices, and the function metric.

A problem couples a pure vectorized evaluator with a finite box domain and
an ordering cone.  All diagnostics sample the box on uniform lattices; the
box therefore owns lattice generation (chunked above a size cap so level
sets of 10^6+ point lattices never materialize whole grids), nearest-point
snapping, and spacing in the "cell diagonal" sense used by every
diameter-flavored tolerance in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from .cone import OrderingCone
from .distance import oriented_distance_batch
from .errors import InputError, NotInteriorPoint

LATTICE_CAP = 2_000_000
CHUNK = 262_144
_DIRECT_DIAMETER_MAX = 3000


# ---------------------------------------------------------------------------
# domain box


@dataclass(frozen=True)
class Box:
    """Axis-aligned box {x : lower <= x <= upper} with lower < upper."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float).reshape(-1)
        hi = np.asarray(self.upper, dtype=float).reshape(-1)
        if lo.shape != hi.shape or lo.size == 0:
            raise InputError("box bounds must be nonempty vectors of equal length")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise InputError("box bounds must be finite")
        if np.any(lo >= hi):
            raise InputError("box needs lower < upper componentwise")
        for name, arr in (("lower", lo), ("upper", hi)):
            arr = np.ascontiguousarray(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self):
        return self.lower.size

    @property
    def center(self):
        return 0.5 * (self.lower + self.upper)

    def contains(self, x, slack=1e-12):
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape != self.lower.shape:
            raise InputError(f"expected point of length {self.dim}")
        return bool(np.all(x >= self.lower - slack) and np.all(x <= self.upper + slack))

    def clip(self, points):
        return np.clip(points, self.lower, self.upper)

    def radius_from(self, x):
        """Distance from x to the farthest box point (a corner)."""
        x = np.asarray(x, dtype=float).reshape(-1)
        return float(np.linalg.norm(np.maximum(np.abs(self.lower - x), np.abs(self.upper - x))))

    def corners(self):
        if self.dim > 16:
            raise InputError("corner enumeration capped at dimension 16")
        cols = np.array(list(itertools.product(*zip(self.lower, self.upper))))
        return cols

    def scaled(self, factor):
        """Box scaled about its center; factor >= used by expanding-domain scans."""
        if factor <= 0:
            raise InputError("scale factor must be positive")
        c, h = self.center, 0.5 * (self.upper - self.lower)
        return Box(c - factor * h, c + factor * h)

    # -- lattices ----------------------------------------------------------

    def _axes(self, resolution):
        if resolution < 2:
            raise InputError("grid resolution must be >= 2")
        return [np.linspace(self.lower[j], self.upper[j], resolution) for j in range(self.dim)]

    def lattice_size(self, resolution):
        return resolution ** self.dim

    def lattice_spacing(self, resolution):
        """Cell diagonal of the uniform lattice (the spacing used in tolerances)."""
        if resolution < 2:
            raise InputError("grid resolution must be >= 2")
        return float(np.linalg.norm((self.upper - self.lower) / (resolution - 1)))

    def lattice(self, resolution):
        total = self.lattice_size(resolution)
        if total > LATTICE_CAP:
            raise InputError(
                f"lattice of {total} points exceeds cap {LATTICE_CAP}; use iter_lattice"
            )
        axes = self._axes(resolution)
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=1)

    def iter_lattice(self, resolution, chunk=CHUNK):
        """Yield (points, start_flat_index) chunks of the lattice in C order."""
        axes = self._axes(resolution)
        total = self.lattice_size(resolution)
        shape = (resolution,) * self.dim
        for start in range(0, total, chunk):
            idx = np.arange(start, min(start + chunk, total))
            multi = np.unravel_index(idx, shape)
            pts = np.stack([axes[j][multi[j]] for j in range(self.dim)], axis=1)
            yield pts, start

    def lattice_points_at(self, resolution, flat_indices):
        """Reconstruct lattice points from flat indices without a grid pass."""
        axes = self._axes(resolution)
        multi = np.unravel_index(np.asarray(flat_indices, dtype=np.int64), (resolution,) * self.dim)
        return np.stack([axes[j][multi[j]] for j in range(self.dim)], axis=1)

    def nearest_lattice_point(self, resolution, x):
        x = np.asarray(x, dtype=float).reshape(-1)
        if not self.contains(x, slack=1e-9):
            raise InputError("point lies outside the box")
        h = (self.upper - self.lower) / (resolution - 1)
        steps = np.clip(np.rint((x - self.lower) / h).astype(np.int64), 0, resolution - 1)
        point = self.lower + steps * h
        flat = int(np.ravel_multi_index(tuple(steps), (resolution,) * self.dim))
        return point, flat


# ---------------------------------------------------------------------------
# point sets and exact diameters


@dataclass(frozen=True)
class PointSet:
    """Finite subset of a box domain (lattice selections, level sets)."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.size == 0:
            pts = pts.reshape(0, pts.shape[1] if pts.ndim == 2 and pts.shape[1] else 1)
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def size(self):
        return self.points.shape[0]

    @property
    def is_empty(self):
        return self.size == 0


def _pairwise_max(points):
    n = points.shape[0]
    if n <= _DIRECT_DIAMETER_MAX:
        return float(pdist(points).max())
    best = 0.0
    for start in range(0, n, 1024):
        blk = points[start:start + 1024]
        for start2 in range(start, n, 4096):
            other = points[start2:start2 + 4096]
            d2 = ((blk[:, None, :] - other[None, :, :]) ** 2).sum(axis=2)
            best = max(best, float(d2.max()))
    return float(np.sqrt(best))


def diameter(point_set):
    """Exact max pairwise distance; 0 for empty or singleton sets.

    Large sets are reduced to convex hull vertices first (after an isometric
    projection onto the affine span, so degenerate sets stay exact).
    """
    pts = point_set.points if isinstance(point_set, PointSet) else np.atleast_2d(np.asarray(point_set, dtype=float))
    n = pts.shape[0]
    if n <= 1:
        return 0.0
    if n <= _DIRECT_DIAMETER_MAX:
        return float(pdist(pts).max())
    mean = pts.mean(axis=0)
    centered = pts - mean
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(s > max(s[0], 1.0) * 1e-12))
    if rank == 0:
        return 0.0
    coords = centered @ vt[:rank].T
    if rank == 1:
        return float(coords.max() - coords.min())
    try:
        hull = ConvexHull(coords)
        verts = coords[hull.vertices]
        if verts.shape[0] <= _DIRECT_DIAMETER_MAX:
            return float(pdist(verts).max())
        return _pairwise_max(verts)
    except QhullError:
        return _pairwise_max(coords)


# ---------------------------------------------------------------------------
# problems


def _validated_batch(points, dim):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != dim:
        raise InputError(f"expected points of length {dim}")
    return pts


@dataclass(frozen=True)
class VectorProblem:
    """Vector objective on a box, ordered by a cone.

    The evaluator must be pure and vectorized: (n, decision_dim) ->
    (n, objective_dim).  `continuous` and `assume_lsc` are assumption flags
    echoed into reports, never tested numerically.
    """

    label: str
    decision_dim: int
    objective_dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    domain: Box
    cone: OrderingCone
    continuous: bool = True
    assume_lsc: bool = True

    def __post_init__(self):
        if self.domain.dim != self.decision_dim:
            raise InputError("domain dimension does not match decision_dim")
        if self.cone.ambient_dim != self.objective_dim:
            raise InputError("cone dimension does not match objective_dim")

    def evaluate(self, points):
        pts = _validated_batch(points, self.decision_dim)
        out = np.asarray(self.evaluator(pts), dtype=float)
        if out.shape != (pts.shape[0], self.objective_dim):
            raise InputError(
                f"evaluator returned shape {out.shape}, expected {(pts.shape[0], self.objective_dim)}"
            )
        return out

    def evaluate_one(self, x):
        x = np.asarray(x, dtype=float).reshape(-1)
        return self.evaluate(x[None, :])[0]


@dataclass(frozen=True)
class ScalarProblem:
    """Scalar objective on a box; evaluator (n, decision_dim) -> (n,)."""

    label: str
    decision_dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    domain: Box

    def __post_init__(self):
        if self.domain.dim != self.decision_dim:
            raise InputError("domain dimension does not match decision_dim")

    def evaluate(self, points):
        pts = _validated_batch(points, self.decision_dim)
        out = np.asarray(self.evaluator(pts), dtype=float).reshape(-1)
        if out.shape != (pts.shape[0],):
            raise InputError("scalar evaluator must return one value per point")
        return out

    def evaluate_one(self, x):
        x = np.asarray(x, dtype=float).reshape(-1)
        return float(self.evaluate(x[None, :])[0])


# ---------------------------------------------------------------------------
# perturbations and scalarizations


@dataclass(frozen=True)
class PerturbationTerm:
    """Additive term a * ||x - center||^exponent * direction.

    The direction must be strictly interior to the ordering cone, so the
    perturbation moves images up the order.
    """

    amplitude: float
    exponent: float
    center: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        if self.amplitude < 0:
            raise InputError("amplitude must be >= 0")
        if self.exponent not in (1.0, 2.0, 1, 2):
            raise InputError("exponent must be 1 or 2")
        c = np.asarray(self.center, dtype=float).reshape(-1)
        d = np.asarray(self.direction, dtype=float).reshape(-1)
        for name, arr in (("center", c), ("direction", d)):
            arr = np.ascontiguousarray(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def perturb(problem: VectorProblem, term: PerturbationTerm) -> VectorProblem:
    """New problem with the norm-cone term added to the objective."""
    if term.center.shape != (problem.decision_dim,):
        raise InputError("perturbation center dimension mismatch")
    if term.direction.shape != (problem.objective_dim,):
        raise InputError("perturbation direction dimension mismatch")
    if not problem.cone.contains(term.direction, strict=True):
        raise NotInteriorPoint("perturbation direction must be strictly interior to the cone")
    base = problem.evaluator
    a, p = float(term.amplitude), float(term.exponent)
    center, direction = term.center, term.direction

    def shifted(points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        r = np.linalg.norm(pts - center[None, :], axis=1)
        return np.asarray(base(pts), dtype=float) + (a * r ** p)[:, None] * direction[None, :]

    return replace(problem, label=problem.label + "+pert", evaluator=shifted)


def scalarize_linear(problem: VectorProblem, xi) -> ScalarProblem:
    """Composition <xi, f(.)> for xi in the dual cone, xi != 0."""
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.shape != (problem.objective_dim,):
        raise InputError("xi dimension mismatch")
    if np.linalg.norm(xi) <= problem.cone.tol:
        raise InputError("xi must be nonzero")
    if np.any(problem.cone.generators @ xi < -problem.cone.tol):
        raise InputError("xi must lie in the dual cone")
    base = problem.evaluator

    def ev(points):
        return np.asarray(base(np.atleast_2d(points)), dtype=float) @ xi

    return ScalarProblem(problem.label + "|lin", problem.decision_dim, ev, problem.domain)


def scalarize_oriented(problem: VectorProblem, x_bar) -> ScalarProblem:
    """Oriented-distance scalarization x -> D_{-C}(f(x) - f(x_bar)).

    Nonnegative on the domain exactly when x_bar is weakly efficient, with
    value 0 at x_bar itself.
    """
    x_bar = np.asarray(x_bar, dtype=float).reshape(-1)
    if not problem.domain.contains(x_bar, slack=1e-9):
        raise InputError("x_bar must lie in the domain box")
    f_bar = problem.evaluate_one(x_bar)
    base, cone = problem.evaluator, problem.cone

    def ev(points):
        vals = np.asarray(base(np.atleast_2d(points)), dtype=float)
        return oriented_distance_batch(cone, vals - f_bar[None, :])

    return ScalarProblem(problem.label + "|od", problem.decision_dim, ev, problem.domain)


# ---------------------------------------------------------------------------
# level sets


def level_set(problem: VectorProblem, y, grid_resolution) -> PointSet:
    """Lattice points x with f(x) <=_C y (non-strict membership of y - f(x))."""
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.shape != (problem.objective_dim,):
        raise InputError("level vector dimension mismatch")
    hits = []
    for pts, _ in problem.domain.iter_lattice(grid_resolution):
        with np.errstate(invalid="ignore"):
            mask = problem.cone.contains_batch(y[None, :] - problem.evaluate(pts))
        if mask.any():
            hits.append(pts[mask])
    if hits:
        return PointSet(np.vstack(hits))
    return PointSet(np.empty((0, problem.decision_dim)))


def scalar_level_set(sp: ScalarProblem, a, grid_resolution) -> PointSet:
    """Lattice points with sp(x) <= a."""
    hits = []
    for pts, _ in sp.domain.iter_lattice(grid_resolution):
        with np.errstate(invalid="ignore"):
            mask = sp.evaluate(pts) <= a
        if mask.any():
            hits.append(pts[mask])
    if hits:
        return PointSet(np.vstack(hits))
    return PointSet(np.empty((0, sp.decision_dim)))


# ---------------------------------------------------------------------------
# distance between problems


@dataclass(frozen=True)
class MetricParams:
    """Parameters of the truncated ball-sup series metric.

    The metric is sum over i of 2^-i u_i/(1+u_i) with u_i the sup of
    ||f - g|| over the radius-i ball around the anchor, intersected with
    the domain box.  anchor=None means the box center.  Any sup above
    overflow_cap (or non-finite) collapses the metric to its cap value 1.
    """

    truncation: int = 20
    samples_per_ball: int = 4096
    anchor: np.ndarray | None = None
    seed: int = 0
    overflow_cap: float = 1e12

    def __post_init__(self):
        if self.truncation < 1:
            raise InputError("truncation must be >= 1")
        if self.samples_per_ball < 1:
            raise InputError("samples_per_ball must be >= 1")
        if self.anchor is not None:
            a = np.ascontiguousarray(np.asarray(self.anchor, dtype=float).reshape(-1))
            a.setflags(write=False)
            object.__setattr__(self, "anchor", a)

    @property
    def tail_bound(self):
        return 2.0 ** (-self.truncation)


def _difference_norms(p, q, points):
    fv = np.asarray(p.evaluate(points), dtype=float)
    gv = np.asarray(q.evaluate(points), dtype=float)
    if fv.ndim == 1:
        fv = fv[:, None]
    if gv.ndim == 1:
        gv = gv[:, None]
    return np.linalg.norm(fv - gv, axis=1)


def _ball_battery(box: Box, anchor, radius):
    """Deterministic probes: anchor, axis extremes, and each box corner
    pulled onto the radius sphere along its ray from the anchor.  For
    norm-type differences centered at the anchor these attain the exact
    sup over ball-intersect-box."""
    rows = [anchor]
    d = box.dim
    for j in range(d):
        for bound in (box.lower[j], box.upper[j]):
            step = np.zeros(d)
            gap = bound - anchor[j]
            if abs(gap) > 0:
                step[j] = np.sign(gap) * min(radius, abs(gap))
                rows.append(anchor + step)
    if d <= 16:
        corners = box.corners()
        rays = corners - anchor[None, :]
        lens = np.linalg.norm(rays, axis=1)
        ok = lens > 0
        scale = np.minimum(radius / lens[ok], 1.0)
        rows.extend(anchor[None, :] + scale[:, None] * rays[ok])
    return np.array(rows)


def function_distance(p, q, params: MetricParams | None = None) -> float:
    """Metric between two problems sharing a domain box; value in [0, 1]."""
    params = params or MetricParams()
    if not (np.allclose(p.domain.lower, q.domain.lower) and np.allclose(p.domain.upper, q.domain.upper)):
        raise InputError("problems must share a domain box")
    box = p.domain
    anchor = box.center if params.anchor is None else params.anchor
    if anchor.shape != (box.dim,):
        raise InputError("anchor dimension mismatch")
    if not box.contains(anchor, slack=1e-9):
        raise InputError("anchor must lie inside the domain box")

    seeds = np.random.SeedSequence(params.seed).spawn(params.truncation)
    total = 0.0
    for i in range(1, params.truncation + 1):
        radius = float(i)
        probes = _ball_battery(box, anchor, radius)
        rng = np.random.default_rng(seeds[i - 1])
        dirs = rng.standard_normal((params.samples_per_ball, box.dim))
        norms = np.linalg.norm(dirs, axis=1)
        norms[norms == 0] = 1.0
        radii = radius * rng.random(params.samples_per_ball) ** (1.0 / box.dim)
        samples = box.clip(anchor[None, :] + (radii / norms)[:, None] * dirs)
        pts = np.vstack([probes, samples])
        with np.errstate(over="ignore", invalid="ignore"):
            u = float(np.max(_difference_norms(p, q, pts)))
        if not np.isfinite(u) or u > params.overflow_cap:
            return 1.0
        total += 2.0 ** (-i) * u / (1.0 + u)
    return total
