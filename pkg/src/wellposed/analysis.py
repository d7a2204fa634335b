"""Structural screens: cone-convexity, dual quasiconvexity, boundedness,
and the bilinear minimax gap.

Every verdict here is a tri-state backed by sampling evidence, never a
proof: "evidence_holds" means no violation was found at the stated sample
count, "counterexample_found" carries a re-checkable witness, and
boundedness adds "inconclusive" for scans that neither stabilize nor
clearly diverge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .cone import OrderingCone
from .errors import InputError, NumericalFailure
from .problem import Box, VectorProblem

EVIDENCE = "evidence_holds"
COUNTEREXAMPLE = "counterexample_found"
INCONCLUSIVE = "inconclusive"

STABILIZE_TOL = 1e-6
DIVERGE_SLOPE = 1.0
BOX_SCHEDULE = (1.0, 2.0, 4.0, 8.0)


@dataclass(frozen=True)
class StructuralVerdict:
    """Outcome of one structural screen."""

    prop: str
    verdict: str
    witness: dict | None
    samples_used: int
    detail: dict

    @property
    def holds(self):
        return self.verdict == EVIDENCE


def _sample_pairs(box: Box, n, rng):
    x = box.lower + (box.upper - box.lower) * rng.random((n, box.dim))
    z = box.lower + (box.upper - box.lower) * rng.random((n, box.dim))
    t = rng.random(n)
    return x, z, t


def is_C_convex(problem: VectorProblem, n_samples=512, seed=0, tol=1e-7) -> StructuralVerdict:
    """Cone-convexity screen with two independent routes that must agree.

    Route A tests membership of the convex-combination gap in the cone on
    random triples; route B tests per-dual-generator second differences
    along uniform segment grids.  Either route's violation wins.
    """
    rng = np.random.default_rng(seed)
    cone = problem.cone
    x, z, t = _sample_pairs(problem.domain, n_samples, rng)
    fx, fz = problem.evaluate(x), problem.evaluate(z)
    mid = x + (1.0 - t)[:, None] * (z - x)  # t*x + (1-t)*z
    fmid = problem.evaluate(mid)
    gap = t[:, None] * fx + (1.0 - t)[:, None] * fz - fmid
    scale = 1.0 + np.abs(np.concatenate([fx, fz, fmid])).max()
    margins = cone.margins(gap)
    worst_a = int(np.argmin(margins))
    viol_a = margins[worst_a] < -tol * scale

    # route B: discrete second differences of <g, f> along segments
    grid = np.linspace(0.0, 1.0, 9)
    seg = x[:, None, :] + grid[None, :, None] * (z - x)[:, None, :]
    vals = problem.evaluate(seg.reshape(-1, problem.decision_dim))
    vals = vals.reshape(n_samples, grid.size, problem.objective_dim)
    d2 = vals[:, :-2, :] - 2.0 * vals[:, 1:-1, :] + vals[:, 2:, :]
    d2g = d2 @ cone.dual_generators.T  # (n, grid-2, f)
    flat = int(np.argmin(d2g))
    bi, bs, bg = np.unravel_index(flat, d2g.shape)
    viol_b = d2g[bi, bs, bg] < -tol * scale

    witness = None
    if viol_a:
        witness = {
            "route": "combination-gap",
            "x": x[worst_a],
            "z": z[worst_a],
            "t": float(t[worst_a]),
            "margin": float(margins[worst_a]),
        }
    elif viol_b:
        witness = {
            "route": "second-difference",
            "x": x[bi],
            "z": z[bi],
            "segment_offset": float(grid[bs + 1]),
            "dual_index": int(bg),
            "margin": float(d2g[bi, bs, bg]),
        }
    detail = {
        "route_combination": COUNTEREXAMPLE if viol_a else EVIDENCE,
        "route_second_difference": COUNTEREXAMPLE if viol_b else EVIDENCE,
        "worst_combination_margin": float(margins[worst_a]),
        "worst_second_difference": float(d2g[bi, bs, bg]),
    }
    verdict = COUNTEREXAMPLE if (viol_a or viol_b) else EVIDENCE
    return StructuralVerdict("cone-convexity", verdict, witness, n_samples, detail)


def is_star_quasiconvex(problem: VectorProblem, n_directions=8, n_samples=512,
                        seed=0, tol=1e-7) -> StructuralVerdict:
    """Quasiconvexity of every sampled dual scalarization <xi, f>."""
    rng = np.random.default_rng(seed)
    dirs = problem.cone.sample_dual_sphere(n_directions, seed=seed)
    x, z, t = _sample_pairs(problem.domain, n_samples, rng)
    fx, fz = problem.evaluate(x), problem.evaluate(z)
    mid = x + (1.0 - t)[:, None] * (z - x)
    fmid = problem.evaluate(mid)
    witness = None
    worst = -np.inf
    for xi in dirs:
        hx, hz, hm = fx @ xi, fz @ xi, fmid @ xi
        scale = 1.0 + max(np.abs(hx).max(), np.abs(hz).max(), np.abs(hm).max())
        excess = hm - np.maximum(hx, hz)
        k = int(np.argmax(excess))
        if excess[k] > worst:
            worst = excess[k]
        if excess[k] > tol * scale and witness is None:
            witness = {
                "xi": xi,
                "x": x[k],
                "z": z[k],
                "t": float(t[k]),
                "excess": float(excess[k]),
            }
    verdict = COUNTEREXAMPLE if witness is not None else EVIDENCE
    detail = {"directions": dirs, "worst_excess": float(worst)}
    return StructuralVerdict("star-quasiconvexity", verdict, witness,
                             n_samples * dirs.shape[0], detail)


def _validate_dual_vector(problem: VectorProblem, xi):
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.shape != (problem.objective_dim,):
        raise InputError("xi dimension mismatch")
    if np.linalg.norm(xi) <= problem.cone.tol:
        raise InputError("xi must be nonzero")
    if np.any(problem.cone.generators @ xi < -problem.cone.tol):
        raise InputError("xi must lie in the dual cone")
    return xi


def is_C_bounded_below(problem: VectorProblem, xi, box_schedule=BOX_SCHEDULE,
                       grid_resolution=65, stabilize_tol=STABILIZE_TOL,
                       diverge_slope=DIVERGE_SLOPE) -> StructuralVerdict:
    """Bounded-below screen for <xi, f> on expanding copies of the box.

    Evidence when the expanding-box minima stabilize, counterexample when
    the last doubling still drops the minimum by more than the slope
    threshold (or hits -inf), inconclusive otherwise.
    """
    xi = _validate_dual_vector(problem, xi)
    if len(box_schedule) < 2:
        raise InputError("box_schedule needs at least two expansion factors")
    minima, argmins = [], []
    for factor in box_schedule:
        big = problem.domain.scaled(float(factor))
        best, best_x = np.inf, None
        for pts, _ in big.iter_lattice(grid_resolution):
            with np.errstate(over="ignore", invalid="ignore"):
                vals = problem.evaluate(pts) @ xi
            vals = np.where(np.isnan(vals), np.inf, vals)
            k = int(np.argmin(vals))
            if vals[k] < best:
                best, best_x = float(vals[k]), pts[k]
        minima.append(best)
        argmins.append(best_x)
    drop = minima[-1] - minima[-2]
    detail = {"minima": minima, "box_schedule": tuple(box_schedule), "xi": xi}
    if not np.isfinite(minima[-1]) or drop < -diverge_slope:
        witness = {"minima": minima, "argmins": argmins, "final_drop": float(drop)}
        return StructuralVerdict("bounded-below", COUNTEREXAMPLE, witness,
                                 len(box_schedule), detail)
    if abs(drop) <= stabilize_tol:
        return StructuralVerdict("bounded-below", EVIDENCE, None, len(box_schedule), detail)
    return StructuralVerdict("bounded-below", INCONCLUSIVE, None, len(box_schedule), detail)


@dataclass(frozen=True)
class BoundingSearch:
    """Result of the bounding-functional scan; xi is None when nothing held."""

    xi: np.ndarray | None
    scanned: tuple


def find_bounding_functional(problem: VectorProblem, n_random=16, seed=0,
                             box_schedule=BOX_SCHEDULE, grid_resolution=65) -> BoundingSearch:
    """First dual-base candidate whose scalarization is bounded below.

    Scans the base polytope vertices, then deterministic mixtures (centroid
    and pairwise midpoints), then seeded random base points.
    """
    verts = problem.cone.base_polytope()
    candidates = [v for v in verts]
    if verts.shape[0] > 1:
        candidates.append(verts.mean(axis=0))
        for i, j in itertools.combinations(range(verts.shape[0]), 2):
            candidates.append(0.5 * (verts[i] + verts[j]))
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        w = rng.random(verts.shape[0])
        candidates.append((w / w.sum()) @ verts)

    seen, scanned = [], []
    for xi in candidates:
        if any(np.linalg.norm(xi - s) <= 1e-12 for s in seen):
            continue
        seen.append(xi)
        verdict = is_C_bounded_below(problem, xi, box_schedule=box_schedule,
                                     grid_resolution=grid_resolution)
        scanned.append((xi, verdict.verdict))
        if verdict.holds:
            return BoundingSearch(xi, tuple(scanned))
    return BoundingSearch(None, tuple(scanned))


# ---------------------------------------------------------------------------
# bilinear minimax


def _simplex_lattice(dim, subdivisions):
    """All points of the probability simplex with coordinates k/subdivisions."""
    pts = []
    for bars in itertools.combinations(range(subdivisions + dim - 1), dim - 1):
        prev, counts = -1, []
        for b in bars:
            counts.append(b - prev - 1)
            prev = b
        counts.append(subdivisions + dim - 2 - prev)
        pts.append(counts)
    return np.array(pts, dtype=float) / subdivisions


def _lp(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None, bounds=None):
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds,
                  method="highs")
    if not res.success:
        raise NumericalFailure(f"LP cross-check failed: {res.message}")
    return res


@dataclass(frozen=True)
class SionGap:
    """sup-inf / inf-sup pair with LP cross-checks; unpacks as the pair."""

    sup_inf: float
    inf_sup: float
    sup_inf_exact: float
    inf_sup_exact: float
    lattice_error: float

    def __iter__(self):
        return iter((self.sup_inf, self.inf_sup))


def sion_gap(matrix, w_domain, z_subdivisions=64, w_resolution=33) -> SionGap:
    """Both curvatures of the bilinear saddle z^T A w, z over the simplex.

    w_domain is either a Box or the string "simplex".  Inner problems are
    exact (corner/vertex arguments of a linear function); outer problems
    are solved on fine lattices and cross-checked by exact LPs.
    """
    a = np.atleast_2d(np.asarray(matrix, dtype=float))
    kz, kw = a.shape
    if kz < 1 or kw < 1 or not np.all(np.isfinite(a)):
        raise InputError("matrix must be a finite 2-d array")

    if isinstance(w_domain, str):
        if w_domain != "simplex":
            raise InputError("w_domain must be a Box or 'simplex'")
        corners = np.eye(kw)
        w_lattice = _simplex_lattice(kw, z_subdivisions)
        w_is_simplex = True
        mesh_w = kw / z_subdivisions
    else:
        if not isinstance(w_domain, Box) or w_domain.dim != kw:
            raise InputError(f"w_domain must be a Box of dimension {kw}")
        corners = w_domain.corners()
        if w_domain.lattice_size(w_resolution) > 2_500_000:
            raise InputError("w lattice too large; lower w_resolution")
        w_lattice = w_domain.lattice(w_resolution)
        w_is_simplex = False
        mesh_w = w_domain.lattice_spacing(w_resolution)

    # sup over z-lattice of (exact) inf over w
    z_lattice = _simplex_lattice(kz, z_subdivisions)
    inner = z_lattice @ (a @ corners.T)  # (nz, ncorners)
    phi = inner.min(axis=1)
    sup_inf = float(phi.max())

    # inf over w-lattice of (exact) sup over z: max coordinate of A w
    psi = (w_lattice @ a.T).max(axis=1)
    inf_sup = float(psi.min())

    # exact LP values for both orders
    # max t s.t. t <= z^T A c for all corners c, z in simplex
    n = kz + 1
    a_ub = np.hstack([-(a @ corners.T).T, np.ones((corners.shape[0], 1))])
    b_ub = np.zeros(corners.shape[0])
    a_eq = np.concatenate([np.ones(kz), [0.0]])[None, :]
    c = np.zeros(n)
    c[-1] = -1.0
    res = _lp(c, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=np.array([1.0]),
              bounds=[(0, None)] * kz + [(None, None)])
    sup_inf_exact = float(res.x[-1])

    # min t s.t. A w <= t, w in domain
    n = kw + 1
    a_ub = np.hstack([a, -np.ones((kz, 1))])
    b_ub = np.zeros(kz)
    c = np.zeros(n)
    c[-1] = 1.0
    if w_is_simplex:
        a_eq = np.concatenate([np.ones(kw), [0.0]])[None, :]
        res = _lp(c, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=np.array([1.0]),
                  bounds=[(0, None)] * kw + [(None, None)])
    else:
        bounds = [(lo, hi) for lo, hi in zip(w_domain.lower, w_domain.upper)] + [(None, None)]
        res = _lp(c, a_ub=a_ub, b_ub=b_ub, bounds=bounds)
    inf_sup_exact = float(res.x[-1])

    lip_phi = float(np.linalg.norm(a @ corners.T, axis=0).max()) if corners.size else 0.0
    lip_psi = float(np.linalg.norm(a, axis=1).max())
    err = max(lip_phi * kz / z_subdivisions, lip_psi * mesh_w)
    return SionGap(sup_inf, inf_sup, sup_inf_exact, inf_sup_exact, float(err))
