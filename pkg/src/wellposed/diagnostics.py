"""Efficiency classification and well-posedness diagnostics on lattices.

Verdicts are tri-states: "no" always carries a re-checkable witness, "yes"
is evidence at the stated resolution and tolerance, "inconclusive" marks
searches that exhausted their schedule.  The default tolerance is two
lattice cell diagonals, so default verdicts are meaningful at the chosen
resolution; passing a tolerance finer than the lattice downgrades yes to
inconclusive rather than overclaiming.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distance import oriented_distance_batch
from .errors import HypothesisNotMet, InputError, NotInteriorPoint, WellposedError
from .problem import ScalarProblem, VectorProblem, diameter, scalarize_linear, scalarize_oriented

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"

WELL_POSED = "well_posed_evidence"
NOT_WELL_POSED = "not_well_posed_evidence"

TOL_ABS = 1e-3
DECAY_RATIO = 0.1


def geometric_schedule(stop_power, start_power=0):
    """Decreasing powers of two: 2^-start_power down to 2^-stop_power."""
    if stop_power < start_power:
        raise InputError("stop_power must be >= start_power")
    return 2.0 ** (-np.arange(start_power, stop_power + 1, dtype=float))


DEFAULT_ALPHA_SCHEDULE = geometric_schedule(10)
STRICT_EPS_SCHEDULE = geometric_schedule(6)
STRICT_DELTA_SCHEDULE = geometric_schedule(20)


def _validate_schedule(schedule, what):
    s = np.asarray(schedule, dtype=float).reshape(-1)
    if s.size == 0 or np.any(s <= 0) or np.any(np.diff(s) >= 0):
        raise InputError(f"{what} must be a decreasing positive schedule")
    return s


# ---------------------------------------------------------------------------
# efficiency classification


@dataclass(frozen=True)
class EfficiencyVerdict:
    """Tri-state classification of one candidate point."""

    point: np.ndarray
    efficient: str
    weakly_efficient: str
    strictly_efficient: str
    witnesses: dict
    grid_resolution: int
    tol: float


def _resolved_tol(problem, grid_resolution, tol):
    if tol is not None:
        if tol <= 0:
            raise InputError("tol must be positive")
        return float(tol)
    return 2.0 * problem.domain.lattice_spacing(grid_resolution)


def classify_point(problem: VectorProblem, x_bar, grid_resolution=201,
                   tol=None) -> EfficiencyVerdict:
    """Classify x_bar as efficient / weakly / strictly efficient by lattice scan.

    A domination witness is a lattice point whose image sits below f(x_bar)
    in the cone order (membership at the cone's own tolerance) and differs
    by more than tol in norm; a weak witness needs every facet margin above
    tol.  Strict efficiency runs the epsilon-delta containment search over
    geometric grids and is decided through the oriented-distance values.
    """
    x_bar = np.asarray(x_bar, dtype=float).reshape(-1)
    if not problem.domain.contains(x_bar, slack=1e-9):
        raise InputError("x_bar must lie in the domain box")
    rtol = _resolved_tol(problem, grid_resolution, tol)
    spacing = problem.domain.lattice_spacing(grid_resolution)
    cone = problem.cone
    f_bar = problem.evaluate_one(x_bar)

    witnesses = {}
    efficient, weakly = YES, YES
    hard_tol = cone.tol

    eps_sched = STRICT_EPS_SCHEDULE
    delta_sched = STRICT_DELTA_SCHEDULE
    # per-delta max distance of {D <= delta}, and the hard level-zero set
    delta_maxdist = np.zeros(delta_sched.size)
    zero_maxdist = 0.0
    zero_far_witness = None

    for pts, _ in problem.domain.iter_lattice(grid_resolution):
        with np.errstate(over="ignore", invalid="ignore"):
            vals = problem.evaluate(pts)
            diff = vals - f_bar[None, :]
            margins = cone.margins(-diff)  # membership margins of f_bar - f(x)
            sizes = np.linalg.norm(diff, axis=1)
            dvals = oriented_distance_batch(cone, diff)
        dists = np.linalg.norm(pts - x_bar[None, :], axis=1)

        dom = (margins >= -cone.tol) & (sizes > rtol)
        if dom.any() and "efficient" not in witnesses:
            k = int(np.flatnonzero(dom)[0])
            witnesses["efficient"] = {"x": pts[k], "f": vals[k],
                                      "margin": float(margins[k]), "size": float(sizes[k])}
            efficient = NO
        weak = margins > rtol
        if weak.any() and "weakly_efficient" not in witnesses:
            k = int(np.flatnonzero(weak)[0])
            witnesses["weakly_efficient"] = {"x": pts[k], "f": vals[k],
                                             "margin": float(margins[k])}
            weakly = NO

        with np.errstate(invalid="ignore"):
            near_zero = dvals <= hard_tol
        if near_zero.any():
            far = float(dists[near_zero].max())
            if far > zero_maxdist:
                zero_maxdist = far
                k = int(np.flatnonzero(near_zero)[int(np.argmax(dists[near_zero]))])
                zero_far_witness = {"x": pts[k], "distance": far, "value": float(dvals[k])}
        for j, delta in enumerate(delta_sched):
            sel = dvals <= delta
            if sel.any():
                delta_maxdist[j] = max(delta_maxdist[j], float(dists[sel].max()))

    strict = YES
    strict_witness = None
    for eps in eps_sched:
        if zero_maxdist > eps:
            strict = NO
            strict_witness = zero_far_witness
            break
        if not np.any(delta_maxdist <= eps):
            strict = INCONCLUSIVE
    if strict_witness is not None:
        witnesses["strictly_efficient"] = strict_witness

    # order relations: strict implies efficient implies weak
    if weakly == NO:
        efficient = NO
        witnesses.setdefault("efficient", witnesses.get("weakly_efficient"))
    if efficient == NO and strict != NO:
        strict = NO
        witnesses.setdefault("strictly_efficient", witnesses.get("efficient"))

    # a yes at a lattice coarser than the requested tol is only inconclusive
    if spacing > rtol:
        efficient = INCONCLUSIVE if efficient == YES else efficient
        weakly = INCONCLUSIVE if weakly == YES else weakly
        strict = INCONCLUSIVE if strict == YES else strict

    return EfficiencyVerdict(x_bar, efficient, weakly, strict, witnesses,
                             grid_resolution, rtol)


def weff_via_distance(problem: VectorProblem, x_bar, grid_resolution=201,
                      tol=None) -> bool:
    """Weak efficiency through the oriented-distance scalarization: x_bar is
    weakly efficient iff the scalarized lattice minimum is >= -tol (x_bar
    itself attains 0)."""
    rtol = _resolved_tol(problem, grid_resolution, tol)
    sp = scalarize_oriented(problem, x_bar)
    best = 0.0  # value at x_bar itself
    for pts, _ in problem.domain.iter_lattice(grid_resolution):
        with np.errstate(invalid="ignore"):
            v = float(np.nanmin(sp.evaluate(pts)))
        best = min(best, v)
    return bool(best >= -rtol)


# ---------------------------------------------------------------------------
# well-posedness reports


@dataclass(frozen=True)
class WellPosednessReport:
    """Diameter decay table plus verdict for one diagnostic run.

    diam_curve and counts have shape (levels, directions); scalar runs use
    a single synthetic direction column.  Curves are nonincreasing in the
    level by level-set nesting on a fixed lattice.
    """

    kind: str
    label: str
    point: np.ndarray | None
    directions: np.ndarray | None
    schedule: np.ndarray
    diam_curve: np.ndarray
    counts: np.ndarray
    verdict: str
    grid_resolution: int
    lattice_spacing: float
    tol_abs: float
    decay_ratio: float
    details: dict


def _curve_verdict(diams, spacing, tol_abs, decay_ratio):
    threshold = tol_abs + 2.0 * spacing
    final, initial = float(diams[-1]), float(diams[0])
    if final <= threshold and (initial <= threshold or final <= decay_ratio * initial):
        return WELL_POSED
    if final > threshold and final >= 0.5 * initial:
        return NOT_WELL_POSED
    return INCONCLUSIVE


def _aggregate(verdicts):
    if all(v == WELL_POSED for v in verdicts):
        return WELL_POSED
    if any(v == NOT_WELL_POSED for v in verdicts):
        return NOT_WELL_POSED
    return INCONCLUSIVE


def _scalar_lattice_values(sp: ScalarProblem, grid_resolution):
    total = sp.domain.lattice_size(grid_resolution)
    values = np.empty(total)
    for pts, start in sp.domain.iter_lattice(grid_resolution):
        with np.errstate(over="ignore", invalid="ignore"):
            values[start:start + pts.shape[0]] = sp.evaluate(pts)
    return values


def tykhonov_diagnostic(sp: ScalarProblem, level_schedule=None, grid_resolution=201,
                        tol_abs=TOL_ABS, decay_ratio=DECAY_RATIO) -> WellPosednessReport:
    """Level-set diameter decay above the lattice infimum (scalar problems).

    Levels are inf + offset for each schedule offset; the argmin always
    belongs to every level set, so the curve exists everywhere.
    """
    schedule = _validate_schedule(
        DEFAULT_ALPHA_SCHEDULE if level_schedule is None else level_schedule,
        "level_schedule")
    values = _scalar_lattice_values(sp, grid_resolution)
    if not np.all(np.isfinite(values)):
        raise InputError("objective must be finite on the lattice")
    inf = float(values.min())
    argmin_flat = int(values.argmin())
    diams = np.zeros((schedule.size, 1))
    counts = np.zeros((schedule.size, 1), dtype=int)
    for i, off in enumerate(schedule):
        sel = np.flatnonzero(values <= inf + off)
        if sel.size == 0:
            raise WellposedError("internal: empty level set above the infimum")
        pts = sp.domain.lattice_points_at(grid_resolution, sel)
        diams[i, 0] = diameter(pts)
        counts[i, 0] = sel.size
    spacing = sp.domain.lattice_spacing(grid_resolution)
    verdict = _curve_verdict(diams[:, 0], spacing, tol_abs, decay_ratio)
    argmin_point = sp.domain.lattice_points_at(grid_resolution, [argmin_flat])[0]
    return WellPosednessReport(
        kind="tykhonov", label=sp.label, point=None, directions=None,
        schedule=schedule, diam_curve=diams, counts=counts, verdict=verdict,
        grid_resolution=grid_resolution, lattice_spacing=spacing,
        tol_abs=tol_abs, decay_ratio=decay_ratio,
        details={"lattice_infimum": inf, "argmin": argmin_point},
    )


def dh_diagnostic(problem: VectorProblem, x_bar, directions=None, alpha_schedule=None,
                  grid_resolution=201, tol_abs=TOL_ABS, decay_ratio=DECAY_RATIO,
                  require_efficient=True) -> WellPosednessReport:
    """Vector level-set diameter decay along interior directions at x_bar.

    Checks L(f(x_bar) + alpha*c) for each direction c and decreasing alpha;
    well-posed evidence needs every direction's curve to collapse.  x_bar
    must classify efficient unless require_efficient=False.
    """
    x_bar = np.asarray(x_bar, dtype=float).reshape(-1)
    if not problem.domain.contains(x_bar, slack=1e-9):
        raise InputError("x_bar must lie in the domain box")
    schedule = _validate_schedule(
        DEFAULT_ALPHA_SCHEDULE if alpha_schedule is None else alpha_schedule,
        "alpha_schedule")
    if require_efficient:
        verdict = classify_point(problem, x_bar, grid_resolution)
        if verdict.efficient == NO:
            raise HypothesisNotMet(
                "x_bar classifies as not efficient; pass require_efficient=False to override")
    if directions is None:
        dirs = problem.cone.interior_direction_battery()
    else:
        dirs = np.atleast_2d(np.asarray(directions, dtype=float))
        if dirs.shape[1] != problem.objective_dim:
            raise InputError("direction dimension mismatch")
        for c in dirs:
            if not problem.cone.contains(c, strict=True):
                raise NotInteriorPoint("every direction must be strictly interior to the cone")

    f_bar = problem.evaluate_one(x_bar)
    cone = problem.cone
    diams = np.zeros((schedule.size, dirs.shape[0]))
    counts = np.zeros((schedule.size, dirs.shape[0]), dtype=int)
    spacing = problem.domain.lattice_spacing(grid_resolution)

    total = problem.domain.lattice_size(grid_resolution)
    store = total <= 2_000_000
    if store:
        margins_chunks, pts_chunks = [], []
        for pts, _ in problem.domain.iter_lattice(grid_resolution):
            with np.errstate(over="ignore", invalid="ignore"):
                margins_chunks.append(problem.evaluate(pts) @ cone.dual_generators.T)
            pts_chunks.append(pts)
        img_margins = np.vstack(margins_chunks)  # <g, f(x)> per lattice point
        lattice_pts = np.vstack(pts_chunks)
        for j, c in enumerate(dirs):
            for i, alpha in enumerate(schedule):
                y = f_bar + alpha * c
                bound = cone.dual_generators @ y
                with np.errstate(invalid="ignore"):
                    mask = np.all(img_margins <= bound[None, :] + cone.tol, axis=1)
                counts[i, j] = int(mask.sum())
                diams[i, j] = diameter(lattice_pts[mask]) if counts[i, j] else 0.0
    else:
        from .problem import level_set
        for j, c in enumerate(dirs):
            for i, alpha in enumerate(schedule):
                ps = level_set(problem, f_bar + alpha * c, grid_resolution)
                counts[i, j] = ps.size
                diams[i, j] = diameter(ps)

    verdict = _aggregate([_curve_verdict(diams[:, j], spacing, tol_abs, decay_ratio)
                          for j in range(dirs.shape[0])])
    return WellPosednessReport(
        kind="dh", label=problem.label, point=x_bar, directions=dirs,
        schedule=schedule, diam_curve=diams, counts=counts, verdict=verdict,
        grid_resolution=grid_resolution, lattice_spacing=spacing,
        tol_abs=tol_abs, decay_ratio=decay_ratio,
        details={"f_bar": f_bar},
    )


def dh_via_scalarization(problem: VectorProblem, x_bar, level_schedule=None,
                         grid_resolution=201, tol_abs=TOL_ABS,
                         decay_ratio=DECAY_RATIO) -> WellPosednessReport:
    """Equivalent route: run the scalar diagnostic on the oriented-distance
    scalarization at x_bar and report it as a dh verdict."""
    x_bar = np.asarray(x_bar, dtype=float).reshape(-1)
    sp = scalarize_oriented(problem, x_bar)
    base = tykhonov_diagnostic(sp, level_schedule=level_schedule,
                               grid_resolution=grid_resolution,
                               tol_abs=tol_abs, decay_ratio=decay_ratio)
    details = dict(base.details)
    details["route"] = "oriented-distance-scalarization"
    return WellPosednessReport(
        kind="dh-scalarized", label=problem.label, point=x_bar, directions=None,
        schedule=base.schedule, diam_curve=base.diam_curve, counts=base.counts,
        verdict=base.verdict, grid_resolution=grid_resolution,
        lattice_spacing=base.lattice_spacing, tol_abs=tol_abs,
        decay_ratio=decay_ratio, details=details,
    )


@dataclass(frozen=True)
class LinearRouteResult:
    """Outcome of the one-directional linear-scalarization sufficiency route."""

    holds: bool
    x_bar: np.ndarray | None
    report: WellPosednessReport


def dh_sufficient_linear(problem: VectorProblem, xi, level_schedule=None,
                         grid_resolution=201, tol_abs=TOL_ABS,
                         decay_ratio=DECAY_RATIO) -> LinearRouteResult:
    """Sufficient (not necessary) route: if <xi, f> is well-posed on the
    lattice, its argmin is the predicted DH-well-posed point."""
    sp = scalarize_linear(problem, xi)
    report = tykhonov_diagnostic(sp, level_schedule=level_schedule,
                                 grid_resolution=grid_resolution,
                                 tol_abs=tol_abs, decay_ratio=decay_ratio)
    if report.verdict != WELL_POSED:
        return LinearRouteResult(False, None, report)
    return LinearRouteResult(True, report.details["argmin"], report)
