"""Regularization constructions: norm-cone perturbations that restore
well-posedness, the discrete Ekeland step they rely on, the end-to-end
approximation pipeline, and the genericity probe built on top of it.

The pipeline's output is a certificate: every constant in it is
recomputable from the inputs and seed, and final verification failures
raise instead of silently returning.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .analysis import BoundingSearch, find_bounding_functional, is_C_convex
from .diagnostics import (
    NO,
    WELL_POSED,
    YES,
    WellPosednessReport,
    classify_point,
    dh_diagnostic,
    geometric_schedule,
    tykhonov_diagnostic,
)
from .errors import (
    CertificateFailure,
    HypothesisNotMet,
    InputError,
    NoBoundingFunctional,
)
from .problem import (
    MetricParams,
    PerturbationTerm,
    ScalarProblem,
    VectorProblem,
    function_distance,
    perturb,
    scalarize_linear,
)

J_CAP = 2 ** 30


# ---------------------------------------------------------------------------
# Tikhonov-type regularization


@dataclass(frozen=True)
class TikhonovCertificate:
    """Recorded facts about one regularization f + (1/n)||x - x_bar|| k0."""

    n: int
    efficient_at_center: str
    strictly_efficient_at_center: str
    strict_not_no: bool
    dh_verdict: str
    metric_value: float
    metric_tail: float
    classify: object
    dh_report: WellPosednessReport


def tikhonov_regularize(problem: VectorProblem, x_bar, n, grid_resolution=201,
                        metric_params: MetricParams | None = None,
                        alpha_schedule=None):
    """Perturb by (1/n)||x - x_bar|| k0 and certify what the construction keeps.

    Requires x_bar to classify efficient (evidence) for the base problem.
    Returns (perturbed problem, certificate); the certificate records the
    efficiency and DH verdicts at x_bar for the perturbed problem and the
    metric distance to the original.
    """
    if int(n) != n or n < 1:
        raise InputError("n must be a positive integer")
    n = int(n)
    x_bar = np.asarray(x_bar, dtype=float).reshape(-1)
    base_verdict = classify_point(problem, x_bar, grid_resolution)
    if base_verdict.efficient != YES:
        raise HypothesisNotMet(
            f"x_bar must classify efficient for {problem.label}; got {base_verdict.efficient}")

    term = PerturbationTerm(1.0 / n, 1.0, x_bar, problem.cone.k0)
    perturbed = replace(perturb(problem, term), label=f"{problem.label}+tik{n}")

    mp = metric_params or MetricParams()
    verdict = classify_point(perturbed, x_bar, grid_resolution)
    schedule = geometric_schedule(20) if alpha_schedule is None else alpha_schedule
    report = dh_diagnostic(perturbed, x_bar, alpha_schedule=schedule,
                           grid_resolution=grid_resolution, require_efficient=False)
    dist = function_distance(problem, perturbed, mp)
    cert = TikhonovCertificate(
        n=n,
        efficient_at_center=verdict.efficient,
        strictly_efficient_at_center=verdict.strictly_efficient,
        strict_not_no=(not problem.continuous) or (verdict.strictly_efficient != NO),
        dh_verdict=report.verdict,
        metric_value=dist,
        metric_tail=mp.tail_bound,
        classify=verdict,
        dh_report=report,
    )
    return perturbed, cert


# ---------------------------------------------------------------------------
# discrete Ekeland step


@dataclass(frozen=True)
class EkelandResult:
    """Fixed point of the lattice descent x -> argmin sp + eps*||. - x||.

    The three certified facts: the point stayed within r of the start, the
    descent inequality holds against the start, and x_hat is the unique
    lattice minimizer of sp + eps*||. - x_hat|| (minimal margin recorded).
    """

    x_hat: np.ndarray
    x_start: np.ndarray
    value: float
    epsilon: float
    r: float
    iterations: int
    distance_to_start: float
    within_radius: bool
    descent_holds: bool
    descent_slack: float
    min_margin: float
    unique_minimizer: bool
    grid_resolution: int


def ekeland_point(sp: ScalarProblem, x_start, epsilon, r, grid_resolution=201,
                  tol=1e-9) -> EkelandResult:
    """Iterate the discrete variational descent to its fixed point.

    The start is snapped to the nearest lattice point; the hypothesis
    sp(start) < inf + r*epsilon is checked there.  Ties in the argmin
    resolve lexicographically, which forces strict objective descent and
    hence termination.
    """
    if epsilon <= 0 or r <= 0:
        raise InputError("epsilon and r must be positive")
    total = sp.domain.lattice_size(grid_resolution)
    if total > 2_000_000:
        raise InputError("lattice too large for the exhaustive Ekeland step")
    points = sp.domain.lattice(grid_resolution)
    with np.errstate(over="ignore", invalid="ignore"):
        values = sp.evaluate(points)
    if not np.all(np.isfinite(values)):
        raise InputError("objective must be finite on the lattice")

    x0, flat0 = sp.domain.nearest_lattice_point(grid_resolution, x_start)
    inf = float(values.min())
    if not values[flat0] < inf + r * epsilon:
        raise HypothesisNotMet(
            f"start value {values[flat0]:.6g} is not below inf + r*eps = {inf + r * epsilon:.6g}")

    cur = flat0
    iterations = 0
    while True:
        weights = values + epsilon * np.linalg.norm(points - points[cur], axis=1)
        nxt = int(np.argmin(weights))  # first minimum = lexicographically smallest
        if nxt == cur:
            break
        cur = nxt
        iterations += 1
        if iterations > total:
            raise CertificateFailure("descent failed to terminate", clause="termination")

    x_hat = points[cur]
    dist_start = float(np.linalg.norm(x_hat - x0))
    final = values + epsilon * np.linalg.norm(points - x_hat, axis=1) - values[cur]
    final[cur] = np.inf
    min_margin = float(final.min()) if total > 1 else np.inf
    descent_slack = float(values[flat0] - epsilon * dist_start - values[cur])
    spacing = sp.domain.lattice_spacing(grid_resolution)
    return EkelandResult(
        x_hat=x_hat, x_start=x0, value=float(values[cur]), epsilon=float(epsilon),
        r=float(r), iterations=iterations, distance_to_start=dist_start,
        within_radius=bool(dist_start < r + spacing),
        descent_holds=bool(descent_slack >= -tol),
        descent_slack=descent_slack,
        min_margin=min_margin,
        unique_minimizer=bool(min_margin > tol),
        grid_resolution=grid_resolution,
    )


# ---------------------------------------------------------------------------
# density pipeline


@dataclass(frozen=True)
class PipelineCertificate:
    """End-to-end record of one approximation h with d(f, h) < sigma.

    Carries both intermediate problems, all constants, the Ekeland result,
    and the verification verdicts; construction raises CertificateFailure
    rather than returning an unverified certificate.
    """

    label: str
    sigma: float
    xi_bar: np.ndarray
    k0_rescaled: np.ndarray
    j: int
    sublevel_radius: float
    series_value: float
    series_tail: float
    epsilon: float
    r: float
    x_hat: np.ndarray
    x_hat_to_anchor: float
    d_f_g: float
    d_g_h: float
    d_f_h: float
    metric_tail: float
    ekeland: EkelandResult
    efficient_at_x_hat: str
    dh_verdict: str
    g: VectorProblem
    h: VectorProblem
    dh_report: WellPosednessReport
    bounding_scan: BoundingSearch


def _smallest_feasible_j(problem, metric_params, sigma, anchor, k0r):
    """Doubling-then-bisection search for the least j with d(f, g_j) < sigma/2."""

    def build(j):
        term = PerturbationTerm(1.0 / j, 1.0, anchor, k0r)
        return replace(perturb(problem, term), label=f"{problem.label}+base")

    def dist(j):
        return function_distance(problem, build(j), metric_params)

    j = 1
    while dist(j) >= sigma / 2.0:
        j *= 2
        if j > J_CAP:
            raise CertificateFailure(
                f"no j <= {J_CAP} brings the perturbation within sigma/2; "
                "sigma is too small for the domain scale", clause="j-doubling-cap")
    lo, hi = j // 2 + 1, j
    while lo < hi:
        mid = (lo + hi) // 2
        if dist(mid) < sigma / 2.0:
            hi = mid
        else:
            lo = mid + 1
    return hi, build(hi), dist(hi)


def density_pipeline(problem: VectorProblem, sigma, grid_resolution=201,
                     metric_params: MetricParams | None = None,
                     alpha_schedule=None, seed=0,
                     box_schedule=(1.0, 2.0, 4.0, 8.0),
                     bound_resolution=65):
    """Construct a nearby problem that is provably well behaved at one point.

    Steps: find a bounding functional, rescale k0 against it, pull the
    norm-cone base perturbation inside sigma/2, run the discrete Ekeland
    step on the linear scalarization, add the Ekeland cone term, and verify
    efficiency, DH evidence, and all metric budgets.
    """
    if sigma <= 0:
        raise InputError("sigma must be positive")
    mp = metric_params or MetricParams()
    anchor = problem.domain.center if mp.anchor is None else np.asarray(mp.anchor, dtype=float)

    search = find_bounding_functional(problem, seed=seed, box_schedule=box_schedule,
                                      grid_resolution=bound_resolution)
    if search.xi is None:
        raise NoBoundingFunctional(
            f"no bounding functional found for {problem.label} "
            f"({len(search.scanned)} candidates scanned)", scanned=search.scanned)
    xi_bar = search.xi
    pairing = float(problem.cone.k0 @ xi_bar)
    if pairing <= problem.cone.tol:
        raise NoBoundingFunctional("bounding functional is degenerate against k0",
                                   scanned=search.scanned)
    k0r = problem.cone.k0 / pairing

    j, g, d_f_g = _smallest_feasible_j(problem, mp, float(sigma), anchor, k0r)

    g_xi = scalarize_linear(g, xi_bar)
    values_min, radius = np.inf, 0.0
    for pts, _ in g_xi.domain.iter_lattice(grid_resolution):
        vals = g_xi.evaluate(pts)
        values_min = min(values_min, float(vals.min()))
    for pts, _ in g_xi.domain.iter_lattice(grid_resolution):
        vals = g_xi.evaluate(pts)
        sel = vals <= values_min + 1.0
        if sel.any():
            radius = max(radius, float(np.linalg.norm(pts[sel] - anchor[None, :], axis=1).max()))

    k0r_norm = float(np.linalg.norm(k0r))
    ks = np.arange(0, mp.truncation + 1, dtype=float)
    series = float(np.sum(2.0 ** (-ks) * (ks + radius)) * k0r_norm)
    tail = float(2.0 ** (-mp.truncation) * (mp.truncation + 2 + radius) * k0r_norm)
    epsilon = float(sigma) / (2.0 * series)

    spacing = problem.domain.lattice_spacing(grid_resolution)
    r = max(2.0 * radius, 2.0 * spacing)
    argmin_flat = None
    best = np.inf
    for pts, start in g_xi.domain.iter_lattice(grid_resolution):
        vals = g_xi.evaluate(pts)
        k = int(np.argmin(vals))
        if vals[k] < best:
            best, argmin_flat = float(vals[k]), start + k
    start_point = g_xi.domain.lattice_points_at(grid_resolution, [argmin_flat])[0]
    ek = ekeland_point(g_xi, start_point, epsilon, r, grid_resolution)

    term = PerturbationTerm(epsilon, 1.0, ek.x_hat, k0r)
    h = replace(perturb(g, term), label=f"{problem.label}+cert")

    anchor_dist = float(np.linalg.norm(ek.x_hat - anchor))
    if anchor_dist > radius + spacing:
        raise CertificateFailure(
            f"x_hat strayed {anchor_dist:.6g} from the anchor, beyond M + spacing",
            clause="center-radius")
    verdict = classify_point(h, ek.x_hat, grid_resolution)
    if verdict.efficient != YES:
        raise CertificateFailure(
            f"x_hat failed the efficiency check ({verdict.efficient})", clause="efficiency")
    schedule = geometric_schedule(20) if alpha_schedule is None else alpha_schedule
    report = dh_diagnostic(h, ek.x_hat, alpha_schedule=schedule,
                           grid_resolution=grid_resolution, require_efficient=False)
    if report.verdict != WELL_POSED:
        raise CertificateFailure(
            f"DH diagnostic returned {report.verdict} at x_hat", clause="dh-evidence")

    d_g_h = function_distance(g, h, mp)
    d_f_h = function_distance(problem, h, mp)
    if not d_f_h < sigma:
        raise CertificateFailure(
            f"d(f, h) = {d_f_h:.6g} is not below sigma = {sigma}", clause="metric-budget")
    if d_g_h > sigma / 2.0 + tail:
        raise CertificateFailure(
            f"d(g, h) = {d_g_h:.6g} exceeds sigma/2 + tail", clause="metric-budget")
    if d_f_h > d_f_g + d_g_h + 2.0 * mp.tail_bound:
        raise CertificateFailure("metric triangle budget violated", clause="metric-budget")

    cert = PipelineCertificate(
        label=problem.label, sigma=float(sigma), xi_bar=xi_bar, k0_rescaled=k0r,
        j=j, sublevel_radius=radius, series_value=series, series_tail=tail,
        epsilon=epsilon, r=r, x_hat=ek.x_hat, x_hat_to_anchor=anchor_dist,
        d_f_g=d_f_g, d_g_h=d_g_h, d_f_h=d_f_h, metric_tail=mp.tail_bound,
        ekeland=ek, efficient_at_x_hat=verdict.efficient, dh_verdict=report.verdict,
        g=g, h=h, dh_report=report, bounding_scan=search,
    )
    return h, cert


# ---------------------------------------------------------------------------
# genericity probe


@dataclass(frozen=True)
class ProbeMember:
    label: str
    status: str
    detail: str
    membership_levels: np.ndarray | None
    certificate: PipelineCertificate | None = None


@dataclass(frozen=True)
class ProbeReport:
    """Per-member pipeline results plus the constructive density fraction.

    success_fraction is None for an empty family (not applicable)."""

    members: tuple
    n_max: int
    sigma: float
    success_fraction: float | None


def genericity_probe(problems, sigma, n_max=8, grid_resolution=201,
                     metric_params: MetricParams | None = None, seed=0) -> ProbeReport:
    """Run the pipeline across a family and test shrinking-diameter membership.

    For each certified member, checks that for every n <= n_max some level
    above the scalarized infimum has diameter below 1/n; the fraction of
    members passing both stages is the report's headline number.
    """
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    members = []
    certified = 0
    for k, p in enumerate(problems):
        screen = is_C_convex(p, seed=seed + k)
        if screen.verdict != "evidence_holds":
            members.append(ProbeMember(p.label, "skipped", "cone-convexity counterexample", None))
            continue
        try:
            h, cert = density_pipeline(p, sigma, grid_resolution=grid_resolution,
                                       metric_params=metric_params, seed=seed + k)
        except NoBoundingFunctional as exc:
            members.append(ProbeMember(p.label, "refused", str(exc), None))
            continue
        except CertificateFailure as exc:
            members.append(ProbeMember(p.label, "failed", f"{exc.clause}: {exc}", None))
            continue
        s = scalarize_linear(h, cert.xi_bar)
        report = tykhonov_diagnostic(s, level_schedule=geometric_schedule(20),
                                     grid_resolution=grid_resolution)
        diams = report.diam_curve[:, 0]
        levels = np.empty(n_max)
        ok = True
        for n in range(1, n_max + 1):
            hit = np.flatnonzero(diams < 1.0 / n)
            if hit.size == 0:
                ok = False
                levels[n - 1] = np.nan
            else:
                levels[n - 1] = report.schedule[hit[0]]
        if ok:
            certified += 1
            members.append(ProbeMember(p.label, "certified", "", levels, cert))
        else:
            members.append(ProbeMember(p.label, "diameter-stuck",
                                       "no level with diameter below 1/n", levels, cert))
    fraction = certified / len(members) if members else None
    return ProbeReport(tuple(members), int(n_max), float(sigma), fraction)
