"""Command line runner: registry and config problems through the toolkit.

Reports are deterministic: the same RunConfig produces byte-identical
output (seeds and tolerances are embedded, there are no timestamps).
Exit codes: 0 success, 1 failed certificate or assertion, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from .analysis import (
    COUNTEREXAMPLE,
    find_bounding_functional,
    is_C_bounded_below,
    is_C_convex,
    is_star_quasiconvex,
)
from .distance import oriented_distance, oriented_distance_sampled
from .cone import TOL_MEMBERSHIP
from .config import load_problem
from .diagnostics import (
    DECAY_RATIO,
    TOL_ABS,
    WELL_POSED,
    classify_point,
    dh_diagnostic,
    dh_via_scalarization,
    geometric_schedule,
    tykhonov_diagnostic,
    weff_via_distance,
)
from .errors import (
    CertificateFailure,
    HypothesisNotMet,
    InputError,
    NoBoundingFunctional,
    NumericalFailure,
    WellposedError,
)
from .perturb import density_pipeline, genericity_probe, tikhonov_regularize
from .problem import scalarize_linear, scalarize_oriented
from . import registry

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    problem: str | None = None
    config: str | None = None
    grid: int | None = None
    sigma: float = 0.1
    n: int | None = None
    seed: int = 0
    out: str | None = None
    format: str = "record-text"
    point: tuple | None = None
    y: tuple | None = None
    xi: tuple | None = None
    depth: int | None = None


# ---------------------------------------------------------------------------
# report formatting


def _fmt_value(v):
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, np.ndarray):
        return " ".join(repr(float(t)) for t in np.asarray(v, dtype=float).reshape(-1))
    if isinstance(v, (tuple, list)):
        return " ".join(_fmt_value(t) for t in v)
    return str(v)


def format_records(records):
    blocks = []
    for rec in records:
        blocks.append("\n".join(f"{k}={_fmt_value(v)}" for k, v in rec.items()))
    return "\n\n".join(blocks) + "\n"


def format_curve_csv(report):
    lines = ["level,direction_index,diameter"]
    for i, level in enumerate(report.schedule):
        for j in range(report.diam_curve.shape[1]):
            lines.append(f"{float(level)!r},{j},{float(report.diam_curve[i, j])!r}")
    return "\n".join(lines) + "\n"


def _header(cfg: RunConfig, resolution):
    rec = {"version": __version__, "subcommand": cfg.subcommand}
    for f in fields(cfg):
        # out is where the report goes, not part of what was computed
        if f.name in ("subcommand", "out"):
            continue
        rec[f"config.{f.name}"] = getattr(cfg, f.name)
    rec["resolution"] = resolution
    rec["cone_membership_tol"] = TOL_MEMBERSHIP
    rec["tol_abs"] = TOL_ABS
    rec["decay_ratio"] = DECAY_RATIO
    return rec


def _report_record(report):
    rec = {
        "kind": report.kind,
        "label": report.label,
        "verdict": report.verdict,
        "levels": report.schedule.size,
        "first_level": report.schedule[0],
        "last_level": report.schedule[-1],
        "lattice_spacing": report.lattice_spacing,
    }
    if report.point is not None:
        rec["point"] = report.point
    for j in range(report.diam_curve.shape[1]):
        rec[f"initial_diameter.{j}"] = report.diam_curve[0, j]
        rec[f"final_diameter.{j}"] = report.diam_curve[-1, j]
    return rec


# ---------------------------------------------------------------------------
# problem loading


def _resolve(cfg: RunConfig):
    """Problem plus per-problem defaults (resolution, designated point)."""
    if cfg.problem and cfg.config:
        raise InputError("pass either --problem or --config, not both")
    if cfg.config:
        problem = load_problem(cfg.config)
        return problem, cfg.grid or 201, cfg.point, None
    if cfg.problem:
        entry = registry.get(cfg.problem)
        point = cfg.point if cfg.point is not None else entry.designated
        return entry.build(), cfg.grid or entry.resolution, point, entry
    raise InputError("a problem source is required (--problem label or --config file)")


def _schedule(cfg: RunConfig, entry, fallback=10):
    depth = cfg.depth if cfg.depth is not None else (entry.dh_depth if entry else fallback)
    return geometric_schedule(int(depth))


# ---------------------------------------------------------------------------
# subcommands


def _run_distance(cfg: RunConfig):
    problem, resolution, _, _ = _resolve(cfg)
    if cfg.y is None:
        raise InputError("distance requires --y with objective_dim components")
    y = np.asarray(cfg.y, dtype=float)
    res = oriented_distance(problem.cone, y)
    n_samples = cfg.n if cfg.n else 2048
    dirs = problem.cone.sample_dual_sphere(n_samples, seed=cfg.seed)
    sampled = oriented_distance_sampled(problem.cone, y, dirs)
    rec = {
        "record": "oriented-distance",
        "label": problem.label,
        "y": y,
        "value": res.value,
        "nearest_point": res.nearest_point,
        "active_facet": res.active_facet if res.active_facet is not None else "none",
        "sampled_value": sampled,
        "sampled_gap": res.value - sampled,
        "dual_samples": dirs.shape[0],
    }
    return [_header(cfg, resolution), rec], None, EXIT_OK


def _run_analyze(cfg: RunConfig):
    problem, resolution, _, _ = _resolve(cfg)
    convex = is_C_convex(problem, seed=cfg.seed)
    quasi = is_star_quasiconvex(problem, seed=cfg.seed)
    records = [_header(cfg, resolution)]
    records.append({
        "record": "cone-convexity",
        "label": problem.label,
        "verdict": convex.verdict,
        "samples": convex.samples_used,
    })
    records.append({
        "record": "star-quasiconvexity",
        "label": problem.label,
        "verdict": quasi.verdict,
        "samples": quasi.samples_used,
    })
    if cfg.xi is not None:
        bounded = is_C_bounded_below(problem, np.asarray(cfg.xi, dtype=float))
        records.append({
            "record": "bounded-below",
            "xi": np.asarray(cfg.xi, dtype=float),
            "verdict": bounded.verdict,
            "minima": bounded.detail["minima"],
        })
    search = find_bounding_functional(problem, seed=cfg.seed)
    records.append({
        "record": "bounding-functional",
        "found": search.xi is not None,
        "xi": search.xi if search.xi is not None else "none",
        "candidates_scanned": len(search.scanned),
    })
    return records, None, EXIT_OK


def _run_classify(cfg: RunConfig):
    problem, resolution, point, _ = _resolve(cfg)
    if point is None:
        raise InputError("classify requires --point")
    verdict = classify_point(problem, point, resolution)
    agree = weff_via_distance(problem, point, resolution)
    rec = {
        "record": "classification",
        "label": problem.label,
        "point": verdict.point,
        "efficient": verdict.efficient,
        "weakly_efficient": verdict.weakly_efficient,
        "strictly_efficient": verdict.strictly_efficient,
        "weakly_efficient_by_distance": agree,
        "tol": verdict.tol,
    }
    for name, wit in sorted(verdict.witnesses.items()):
        if wit is not None:
            rec[f"witness.{name}.x"] = wit["x"]
    return [_header(cfg, resolution), rec], None, EXIT_OK


def _run_tykhonov(cfg: RunConfig):
    problem, resolution, point, entry = _resolve(cfg)
    if cfg.xi is not None:
        sp = scalarize_linear(problem, np.asarray(cfg.xi, dtype=float))
        route = "linear"
    elif point is not None:
        sp = scalarize_oriented(problem, np.asarray(point, dtype=float))
        route = "oriented-distance"
    else:
        raise InputError("tykhonov-check needs --xi or --point to scalarize")
    report = tykhonov_diagnostic(sp, level_schedule=_schedule(cfg, entry),
                                 grid_resolution=resolution)
    rec = _report_record(report)
    rec["route"] = route
    rec["lattice_infimum"] = report.details["lattice_infimum"]
    rec["argmin"] = report.details["argmin"]
    return [_header(cfg, resolution), rec], report, EXIT_OK


def _run_dh(cfg: RunConfig):
    problem, resolution, point, entry = _resolve(cfg)
    if point is None:
        raise InputError("dh-check requires --point")
    report = dh_diagnostic(problem, point, alpha_schedule=_schedule(cfg, entry),
                           grid_resolution=resolution)
    scalarized = dh_via_scalarization(problem, point, level_schedule=_schedule(cfg, entry),
                                      grid_resolution=resolution)
    rec = _report_record(report)
    rec["directions"] = report.directions.shape[0]
    rec["scalarized_verdict"] = scalarized.verdict
    rec["routes_agree"] = scalarized.verdict == report.verdict
    return [_header(cfg, resolution), rec], report, EXIT_OK


def _run_perturb(cfg: RunConfig):
    problem, resolution, point, _ = _resolve(cfg)
    if point is None:
        raise InputError("perturb requires --point (the efficient center)")
    n = cfg.n if cfg.n else 1
    perturbed, cert = tikhonov_regularize(problem, point, n, grid_resolution=resolution)
    rec = {
        "record": "regularization-certificate",
        "label": perturbed.label,
        "n": cert.n,
        "efficient_at_center": cert.efficient_at_center,
        "strictly_efficient_at_center": cert.strictly_efficient_at_center,
        "strict_not_no": cert.strict_not_no,
        "dh_verdict": cert.dh_verdict,
        "metric_value": cert.metric_value,
        "metric_tail": cert.metric_tail,
    }
    code = EXIT_OK if cert.dh_verdict == WELL_POSED else EXIT_FAILED
    return [_header(cfg, resolution), rec], None, code


def _pipeline_record(cert):
    ek = cert.ekeland
    return {
        "record": "pipeline-certificate",
        "label": cert.label,
        "sigma": cert.sigma,
        "bounding_functional": cert.xi_bar,
        "k0_rescaled": cert.k0_rescaled,
        "j": cert.j,
        "sublevel_radius": cert.sublevel_radius,
        "series_constant": cert.series_value,
        "series_tail": cert.series_tail,
        "epsilon": cert.epsilon,
        "r": cert.r,
        "x_hat": cert.x_hat,
        "x_hat_to_anchor": cert.x_hat_to_anchor,
        "d_f_g": cert.d_f_g,
        "d_g_h": cert.d_g_h,
        "d_f_h": cert.d_f_h,
        "metric_tail": cert.metric_tail,
        "efficient_at_x_hat": cert.efficient_at_x_hat,
        "dh_verdict": cert.dh_verdict,
        "ekeland.iterations": ek.iterations,
        "ekeland.distance_to_start": ek.distance_to_start,
        "ekeland.min_margin": ek.min_margin,
        "ekeland.unique_minimizer": ek.unique_minimizer,
    }


def _run_pipeline(cfg: RunConfig):
    problem, resolution, _, _ = _resolve(cfg)
    _, cert = density_pipeline(problem, cfg.sigma, grid_resolution=resolution,
                               seed=cfg.seed)
    return [_header(cfg, resolution), _pipeline_record(cert)], None, EXIT_OK


def _run_probe(cfg: RunConfig):
    if cfg.config:
        problems = [load_problem(cfg.config)]
        resolution = cfg.grid or 201
    elif cfg.problem:
        entries = [registry.get(label.strip()) for label in cfg.problem.split(",")]
        problems = [e.build() for e in entries]
        resolution = cfg.grid or max(e.resolution for e in entries)
    else:
        raise InputError("probe needs --problem labels or --config")
    report = genericity_probe(problems, cfg.sigma, n_max=cfg.n or 8,
                              grid_resolution=resolution, seed=cfg.seed)
    records = [_header(cfg, resolution)]
    for member in report.members:
        rec = {
            "record": "probe-member",
            "label": member.label,
            "status": member.status,
        }
        if member.detail:
            rec["detail"] = member.detail
        if member.membership_levels is not None:
            rec["membership_levels"] = member.membership_levels
        records.append(rec)
    records.append({
        "record": "probe-summary",
        "members": len(report.members),
        "n_max": report.n_max,
        "sigma": report.sigma,
        "success_fraction": report.success_fraction
        if report.success_fraction is not None else "not-applicable",
    })
    return records, None, EXIT_OK


# ---------------------------------------------------------------------------
# replicate


def _assert_record(name, passed, detail=""):
    rec = {"record": "assertion", "name": name, "passed": bool(passed)}
    if detail:
        rec["detail"] = detail
    return rec


def _replicate_entry(entry, records):
    problem = entry.build()
    ok = True
    for exp in entry.expectations:
        verdict = classify_point(problem, exp.point, entry.resolution)
        got = (verdict.efficient, verdict.weakly_efficient, verdict.strictly_efficient)
        want = (exp.efficient, exp.weakly_efficient, exp.strictly_efficient)
        passed = got == want
        ok &= passed
        records.append(_assert_record(
            f"classify@{_fmt_value(np.asarray(exp.point))}", passed,
            f"expected {'/'.join(want)} got {'/'.join(got)} (basis {exp.basis})"))

    report = dh_diagnostic(problem, entry.designated,
                           alpha_schedule=geometric_schedule(entry.dh_depth),
                           grid_resolution=entry.resolution)
    passed = report.verdict == entry.dh_verdict
    ok &= passed
    records.append(_assert_record("dh-verdict", passed,
                                  f"expected {entry.dh_verdict} got {report.verdict}"))

    search = find_bounding_functional(problem)
    passed = (search.xi is not None) == entry.c_bounded
    ok &= passed
    records.append(_assert_record(
        "bounding-functional", passed,
        "found" if search.xi is not None else "none found"))

    if entry.label == "zero-function":
        _, cert = tikhonov_regularize(problem, entry.designated, 1,
                                      grid_resolution=entry.resolution)
        passed = cert.dh_verdict == WELL_POSED and cert.efficient_at_center == "yes"
        ok &= passed
        records.append(_assert_record("regularization-restores-well-posedness", passed,
                                      f"dh={cert.dh_verdict}"))

    if entry.label == "x-minus-xex":
        quasi = is_star_quasiconvex(problem)
        passed = quasi.verdict == COUNTEREXAMPLE
        ok &= passed
        records.append(_assert_record("star-quasiconvexity-counterexample", passed,
                                      quasi.verdict))
        all_diverge = bool(search.scanned) and all(
            v == COUNTEREXAMPLE for _, v in search.scanned)
        ok &= all_diverge
        records.append(_assert_record(
            "every-base-functional-diverges", all_diverge,
            f"{len(search.scanned)} candidates scanned"))
        try:
            density_pipeline(problem, 0.5, grid_resolution=entry.resolution)
            passed, detail = False, "pipeline unexpectedly succeeded"
        except NoBoundingFunctional:
            passed, detail = True, "refused with NoBoundingFunctional"
        ok &= passed
        records.append(_assert_record("pipeline-refusal", passed, detail))

    return ok


def _replicate_hilbert(d, records):
    measured, spacing = registry.hilbert_level_diameter(d, level=0.01)
    expected = 2.0 * d * np.sqrt(0.01)
    passed = abs(measured - expected) <= 2.0 * spacing
    records.append(_assert_record(
        f"level-diameter-scaling-d{d}", passed,
        f"measured {measured!r} expected {expected!r} spacing {spacing!r}"))
    return passed


def replicate(label: str):
    """Re-run the stored facts for one registry label; (records, all_ok)."""
    records = []
    if label in ("hilbert-truncation-4", "hilbert-truncation-8"):
        ok = _replicate_hilbert(int(label.rsplit("-", 1)[1]), records)
        return records, ok
    entry = registry.get(label)
    ok = _replicate_entry(entry, records)
    if label == "hilbert-truncation-2":
        ok &= _replicate_hilbert(2, records)
    return records, ok


def _run_replicate(cfg: RunConfig):
    if not cfg.problem:
        raise InputError("replicate requires --problem with a registry label")
    records = [_header(cfg, cfg.grid or "registry-default")]
    all_ok = True
    for label in cfg.problem.split(","):
        records.append({"record": "replicate", "label": label.strip()})
        asserted, ok = replicate(label.strip())
        records.extend(asserted)
        all_ok &= ok
    records.append({"record": "replicate-summary", "all_passed": all_ok})
    return records, None, EXIT_OK if all_ok else EXIT_FAILED


_DISPATCH = {
    "distance": _run_distance,
    "analyze": _run_analyze,
    "classify": _run_classify,
    "tykhonov-check": _run_tykhonov,
    "dh-check": _run_dh,
    "perturb": _run_perturb,
    "pipeline": _run_pipeline,
    "probe": _run_probe,
    "replicate": _run_replicate,
}

_CSV_CAPABLE = {"tykhonov-check", "dh-check"}


def run(cfg: RunConfig) -> int:
    """Execute one configuration and write its report; returns exit code."""
    try:
        if cfg.subcommand not in _DISPATCH:
            raise InputError(f"unknown subcommand {cfg.subcommand!r}")
        if cfg.format not in ("record-text", "table-csv"):
            raise InputError(f"unknown format {cfg.format!r}")
        if cfg.format == "table-csv" and cfg.subcommand not in _CSV_CAPABLE:
            raise InputError("table-csv output is only available for diameter curves "
                             "(tykhonov-check, dh-check)")
        records, curve_report, code = _DISPATCH[cfg.subcommand](cfg)
    except (InputError, FileNotFoundError) as exc:
        _emit(cfg, format_records([{"status": "error", "exit_code": EXIT_USAGE,
                                    "reason": str(exc)}]))
        return EXIT_USAGE
    except (HypothesisNotMet, NoBoundingFunctional, CertificateFailure,
            NumericalFailure, WellposedError) as exc:
        reason = {"status": "failed", "exit_code": EXIT_FAILED,
                  "error_type": type(exc).__name__, "reason": str(exc)}
        if isinstance(exc, CertificateFailure):
            reason["clause"] = exc.clause
        _emit(cfg, format_records([reason]))
        return EXIT_FAILED

    if cfg.format == "table-csv":
        _emit(cfg, format_curve_csv(curve_report))
    else:
        _emit(cfg, format_records(records))
    return code


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing


def _vector(text):
    try:
        return tuple(float(t) for t in text.replace(" ", "").split(",") if t != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated vector: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wellposed",
        description="Well-posedness diagnostics for vector optimization on box lattices.")
    parser.add_argument("--version", action="version", version=f"wellposed {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    descriptions = {
        "distance": "oriented distance of a point to the negative cone",
        "analyze": "structural screens: cone-convexity, quasiconvexity, boundedness",
        "classify": "efficiency classification of a point",
        "tykhonov-check": "scalar level-set diameter diagnostic",
        "dh-check": "vector level-set diameter diagnostic at a point",
        "perturb": "norm-cone regularization certificate at an efficient point",
        "pipeline": "construct a nearby well-posed problem with a full certificate",
        "probe": "run the pipeline across a family and report the success fraction",
        "replicate": "re-run the stored facts for a registry problem",
    }
    for name, desc in descriptions.items():
        p = sub.add_parser(name, help=desc, description=desc)
        p.add_argument("--problem", help="registry label (comma-separated for probe/replicate)")
        p.add_argument("--config", help="problem description file (YAML)")
        p.add_argument("--grid", type=int, help="lattice resolution per axis")
        p.add_argument("--sigma", type=float, default=0.1, help="target metric radius")
        p.add_argument("--n", type=int, help="strength index / sample count / probe bound")
        p.add_argument("--seed", type=int, default=0, help="seed for all randomness")
        p.add_argument("--out", help="write the report to this path instead of stdout")
        p.add_argument("--format", default="record-text",
                       choices=("record-text", "table-csv"))
        p.add_argument("--point", type=_vector, help="decision-space point")
        p.add_argument("--y", type=_vector, help="objective-space point")
        p.add_argument("--xi", type=_vector, help="dual functional")
        p.add_argument("--depth", type=int, help="schedule depth (powers of two)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{f.name: getattr(args, f.name) for f in fields(RunConfig)})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
