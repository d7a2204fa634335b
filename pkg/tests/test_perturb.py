import numpy as np
import pytest

from wellposed import (
    Box,
    CertificateFailure,
    HypothesisNotMet,
    NoBoundingFunctional,
    VectorProblem,
    WELL_POSED,
    YES,
    density_pipeline,
    ekeland_point,
    function_distance,
    genericity_probe,
    orthant,
    registry,
    scalarize_linear,
    tikhonov_regularize,
)

from oracles import evp_violations


def prob(fn, m, lower, upper, label="p"):
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    return VectorProblem(label=label, decision_dim=lower.size, objective_dim=m,
                         evaluator=fn, domain=Box(lower, np.atleast_1d(upper)),
                         cone=orthant(m))


def test_regularizing_flat_function_restores_well_posedness():
    p = registry.get("zero-function").build()
    q, cert = tikhonov_regularize(p, [0.0], 1)
    assert cert.efficient_at_center == YES
    assert cert.dh_verdict == WELL_POSED
    # closed-form metric: u_i = min(i, 1)/1 -> (1 - 2^-20)/2
    assert cert.metric_value == pytest.approx(0.4999995231628418, abs=1e-9)
    assert q.label.endswith("tik1")


def test_regularization_keeps_center_efficient_for_all_n():
    p = registry.get("x-minus-x").build()
    last = 1.0
    for n in (1, 2, 4, 8):
        _, cert = tikhonov_regularize(p, [0.0], n)
        assert cert.efficient_at_center == YES
        assert cert.dh_verdict == WELL_POSED
        assert cert.metric_value == pytest.approx((1 - 2.0 ** -20) / (n + 1), abs=1e-9)
        assert cert.metric_value < last
        last = cert.metric_value


def test_regularization_requires_efficient_center():
    p = registry.get("x-minus-xex").build()
    with pytest.raises(HypothesisNotMet):
        tikhonov_regularize(p, [-1.0], 1)


def test_regularization_rejects_bad_n():
    p = registry.get("zero-function").build()
    with pytest.raises(Exception):
        tikhonov_regularize(p, [0.0], 0)


def scalar_problem(fn, lower, upper, label="sp"):
    p = prob(lambda x: np.stack([fn(x[:, 0]), fn(x[:, 0])], axis=1), 2, lower, upper,
             label=label)
    return scalarize_linear(p, [1.0, 0.0])


def test_ekeland_parabola_certificate_exhaustive():
    sp = scalar_problem(lambda t: t * t, [-2.0], [2.0])
    res = ekeland_point(sp, [1.0], 0.1, 10.1, grid_resolution=201)
    assert abs(res.x_hat[0]) <= 0.1
    assert res.min_margin > 0
    assert res.descent_holds and res.within_radius
    pts = sp.domain.lattice(201)
    vals = sp.evaluate(pts)
    n_min, n_rad, n_desc = evp_violations(vals, pts, res.x_hat, [1.0], 0.1, 10.1,
                                          sp.domain.lattice_spacing(201))
    assert (n_min, n_rad, n_desc) == (0, 0, 0)


def test_ekeland_fixed_point_is_immediate():
    sp = scalar_problem(lambda t: (t - 0.5) ** 2, [-2.0], [2.0])
    res = ekeland_point(sp, [0.5], 0.05, 5.0, grid_resolution=201)
    assert res.iterations == 0
    np.testing.assert_allclose(res.x_hat, [0.5], atol=1e-12)


def test_ekeland_linear_lands_on_corner_within_radius():
    # eps below the slope, so the penalized argmin is the box corner
    sp = scalar_problem(lambda t: 0.3 * t, [-2.0], [2.0])
    res = ekeland_point(sp, [0.0], 0.1, 7.0, grid_resolution=201)
    np.testing.assert_allclose(res.x_hat, [-2.0], atol=1e-12)
    assert np.linalg.norm(res.x_hat - [0.0]) < 7.0
    pts = sp.domain.lattice(201)
    n_min, n_rad, n_desc = evp_violations(sp.evaluate(pts), pts, res.x_hat, [0.0],
                                          0.1, 7.0, sp.domain.lattice_spacing(201))
    assert (n_min, n_rad, n_desc) == (0, 0, 0)


def test_ekeland_rejects_bad_start():
    sp = scalar_problem(lambda t: t * t, [-2.0], [2.0])
    # sp(2) = 4 but inf + r*eps = 0 + 0.1: hypothesis fails
    with pytest.raises(HypothesisNotMet):
        ekeland_point(sp, [2.0], 0.1, 1.0, grid_resolution=201)


def test_ekeland_descent_strictly_decreases_weighted_objective():
    rng = np.random.default_rng(21)
    box = Box(np.array([-1.0]), np.array([1.0]))
    values = rng.uniform(0.0, 5.0, size=301)

    def lookup(x):
        idx = np.clip(np.rint((np.atleast_2d(x)[:, 0] + 1.0) / (2.0 / 300)), 0, 300)
        return np.stack([values[idx.astype(int)]] * 2, axis=1)

    p = VectorProblem(label="rnd", decision_dim=1, objective_dim=2, evaluator=lookup,
                      domain=box, cone=orthant(2), continuous=False)
    sp = scalarize_linear(p, [1.0, 0.0])
    start = p.domain.lattice(301)[np.argmin(sp.evaluate(p.domain.lattice(301)))]
    res = ekeland_point(sp, start, 0.5, 4.0, grid_resolution=301)
    assert res.iterations <= 301
    pts = p.domain.lattice(301)
    viol = evp_violations(sp.evaluate(pts), pts, res.x_hat, start, 0.5, 4.0,
                          p.domain.lattice_spacing(301))
    assert viol == (0, 0, 0)


def test_pipeline_produces_budgeted_certificate():
    p = registry.get("x-x2").build()
    h, cert = density_pipeline(p, 0.1, grid_resolution=201)
    assert cert.d_f_h < 0.1
    assert cert.d_f_g < 0.05
    assert cert.d_g_h <= 0.05 + cert.metric_tail
    assert cert.dh_verdict == WELL_POSED
    assert cert.efficient_at_x_hat == YES
    assert h.label.endswith("cert")
    # the triangle budget closes: d(f,h) within the two legs plus tails
    assert cert.d_f_h <= cert.d_f_g + cert.d_g_h + 2 * cert.metric_tail


def test_pipeline_certificate_geometry():
    p = registry.get("quad-pair").build()
    _, cert = density_pipeline(p, 0.5, grid_resolution=201)
    # xi_bar lives on the dual base: <xi_bar, k0_rescaled> = 1
    assert float(cert.xi_bar @ cert.k0_rescaled) == pytest.approx(1.0, abs=1e-9)
    assert cert.epsilon > 0 and cert.r > 0
    assert np.linalg.norm(cert.x_hat) <= cert.sublevel_radius + 0.011
    assert cert.ekeland.iterations >= 0


def test_pipeline_refuses_unbounded_problem():
    p = registry.get("x-minus-xex").build()
    with pytest.raises(NoBoundingFunctional):
        density_pipeline(p, 0.5, grid_resolution=201)


def test_probe_empty_family():
    rep = genericity_probe([], 0.5)
    assert rep.members == ()
    assert rep.success_fraction is None


def test_probe_mixed_family():
    probs = [registry.get("quad-pair").build(), registry.get("x-minus-xex").build()]
    rep = genericity_probe(probs, 0.5, n_max=4, grid_resolution=201)
    by_label = {m.label: m for m in rep.members}
    assert by_label["quad-pair"].status == "certified"
    assert by_label["quad-pair"].membership_levels is not None
    assert by_label["x-minus-xex"].status in ("refused", "skipped")
    assert rep.success_fraction == pytest.approx(0.5)
