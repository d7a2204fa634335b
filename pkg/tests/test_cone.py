import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wellposed import InputError, NotInteriorPoint, OrderingCone, orthant


def sorted_rows(a):
    a = np.asarray(a, dtype=float)
    return a[np.lexsort(a.T[::-1])]


def test_orthant_membership():
    c = orthant(2)
    assert c.contains([1.0, 2.0])
    assert not c.contains([0.0, 1.0], strict=True)
    assert c.contains([0.0, 1.0], strict=False)
    assert not c.contains([-1.0, 5.0])


def test_orthant_is_self_dual():
    c = orthant(2)
    np.testing.assert_allclose(sorted_rows(c.dual_generators), [[0.0, 1.0], [1.0, 0.0]])
    d = c.dual_cone()
    np.testing.assert_allclose(sorted_rows(d.generators), sorted_rows(c.generators))


def test_skew_cone_dual_generators_frozen():
    # cone{(1,0),(1,1)}: facets have unit normals (0,1) and (1,-1)/sqrt(2)
    c = OrderingCone(2, [[1.0, 0.0], [1.0, 1.0]])
    expected = sorted_rows([[0.0, 1.0], [np.sqrt(0.5), -np.sqrt(0.5)]])
    np.testing.assert_allclose(sorted_rows(c.dual_generators), expected, atol=1e-12)


def test_dual_of_dual_recovers_generators():
    c = OrderingCone(2, [[1.0, 0.0], [1.0, 2.0]])
    back = c.dual_cone().dual_cone()
    gens = sorted_rows(c.generators / np.linalg.norm(c.generators, axis=1, keepdims=True))
    np.testing.assert_allclose(sorted_rows(back.generators), gens, atol=1e-9)


def test_base_polytope_orthant_diagonal():
    c = orthant(2)
    verts = c.base_polytope(k0=[1.0, 1.0])
    np.testing.assert_allclose(sorted_rows(verts), [[0.0, 1.0], [1.0, 0.0]], atol=1e-12)


def test_base_polytope_scaling():
    verts = orthant(2).base_polytope(k0=[2.0, 1.0])
    np.testing.assert_allclose(sorted_rows(verts), [[0.0, 1.0], [0.5, 0.0]], atol=1e-12)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_base_polytope_random_3d(seed):
    rng = np.random.default_rng(seed)
    gens = np.eye(3) + 0.3 * rng.random((3, 3))
    c = OrderingCone(3, gens)
    verts = c.base_polytope()
    assert verts.shape[0] == c.dual_generators.shape[0]
    np.testing.assert_allclose(verts @ c.k0, 1.0, atol=1e-9)
    for v in verts:
        assert c.dual_cone().contains(v)


def test_sample_dual_sphere_contains_generators_and_units():
    c = orthant(2)
    xs = c.sample_dual_sphere(2, seed=0)
    present = {tuple(np.round(x, 12)) for x in xs}
    assert (1.0, 0.0) in present and (0.0, 1.0) in present
    np.testing.assert_allclose(np.linalg.norm(xs, axis=1), 1.0, atol=1e-9)
    dual = c.dual_cone()
    assert all(dual.contains(x, strict=False) for x in xs)


def test_sample_dual_sphere_deterministic():
    c = OrderingCone(2, [[1.0, 0.0], [1.0, 2.0]])
    np.testing.assert_array_equal(c.sample_dual_sphere(64, seed=7),
                                  c.sample_dual_sphere(64, seed=7))


def test_rejects_non_pointed_cone():
    with pytest.raises(InputError):
        OrderingCone(2, [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]])


def test_rejects_exterior_k0():
    with pytest.raises(NotInteriorPoint):
        OrderingCone(2, [[1.0, 0.0], [0.0, 1.0]], k0=[1.0, -1.0])


def test_rejects_dimension_mismatch():
    with pytest.raises(InputError):
        OrderingCone(3, [[1.0, 0.0], [0.0, 1.0]])


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 10_000), st.integers(2, 4))
def test_sampled_duals_nonnegative_on_generators(seed, m):
    c = orthant(m)
    xs = c.sample_dual_sphere(32, seed=seed)
    assert (xs @ c.generators.T).min() >= -c.tol


def test_strict_implies_nonstrict():
    c = OrderingCone(2, [[1.0, 0.0], [1.0, 2.0]])
    rng = np.random.default_rng(3)
    ys = rng.normal(size=(500, 2)) * 2.0
    for y in ys:
        if c.contains(y, strict=True):
            assert c.contains(y, strict=False)


def test_margin_batch_matches_single():
    c = OrderingCone(2, [[1.0, 0.0], [1.0, 2.0]])
    pts = np.random.default_rng(0).normal(size=(64, 2))
    batch = c.contains_batch(pts)
    single = np.array([c.contains(p) for p in pts])
    np.testing.assert_array_equal(batch, single)
