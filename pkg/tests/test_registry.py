import numpy as np
import pytest

from wellposed import InputError, classify_point, dh_diagnostic, geometric_schedule, registry

from oracles import orthant_dom_witness, orthant_weak_witness


def test_labels_are_unique_and_resolvable():
    labels = registry.labels()
    assert len(labels) == len(set(labels))
    for label in labels:
        assert registry.get(label).label == label


def test_unknown_label_lists_alternatives():
    with pytest.raises(InputError, match="zero-function"):
        registry.get("nope")


def test_core_and_bounded_subsets():
    assert len(registry.core_entries()) == 10
    assert len(registry.c_bounded_entries()) == 10
    assert all(e.c_bounded for e in registry.c_bounded_entries())


def test_every_expectation_classifies_as_stored():
    for entry in registry.ENTRIES:
        p = entry.build()
        for exp in entry.expectations:
            v = classify_point(p, exp.point, entry.resolution)
            got = (v.efficient, v.weakly_efficient, v.strictly_efficient)
            want = (exp.efficient, exp.weakly_efficient, exp.strictly_efficient)
            assert got == want, f"{entry.label}@{exp.point}: {got} != {want}"


def test_dh_verdicts_as_stored():
    for entry in registry.ENTRIES:
        p = entry.build()
        rep = dh_diagnostic(p, entry.designated,
                            alpha_schedule=geometric_schedule(entry.dh_depth),
                            grid_resolution=entry.resolution)
        assert rep.verdict == entry.dh_verdict, entry.label


def test_orthant_entries_against_componentwise_oracle():
    # independent dominance scan for every orthant-ordered 1-d entry
    for entry in registry.ENTRIES:
        p = entry.build()
        gens = p.cone.generators
        if p.decision_dim != 1 or not np.allclose(gens[np.argsort(gens[:, 0])], np.eye(2)):
            continue
        pts = p.domain.lattice(entry.resolution)
        values = p.evaluate(pts)
        for exp in entry.expectations:
            v = classify_point(p, exp.point, entry.resolution)
            f_bar = p.evaluate_one(exp.point)
            dom = orthant_dom_witness(values, f_bar, p.cone.tol, v.tol)
            weak = orthant_weak_witness(values, f_bar, v.tol)
            assert (exp.efficient == "no") == (dom is not None), (entry.label, exp.point)
            assert (exp.weakly_efficient == "no") == (weak is not None), (entry.label, exp.point)


def test_hilbert_scalar_values_and_resolution():
    p = registry.hilbert_scalar(4)
    x = np.array([0.4, 0.4, 0.4, 0.4])
    want = sum(0.16 / i**2 for i in range(1, 5))
    assert p.evaluate_one(x) == pytest.approx(want, abs=1e-12)
    assert registry.hilbert_resolution(4) == 21


def test_hilbert_level_diameter_growth():
    d2, s2 = registry.hilbert_level_diameter(2)
    d4, s4 = registry.hilbert_level_diameter(4)
    assert d2 == pytest.approx(0.4, abs=2 * s2)
    assert d4 == pytest.approx(0.8, abs=2 * s4)
    assert d4 > d2


def test_skew_cone_entry_uses_non_orthant_order():
    entry = registry.get("skew-cone-quad")
    p = entry.build()
    assert not np.allclose(np.sort(p.cone.generators, axis=0), np.eye(2))
