import numpy as np
import pytest

from salbp import domlab as D
from salbp.bounds import make_bounds_context
from salbp.formulations import check_point


def test_registry_contents():
    reg = {cx.label: cx for cx in D.builtin_counterexamples()}
    assert {"dom1", "dom2"} <= set(reg)
    assert reg["dom1"].expected == {"PA": True, "TS": True, "BW": False, "RC1": False, "RC2": False}
    assert reg["dom2"].expected == {"BW": True, "RC1": True, "PA": False, "TS": False, "RC2": False}


def test_registry_fidelity():
    assert D.registry_fidelity() == {}
    for cx in D.builtin_counterexamples():
        assert cx.verdicts() == cx.expected


def test_registry_points_are_occurrence_feasible():
    for cx in D.builtin_counterexamples():
        ctx = make_bounds_context(cx.instance, cx.spec)
        assert check_point(cx.point, cx.instance, cx.spec, "occ", ctx).satisfied


def test_rc2_violation_at_dom1():
    cx = next(c for c in D.builtin_counterexamples() if c.label == "dom1")
    ctx = make_bounds_context(cx.instance, cx.spec)
    rep = check_point(cx.point, cx.instance, cx.spec, "RC2", ctx)
    assert rep["RC2"].violation == pytest.approx(0.25)
    assert rep["RC2"].worst_row == 1  # the k = 2 row


def test_implication_examples():
    pairs = [("RC2", "PA"), ("TS", "PA"), ("PA", "TS"), ("BW", "RC2")]
    rep = {(r.hypothesis, r.conclusion): r for r in D.verify_implications(3, 10_000, (2, 3), pairs)}
    assert rep[("RC2", "PA")].holds and rep[("RC2", "PA")].hits > 1000
    assert rep[("TS", "PA")].holds and rep[("PA", "TS")].holds
    assert not rep[("BW", "RC2")].holds and rep[("BW", "RC2")].witness is not None


def test_implications_rejects_zero_trials():
    with pytest.raises(ValueError):
        D.verify_implications(0, 0)


def test_samples_are_dyadic_occurrence_points():
    sh = D.make_shape((4, 5))
    X = D.sample_points(np.random.default_rng(1), sh, 2000)
    G = X.reshape(-1, sh.n, sh.m)
    assert np.all(G >= 0) and np.allclose(G.sum(axis=2), 1.0, atol=0)
    assert np.all((X * 64) == np.round(X * 64))


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_matrix_matches_reference(seed):
    rm = D.relation_matrix(seed=seed, trials=400)
    assert rm.deviations() == []
    assert rm.relations == D.REFERENCE


def test_matrix_consistency():
    rm = D.relation_matrix(seed=2, trials=200)
    for (a, b), rel in rm.relations.items():
        back = rm.relations[(b, a)]
        if rel == D.Relation.EQUIVALENT:
            assert back == D.Relation.EQUIVALENT
        if rel == D.Relation.INCOMPARABLE:
            assert back == D.Relation.INCOMPARABLE
            assert (a, b) in rm.witnesses and (b, a) in rm.witnesses
        if rel == D.Relation.DOMINATES:
            assert back == D.Relation.DOMINATED_BY
            assert (b, a) in rm.witnesses and (a, b) not in rm.witnesses


def test_reference_edges():
    ref = D.REFERENCE
    assert ref[("RC2", "BW")] == D.Relation.DOMINATES
    assert ref[("RC2", "PA")] == D.Relation.DOMINATES
    assert ref[("BW", "RC1")] == D.Relation.DOMINATES
    assert ref[("TS", "PA")] == D.Relation.EQUIVALENT
    assert ref[("PA", "BW")] == D.Relation.INCOMPARABLE
    assert ref[("PA", "RC1")] == D.Relation.INCOMPARABLE
    assert D.RelationMatrix(dict(ref)).deviations() == []


def test_deviation_detected():
    rel = dict(D.REFERENCE)
    rel[("PA", "BW")] = D.Relation.DOMINATES
    assert D.RelationMatrix(rel).deviations() == [("PA", "BW", D.Relation.DOMINATES, D.Relation.INCOMPARABLE)]


def test_table_rendering():
    text = D.RelationMatrix(dict(D.REFERENCE)).table()
    lines = text.splitlines()
    assert lines[0].split() == list(D.FAMILIES)
    assert lines[-2].split() == ["RC2", ">", ">", ">", ">", "=="]


def test_shapes_cover_two_to_four_tasks():
    shapes = D.default_shapes()
    assert {s.n for s in shapes} == {2, 3, 4} and {s.m for s in shapes} == {3, 4, 5}
    for s in shapes:
        inst = s.instance
        assert inst.arcs == set(s.arcs)


def test_witnesses_found_by_sampling_alone():
    # without registry help, sampling on the pair shape already separates PA from BW
    sh = D.make_shape((2, 3))
    X = D.sample_points(np.random.default_rng(4), sh, 4000)
    comp = D._Compiled(sh)
    pa, bw, rc2 = (comp.satisfied(f, X) for f in ("PA", "BW", "RC2"))
    assert np.any(pa & ~bw) and np.any(bw & ~pa) and np.any(bw & ~rc2)
