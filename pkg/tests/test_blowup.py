import pytest

from thompoly.blowup import (BlowupError, ChartState, GuidedMismatch, blow_up_chart, build_tree, candidate_clusters,
                             classify_chart, guided_coefficients, leaf_euler, parse_guided, replay, root_state, smoothen)
from thompoly.exactalg import LinearForm, Polynomial, residue_varset
from thompoly.formulas import K3_LEAF, leaf_forms
from thompoly.paths import available, golden_path
from thompoly.verify import weights_match


def k3_tree():
    return build_tree(3, "guided", golden_path(3))


def test_packaged_paths():
    assert available() == [3, 4, 5]
    assert golden_path(2) == ""
    assert golden_path(9) is None


def test_k3_tree_shape():
    tree = k3_tree()
    assert len(tree.internal()) == 3
    assert tree.count("contributing") == 1
    assert tree.count("branch-noncontributing") == 1
    assert tree.count("non-contributing") == 2


def test_k3_leaf_weights():
    leaf = k3_tree().contributing_leaves()[0]
    assert weights_match(leaf, leaf_forms(3, K3_LEAF))
    assert leaf_euler(leaf) == leaf.euler


def test_k3_first_centre_and_chart():
    s = root_state(3)
    choices = candidate_clusters(s)
    assert ("t", "b33") in [c.cluster for c in choices]
    s1 = blow_up_chart(s, ["t", "b33"], "t")
    w = s1.weights
    rv = residue_varset(3)
    # chart t: b33 loses the weight of t
    assert w["b33"] == LinearForm.parse("2z+z3-z1", rv) - LinearForm.parse("z+z1", rv)
    assert w["t"] == LinearForm.parse("z+z1", rv)
    # the exceptional factor t is divided out of every coordinate
    assert not all(p.min_degree_in("t") > 0 for p in s1.coords.values())


def test_k3_chart_t_after_second_centre_is_pruned():
    s = blow_up_chart(root_state(3), ["t", "b33"], "t")
    s = blow_up_chart(s, ["t", "b22", "b23"], "t")
    assert classify_chart(s) == "branch-noncontributing"


def test_distinguished_unit_is_contributing():
    s0 = root_state(2)
    V = s0.vars
    dst, other = s0.dst, [p for p in s0.coords if p != s0.dst][0]
    s = ChartState(2, V, dict(s0.weights), {dst: Polynomial.constant(V, 1), other: Polynomial.parse("t", V)})
    assert classify_chart(s) == "contributing"


def test_singleton_centre_keeps_the_map():
    s0 = root_state(2)
    V = s0.vars
    keys = list(s0.coords)
    s = ChartState(2, V, dict(s0.weights), {keys[0]: Polynomial.parse("t", V), keys[1]: Polynomial.parse("t*b22", V)})
    s1 = blow_up_chart(s, ["t"], "t")
    assert s1.weights == s.weights
    # projectively the same map: every coordinate divided by t
    assert all(s1.coords[p] * Polynomial.var(V, "t") == s.coords[p] for p in keys)


def test_centre_must_contain_the_ideal():
    with pytest.raises(BlowupError):
        blow_up_chart(root_state(3), ["t"], "t")


def test_chart_outside_cluster_rejected():
    with pytest.raises(BlowupError):
        blow_up_chart(root_state(3), ["t", "b33"], "b22")


def test_smoothen_without_linear_heads_is_identity():
    s = root_state(3)
    assert smoothen(s).coords == s.coords


def test_guided_mismatch_raised():
    bad = golden_path(3).replace("CHART b33 EXPECT contributing", "CHART b33 EXPECT noncontributing")
    with pytest.raises(GuidedMismatch):
        build_tree(3, "guided", bad)


def test_guided_cluster_not_matching_ideal():
    bad = golden_path(3).replace("NODE t:1,b33:2 CHART t", "NODE t:1,b22:2 CHART t", 1)
    with pytest.raises(BlowupError):
        build_tree(3, "guided", bad)


def test_coefficients_header():
    assert guided_coefficients(golden_path(5)) == "composition"
    assert guided_coefficients(golden_path(3)) is None
    assert parse_guided("COEFFICIENTS composition\nNODE t:1,b22:1 CHART t\n")[0].chart == "t"


def test_auto_matches_guided_leaf_for_k3():
    auto = build_tree(3, "auto")
    assert sorted(map(tuple, (l.euler for l in auto.contributing_leaves()))) == \
        sorted(map(tuple, (l.euler for l in k3_tree().contributing_leaves())))


def test_monomial_centre_opens_only_its_own_chart():
    tree = build_tree(5, "guided", golden_path(5))
    # the monomial centre is recorded on the path of every leaf below it
    paths = [leaf.chart.path for leaf in tree.contributing_leaves()]
    monomial_steps = [step for p in paths for step in p if step[0] == "blowup" and "*" in step[2]]
    assert monomial_steps and all(step[2] in step[1] for step in monomial_steps)


def test_tree_serialisations_are_deterministic():
    a, b = k3_tree(), k3_tree()
    assert a.to_json() == b.to_json()
    assert a.to_dot() == b.to_dot()
    assert a.to_dot().count('fillcolor="#f4a6a6"') == 1
    assert a.to_dot().count("pruned") == 1
