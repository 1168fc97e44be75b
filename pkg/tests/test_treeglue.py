import pytest
from hypothesis import given, settings, strategies as st

from matroidlab.core import dual, uniform
from matroidlab.decomp import canonical_decomposition, decomposition_tree
from matroidlab.errors import InputError
from matroidlab.graphic import cycle_matroid
from matroidlab.rayspec import Q_K4, q_ray, ray_from_graphs
from matroidlab.suites import k4_two_sum, random_two_connected
from matroidlab.treeglue import (
    MatroidTree,
    contract_tree,
    delete_tree,
    dual_tree,
    enumerate_precircuits,
    enumerate_psi_circuits,
    glue_tree,
    is_nice_ray,
    is_phantom,
    two_sum,
    validate_matroid_tree,
)
from oracles import cycle_sets

C4 = {"in": ("1", "2"), "x": ("2", "3"), "out": ("3", "4"), "y": ("4", "1")}
TRIANGLE_BOND = {"in": ("1", "2"), "out": ("1", "2"), "z": ("1", "2")}


def _chain(*mats):
    """Path of matroids where consecutive ones share the element p<i>."""
    nodes = [f"n{i}" for i in range(len(mats))]
    edges = [(nodes[i], nodes[i + 1]) for i in range(len(mats) - 1)]
    labels = {e: f"p{i}" for i, e in enumerate(edges)}
    return MatroidTree.build(nodes, edges, labels, dict(zip(nodes, mats)))


def _k4_pair():
    left = cycle_matroid({f"{k}L": uv for k, uv in Q_K4.items() if k != "out"} | {"p0": Q_K4["out"]})
    right = cycle_matroid({f"{k}R": uv for k, uv in Q_K4.items() if k != "in"} | {"p0": Q_K4["in"]})
    return _chain(left, right)


def test_two_sum_of_k4s_matches_graph_cycles():
    assert len(k4_two_sum().circuits) == 22


def test_two_sum_rejects_loops_and_wrong_overlap():
    with pytest.raises(InputError):
        two_sum(uniform(1, ["a", "b"]), uniform(1, ["c", "d"]), "a")
    with pytest.raises(InputError):
        two_sum(uniform(0, ["p", "a"]), uniform(1, ["p", "b"]), "p")


def test_psi_circuits_equal_glued_circuits():
    t = _k4_pair()
    assert validate_matroid_tree(t).ok
    assert enumerate_psi_circuits(t) == glue_tree(t).circuits


def test_glue_order_is_irrelevant():
    t = _chain(uniform(1, ["a", "p0"]), uniform(2, ["p0", "b", "p1", "c"]), uniform(1, ["p1", "d"]))
    assert glue_tree(t) == glue_tree(t, order=list(reversed(t.edges)))


def test_dual_tree_glues_to_dual():
    t = _k4_pair()
    assert glue_tree(dual_tree(t)) == dual(glue_tree(t))


def test_contract_and_delete_commute_with_gluing():
    t = _k4_pair()
    from matroidlab.core import minor

    assert glue_tree(contract_tree(t, ["b0L"])) == minor(glue_tree(t), ["b0L"], ())
    assert glue_tree(delete_tree(t, ["c1R"])) == minor(glue_tree(t), (), ["c1R"])


def test_virtual_elements_cannot_be_contracted():
    with pytest.raises(InputError):
        contract_tree(_k4_pair(), ["p0"])


def test_validation_reports_bad_overlap():
    bad = MatroidTree.build(["a", "b"], [("a", "b")], {("a", "b"): "p"},
                            {"a": uniform(1, ["p", "x"]), "b": uniform(1, ["q", "x"])})
    report = validate_matroid_tree(bad)
    assert not report.ok


def test_finite_precircuits_are_never_phantom():
    t = _k4_pair()
    assert not any(is_phantom(t, p) for p in enumerate_precircuits(t))


def test_q_is_nice():
    assert is_nice_ray(q_ray())


def test_cycle_and_bond_rays_are_not_nice():
    assert not is_nice_ray(ray_from_graphs([], [(C4, "in", "out")]))
    assert not is_nice_ray(ray_from_graphs([], [(TRIANGLE_BOND, "in", "out")]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_decomposition_trees_glue_back(seed):
    import random

    edges = random_two_connected(random.Random(seed), 8)
    m = cycle_matroid(edges)
    deco, torsos = canonical_decomposition(m)
    t = decomposition_tree(deco, torsos)
    assert glue_tree(t).circuits == cycle_sets(edges)
    assert enumerate_psi_circuits(t) == m.circuits
