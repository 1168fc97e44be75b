from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from matroidlab.core import (
    FiniteMatroid,
    check_o1_o2,
    dual,
    eliminate,
    fundamental_circuit,
    hybrid_check,
    is_valid_matroid,
    minor,
    perp,
    strong_elimination_family,
    uniform,
    validate_circuits,
)
from matroidlab.errors import CapExceeded, InputError
from matroidlab.graphic import cycle_matroid
from matroidlab.suites import cycle_graph, graph_edges, random_matroids
from oracles import bond_sets, cycle_sets, graph_rank

K4 = graph_edges(nx.complete_graph(4))


@st.composite
def graphs(draw, max_edges=8):
    n = draw(st.integers(2, 5))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), min_size=1, max_size=max_edges))
    return {f"e{i}": (str(u), str(v)) for i, (u, v) in enumerate(pairs) if u != v} or {"e0": ("0", "1")}


def test_cycle_matroid_matches_brute_force_cycles():
    assert cycle_matroid(K4).circuits == cycle_sets(K4)


def test_k4_dual_is_bond_family():
    assert dual(cycle_matroid(K4)).circuits == bond_sets(K4)


def test_uniform_dual_is_uniform():
    labels = list("abcde")
    assert dual(uniform(2, labels)) == uniform(3, labels)


def test_rank_matches_graph_rank_on_every_subset():
    m = cycle_matroid(K4)
    for k in range(len(K4) + 1):
        for s in combinations(sorted(K4), k):
            assert m.rank(s) == graph_rank(K4, s)


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_graphic_dual_is_bonds(edges):
    m = cycle_matroid(edges)
    g = nx.MultiGraph()
    g.add_edges_from(edges.values())
    if not nx.is_connected(g):
        return
    assert dual(m).circuits == bond_sets(edges)


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_dual_is_an_involution_and_ranks_agree(edges):
    m = cycle_matroid(edges)
    md = dual(m)
    assert dual(FiniteMatroid(md.elements, md.circuits)) == m
    full = m.rank()
    for k in range(len(m.elements) + 1):
        for s in list(combinations(m.elements, k))[:20]:
            rest = m.ground - set(s)
            assert md.rank(s) == len(s) + m.rank(rest) - full


@settings(max_examples=60, deadline=None)
@given(graphs(), st.data())
def test_minor_commutes_with_dual(edges, data):
    m = cycle_matroid(edges)
    labels = sorted(m.elements)
    c = data.draw(st.sets(st.sampled_from(labels)))
    d = data.draw(st.sets(st.sampled_from(sorted(set(labels) - c)))) if set(labels) - c else set()
    left = dual(minor(m, c, d))
    right = minor(dual(m), d, c)
    assert left == right


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_circuits_and_cocircuits_never_meet_in_one_element(edges):
    m = cycle_matroid(edges)
    for c in m.circuits:
        for b in dual(m).circuits:
            assert len(c & b) != 1


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_hybrid_check_accepts_graphic_pairs(edges):
    m = cycle_matroid(edges)
    report = hybrid_check(m.elements, m.circuits, dual(m).circuits)
    assert report.holds("hybrid-ok") and report.holds("reconstruction")


def test_hybrid_check_rejects_mismatched_cocircuits():
    m = cycle_matroid(cycle_graph(4))
    wrong = [set(c) for c in dual(cycle_matroid(cycle_graph(4))).circuits][:-1]
    report = hybrid_check(m.elements, m.circuits, wrong + [set(m.elements)])
    assert not report.holds("hybrid-ok")


def test_validate_circuits_flags_elimination_failure():
    report = validate_circuits("abcd", [{"a", "b"}, {"b", "c"}])
    assert report.holds("C1") and report.holds("C2")
    assert not report.holds("C3")
    assert not report.ok


def test_validate_circuits_flags_nested_circuits():
    report = validate_circuits("abc", [{"a", "b"}, {"a", "b", "c"}])
    assert not report.holds("C2")


def test_o1_o2_detects_single_intersection():
    report = check_o1_o2("abc", [{"a", "b"}], [{"a"}])
    assert not report.holds("O1")


def test_perp_of_triangle_contains_pairs():
    fam = perp("abc", [{"a", "b", "c"}])
    assert fam.minimal_members() == {frozenset("ab"), frozenset("ac"), frozenset("bc")}


def test_fundamental_circuit_in_k4():
    m = cycle_matroid(K4)
    base = {"01", "02", "03"}
    assert fundamental_circuit(m, base, "12") == {"01", "02", "12"}


def test_eliminate_returns_circuit_avoiding_eliminated_element():
    m = cycle_matroid(K4)
    o = frozenset({"01", "12", "02"})
    ox = frozenset({"01", "13", "03"})
    out = eliminate(m, o, [("01", ox)], "12")
    assert out in m.circuits and "01" not in out and "12" in out


def test_strong_elimination_family_isolates_target():
    m = cycle_matroid(K4)
    o = frozenset({"01", "12", "23", "03"})
    target = frozenset({"01", "13", "03"})
    inst = strong_elimination_family(m, o, target, "01")
    union = o.union(*(ox for _, ox in inst.family)) - inst.eliminated
    through = [c for c in m.circuits if "01" in c and c <= union]
    assert through == [target]


def test_random_matroids_are_matroids():
    for name, m in random_matroids(7, 25):
        assert is_valid_matroid(m), name


def test_cap_is_enforced():
    m = uniform(1, [f"x{i}" for i in range(13)])
    with pytest.raises(CapExceeded):
        dual(m)


def test_minor_rejects_overlapping_sets():
    with pytest.raises(InputError):
        minor(cycle_matroid(K4), ["01"], ["01"])


def test_minor_rejects_unknown_element():
    with pytest.raises(InputError):
        minor(cycle_matroid(K4), ["zz"], [])
