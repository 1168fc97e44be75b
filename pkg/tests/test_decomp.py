import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from matroidlab.core import FiniteMatroid, dual, uniform
from matroidlab.decomp import (
    canonical_decomposition,
    canonical_precircuit,
    components,
    connectivity_order,
    decomposition_tree,
    find_2_separations,
    glue_decomposition,
    is_three_connected,
    realistic_minor_witness,
    shape_violations,
    torso_kind,
)
from matroidlab.errors import InputError
from matroidlab.graphic import cycle_matroid
from matroidlab.suites import cycle_graph, graph_edges, k4_two_sum, random_two_connected
from matroidlab.treeglue import is_precircuit
from oracles import cycle_sets

K4 = graph_edges(nx.complete_graph(4))


def _kinds(deco, torsos):
    return sorted(torso_kind(torsos[n].matroid) for n in deco.nodes)


def test_k4_is_three_connected_and_a_single_node():
    m = cycle_matroid(K4)
    assert is_three_connected(m)
    deco, torsos = canonical_decomposition(m)
    assert len(deco.nodes) == 1 and torsos[deco.nodes[0]].matroid == m


def test_cycle_is_a_single_circuit_node():
    deco, torsos = canonical_decomposition(cycle_matroid(cycle_graph(6)))
    assert _kinds(deco, torsos) == ["circuit"]


def test_two_k4_copies_split_into_two_k4_nodes():
    m = k4_two_sum()
    assert len(m.circuits) == 22
    deco, torsos = canonical_decomposition(m)
    assert _kinds(deco, torsos) == ["3-connected", "3-connected"]
    assert glue_decomposition(deco, torsos) == m


def test_k4_with_a_doubled_edge_gets_a_bond_node():
    edges = dict(K4) | {"01b": ("0", "1")}
    m = cycle_matroid(edges)
    deco, torsos = canonical_decomposition(m)
    assert _kinds(deco, torsos) == ["3-connected", "cocircuit"]
    assert glue_decomposition(deco, torsos) == m


def test_two_sum_separation_has_connectivity_one():
    m = k4_two_sum()
    seps = find_2_separations(m)
    assert seps
    for s in seps:
        assert connectivity_order(m, s.side_a) == s.order == 1
        assert min(len(s.side_a), len(s.side_b)) >= 2


def test_disconnected_input_is_rejected():
    m = FiniteMatroid("abcd", [{"a", "b"}, {"c", "d"}])
    assert len(components(m)) == 2
    with pytest.raises(InputError):
        canonical_decomposition(m)


def test_reserved_label_is_rejected():
    with pytest.raises(InputError):
        canonical_decomposition(uniform(1, ["a!", "b", "c"]))


def test_witnesses_only_rename_to_virtual_labels():
    m = k4_two_sum()
    deco, torsos = canonical_decomposition(m)
    for v in deco.nodes:
        w = realistic_minor_witness(m, deco, [v])
        assert w.apply(m) == torsos[v].matroid
        assert set(w.relabel.values()) <= set(torsos[v].virtual)


def test_canonical_precircuits_are_precircuits():
    m = k4_two_sum()
    deco, torsos = canonical_decomposition(m)
    tree = decomposition_tree(deco, torsos)
    for c in m.circuits:
        pre = canonical_precircuit(m, deco, c)
        assert is_precircuit(tree, pre)
        assert pre.underlying(tree.virtual_elements) == c


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_graphs_round_trip_and_order_independent(seed):
    import random

    edges = random_two_connected(random.Random(seed), 9)
    m = cycle_matroid(edges)
    assert m.circuits == cycle_sets(edges)
    a = canonical_decomposition(m, prefer="first")
    b = canonical_decomposition(m, prefer="last")
    assert a[0].nodes == b[0].nodes and a[0].edges == b[0].edges
    assert {n: t.matroid for n, t in a[1].items()} == {n: t.matroid for n, t in b[1].items()}
    assert glue_decomposition(*a) == m
    assert not shape_violations(*a)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_dual_decomposes_into_dual_torsos(seed):
    import random

    m = cycle_matroid(random_two_connected(random.Random(seed), 8))
    deco, torsos = canonical_decomposition(m)
    ddeco, dtorsos = canonical_decomposition(dual(m))
    assert sorted(map(sorted, deco.parts.values())) == sorted(map(sorted, ddeco.parts.values()))
    assert glue_decomposition(ddeco, dtorsos) == dual(m)
