import networkx as nx
import pytest
from hypothesis import given, strategies as st

from matroidlab.epword import EPWord
from matroidlab.errors import CapExceeded, InputError
from matroidlab.wexample import (
    CROSS,
    STRAIGHT,
    TauSpec,
    WDoubleRay,
    build_w,
    check_o1_sample,
    finite_bonds,
    induce_sign_word,
    is_tau_legal,
    k4_opposite_partition,
    parallel_edges_cases,
    sign_class,
    verify_parallel_edges_remark,
    verify_w_decomposition,
)


@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_counts(d):
    w = build_w(d)
    assert len(w.vertices) == w.vertex_count_expected() == 2 * (2 ** (d + 1) - 1)
    assert len(w.edges) == w.edge_count_expected() == 4 * (2 ** (d + 1) - 2) + 1


@pytest.mark.parametrize("d", [1, 2, 3])
def test_cycle_space_dimension_matches_networkx(d):
    w = build_w(d)
    g = nx.Graph(list(w.edges.values()))
    assert g.number_of_edges() == len(w.edges)
    assert w.cycle_space_dimension() == len(nx.cycle_basis(g))


def test_depth_cap():
    with pytest.raises(CapExceeded):
        build_w(5)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_decomposition_shape(d):
    report = verify_w_decomposition(d)
    assert report.ok, report.problems
    assert (report.k4_nodes, report.bond_nodes, report.boundary_nodes) == (2**d - 2, 2**d - 1, 2 ** (d + 1))


def test_sign_words():
    assert induce_sign_word("(S)") == EPWord([], ["+"])
    assert induce_sign_word("SX(X)") == EPWord(["+"], ["-"])
    with pytest.raises(InputError):
        induce_sign_word(EPWord([], [frozenset({"11"})]))


@given(st.lists(st.sampled_from("+-"), max_size=4), st.lists(st.sampled_from("+-"), min_size=1, max_size=3),
       st.integers(0, 6))
def test_sign_class_ignores_finite_changes(pre, cyc, i):
    w = EPWord(pre, cyc)
    v = w.replace(i, "+" if w[i] == "-" else "-")
    assert sign_class(w).eventually_equal(sign_class(v))
    assert sign_class(w).eventually_equal(w)


def test_tau_assignments():
    tau = TauSpec.build([("(0)", ["(+)"]), ("(1)", ["(-)", "(+-)"])], default="forbid")
    assert tau.allows("(0)", EPWord(["-"], ["+"]))
    assert not tau.allows("(0)", EPWord([], ["-"]))
    assert tau.allows("(1)", EPWord(["-", "-"], ["+", "-"]))
    assert not tau.allows("(1)", EPWord([], ["-", "+"]))
    assert not tau.allows("(01)", EPWord([], ["+"]))
    assert is_tau_legal([("(0)", "X(S)")], tau)
    assert not is_tau_legal([("(0)", "(X)")], tau)
    with pytest.raises(InputError):
        TauSpec.build([], default="maybe")


def test_double_rays_respect_finite_bonds():
    tau = TauSpec.build([], default="allow")
    rays = [WDoubleRay(EPWord([], [b]), EPWord([], [c]), start=s)
            for b in ("0", "1") for c in (STRAIGHT, CROSS) for s in (0, 1)]
    assert check_o1_sample(3, rays, tau) == []


def test_o1_sample_detects_a_broken_circuit():
    w = build_w(2)
    bonds = finite_bonds(w)
    broken = WDoubleRay(EPWord([], ["0"]), EPWord([], [STRAIGHT])).edges(2) - {w.root_edge}
    assert any(len(broken & b) == 1 for b in bonds)


def test_opposite_partition_and_remark():
    parts = k4_opposite_partition()
    assert len(parts) == 3 and all(len(p) == 2 for p in parts)
    assert len(parallel_edges_cases()) == 32
    assert verify_parallel_edges_remark()
