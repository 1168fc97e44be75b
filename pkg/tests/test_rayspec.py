import pytest

from matroidlab.errors import InputError
from matroidlab.rayspec import RayNode, q_ray, truncate, truncate_dual, truncate_graph
from matroidlab.core import dual
from oracles import bond_sets, cycle_sets, q_graph


@pytest.mark.parametrize("k", [1, 2, 3])
def test_truncation_dual_is_bond_family(k):
    assert truncate_dual(q_ray(), k).circuits == bond_sets(q_graph(k))


@pytest.mark.parametrize("k", [1, 2])
def test_contracted_truncation_is_dual_of_deleted_dual(k):
    q = q_ray()
    assert truncate(q, k, end="contract") == dual(truncate_dual(q, k, end="contract"))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_truncation_graph_certificate(k):
    q = q_ray()
    assert cycle_sets(truncate_graph(q, k)) == truncate(q, k).circuits


def test_truncation_counts_frozen():
    assert [len(truncate(q_ray(), k).circuits) for k in range(1, 5)] == [3, 12, 33, 78]


def test_node_labels_are_checked():
    from matroidlab.core import uniform

    with pytest.raises(InputError):
        RayNode(uniform(1, ["a", "b_1"]), None, "a")
    with pytest.raises(InputError):
        RayNode(uniform(1, ["a", "b"]), "a", "a")
    with pytest.raises(InputError):
        truncate(q_ray(), 2, end="sideways")
