from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from matroidlab.epword import EPWord
from matroidlab.errors import InputError
from matroidlab.formats import load_yaml, ray_from_data
from matroidlab.raylab import (
    EQUIVALENT,
    INEQUIVALENT,
    PhiSet,
    chain_search,
    in_phi_star,
    intersection_cardinality,
    is_closed_under_f,
    is_omega_circuit,
    is_omega_cocircuit,
    is_phi_circuit,
    planar_ray_collapse,
    q_circuit,
    q_class_of,
    q_cocircuit,
    simeq,
    ternary_f,
    tilde,
)
from matroidlab.rayspec import q_ray, ray_from_graphs

FIXTURES = "tests/fixtures"
SMALL = ["".join(w) for n in (1, 2, 3) for w in product("01", repeat=n)]


def small_words():
    return [EPWord([], [int(c) for c in w]) for w in SMALL]


words = st.builds(
    lambda p, c: EPWord(p, c),
    st.lists(st.integers(0, 1), max_size=3),
    st.lists(st.integers(0, 1), min_size=1, max_size=3),
)


def test_q_objects_are_prolonged():
    q = q_ray()
    for w in small_words():
        for n in range(4):
            assert is_omega_circuit(q, q_circuit(n, w))
            assert is_omega_cocircuit(q, q_cocircuit(n, w))


def test_tilde_is_eventual_disagreement():
    q = q_ray()
    zero, one = EPWord([], [0]), EPWord([], [1])
    assert tilde(q, q_circuit(0, zero), q_cocircuit(0, one))
    assert not tilde(q, q_circuit(0, zero), q_cocircuit(0, zero))
    assert intersection_cardinality(q, q_circuit(0, zero), q_cocircuit(0, zero)) == float("inf")


def test_single_intersections_stay_inside_one_class():
    q = q_ray()
    phi = PhiSet.q(["(0)"])
    singles = 0
    for v, w in product(small_words(), repeat=2):
        for n, m in product(range(3), repeat=2):
            o, b = q_circuit(n, v), q_cocircuit(m, w)
            if intersection_cardinality(q, o, b) != 1:
                continue
            singles += 1
            assert simeq(q, o, b) == EQUIVALENT
            assert not (is_phi_circuit(q, o, phi) and in_phi_star(q, b, phi))
    assert singles > 0


@settings(max_examples=40, deadline=None)
@given(words, words, st.integers(0, 2), st.integers(0, 2))
def test_tilde_matches_bitwise_rule(v, w, n, m):
    q = q_ray()
    o, b = q_circuit(n, v), q_cocircuit(m, w)
    start, period = v.horizon(w)
    shift_o, shift_b = max(n, 1), max(m, 1)
    lo = max(shift_o, shift_b) + start + 2
    differ = all(v[i - shift_o] != w[i - shift_b] for i in range(lo, lo + 2 * period * 6))
    assert tilde(q, o, b) == differ


@pytest.mark.parametrize("v,w", [("(0)", "1(0)"), ("(01)", "(10)"), ("(0)", "(1)"), ("(001)", "(010)")])
def test_exact_simeq_agrees_with_chain_search(v, w):
    from matroidlab.raylab import q_word

    q = q_ray()
    x, y = q_circuit(0, q_word(v)), q_circuit(2, q_word(w))
    exact = simeq(q, x, y)
    assert chain_search(q, x, y) == exact


def test_simeq_frozen_examples():
    from matroidlab.raylab import q_word

    q = q_ray()
    assert simeq(q, q_circuit(0, q_word("(0)")), q_circuit(3, q_word("1(0)"))) == EQUIVALENT
    assert simeq(q, q_circuit(0, q_word("(0)")), q_cocircuit(0, q_word("(1)"))) == EQUIVALENT
    assert simeq(q, q_circuit(0, q_word("(0)")), q_circuit(0, q_word("(1)"))) == INEQUIVALENT


def test_phi_star_of_single_class():
    q = q_ray()
    phi = PhiSet.q(["(0)"])
    assert not in_phi_star(q, q_cocircuit(0, EPWord([], [1])), phi)
    assert in_phi_star(q, q_cocircuit(0, EPWord([], [0])), phi)
    assert in_phi_star(q, q_cocircuit(0, EPWord([], [0, 1])), phi)


@pytest.mark.parametrize("phi_words", [["(0)"], ["(001)", "(010)", "(100)"], ["(0)", "(1)"], []])
def test_double_star_recovers_phi(phi_words):
    q = q_ray()
    phi = PhiSet.q(phi_words)
    star = [q_cocircuit(0, w) for w in small_words() if in_phi_star(q, q_cocircuit(0, w), phi)]
    recovered = set()
    for w in small_words():
        o = q_circuit(0, w)
        if all(simeq(q, o, b) == INEQUIVALENT for b in star):
            recovered.add(q_class_of(o))
    assert recovered == {q_class_of(o) for o in phi.reps}


def test_phi_circuits_finite_and_infinite():
    q = q_ray()
    phi = PhiSet.q(["(0)"])
    assert is_phi_circuit(q, q_circuit(2, EPWord([1], [0])), phi)
    assert not is_phi_circuit(q, q_circuit(0, EPWord([], [1])), phi)
    assert is_phi_circuit(q, {"a_1", "b0_1", "b1_1"}, phi)
    assert is_phi_circuit(q, {"b0_1", "b1_1", "c0_1", "c1_1"}, phi)
    assert not is_phi_circuit(q, {"a_1", "b0_1", "c1_1"}, phi)


def test_phi_rejects_repeated_class():
    with pytest.raises(InputError):
        PhiSet.q(["(0)", "1(0)"])


def test_parity_closure():
    assert is_closed_under_f(["(0)"])[0]
    ok, witness = is_closed_under_f(["(001)", "(010)", "(100)"])
    assert not ok
    assert witness[1] == EPWord([], [1])
    assert ternary_f("(01)", "(10)", "(0)") == EPWord([], [1])


def test_q_does_not_collapse():
    report = planar_ray_collapse(q_ray())
    assert not report.collapsed
    assert "common face" in report.reason


def test_adjacent_virtual_k4_ray_collapses():
    ray = ray_from_data(load_yaml(f"{FIXTURES}/ray_k4_adjacent.yaml"))
    report = planar_ray_collapse(ray)
    assert report.collapsed and report.representatives > 0


def test_cycle_ray_is_refused():
    c4 = {"in": ("1", "2"), "x": ("2", "3"), "out": ("3", "4"), "y": ("4", "1")}
    with pytest.raises(InputError):
        planar_ray_collapse(ray_from_graphs([], [(c4, "in", "out")]))
