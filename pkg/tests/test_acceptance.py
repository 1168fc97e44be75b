"""The ten acceptance criteria, each checked at its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL`` line; the lines are repeated
in the pytest terminal summary.  Run this file directly to get only the lines.
"""

from __future__ import annotations

import time

import pytest

from conftest import ACCEPTANCE_LINES
from matroidlab.core import check_cireli_equivalence, hybrid_check
from matroidlab.decomp import canonical_decomposition, glue_decomposition, realistic_minor_witness, shape_violations
from matroidlab.graphic import cycle_matroid
from matroidlab.qreport import FAIL, PASS, binary_report
from matroidlab.raylab import PhiSet, planar_ray_collapse
from matroidlab.rayspec import Q_K4, q_ray, truncate
from matroidlab.suites import (
    DEFAULT_SEED,
    cir_closed_cases,
    finfix_cases,
    fixture_matroids,
    run_cir_closed,
    run_finfix,
    small_two_connected_graphs,
    cycle_graph,
    graph_edges,
)
from matroidlab.treeglue import two_sum
from matroidlab.wexample import parallel_edges_cases, verify_parallel_edges_remark, verify_w_decomposition
from oracles import antichains, bond_sets, cycle_sets, q_graph, simple_cycle_sets

import networkx as nx


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} | {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)


def criterion_1():
    start = time.perf_counter()
    checked = 0
    bad = []
    for n in range(0, 5):
        labels = [str(i) for i in range(n)]
        for fam in antichains(n):
            family = [[labels[i] for i in s] for s in fam]
            checked += 1
            if not check_cireli_equivalence(labels, family):
                bad.append((n, family))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    return ok, f"{checked} families on ground sets of size <= 4, {len(bad)} disagreements, {elapsed:.2f}s"


def _graph_fixtures():
    """(name, edge map) for every graphic fixture, plus U13 handled separately."""
    out = [(f"graph{i:03d}", g) for i, g in enumerate(small_two_connected_graphs(7))]
    out.append(("K4", graph_edges(nx.complete_graph(4))))
    out += [(f"C{n}", cycle_graph(n)) for n in (4, 5, 6)]
    return out


def criterion_2():
    cases = []
    for name, edges in _graph_fixtures():
        cases.append((name, sorted(edges), cycle_sets(edges), bond_sets(edges)))
    # U13: three parallel elements; the only cocircuit is the whole set
    cases.append(("U13", ["a", "b", "c"], {frozenset("ab"), frozenset("ac"), frozenset("bc")}, {frozenset("abc")}))
    bad = []
    for name, ground, circuits, cocircuits in cases:
        report = hybrid_check(ground, circuits, cocircuits)
        if not (report.holds("hybrid-ok") and report.holds("reconstruction")):
            bad.append(name)
    return not bad, f"{len(cases)} matroids, failures: {bad or 'none'}"


def criterion_3():
    start = time.perf_counter()
    bad = []
    fixtures = fixture_matroids()
    for name, m in fixtures.items():
        deco, torsos = canonical_decomposition(m)
        if glue_decomposition(deco, torsos) != m or shape_violations(deco, torsos):
            bad.append(name)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    return ok, f"{len(fixtures)} fixtures round-tripped, failures: {bad or 'none'}, {elapsed:.2f}s"


def criterion_4():
    bad = []
    nodes = 0
    for name, m in fixture_matroids().items():
        deco, torsos = canonical_decomposition(m)
        for v in deco.nodes:
            nodes += 1
            w = realistic_minor_witness(m, deco, [v])
            minor = w.apply(m)
            virtual = set(torsos[v].virtual)
            if minor != torsos[v].matroid or not set(w.relabel.values()) <= virtual:
                bad.append((name, v))
            if (minor.ground - virtual) != (torsos[v].matroid.ground - virtual):
                bad.append((name, v, "renamed a real element"))
    return not bad, f"{nodes} torsos witnessed, failures: {bad or 'none'}"


def criterion_5():
    left = cycle_matroid({f"{k}L": uv for k, uv in Q_K4.items() if k != "in"} | {"p": Q_K4["in"]})
    right = cycle_matroid({f"{k}R": uv for k, uv in Q_K4.items() if k != "in"} | {"p": Q_K4["in"]})
    m = two_sum(left, right, "p")
    # glued graph: both copies share the vertices 1 and 2 of the edge p, which is then removed
    glued = {f"{k}L": uv for k, uv in Q_K4.items() if k != "in"}
    glued |= {f"{k}R": tuple(x if x in "12" else x + "'" for x in uv) for k, uv in Q_K4.items() if k != "in"}
    oracle = cycle_sets(glued)
    ok = len(m.circuits) == 22 and m.circuits == oracle
    return ok, f"{len(m.circuits)} circuits, oracle {len(oracle)}, sets equal: {m.circuits == oracle}"


def criterion_6():
    q = q_ray()
    counts = []
    ok = True
    for k in range(1, 7):
        mine = truncate(q, k).circuits
        oracle = simple_cycle_sets(q_graph(k))
        counts.append(len(mine))
        ok = ok and mine == oracle
    return ok, f"truncations 1..6 have {counts} circuits, equal to the graph cycles: {ok}"


def criterion_7():
    start = time.perf_counter()
    zero = binary_report(PhiSet.q(["(0)"]), depth=5)
    want_zero = {1: "documented-negative", 2: FAIL, 3: PASS, 4: PASS, 5: PASS, 6: PASS, 7: PASS, 8: PASS, 9: FAIL}
    got_zero = {n: zero.status(n) for n in want_zero}
    mod3 = binary_report(PhiSet.q(["(001)", "(010)", "(100)"]), depth=5)
    detail7 = next(v.detail for v in mod3.verdicts if v.condition == 7)
    elapsed = time.perf_counter() - start
    ok = (
        got_zero == want_zero
        and zero.matches_summary()
        and mod3.status(7) == FAIL
        and mod3.status(8) == FAIL
        and "= (1)^w not in Phi" in detail7
        and "equals o(0, (1)^w)" in detail7
        and mod3.matches_summary()
        and elapsed < 60
    )
    return ok, f"Phi={{[0]}} verdicts {got_zero}; mod-3 (7)={mod3.status(7)} (8)={mod3.status(8)} image (1)^w; {elapsed:.2f}s"


def criterion_8():
    ff = run_finfix(finfix_cases(DEFAULT_SEED, 100))
    cc = run_cir_closed(cir_closed_cases(DEFAULT_SEED, 100))
    return not ff and not cc, f"seed {DEFAULT_SEED}: finfix 100 cases {len(ff)} failures, cir_closed 100 cases {len(cc)} failures"


def criterion_9():
    report = planar_ray_collapse(q_ray(), max_cycle=3)
    return report.collapsed, f"collapsed={report.collapsed} ({report.reason})"


def criterion_10():
    start = time.perf_counter()
    shapes = {d: verify_w_decomposition(d).ok for d in (2, 3, 4)}
    cases = parallel_edges_cases()
    parallel = verify_parallel_edges_remark() and len(cases) == 32
    elapsed = time.perf_counter() - start
    ok = all(shapes.values()) and parallel and elapsed < 60
    return ok, f"shape by depth {shapes}, parallel-edge check over {len(cases)} cases: {parallel}, {elapsed:.2f}s"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n):
    ok, detail = CRITERIA[n - 1]()
    record(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for i, crit in enumerate(CRITERIA, 1):
        ok, detail = crit()
        print(f"criterion {i}: {'PASS' if ok else 'FAIL'} | {detail}")
