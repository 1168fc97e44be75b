"""Fixture matroids and seeded random cases shared by the CLI and the test suite."""

from __future__ import annotations

import random
from dataclasses import dataclass

import networkx as nx

from .core import FiniteMatroid, dual, hybrid_check, uniform
from .decomp import canonical_decomposition, glue_decomposition, realistic_minor_witness, shape_violations
from .epword import EPWord
from .graphic import cycle_matroid
from .raylab import (
    PhiSet,
    cir_closed_check,
    finfix_check,
    q_circuit,
    q_cocircuit,
    tilde,
)
from .rayspec import Q_K4, q_ray
from .treeglue import two_sum

DEFAULT_SEED = 20240229


def graph_edges(g: nx.Graph) -> dict[str, tuple[str, str]]:
    return {f"{min(u, v)}{max(u, v)}": (str(u), str(v)) for u, v in g.edges()}


def small_two_connected_graphs(max_edges: int = 7) -> list[dict[str, tuple[str, str]]]:
    """Simple 2-connected graphs with at most ``max_edges`` edges, one per isomorphism class."""
    out = []
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() >= 3 and g.number_of_edges() <= max_edges and nx.is_biconnected(g):
            out.append(graph_edges(g))
    return out


def cycle_graph(n: int) -> dict[str, tuple[str, str]]:
    return graph_edges(nx.cycle_graph(n))


def k4_two_sum() -> FiniteMatroid:
    left = cycle_matroid({f"{k}L": uv for k, uv in Q_K4.items() if k != "out"} | {"p": Q_K4["out"]})
    right = cycle_matroid({f"{k}R": uv for k, uv in Q_K4.items() if k != "in"} | {"p": Q_K4["in"]})
    return two_sum(left, right, "p")


def named_fixtures() -> dict[str, FiniteMatroid]:
    return {
        "U13": uniform(1, ["a", "b", "c"]),
        "K4": cycle_matroid(graph_edges(nx.complete_graph(4))),
        "C4": cycle_matroid(cycle_graph(4)),
        "C5": cycle_matroid(cycle_graph(5)),
        "C6": cycle_matroid(cycle_graph(6)),
        "K4+K4": k4_two_sum(),
    }


def fixture_matroids(max_edges: int = 7) -> dict[str, FiniteMatroid]:
    """Named fixtures plus the cycle matroid of every small 2-connected graph."""
    out = named_fixtures()
    for i, edges in enumerate(small_two_connected_graphs(max_edges)):
        out[f"graph{i:03d}"] = cycle_matroid(edges)
    return out


# ---------------------------------------------------------------------------
# round trips

@dataclass(frozen=True)
class RoundTrip:
    name: str
    glued_equal: bool
    shape_ok: bool
    witnesses_ok: bool
    nodes: int

    @property
    def ok(self) -> bool:
        return self.glued_equal and self.shape_ok and self.witnesses_ok


def round_trip(name: str, m: FiniteMatroid) -> RoundTrip:
    deco, torsos = canonical_decomposition(m)
    glued = glue_decomposition(deco, torsos)
    shape_ok = not shape_violations(deco, torsos)
    witnesses_ok = True
    for node in deco.nodes:
        w = realistic_minor_witness(m, deco, [node])
        if w.apply(m) != torsos[node].matroid or not set(w.relabel.values()) <= set(torsos[node].virtual):
            witnesses_ok = False
    return RoundTrip(name, glued == m, shape_ok, witnesses_ok, len(deco.nodes))


def random_two_connected(rng: random.Random, max_edges: int = 9) -> dict[str, tuple[str, str]]:
    """Random 2-connected multigraph: a cycle plus random chords and parallel edges."""
    n = rng.randint(3, 6)
    edges = {f"e{i}": (str(i), str((i + 1) % n)) for i in range(n)}
    extra = rng.randint(0, max(0, max_edges - n))
    for j in range(extra):
        u, v = rng.sample(range(n), 2)
        edges[f"f{j}"] = (str(u), str(v))
    return edges


def random_matroids(seed: int, count: int) -> list[tuple[str, FiniteMatroid]]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        kind = rng.choice(["graph", "uniform", "sum"])
        if kind == "graph":
            out.append((f"random{i:03d}-graph", cycle_matroid(random_two_connected(rng))))
        elif kind == "uniform":
            n = rng.randint(2, 7)
            r = rng.randint(1, n - 1)
            out.append((f"random{i:03d}-U{r}{n}", uniform(r, [f"u{j}" for j in range(n)])))
        else:
            g = random_two_connected(rng, 6)
            a = cycle_matroid({f"a{e}": uv for e, uv in g.items()})
            size = rng.randint(3, 4)
            b = uniform(rng.randint(1, size - 1), ["x", "y", "z", "w"][:size])
            p = sorted(a.elements)[0]
            b = b.relabel({sorted(b.elements)[0]: p})
            out.append((f"random{i:03d}-sum", two_sum(a, b, p)))
    return out


def hybrid_ok(m: FiniteMatroid) -> bool:
    report = hybrid_check(m.elements, m.circuits, dual(m).circuits)
    return report.holds("hybrid-ok") and report.holds("reconstruction")


# ---------------------------------------------------------------------------
# random cases on Q for the two closure properties

def random_word(rng: random.Random, max_prefix: int = 2, max_cycle: int = 2) -> EPWord:
    pre = [rng.randint(0, 1) for _ in range(rng.randint(0, max_prefix))]
    cyc = [rng.randint(0, 1) for _ in range(rng.randint(1, max_cycle))]
    return EPWord(pre, cyc)


def _flip(word: EPWord, rng: random.Random, reach: int = 4) -> EPWord:
    for i in rng.sample(range(reach), rng.randint(0, reach)):
        word = word.replace(i, 1 - word[i])
    return word


def _aligned(node_word: EPWord, n: int) -> EPWord:
    """The word to hand to o(n, .) so that node i carries ``node_word[i - 1]``."""
    return node_word.shift(max(n, 1) - 1)


def _random_phi(rng: random.Random, base: EPWord) -> PhiSet:
    words = [base]
    if rng.random() < 0.5:
        other = random_word(rng)
        if not other.eventually_equal(base):
            words.append(other)
    return PhiSet.q(words)


@dataclass(frozen=True)
class ClosureCase:
    phi: PhiSet
    x: object
    x2: object
    b: object = None


def finfix_cases(seed: int = DEFAULT_SEED, count: int = 100) -> list[ClosureCase]:
    """Phi-circuits ``x`` and circuits ``x2`` that differ from them at finitely many nodes."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        v = random_word(rng)
        phi = _random_phi(rng, v)
        n, n2 = rng.randint(0, 2), rng.randint(0, 3)
        x = q_circuit(n, _aligned(v, n))
        x2 = q_circuit(n2, _aligned(_flip(v, rng), n2))
        out.append(ClosureCase(phi, x, x2))
    return out


def cir_closed_cases(seed: int = DEFAULT_SEED, count: int = 100) -> list[ClosureCase]:
    """Phi-circuits ``x``, cocircuits ``b`` with x ~ b, and circuits ``x2`` with x2 ~ b."""
    rng = random.Random(seed + 1)
    out = []
    q = q_ray()
    while len(out) < count:
        v = random_word(rng)
        phi = _random_phi(rng, v)
        n, m, n2 = rng.randint(0, 2), rng.randint(0, 3), rng.randint(0, 3)
        x = q_circuit(n, _aligned(v, n))
        w = _flip(v.map(lambda c: 1 - c), rng)
        b = q_cocircuit(m, _aligned(w, m))
        u = _flip(w.map(lambda c: 1 - c), rng)
        x2 = q_circuit(n2, _aligned(u, n2))
        if tilde(q, x, b) and tilde(q, x2, b):
            out.append(ClosureCase(phi, x, x2, b))
    return out


def run_finfix(cases) -> list[str]:
    q = q_ray()
    return [f"{c.x.describe()} -> {c.x2.describe()}" for c in cases if not finfix_check(q, c.x, c.x2, c.phi)]


def run_cir_closed(cases) -> list[str]:
    q = q_ray()
    return [
        f"{c.x.describe()} ~ {c.b.describe()} ~ {c.x2.describe()}"
        for c in cases
        if not cir_closed_check(q, c.x, c.x2, c.b, c.phi)
    ]


__all__ = [
    "DEFAULT_SEED",
    "fixture_matroids",
    "named_fixtures",
    "small_two_connected_graphs",
    "round_trip",
    "random_matroids",
    "hybrid_ok",
    "finfix_cases",
    "cir_closed_cases",
    "run_finfix",
    "run_cir_closed",
]
