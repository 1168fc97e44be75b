"""The graph W: two copies of every vertex of the binary tree.

Vertex ``(v, x)`` is written ``"v.x"`` where ``v`` is a binary string (``r`` for
the root) and ``x`` is 1 or 2.  The edge between two vertices is ``"u|w"`` with
the endpoint names sorted.  A depth-``d`` truncation keeps the tree vertices of
length at most ``d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

import networkx as nx

from .core import FiniteMatroid, dual
from .epword import EPWord, parse_binary
from .errors import CapExceeded, InputError
from .graphic import cycle_matroid, graphic_decomposition

W_DEPTH_CAP = 4
PAIRS = ("11", "12", "21", "22")
STRAIGHT = frozenset({"11", "22"})
CROSS = frozenset({"12", "21"})


def tree_vertex(bits: str) -> str:
    return bits or "r"


def w_vertex(bits: str, side: int) -> str:
    return f"{tree_vertex(bits)}.{side}"


def w_edge(u: str, v: str) -> str:
    a, b = sorted((u, v))
    return f"{a}|{b}"


def level_edge(bits: str, child: str, pair: str) -> str:
    """Edge from ``(bits, pair[0])`` to ``(bits + child, pair[1])``."""
    return w_edge(w_vertex(bits, int(pair[0])), w_vertex(bits + child, int(pair[1])))


def tree_strings(d: int) -> list[str]:
    out = [""]
    for n in range(1, d + 1):
        out += [format(i, f"0{n}b") for i in range(2**n)]
    return out


@dataclass(frozen=True)
class WGraph:
    depth: int
    vertices: tuple[str, ...]
    edges: Mapping[str, tuple[str, str]] = field(hash=False, compare=False)

    @property
    def root_edge(self) -> str:
        return w_edge("r.1", "r.2")

    def matroid(self) -> FiniteMatroid:
        """Finite-cycle matroid of the truncation."""
        return cycle_matroid(self.edges)

    def vertex_count_expected(self) -> int:
        return 2 * (2 ** (self.depth + 1) - 1)

    def edge_count_expected(self) -> int:
        return 4 * (2 ** (self.depth + 1) - 2) + 1

    def cycle_space_dimension(self) -> int:
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges.values())
        return len(self.edges) - len(self.vertices) + nx.number_connected_components(g)


def build_w(d: int, cap: int = W_DEPTH_CAP) -> WGraph:
    if d < 0:
        raise InputError("depth must be nonnegative")
    if d > cap:
        raise CapExceeded("W depth", d, cap)
    strings = tree_strings(d)
    vertices = tuple(w_vertex(s, x) for s in strings for x in (1, 2))
    edges = {w_edge("r.1", "r.2"): ("r.1", "r.2")}
    for s in strings:
        if len(s) == d:
            continue
        for child in "01":
            for pair in PAIRS:
                u, v = w_vertex(s, int(pair[0])), w_vertex(s + child, int(pair[1]))
                edges[w_edge(u, v)] = tuple(sorted((u, v)))
    return WGraph(d, vertices, dict(sorted(edges.items())))


# ---------------------------------------------------------------------------
# decomposition shape

@dataclass
class WShapeReport:
    depth: int
    ok: bool
    k4_nodes: int
    bond_nodes: int
    boundary_nodes: int
    problems: list[str]

    def lines(self) -> list[str]:
        out = [
            f"depth: {self.depth}",
            f"k4-nodes: {self.k4_nodes}",
            f"bond-nodes: {self.bond_nodes}",
            f"boundary-nodes: {self.boundary_nodes}",
            f"shape: {'ok' if self.ok else 'mismatch'}",
        ]
        out += [f"problem: {p}" for p in self.problems]
        return out


def _tree_of(v: str) -> str:
    return v.rsplit(".", 1)[0]


def _depth_of(v: str) -> int:
    t = _tree_of(v)
    return 0 if t == "r" else len(t)


def subdivided_binary_tree(d: int) -> nx.Graph:
    """Binary tree of depth ``d`` with every edge subdivided once."""
    g = nx.Graph()
    g.add_node(tree_vertex(""))
    for s in tree_strings(d)[1:]:
        mid = f"sub:{s}"
        g.add_edge(tree_vertex(s[:-1]), mid)
        g.add_edge(mid, s)
    return g


def _is_k4_with_opposite_virtuals(sk) -> str | None:
    edges = sk.edges
    verts = sk.vertices
    if len(verts) != 4 or len(edges) != 6:
        return "not on 4 vertices and 6 edges"
    if len({frozenset(uv) for uv in edges.values()}) != 6:
        return "has parallel edges"
    if len(sk.virtual) != 2:
        return f"has {len(sk.virtual)} virtual elements"
    v1, v2 = (edges[x] for x in sorted(sk.virtual))
    if set(v1) & set(v2):
        return "virtual elements are adjacent"
    m = cycle_matroid(edges)
    if len(m.circuits) != 7 or sorted(len(c) for c in m.circuits) != [3, 3, 3, 3, 4, 4, 4]:
        return "matroid is not M(K4)"
    return None


def verify_w_decomposition(d: int, cap: int = W_DEPTH_CAP) -> WShapeReport:
    """Decompose the depth-``d`` truncation of W and compare with the expected shape.

    Nodes touching the outermost level are truncation artefacts: they are
    triangles hanging off the bonds at depth ``d - 1``, and they are checked
    for that form but excluded from the tree-shape comparison.
    """
    if d < 2:
        raise InputError("shape check needs depth at least 2")
    w = build_w(d, cap)
    deco = graphic_decomposition(w.edges, label_prefix="w")
    problems: list[str] = []
    boundary, k4s, bonds = set(), {}, {}
    for name, sk in sorted(deco.skeletons.items()):
        real = [e for e in sk.edges if e not in sk.virtual]
        depths = {_depth_of(v) for e in real for v in w.edges[e]}
        kind = sk.kind()
        if d in depths:
            boundary.add(name)
            if kind != "polygon" or len(sk.edges) != 3 or len(sk.virtual) != 1:
                problems.append(f"{name}: boundary node is not a triangle on one virtual element")
            continue
        if kind == "rigid":
            why = _is_k4_with_opposite_virtuals(sk)
            if why:
                problems.append(f"{name}: {why}")
            k4s[name] = sk
        elif kind == "bond":
            trees = sorted({_tree_of(v) for v in sk.vertices})
            if len(trees) != 1:
                problems.append(f"{name}: bond joins two different vertex pairs")
            t = trees[0]
            bonds[name] = t
            depth = _depth_of(next(iter(sk.vertices)))
            want = 5 if depth == d - 1 else 3
            if len(sk.edges) != want:
                problems.append(f"{name}: bond at {t} has {len(sk.edges)} elements, expected {want}")
            allowed_real = {w.root_edge} if t == "r" else set()
            if set(real) - allowed_real:
                problems.append(f"{name}: bond carries real elements {sorted(set(real) - allowed_real)}")
            m = cycle_matroid(sk.edges)
            if m.circuits != frozenset(frozenset(p) for p in combinations(sorted(sk.edges), 2)):
                problems.append(f"{name}: bond matroid is not a parallel class")
        else:
            problems.append(f"{name}: unexpected interior {kind}")
    for name in boundary:
        nbrs = deco.neighbours(name)
        if len(nbrs) != 1 or nbrs[0] not in bonds:
            problems.append(f"{name}: boundary node is not attached to a bond")
    interior = nx.Graph()
    interior.add_nodes_from(set(k4s) | set(bonds))
    for a, b in deco.tree_edges.values():
        if a not in boundary and b not in boundary:
            interior.add_edge(a, b)
    expected = subdivided_binary_tree(d - 1)
    if not nx.is_isomorphic(interior, expected):
        problems.append("interior tree is not a subdivided binary tree")
    root_bonds = [n for n, t in bonds.items() if t == "r"]
    if len(root_bonds) != 1:
        problems.append("no unique bond at the root")
    if len(k4s) != 2**d - 2 or len(bonds) != 2**d - 1 or len(boundary) != 2 ** (d + 1):
        problems.append(
            f"node counts {len(k4s)} K4, {len(bonds)} bonds, {len(boundary)} boundary "
            f"differ from {2**d - 2}, {2**d - 1}, {2 ** (d + 1)}"
        )
    return WShapeReport(d, not problems, len(k4s), len(bonds), len(boundary), problems)


# ---------------------------------------------------------------------------
# sign words and tau

def _choice_set(letter) -> frozenset[str]:
    if letter == "S":
        return STRAIGHT
    if letter == "X":
        return CROSS
    if isinstance(letter, (set, frozenset)):
        if not set(letter) <= set(PAIRS):
            raise InputError(f"unknown level edges {sorted(letter)}")
        return frozenset(letter)
    raise InputError(f"unknown level choice {letter!r}")


def _end_word(end: EPWord | str) -> EPWord:
    if isinstance(end, str):
        end = parse_binary(end)
    w = end.map(str)
    if any(c not in ("0", "1") for c in w.prefix + w.cycle):
        raise InputError(f"end address {end} is not a word over 0 and 1")
    return w


def _choices_word(choices: EPWord | str) -> EPWord:
    if isinstance(choices, str):
        s = choices.strip()
        if "(" not in s:
            raise InputError("level choices need prefix(cycle) notation")
        pre, cyc = s.rstrip(")").split("(", 1)
        choices = EPWord(tuple(pre), tuple(cyc))
    return choices.map(_choice_set)


def induce_sign_word(choices: EPWord | str) -> EPWord:
    """``+`` at level n iff both straight edges are used there, ``-`` otherwise.

    ``choices`` lists, level by level along one end, which of the four edges
    between consecutive vertex pairs the circuit uses (``S`` and ``X`` are the
    straight and crossing pairs).  A circuit converging to the end must use a
    perfect matching at all but finitely many levels.
    """
    word = _choices_word(choices)
    if any(c not in (STRAIGHT, CROSS) for c in word.cycle):
        raise InputError("circuit does not converge to the end")
    return word.map(lambda c: "+" if STRAIGHT <= c else "-")


def sign_class(word: EPWord | str) -> EPWord:
    """Purely periodic representative of the finite-change class of a sign word."""
    if isinstance(word, str):
        s = word.strip()
        pre, cyc = s.rstrip(")").split("(", 1) if "(" in s else (s, "")
        word = EPWord(tuple(pre), tuple(cyc))
    if any(c not in ("+", "-") for c in word.prefix + word.cycle):
        raise InputError(f"{word} is not a sign word")
    shift = len(word.prefix) % len(word.cycle)
    cyc = word.cycle[-shift:] + word.cycle[:-shift] if shift else word.cycle
    return EPWord((), cyc)


@dataclass(frozen=True)
class TauSpec:
    assignments: Mapping[EPWord, frozenset[EPWord]] = field(hash=False)
    default: str = "allow"

    def __post_init__(self):
        if self.default not in ("allow", "forbid"):
            raise InputError("default must be 'allow' or 'forbid'")

    @classmethod
    def build(cls, assignments: Iterable[tuple[EPWord | str, Iterable[EPWord | str]]], default: str = "allow"):
        table: dict[EPWord, frozenset[EPWord]] = {}
        for end, reps in assignments:
            key = _end_word(end)
            if key in table:
                raise InputError(f"end {key} assigned twice")
            table[key] = frozenset(sign_class(r) for r in reps)
        return cls(table, default)

    def allows(self, end: EPWord | str, sign: EPWord) -> bool:
        key = _end_word(end)
        if key not in self.assignments:
            return self.default == "allow"
        return any(sign.eventually_equal(c) for c in self.assignments[key])


def is_tau_legal(circuit: Iterable[tuple[EPWord | str, EPWord | str]], tau: TauSpec) -> bool:
    """``circuit`` lists (end, level choices) for every end it converges to."""
    return all(tau.allows(end, induce_sign_word(ch)) for end, ch in circuit)


@dataclass(frozen=True)
class WDoubleRay:
    """Double ray with both tails towards ``end``.

    The two strands leave the vertex pair at level ``start``; they are closed
    by the root edge when ``start`` is 0, otherwise through the first copy of
    the parent vertex.  ``choices[n]`` is the matching used between levels
    ``start + n`` and ``start + n + 1``.
    """

    end: EPWord
    choices: EPWord
    start: int = 0

    def edges(self, depth: int) -> frozenset[str]:
        end = _end_word(self.end)
        word = _choices_word(self.choices)
        if any(c not in (STRAIGHT, CROSS) for c in word.prefix + word.cycle):
            raise InputError("every level must use a perfect matching")
        bits = "".join(end.take(depth))
        out = set()
        if self.start == 0:
            out.add(w_edge("r.1", "r.2"))
        else:
            p, u = bits[: self.start - 1], bits[: self.start]
            out |= {level_edge(p, u[-1], "11"), level_edge(p, u[-1], "12")}
        for n in range(self.start, depth):
            for pair in word[n - self.start]:
                out.add(level_edge(bits[:n], bits[n], pair))
        return frozenset(out)

    def sign_word(self) -> EPWord:
        return induce_sign_word(self.choices)


def finite_bonds(w: WGraph) -> list[frozenset[str]]:
    """Bonds of W that lie inside the truncation: one shore avoids the last level."""
    g = nx.MultiGraph()
    g.add_nodes_from(w.vertices)
    for lbl, (u, v) in w.edges.items():
        g.add_edge(u, v, key=lbl)
    inner = [v for v in w.vertices if _depth_of(v) < w.depth]
    out = []
    for size in range(1, len(inner) + 1):
        for shore in combinations(inner, size):
            s = set(shore)
            if not nx.is_connected(g.subgraph(s)) or not nx.is_connected(g.subgraph(set(w.vertices) - s)):
                continue
            out.append(frozenset(k for u, v, k in g.edges(keys=True) if (u in s) != (v in s)))
    return out


def check_o1_sample(d: int, circuits: Iterable[WDoubleRay], tau: TauSpec) -> list[str]:
    """Legal circuits cut at depth ``d`` never meet a finite bond in exactly one edge."""
    w = build_w(d)
    bonds = finite_bonds(w)
    bad = []
    for x in circuits:
        if not is_tau_legal([(x.end, x.choices)], tau):
            continue
        xs = x.edges(d)
        for b in bonds:
            if len(xs & b) == 1:
                bad.append(f"{x} meets {sorted(b)} in one edge")
    return bad


# ---------------------------------------------------------------------------
# parallel edges in K4

K4_EDGES = {"12": ("1", "2"), "34": ("3", "4"), "13": ("1", "3"), "24": ("2", "4"), "14": ("1", "4"), "23": ("2", "3")}


def k4_opposite_partition(edges: Mapping[str, tuple[str, str]] = K4_EDGES) -> list[frozenset[str]]:
    """The partition of E(K4) into pairs of non-adjacent edges, checked to be unique."""
    pairs = [frozenset((a, b)) for a, b in combinations(sorted(edges), 2) if not set(edges[a]) & set(edges[b])]
    if len(pairs) != 3 or len(frozenset().union(*pairs)) != 6:
        raise InputError("graph is not K4")
    return sorted(pairs, key=sorted)


@dataclass(frozen=True)
class RemarkCase:
    y1: frozenset[str]
    y2: frozenset[str]
    e: str
    spans: bool
    cospans: bool
    same_pairs: bool

    @property
    def holds(self) -> bool:
        return self.spans or self.cospans or self.same_pairs


def parallel_edges_cases(x3: frozenset[str] = frozenset({"12", "34"})) -> list[RemarkCase]:
    m = cycle_matroid(K4_EDGES)
    md = dual(m)
    parts = k4_opposite_partition()
    if x3 not in parts:
        raise InputError("x3 must be a pair of non-adjacent edges")
    x1, x2 = [p for p in parts if p != x3]
    rest = sorted(x1 | x2)
    out = []
    for mask in range(16):
        y1 = frozenset(e for i, e in enumerate(rest) if mask >> i & 1)
        y2 = frozenset(rest) - y1
        for e in sorted(x3):
            out.append(
                RemarkCase(
                    y1,
                    y2,
                    e,
                    m.rank(y1 | {e}) == m.rank(y1),
                    md.rank(y2 | {e}) == md.rank(y2),
                    {y1, y2} == {x1, x2},
                )
            )
    return out


def verify_parallel_edges_remark() -> bool:
    return all(c.holds for c in parallel_edges_cases())
