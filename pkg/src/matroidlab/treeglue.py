"""Trees of matroids of overlap 1.

A :class:`MatroidTree` assigns a finite matroid to each node of a finite tree;
adjacent node matroids share exactly one (virtual) element and non-adjacent ones
share nothing.  Gluing a finite tree is an iterated 2-sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .core import (
    DEFAULT_CAP,
    FiniteMatroid,
    dual,
    is_valid_matroid,
    minimal_nonempty,
    minor,
    set_key,
)
from .errors import CapExceeded, InputError


def edge_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def virtual_label(a: str, b: str) -> str:
    """Name of the virtual element for the tree edge {a, b}."""
    x, y = edge_key(a, b)
    return f"{x}!{y}"


def two_sum(m1: FiniteMatroid, m2: FiniteMatroid, p: str) -> FiniteMatroid:
    """2-sum of ``m1`` and ``m2`` along their only common element ``p``."""
    common = m1.ground & m2.ground
    if common != {p}:
        raise InputError(f"grounds must meet exactly in {p!r}, they meet in {sorted(common)}")
    for side, m in (("first", m1), ("second", m2)):
        if frozenset([p]) in m.circuits:
            raise InputError(f"{p!r} is a loop of the {side} matroid")
        if not any(p in c for c in m.circuits):
            raise InputError(f"{p!r} is a coloop of the {side} matroid")
    through1 = [c - {p} for c in m1.circuits if p in c]
    through2 = [c - {p} for c in m2.circuits if p in c]
    circuits = [c for c in m1.circuits if p not in c]
    circuits += [c for c in m2.circuits if p not in c]
    circuits += [a | b for a in through1 for b in through2]
    return FiniteMatroid((m1.ground | m2.ground) - {p}, circuits)


@dataclass(frozen=True)
class Precircuit:
    """A connected node set with one local circuit per node."""

    subtree: frozenset[str]
    choice: Mapping[str, frozenset[str]]

    def underlying(self, virtual: Iterable[str]) -> frozenset[str]:
        virt = frozenset(virtual)
        out: set[str] = set()
        for c in self.choice.values():
            out |= c - virt
        return frozenset(out)


@dataclass(frozen=True)
class TreeReport:
    ok: bool
    problems: tuple[str, ...] = ()

    def lines(self) -> list[str]:
        out = [f"valid: {'yes' if self.ok else 'no'}"]
        out += [f"problem: {p}" for p in self.problems]
        return out


@dataclass(frozen=True)
class MatroidTree:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    edge_element: Mapping[tuple[str, str], str]
    matroids: Mapping[str, FiniteMatroid] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        nodes: Iterable[str],
        edges: Iterable[tuple[str, str]],
        edge_element: Mapping[tuple[str, str], str],
        matroids: Mapping[str, FiniteMatroid],
    ) -> "MatroidTree":
        ns = tuple(sorted(nodes))
        es = tuple(sorted(edge_key(a, b) for a, b in edges))
        lbl = {edge_key(a, b): v for (a, b), v in edge_element.items()}
        missing = [e for e in es if e not in lbl]
        if missing:
            raise InputError(f"tree edge {missing[0]} has no element")
        unknown = [n for n in matroids if n not in ns]
        if unknown or set(matroids) != set(ns):
            raise InputError("every node needs exactly one matroid")
        return cls(ns, es, {e: lbl[e] for e in es}, {n: matroids[n] for n in ns})

    # -- structure ---------------------------------------------------------
    @property
    def virtual_elements(self) -> frozenset[str]:
        return frozenset(self.edge_element.values())

    @property
    def ground(self) -> frozenset[str]:
        out: set[str] = set()
        for m in self.matroids.values():
            out |= m.ground
        return frozenset(out) - self.virtual_elements

    def neighbours(self, node: str) -> list[str]:
        out = [b if a == node else a for a, b in self.edges if node in (a, b)]
        return sorted(out)

    def label(self, a: str, b: str) -> str:
        return self.edge_element[edge_key(a, b)]

    def component(self, start: str, avoid: str) -> frozenset[str]:
        """Nodes reachable from ``start`` without passing through ``avoid``."""
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.neighbours(x):
                if y != avoid and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return frozenset(seen)

    def with_matroids(self, matroids: Mapping[str, FiniteMatroid]) -> "MatroidTree":
        return MatroidTree(self.nodes, self.edges, dict(self.edge_element), dict(matroids))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatroidTree):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.edges == other.edges
            and dict(self.edge_element) == dict(other.edge_element)
            and dict(self.matroids) == dict(other.matroids)
        )

    def __hash__(self) -> int:
        return hash((self.nodes, self.edges))


def validate_matroid_tree(t: MatroidTree, cap: int = DEFAULT_CAP) -> TreeReport:
    problems: list[str] = []
    nodes = set(t.nodes)
    if len(t.edges) != max(len(nodes) - 1, 0):
        problems.append("edge count is not |nodes| - 1")
    for a, b in t.edges:
        if a not in nodes or b not in nodes:
            problems.append(f"edge {a}-{b} uses an unknown node")
    if t.nodes and not problems:
        if len(t.component(t.nodes[0], "")) != len(nodes):
            problems.append("tree is not connected")
    labels = list(t.edge_element.values())
    if len(set(labels)) != len(labels):
        problems.append("two tree edges share an element")
    adjacent = set(t.edges)
    ordered = list(t.nodes)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            shared = t.matroids[a].ground & t.matroids[b].ground
            key = edge_key(a, b)
            if key in adjacent:
                lbl = t.edge_element[key]
                if shared != {lbl}:
                    problems.append(
                        f"nodes {a},{b} share {sorted(shared)} instead of exactly {lbl!r} (overlap must be 1)"
                    )
            elif shared:
                problems.append(f"non-adjacent nodes {a},{b} share {sorted(shared)}")
    for n in t.nodes:
        m = t.matroids[n]
        if len(m.elements) > cap:
            problems.append(f"node {n} exceeds cap {cap}; axioms not checked")
        elif not is_valid_matroid(m, cap=cap):
            problems.append(f"node {n} violates the circuit axioms")
    return TreeReport(not problems, tuple(problems))


def _check_real(t: MatroidTree, s: Iterable[str], what: str) -> frozenset[str]:
    fs = frozenset(s)
    bad = sorted(fs & t.virtual_elements)
    if bad:
        raise InputError(f"{what} touches the virtual element {bad[0]!r}")
    stray = sorted(fs - t.ground)
    if stray:
        raise InputError(f"{what} contains {stray[0]!r}, which is not in the tree")
    return fs


def dual_tree(t: MatroidTree, cap: int = DEFAULT_CAP) -> MatroidTree:
    return t.with_matroids({n: dual(m, cap=cap) for n, m in t.matroids.items()})


def contract_tree(t: MatroidTree, p: Iterable[str]) -> MatroidTree:
    ps = _check_real(t, p, "contract set")
    return t.with_matroids({n: minor(m, ps & m.ground, ()) for n, m in t.matroids.items()})


def delete_tree(t: MatroidTree, q: Iterable[str]) -> MatroidTree:
    qs = _check_real(t, q, "delete set")
    return t.with_matroids({n: minor(m, (), qs & m.ground) for n, m in t.matroids.items()})


def glue_tree(t: MatroidTree, order: Sequence[tuple[str, str]] | None = None) -> FiniteMatroid:
    """Iterated 2-sum over the tree edges, in the given order (default: sorted)."""
    if not t.nodes:
        return FiniteMatroid((), ())
    edges = list(t.edges) if order is None else [edge_key(a, b) for a, b in order]
    if sorted(edges) != sorted(t.edges):
        raise InputError("gluing order must list every tree edge exactly once")
    owner = {n: n for n in t.nodes}
    current = dict(t.matroids)

    def find(x: str) -> str:
        while owner[x] != x:
            owner[x] = owner[owner[x]]
            x = owner[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        lbl = t.edge_element[(a, b)]
        glued = two_sum(current[ra], current[rb], lbl)
        owner[rb] = ra
        current[ra] = glued
        del current[rb]
    (result,) = current.values()
    return result


def enumerate_precircuits(t: MatroidTree, cap: int = 200_000) -> list[Precircuit]:
    """All precircuits of a finite tree of matroids.

    A precircuit is rooted at its least node; from there each local circuit
    decides, through its virtual elements, which neighbours join.
    """
    out: list[Precircuit] = []
    for root in t.nodes:
        for c in sorted(t.matroids[root].circuits, key=set_key):
            partials = [({root: c}, [(root, nb) for nb in t.neighbours(root)])]
            while partials:
                choice, frontier = partials.pop()
                if not frontier:
                    out.append(Precircuit(frozenset(choice), dict(choice)))
                    if len(out) > cap:
                        raise CapExceeded("enumerate_precircuits", len(out), cap)
                    continue
                (src, dst), rest = frontier[0], frontier[1:]
                lbl = t.label(src, dst)
                if lbl not in choice[src]:
                    partials.append((choice, rest))
                    continue
                if dst < root:
                    continue
                for d in sorted(t.matroids[dst].circuits, key=set_key):
                    if lbl not in d:
                        continue
                    nxt = dict(choice)
                    nxt[dst] = d
                    more = [(dst, nb) for nb in t.neighbours(dst) if nb != src]
                    partials.append((nxt, rest + more))
    return out


def is_precircuit(t: MatroidTree, pre: Precircuit) -> bool:
    if not pre.subtree or set(pre.subtree) != set(pre.choice):
        return False
    nodes = set(pre.subtree)
    start = min(nodes)
    reach = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in t.neighbours(x):
            if y in nodes and y not in reach:
                reach.add(y)
                stack.append(y)
    if reach != nodes:
        return False
    for n in nodes:
        c = frozenset(pre.choice[n])
        if c not in t.matroids[n].circuits:
            return False
        for nb in t.neighbours(n):
            if (t.label(n, nb) in c) != (nb in nodes):
                return False
    return True


def enumerate_psi_circuits(t: MatroidTree, cap: int = 200_000) -> frozenset[frozenset[str]]:
    """Minimal nonempty underlying sets of precircuits of a finite tree."""
    virt = t.virtual_elements
    return minimal_nonempty(p.underlying(virt) for p in enumerate_precircuits(t, cap))


def is_phantom(t: MatroidTree, pre: Precircuit) -> bool:
    """Some edge of the support has only virtual-only local circuits beyond it."""
    if not is_precircuit(t, pre):
        raise InputError("not a precircuit of this tree")
    virt = t.virtual_elements
    nodes = set(pre.subtree)
    for a in sorted(nodes):
        for b in t.neighbours(a):
            if b not in nodes:
                continue
            beyond = t.component(b, a) & nodes
            if all(not (pre.choice[v] - virt) for v in beyond):
                return True
    return False


def subtree_tree(t: MatroidTree, keep: Iterable[str]) -> MatroidTree:
    ks = set(keep)
    return MatroidTree.build(
        ks,
        [e for e in t.edges if e[0] in ks and e[1] in ks],
        {e: v for e, v in t.edge_element.items() if e[0] in ks and e[1] in ks},
        {n: t.matroids[n] for n in ks},
    )


def is_nice_ray(ray) -> bool:
    """Decide niceness of an eventually periodic ray of matroids.

    A phantom precircuit on a ray eventually uses only the two virtual elements
    at every node, so it exists exactly when the in- and out-elements are
    parallel in every node of the repeating block; phantom precircuits of the
    dual tree correspond to the two elements being in series.
    """
    from .rayspec import RaySpec

    if not isinstance(ray, RaySpec):
        raise InputError("niceness is decided only for eventually periodic ray specifications")
    parallel = all(
        frozenset([n.in_label, n.out_label]) in n.matroid.circuits for n in ray.cycle
    )
    series = all(
        frozenset([n.in_label, n.out_label]) in dual(n.matroid).circuits for n in ray.cycle
    )
    return not (parallel or series)
