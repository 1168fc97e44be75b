"""2-separations, 2-sums, torsos and canonical tree-decompositions of finite matroids."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

from .core import (
    DEFAULT_CAP,
    FiniteMatroid,
    _check_cap,
    contract_to,
    is_circuit_matroid,
    is_cocircuit_matroid,
    minimal_nonempty,
    minor,
    set_key,
)
from .errors import InputError, InternalError
from .treeglue import MatroidTree, Precircuit, edge_key, glue_tree, two_sum, virtual_label

RESERVED = "!"


@dataclass(frozen=True)
class Separation:
    side_a: frozenset[str]
    side_b: frozenset[str]
    order: int


def connectivity_order(m: FiniteMatroid, a: Iterable[str]) -> int:
    sa = m._subset(a)
    return m.rank(sa) + m.rank(m.ground - sa) - m.rank()


def components(m: FiniteMatroid) -> list[frozenset[str]]:
    """Connected components: classes of the 'lie on a common circuit' relation."""
    parent = {e: e for e in m.elements}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in m.circuits:
        items = sorted(c)
        for y in items[1:]:
            rx, ry = find(items[0]), find(y)
            if rx != ry:
                parent[ry] = rx
    groups: dict[str, set[str]] = {}
    for e in m.elements:
        groups.setdefault(find(e), set()).add(e)
    return sorted((frozenset(g) for g in groups.values()), key=set_key)


def is_connected(m: FiniteMatroid) -> bool:
    return len(components(m)) <= 1


def find_2_separations(m: FiniteMatroid, cap: int = DEFAULT_CAP) -> list[Separation]:
    """All partitions with both sides of size at least 2 and order at most 1."""
    n = len(m.elements)
    _check_cap("find_2_separations", n, cap)
    if not is_connected(m):
        raise InputError("matroid is not connected")
    if n < 4:
        return []
    table = m.rank_table(cap)
    full = (1 << n) - 1
    r = table[full]
    out = []
    # fix the first element on side A to list each unordered split once
    for rest in range(0, 1 << (n - 1)):
        a = (rest << 1) | 1
        b = full & ~a
        if b == 0:
            continue
        na = bin(a).count("1")
        if na < 2 or n - na < 2:
            continue
        order = table[a] + table[b] - r
        if order <= 1:
            out.append(Separation(m.unmask(a), m.unmask(b), order))
    out.sort(key=lambda s: (set_key(s.side_a), set_key(s.side_b)))
    return out


def is_three_connected(m: FiniteMatroid, cap: int = DEFAULT_CAP) -> bool:
    return is_connected(m) and not find_2_separations(m, cap)


def fresh_label(taken: Iterable[str], stem: str = "v") -> str:
    used = set(taken)
    i = 0
    while f"{stem}{RESERVED}{i}" in used:
        i += 1
    return f"{stem}{RESERVED}{i}"


def split_at(
    m: FiniteMatroid, sep: Separation, virtual: str | None = None
) -> tuple[FiniteMatroid, FiniteMatroid, str]:
    """Write ``m`` as the 2-sum of a matroid on A+e and one on B+e."""
    a, b = frozenset(sep.side_a), frozenset(sep.side_b)
    if a & b or (a | b) != m.ground:
        raise InputError("separation sides must partition the ground set")
    if len(a) < 2 or len(b) < 2 or connectivity_order(m, a) != 1:
        raise InputError("not an exact 2-separation")
    if not is_connected(m):
        raise InputError("matroid is not connected")
    e = virtual if virtual is not None else fresh_label(m.ground)
    if e in m.ground:
        raise InputError(f"virtual label {e!r} collides with the ground set")
    inside_a = [o for o in m.circuits if o <= a]
    inside_b = [o for o in m.circuits if o <= b]
    cross = [o for o in m.circuits if o & a and o & b]
    na = FiniteMatroid(a | {e}, minimal_nonempty(inside_a + [(o & a) | {e} for o in cross]))
    nb = FiniteMatroid(b | {e}, minimal_nonempty(inside_b + [(o & b) | {e} for o in cross]))
    if two_sum(na, nb, e) != m:
        raise InternalError("split does not glue back to the original matroid")
    return na, nb, e


# ---------------------------------------------------------------------------
# tree-decompositions

@dataclass(frozen=True)
class TreeDecomposition:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    parts: Mapping[str, frozenset[str]]

    @classmethod
    def build(
        cls,
        nodes: Iterable[str],
        edges: Iterable[tuple[str, str]],
        parts: Mapping[str, Iterable[str]],
    ) -> "TreeDecomposition":
        ns = tuple(sorted(nodes))
        es = tuple(sorted(edge_key(x, y) for x, y in edges))
        ps = {n: frozenset(parts.get(n, ())) for n in ns}
        extra = set(parts) - set(ns)
        if extra:
            raise InputError(f"part given for unknown node {sorted(extra)[0]!r}")
        d = cls(ns, es, ps)
        d._check_tree()
        return d

    def _check_tree(self) -> None:
        nodes = set(self.nodes)
        if not nodes:
            raise InputError("decomposition has no nodes")
        if len(self.edges) != len(nodes) - 1:
            raise InputError("decomposition tree must have |nodes| - 1 edges")
        for x, y in self.edges:
            if x not in nodes or y not in nodes or x == y:
                raise InputError(f"bad tree edge {x}-{y}")
        if len(self.side(self.nodes[0], None)) != len(nodes):
            raise InputError("decomposition tree is not connected")

    def neighbours(self, v: str) -> list[str]:
        return sorted(y if x == v else x for x, y in self.edges if v in (x, y))

    def side(self, start: str, avoid: str | None) -> frozenset[str]:
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.neighbours(x):
                if y != avoid and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return frozenset(seen)

    def far_elements(self, v: str, w: str) -> frozenset[str]:
        """Elements in parts on w's side of the edge vw."""
        out: set[str] = set()
        for n in self.side(w, v):
            out |= self.parts[n]
        return frozenset(out)

    def ground(self) -> frozenset[str]:
        out: set[str] = set()
        for p in self.parts.values():
            out |= p
        return frozenset(out)

    def validate(self, m: FiniteMatroid) -> list[str]:
        problems = []
        seen: set[str] = set()
        for n in self.nodes:
            overlap = seen & self.parts[n]
            if overlap:
                problems.append(f"element {sorted(overlap)[0]!r} lies in two parts")
            seen |= self.parts[n]
        if seen != m.ground:
            problems.append("parts do not cover the ground set exactly")
            return problems
        for x, y in self.edges:
            side = self.far_elements(x, y)
            if connectivity_order(m, side) > 1:
                problems.append(f"edge {x}-{y} does not induce a 2-separation")
        for n in self.nodes:
            for lbl in (virtual_label(n, w) for w in self.neighbours(n)):
                if lbl in m.ground:
                    problems.append(f"virtual label {lbl!r} collides with the ground set")
        return problems


@dataclass(frozen=True)
class Torso:
    matroid: FiniteMatroid
    virtual: Mapping[str, str]  # virtual label -> neighbouring node


def _project(m: FiniteMatroid, local: frozenset[str], far: Mapping[str, frozenset[str]]):
    """Local traces of the circuits not confined to one far side."""
    for o in m.circuits:
        if any(o <= f for f in far.values()):
            continue
        trace = set(o & local)
        for lbl, f in far.items():
            if o & f:
                trace.add(lbl)
        yield o, frozenset(trace)


def torso(m: FiniteMatroid, deco: TreeDecomposition, v: str) -> Torso:
    problems = deco.validate(m)
    if problems:
        raise InputError(f"invalid decomposition: {problems[0]}")
    if v not in deco.parts:
        raise InputError(f"unknown node {v!r}")
    far = {virtual_label(v, w): deco.far_elements(v, w) for w in deco.neighbours(v)}
    circuits = {t for _, t in _project(m, deco.parts[v], far)}
    mat = FiniteMatroid(deco.parts[v] | set(far), circuits)
    return Torso(mat, {virtual_label(v, w): w for w in deco.neighbours(v)})


def canonical_precircuit(m: FiniteMatroid, deco: TreeDecomposition, o: Iterable[str]) -> Precircuit:
    circ = frozenset(o)
    if circ not in m.circuits:
        raise InputError(f"{set_key(circ)} is not a circuit")
    choice = {}
    for v in deco.nodes:
        far = {virtual_label(v, w): deco.far_elements(v, w) for w in deco.neighbours(v)}
        if any(circ <= f for f in far.values()):
            continue
        trace = set(circ & deco.parts[v])
        trace |= {lbl for lbl, f in far.items() if circ & f}
        choice[v] = frozenset(trace)
    return Precircuit(frozenset(choice), choice)


def decomposition_tree(deco: TreeDecomposition, torsos: Mapping[str, Torso]) -> MatroidTree:
    return MatroidTree.build(
        deco.nodes,
        deco.edges,
        {e: virtual_label(*e) for e in deco.edges},
        {n: torsos[n].matroid for n in deco.nodes},
    )


def torso_kind(m: FiniteMatroid, cap: int = DEFAULT_CAP) -> str:
    if is_circuit_matroid(m):
        return "circuit"
    if is_cocircuit_matroid(m):
        return "cocircuit"
    if is_three_connected(m, cap):
        return "3-connected"
    return "other"


def shape_violations(
    deco: TreeDecomposition, torsos: Mapping[str, Torso], cap: int = DEFAULT_CAP
) -> list[str]:
    """Violations of: size >= 3, kind in {circuit, cocircuit, 3-connected}, no like neighbours."""
    problems = []
    kinds = {}
    for n in deco.nodes:
        mat = torsos[n].matroid
        if len(deco.nodes) > 1 and len(mat.elements) < 3:
            problems.append(f"node {n} has a torso with fewer than 3 elements")
        kinds[n] = torso_kind(mat, cap)
        if kinds[n] == "other":
            problems.append(f"node {n} is neither a circuit, a cocircuit nor 3-connected")
    for x, y in deco.edges:
        if kinds[x] == kinds[y] and kinds[x] in ("circuit", "cocircuit"):
            problems.append(f"adjacent {kinds[x]} torsos at {x}-{y}")
    return problems


@dataclass
class _Work:
    mats: dict[str, FiniteMatroid] = field(default_factory=dict)
    links: dict[str, tuple[str, str]] = field(default_factory=dict)  # virtual -> nodes
    counter: int = 0

    def new_node(self) -> str:
        name = f"w{self.counter}"
        self.counter += 1
        return name


def canonical_decomposition(
    m: FiniteMatroid, cap: int = DEFAULT_CAP, prefer: str = "first"
) -> tuple[TreeDecomposition, dict[str, Torso]]:
    """Split at exact 2-separations, then merge adjacent circuit or cocircuit torsos.

    ``prefer`` selects which separation is split first ("first" or "last" in
    canonical order); the output is the same either way.
    """
    if prefer not in ("first", "last"):
        raise InputError("prefer must be 'first' or 'last'")
    _check_cap("canonical_decomposition", len(m.elements), cap)
    bad = sorted(e for e in m.elements if RESERVED in e)
    if bad:
        raise InputError(f"label {bad[0]!r} uses the reserved {RESERVED!r} character")
    if not m.elements:
        raise InputError("cannot decompose the empty matroid")
    if not is_connected(m):
        raise InputError("matroid is not connected")
    work = _Work()
    root = work.new_node()
    work.mats[root] = m
    pending = [root]
    while pending:
        node = pending.pop(0)
        mat = work.mats[node]
        seps = find_2_separations(mat, cap)
        seps = [s for s in seps if s.order == 1]
        if not seps:
            continue
        sep = seps[0] if prefer == "first" else seps[-1]
        label = fresh_label(set(mat.ground) | set(work.links) | set(m.ground), "v")
        ma, mb, lbl = split_at(mat, sep, label)
        other = work.new_node()
        work.mats[node] = ma
        work.mats[other] = mb
        for vl, (x, y) in list(work.links.items()):
            if vl in mb.ground:
                work.links[vl] = (other if x == node else x, other if y == node else y)
        work.links[lbl] = (node, other)
        pending.extend([node, other])
    _merge_like_torsos(work)
    return _finalize(m, work, cap)


def _kind_quick(mat: FiniteMatroid) -> str:
    if is_circuit_matroid(mat):
        return "circuit"
    if is_cocircuit_matroid(mat):
        return "cocircuit"
    return "other"


def _merge_like_torsos(work: _Work) -> None:
    changed = True
    while changed:
        changed = False
        for lbl in sorted(work.links):
            x, y = work.links[lbl]
            kx, ky = _kind_quick(work.mats[x]), _kind_quick(work.mats[y])
            if kx != ky or kx == "other":
                continue
            work.mats[x] = two_sum(work.mats[x], work.mats[y], lbl)
            del work.mats[y]
            del work.links[lbl]
            for vl, (p, q) in list(work.links.items()):
                work.links[vl] = (x if p == y else p, x if q == y else q)
            changed = True
            break


def _finalize(m: FiniteMatroid, work: _Work, cap: int) -> tuple[TreeDecomposition, dict[str, Torso]]:
    nodes = sorted(work.mats)
    adj: dict[str, list[str]] = {n: [] for n in nodes}
    for x, y in work.links.values():
        adj[x].append(y)
        adj[y].append(x)
    real = {n: work.mats[n].ground & m.ground for n in nodes}

    def far_min(src: str, dst: str) -> tuple[str, ...]:
        seen = {src, dst}
        stack = [dst]
        best: list[str] = []
        while stack:
            x = stack.pop()
            best.extend(real[x])
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return (min(best),) if best else ()

    first = min(m.elements)
    start = next(n for n in nodes if first in real[n])
    order = [start]
    queue = [start]
    seen = {start}
    while queue:
        x = queue.pop(0)
        for y in sorted((y for y in adj[x] if y not in seen), key=lambda y: far_min(x, y)):
            seen.add(y)
            order.append(y)
            queue.append(y)
    width = len(str(len(order) - 1))
    rename = {old: f"t{i:0{width}d}" for i, old in enumerate(order)}
    edges = [edge_key(rename[x], rename[y]) for x, y in work.links.values()]
    relabel_virtual = {
        vl: virtual_label(rename[x], rename[y]) for vl, (x, y) in work.links.items()
    }
    deco = TreeDecomposition.build(
        rename.values(), edges, {rename[n]: real[n] for n in nodes}
    )
    torsos = {}
    for n in nodes:
        built = work.mats[n].relabel(relabel_virtual)
        t = torso(m, deco, rename[n])
        if t.matroid != built:
            raise InternalError(f"torso at {rename[n]} disagrees with the split result")
        torsos[rename[n]] = t
    return deco, torsos


def glue_decomposition(deco: TreeDecomposition, torsos: Mapping[str, Torso]) -> FiniteMatroid:
    return glue_tree(decomposition_tree(deco, torsos))


# ---------------------------------------------------------------------------
# torsos of connected subtrees and their minor witnesses

def _check_subtree(deco: TreeDecomposition, s: Iterable[str]) -> frozenset[str]:
    ss = frozenset(s)
    if not ss:
        raise InputError("subtree must be nonempty")
    unknown = sorted(ss - set(deco.nodes))
    if unknown:
        raise InputError(f"unknown node {unknown[0]!r}")
    start = min(ss)
    reach = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in deco.neighbours(x):
            if y in ss and y not in reach:
                reach.add(y)
                stack.append(y)
    if reach != ss:
        raise InputError("node set is not connected in the decomposition tree")
    return ss


def boundary_edges(deco: TreeDecomposition, s: frozenset[str]) -> list[tuple[str, str]]:
    return sorted((v, x) for v in s for x in deco.neighbours(v) if x not in s)


def subtree_torso(m: FiniteMatroid, deco: TreeDecomposition, s: Iterable[str]) -> FiniteMatroid:
    """Torso of the star-decomposition whose centre is the connected node set ``s``."""
    ss = _check_subtree(deco, s)
    problems = deco.validate(m)
    if problems:
        raise InputError(f"invalid decomposition: {problems[0]}")
    local: set[str] = set()
    for v in ss:
        local |= deco.parts[v]
    far = {virtual_label(v, x): deco.far_elements(v, x) for v, x in boundary_edges(deco, ss)}
    circuits = {t for _, t in _project(m, frozenset(local), far)}
    return FiniteMatroid(frozenset(local) | set(far), circuits)


@dataclass(frozen=True)
class MinorWitness:
    contract: frozenset[str]
    delete: frozenset[str]
    relabel: Mapping[str, str]

    def apply(self, m: FiniteMatroid) -> FiniteMatroid:
        return minor(m, self.contract, self.delete).relabel(self.relabel)


def _bases(m: FiniteMatroid, cap: int) -> list[frozenset[str]]:
    from itertools import combinations

    _check_cap("bases", len(m.elements), cap)
    r = m.rank()
    return [frozenset(c) for c in combinations(m.elements, r) if m.is_independent(c)]


def _edge_choices(m: FiniteMatroid, far: frozenset[str], cap: int, exhaustive: bool):
    """(s, e) pairs: s a base of m contracted onto ``far``, e extends s independently."""
    squeezed = contract_to(m, far)
    bases = _bases(squeezed, cap) if exhaustive else [squeezed.greedy_base()]
    for s in sorted(bases, key=set_key):
        for e in sorted(far - s):
            if m.is_independent(s | {e}):
                yield s, e


def realistic_minor_witness(
    m: FiniteMatroid, deco: TreeDecomposition, s: Iterable[str], cap: int = DEFAULT_CAP
) -> MinorWitness:
    """Contraction/deletion sets and relabelling realising the subtree torso as a minor.

    For each boundary edge: contract a base ``s(x)`` of ``m`` contracted onto the
    far side, keep one element ``e(x)`` that extends it to an independent set,
    delete the rest of the far side, and rename ``e(x)`` to the virtual label.
    The first choice in canonical order is tried first; other choices are
    searched only if it fails.
    """
    ss = _check_subtree(deco, s)
    target = subtree_torso(m, deco, ss)
    edges = boundary_edges(deco, ss)
    if not edges:
        return MinorWitness(frozenset(), frozenset(), {})
    fars = [deco.far_elements(v, x) for v, x in edges]
    labels = [virtual_label(v, x) for v, x in edges]
    for exhaustive in (False, True):
        options = [list(_edge_choices(m, f, cap, exhaustive)) for f in fars]
        for combo in product(*options):
            contract: set[str] = set()
            delete: set[str] = set()
            relabel = {}
            for (base, keep), f, lbl in zip(combo, fars, labels):
                contract |= base
                delete |= f - base - {keep}
                relabel[keep] = lbl
            w = MinorWitness(frozenset(contract), frozenset(delete), relabel)
            if w.apply(m) == target:
                return w
    raise InternalError("no realistic minor witness found")
