"""Eventually periodic rays of matroids of overlap 1 and their finite truncations.

Node ``i`` (counting from 1) shares its out-element with the in-element of node
``i + 1``.  In glued matroids a real local element ``x`` of node ``i`` is called
``x_i`` and the element shared by nodes ``i`` and ``i + 1`` is called ``v!i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .core import DEFAULT_CAP, FiniteMatroid, dual, minor
from .errors import InputError
from .graphic import cycle_matroid
from .treeglue import MatroidTree, glue_tree


@dataclass(frozen=True)
class RayNode:
    matroid: FiniteMatroid
    in_label: str | None
    out_label: str
    graph: Mapping[str, tuple[str, str]] | None = None

    def __post_init__(self):
        g = self.matroid.ground
        if self.out_label not in g:
            raise InputError(f"out label {self.out_label!r} is not an element of the node")
        if self.in_label is not None:
            if self.in_label not in g:
                raise InputError(f"in label {self.in_label!r} is not an element of the node")
            if self.in_label == self.out_label:
                raise InputError("in and out labels must differ")
        for e in g:
            if "!" in e or "_" in e:
                raise InputError(f"local label {e!r} may not contain '!' or '_'")
        if self.graph is not None and cycle_matroid(self.graph) != self.matroid:
            raise InputError("graph certificate does not realise the node matroid")

    @classmethod
    def from_graph(
        cls, edges: Mapping[str, tuple[str, str]], in_label: str | None, out_label: str
    ) -> "RayNode":
        return cls(cycle_matroid(edges), in_label, out_label, dict(edges))

    @property
    def real(self) -> frozenset[str]:
        return self.matroid.ground - {self.in_label, self.out_label}

    @property
    def virtual(self) -> frozenset[str]:
        return frozenset(x for x in (self.in_label, self.out_label) if x is not None)


def global_name(local: str, i: int) -> str:
    return f"{local}_{i}"


def link_name(i: int) -> str:
    """Element shared by nodes ``i`` and ``i + 1``."""
    return f"v!{i}"


def node_name(i: int) -> str:
    return f"n{i:04d}"


@dataclass(frozen=True)
class RaySpec:
    prefix: tuple[RayNode, ...]
    cycle: tuple[RayNode, ...]
    name: str = "ray"
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if not self.cycle:
            raise InputError("a ray needs a nonempty repeating block")
        nodes = list(self.prefix) + list(self.cycle)
        for k, node in enumerate(nodes):
            if k > 0 and node.in_label is None:
                raise InputError(f"node {k + 1} has no in label")
        if nodes[0].in_label is not None and self.prefix:
            raise InputError("the first node of a ray must not have an in label")
        if not self.prefix and self.cycle[0].in_label is None:
            raise InputError("with an empty prefix the repeating nodes need in labels")

    def node(self, i: int) -> RayNode:
        if i < 1:
            raise InputError("ray nodes are numbered from 1")
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        return self.cycle[(i - 1 - len(self.prefix)) % len(self.cycle)]

    def in_of(self, i: int) -> str | None:
        """In label of node ``i`` (the first node of a ray has none)."""
        return None if i == 1 else self.node(i).in_label

    def kind(self, i: int) -> int:
        """Index of node ``i`` in ``prefix + cycle``; node 1 gets -1 when it trims an in-element."""
        if i == 1 and self.node(1).in_label is not None:
            return -1
        if i <= len(self.prefix):
            return i - 1
        return len(self.prefix) + (i - 1 - len(self.prefix)) % len(self.cycle)

    @property
    def horizon(self) -> int:
        """Number of leading nodes outside the periodic part."""
        return max(len(self.prefix), 1)

    @property
    def period(self) -> int:
        return len(self.cycle)

    def local_matroid(self, i: int) -> FiniteMatroid:
        """Node matroid; at node 1 a leftover in-element is deleted."""
        key = ("local", self.kind(i))
        if key not in self._cache:
            node = self.node(i)
            if i == 1 and node.in_label is not None:
                self._cache[key] = minor(node.matroid, (), [node.in_label])
            else:
                self._cache[key] = node.matroid
        return self._cache[key]

    def local_family(self, i: int, cocircuits: bool = False) -> frozenset[frozenset[str]]:
        """Local circuits (or cocircuits) of node ``i``."""
        key = ("family", self.kind(i), cocircuits)
        if key not in self._cache:
            m = self.local_matroid(i)
            self._cache[key] = dual(m).circuits if cocircuits else m.circuits
        return self._cache[key]

    def virtual_at(self, i: int) -> frozenset[str]:
        node = self.node(i)
        return frozenset(x for x in (self.in_of(i), node.out_label) if x is not None)

    def globalize(self, i: int, local) -> frozenset[str]:
        node = self.node(i)
        out = set()
        for x in local:
            if x == node.out_label:
                out.add(link_name(i))
            elif x == node.in_label and i > 1:
                out.add(link_name(i - 1))
            else:
                out.add(global_name(x, i))
        return frozenset(out)

    def global_matroid(self, i: int) -> FiniteMatroid:
        m = self.local_matroid(i)
        return FiniteMatroid(self.globalize(i, m.ground), [self.globalize(i, c) for c in m.circuits])

    def tree(self, k: int) -> MatroidTree:
        if k < 1:
            raise InputError("truncation depth must be at least 1")
        nodes = [node_name(i) for i in range(1, k + 1)]
        edges = [(node_name(i), node_name(i + 1)) for i in range(1, k)]
        labels = {(node_name(i), node_name(i + 1)): link_name(i) for i in range(1, k)}
        return MatroidTree.build(nodes, edges, labels, {node_name(i): self.global_matroid(i) for i in range(1, k + 1)})

    def period_start(self) -> int:
        """First node index of the repeating block."""
        return len(self.prefix) + 1

    @property
    def has_certificates(self) -> bool:
        return all(n.graph is not None for n in list(self.prefix) + list(self.cycle))


def truncate(r: RaySpec, k: int, end: str = "delete") -> FiniteMatroid:
    """Glue nodes 1..k and delete (or contract) the element leading to node k+1."""
    if end not in ("delete", "contract"):
        raise InputError("end must be 'delete' or 'contract'")
    glued = glue_tree(r.tree(k))
    tail = link_name(k)
    return minor(glued, (), [tail]) if end == "delete" else minor(glued, [tail], ())


def truncate_dual(r: RaySpec, k: int, end: str = "delete", cap: int = DEFAULT_CAP) -> FiniteMatroid:
    """Dual of ``truncate(r, k, end)`` computed node by node.

    The dual of a 2-sum is the 2-sum of the duals, and deletion and
    contraction swap under duality.
    """
    if end not in ("delete", "contract"):
        raise InputError("end must be 'delete' or 'contract'")
    t = r.tree(k)
    glued = glue_tree(t.with_matroids({n: dual(m, cap) for n, m in t.matroids.items()}))
    tail = link_name(k)
    return minor(glued, [tail], ()) if end == "delete" else minor(glued, (), [tail])


def truncate_graph(r: RaySpec, k: int, end: str = "delete") -> dict[str, tuple[str, str]]:
    """Multigraph whose cycle matroid is ``truncate(r, k, end)``, built from certificates."""
    if not r.has_certificates:
        raise InputError("ray nodes carry no graph certificates")
    edges: dict[str, tuple[str, str]] = {}
    alias: dict[str, str] = {}

    def find(x: str) -> str:
        while alias.get(x, x) != x:
            x = alias[x]
        return x

    previous_out: tuple[str, str] | None = None
    for i in range(1, k + 1):
        node = r.node(i)
        g = {lbl: (f"{u}@{i}", f"{v}@{i}") for lbl, (u, v) in node.graph.items()}
        if i > 1:
            p, q = g[node.in_label]
            alias[find(p)] = find(previous_out[0])
            alias[find(q)] = find(previous_out[1])
        for lbl, uv in g.items():
            if lbl == node.out_label or (lbl == node.in_label and i > 1):
                continue
            edges[global_name(lbl, i)] = uv
        previous_out = g[node.out_label]
        if i == 1 and node.in_label is not None:
            edges.pop(global_name(node.in_label, 1))
    resolved = {lbl: (find(u), find(v)) for lbl, (u, v) in edges.items()}
    if end == "contract":
        p, q = find(previous_out[0]), find(previous_out[1])
        resolved = {
            lbl: tuple(p if x == q else x for x in uv) for lbl, uv in resolved.items()
        }
    return resolved


# ---------------------------------------------------------------------------
# the ray Q: copies of K4 glued along non-adjacent edges

Q_K4 = {
    "in": ("1", "2"),
    "out": ("3", "4"),
    "b0": ("1", "3"),
    "c0": ("2", "4"),
    "b1": ("2", "3"),
    "c1": ("1", "4"),
}
Q_FIRST = {("a" if k == "in" else k): v for k, v in Q_K4.items()}


def q_ray() -> RaySpec:
    """K4s glued along opposite edges; the first copy keeps its in-edge as the real ``a``."""
    first = RayNode.from_graph(Q_FIRST, None, "out")
    rest = RayNode.from_graph(Q_K4, "in", "out")
    return RaySpec((first,), (rest,), name="Q")


def ray_from_graphs(
    prefix: Sequence[tuple[Mapping[str, tuple[str, str]], str | None, str]],
    cycle: Sequence[tuple[Mapping[str, tuple[str, str]], str, str]],
    name: str = "ray",
) -> RaySpec:
    return RaySpec(
        tuple(RayNode.from_graph(g, i, o) for g, i, o in prefix),
        tuple(RayNode.from_graph(g, i, o) for g, i, o in cycle),
        name,
    )
