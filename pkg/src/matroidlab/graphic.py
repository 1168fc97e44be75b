"""Cycle matroids of small multigraphs and a brute-force split-component decomposition.

Graphs are plain mappings ``edge label -> (u, v)``; parallel edges and loops are
allowed because decomposition skeletons need them.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping

import networkx as nx

from .core import FiniteMatroid
from .errors import CapExceeded, InputError

EdgeMap = Mapping[str, tuple[str, str]]

CYCLE_EDGE_CAP = 40


def _adjacency(edges: EdgeMap) -> dict[str, list[tuple[str, str]]]:
    adj: dict[str, list[tuple[str, str]]] = defaultdict(list)
    for lbl, (u, v) in edges.items():
        adj[u].append((lbl, v))
        if u != v:
            adj[v].append((lbl, u))
    for lst in adj.values():
        lst.sort()
    return adj


def graph_circuits(edges: EdgeMap, cap: int = CYCLE_EDGE_CAP) -> frozenset[frozenset[str]]:
    """Edge sets of all cycles (loops and 2-cycles of parallel edges included).

    Each cycle is found exactly once, from its least edge label: the remaining
    edges must form a path between that edge's endpoints using only larger labels.
    """
    if len(edges) > cap:
        raise CapExceeded("graph_circuits", len(edges), cap)
    out = set()
    order = sorted(edges)
    rank = {lbl: i for i, lbl in enumerate(order)}
    adj = _adjacency(edges)
    for lbl in order:
        u, v = edges[lbl]
        if u == v:
            out.add(frozenset([lbl]))
            continue
        floor = rank[lbl]
        stack = [(v, frozenset([v]), (lbl,))]
        while stack:
            node, seen, path = stack.pop()
            for elbl, nxt in adj[node]:
                if rank[elbl] <= floor or elbl in path:
                    continue
                if nxt == u:
                    out.add(frozenset(path + (elbl,)))
                elif nxt not in seen and edges[elbl][0] != edges[elbl][1]:
                    stack.append((nxt, seen | {nxt}, path + (elbl,)))
    return frozenset(out)


def cycle_matroid(edges: EdgeMap, cap: int = CYCLE_EDGE_CAP) -> FiniteMatroid:
    return FiniteMatroid(edges.keys(), graph_circuits(edges, cap))


def to_nx(edges: EdgeMap) -> nx.MultiGraph:
    g = nx.MultiGraph()
    for lbl, (u, v) in edges.items():
        g.add_edge(u, v, key=lbl)
    return g


def is_two_connected(edges: EdgeMap) -> bool:
    """2-connected in the matroid sense: every two edges lie on a common cycle."""
    if len(edges) <= 1:
        return True
    g = to_nx(edges)
    if any(u == v for u, v in edges.values()):
        return False
    if not nx.is_connected(g):
        return False
    if g.number_of_nodes() == 2:
        return True
    return nx.is_biconnected(nx.Graph(g))


# ---------------------------------------------------------------------------
# split components

@dataclass
class Skeleton:
    """One node of a graphic decomposition: a small multigraph with virtual edges."""

    edges: dict[str, tuple[str, str]]
    virtual: set[str]

    @property
    def vertices(self) -> frozenset[str]:
        return frozenset(x for uv in self.edges.values() for x in uv)

    def kind(self) -> str:
        verts = self.vertices
        if len(verts) == 2:
            return "bond"
        degrees = defaultdict(int)
        for u, v in self.edges.values():
            degrees[u] += 1
            degrees[v] += 1
        if len(self.edges) == len(verts) and all(d == 2 for d in degrees.values()):
            return "polygon"
        return "rigid"


def _separation_classes(edges: EdgeMap, a: str, b: str) -> list[list[str]]:
    """Edge classes of the graph relative to the vertex pair {a, b}."""
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    singles = []
    anchored: dict[str, list[str]] = defaultdict(list)
    for lbl in sorted(edges):
        u, v = edges[lbl]
        if {u, v} == {a, b}:
            singles.append([lbl])
            continue
        inner = [x for x in (u, v) if x not in (a, b)]
        if len(inner) == 2:
            ru, rv = find(inner[0]), find(inner[1])
            if ru != rv:
                parent[ru] = rv
        anchored[inner[0]].append(lbl)
    groups: dict[str, list[str]] = defaultdict(list)
    for x, lbls in anchored.items():
        groups[find(x)].extend(lbls)
    classes = [sorted(set(v)) for v in groups.values()] + singles
    classes.sort()
    return classes


def _find_split(edges: EdgeMap) -> tuple[list[str], list[str], str, str] | None:
    verts = sorted({x for uv in edges.values() for x in uv})
    if len(edges) < 4:
        return None
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            classes = _separation_classes(edges, a, b)
            if len(classes) < 2:
                continue
            sizes = [len(c) for c in classes]
            if len(classes) == 2 and min(sizes) == 1:
                continue
            if len(classes) == 3 and all(s == 1 for s in sizes):
                continue
            side: list[str] = []
            for c in classes:
                if len(side) >= 2:
                    break
                side.extend(c)
            rest = sorted(set(edges) - set(side))
            if len(rest) < 2:
                # fold all but the final class, which must then be large enough
                side = [e for c in classes[:-1] for e in c]
                rest = classes[-1]
                if len(side) < 2 or len(rest) < 2:
                    continue
            return sorted(side), rest, a, b
    return None


@dataclass
class GraphicDecomposition:
    skeletons: dict[str, Skeleton]
    tree_edges: dict[str, tuple[str, str]]  # virtual label -> (node, node)

    def neighbours(self, node: str) -> list[str]:
        out = []
        for a, b in self.tree_edges.values():
            if a == node:
                out.append(b)
            elif b == node:
                out.append(a)
        return sorted(out)


def graphic_decomposition(edges: EdgeMap, label_prefix: str = "g") -> GraphicDecomposition:
    """Split a 2-connected multigraph into bonds, polygons and 3-connected skeletons.

    Splits at separation pairs until none is left, then merges adjacent bonds
    and adjacent polygons.  The outcome is the unique split-component tree.
    """
    if not is_two_connected(edges):
        raise InputError("graph is not 2-connected")
    for lbl in edges:
        if "!" in lbl:
            raise InputError(f"edge label {lbl!r} uses the reserved '!' character")
    counter = 0
    skeletons: dict[str, Skeleton] = {"s0": Skeleton(dict(edges), set())}
    tree: dict[str, tuple[str, str]] = {}
    work = ["s0"]
    next_node = 1
    while work:
        node = work.pop()
        sk = skeletons[node]
        split = _find_split(sk.edges)
        if split is None:
            continue
        side, rest, a, b = split
        virt = f"{label_prefix}!{counter}"
        counter += 1
        other = f"s{next_node}"
        next_node += 1
        side_edges = {e: sk.edges[e] for e in side}
        side_edges[virt] = (a, b)
        rest_edges = {e: sk.edges[e] for e in rest}
        rest_edges[virt] = (a, b)
        skeletons[node] = Skeleton(rest_edges, (sk.virtual & set(rest)) | {virt})
        skeletons[other] = Skeleton(side_edges, (sk.virtual & set(side)) | {virt})
        for lbl in sk.virtual & set(side):
            x, y = tree[lbl]
            tree[lbl] = (other if x == node else x, other if y == node else y)
        tree[virt] = (node, other)
        work.extend([node, other])
    _merge_like(skeletons, tree)
    return GraphicDecomposition(skeletons, tree)


def _merge_like(skeletons: dict[str, Skeleton], tree: dict[str, tuple[str, str]]) -> None:
    changed = True
    while changed:
        changed = False
        for virt in sorted(tree):
            x, y = tree[virt]
            kx, ky = skeletons[x].kind(), skeletons[y].kind()
            if kx != ky or kx == "rigid":
                continue
            sx, sy = skeletons[x], skeletons[y]
            if kx == "bond":
                merged = {**{e: uv for e, uv in sx.edges.items() if e != virt},
                          **{e: uv for e, uv in sy.edges.items() if e != virt}}
            else:
                merged = _glue_polygons(sx.edges, sy.edges, virt)
            skeletons[x] = Skeleton(merged, (sx.virtual | sy.virtual) - {virt})
            del skeletons[y]
            del tree[virt]
            for lbl, (p, q) in list(tree.items()):
                tree[lbl] = (x if p == y else p, x if q == y else q)
            changed = True
            break


def _glue_polygons(ex: EdgeMap, ey: EdgeMap, virt: str) -> dict[str, tuple[str, str]]:
    """Graph 2-sum of two cycles along ``virt``, keeping endpoint names consistent."""
    a, b = ex[virt]
    ya, yb = ey[virt]
    rename: dict[str, str] = {ya: a, yb: b}
    used = {x for uv in ex.values() for x in uv}
    for uv in ey.values():
        for x in uv:
            if x not in rename:
                fresh = x
                while fresh in used:
                    fresh = fresh + "'"
                rename[x] = fresh
                used.add(fresh)
    out = {e: uv for e, uv in ex.items() if e != virt}
    for e, (u, v) in ey.items():
        if e != virt:
            out[e] = (rename[u], rename[v])
    return out


def graph_bonds(edges: EdgeMap, cap: int = 16) -> frozenset[frozenset[str]]:
    """Minimal edge cuts of a connected multigraph: cuts whose two shores are connected."""
    g = to_nx(edges)
    verts = sorted(g.nodes)
    if len(verts) > cap:
        raise CapExceeded("graph_bonds", len(verts), cap)
    if not verts or not nx.is_connected(g):
        raise InputError("bond enumeration needs a connected graph")
    first, rest = verts[0], verts[1:]
    out = set()
    for bits in range(1 << len(rest)):
        shore = {first} | {v for i, v in enumerate(rest) if bits >> i & 1}
        if len(shore) == len(verts):
            continue
        other = set(verts) - shore
        if not nx.is_connected(g.subgraph(shore)) or not nx.is_connected(g.subgraph(other)):
            continue
        out.add(frozenset(lbl for lbl, (u, v) in edges.items() if (u in shore) != (v in shore)))
    return frozenset(out)
