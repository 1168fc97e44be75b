"""Independent reference computations used by the tests.

Nothing here calls into matroidlab: cycles and bonds come from networkx or
plain subset enumeration.
"""

from __future__ import annotations

from itertools import combinations

import networkx as nx


def multigraph(edges):
    g = nx.MultiGraph()
    for lbl, (u, v) in edges.items():
        g.add_edge(u, v, key=lbl)
    return g


def cycle_sets(edges):
    """Edge sets of cycles by brute force: connected, every vertex of degree two."""
    labels = sorted(edges)
    out = set()
    for size in range(1, len(labels) + 1):
        for sub in combinations(labels, size):
            deg = {}
            for e in sub:
                u, v = edges[e]
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
            if any(d != 2 for d in deg.values()):
                continue
            g = nx.MultiGraph()
            g.add_edges_from(edges[e] for e in sub)
            if nx.is_connected(g):
                out.add(frozenset(sub))
    return out


def simple_cycle_sets(edges):
    """Edge sets of cycles of a simple graph via networkx's cycle enumeration."""
    by_pair = {frozenset(uv): lbl for lbl, uv in edges.items()}
    g = nx.Graph()
    g.add_edges_from(edges.values())
    out = set()
    for cyc in nx.simple_cycles(g):
        pairs = zip(cyc, cyc[1:] + cyc[:1])
        out.add(frozenset(by_pair[frozenset(p)] for p in pairs))
    return out


def bond_sets(edges):
    """Minimal nonempty edge cuts: both shores connected."""
    g = multigraph(edges)
    verts = sorted(g.nodes)
    first, rest = verts[0], verts[1:]
    out = set()
    for size in range(0, len(rest)):
        for extra in combinations(rest, size):
            s = {first, *extra}
            t = set(verts) - s
            if not t or not nx.is_connected(g.subgraph(s)) or not nx.is_connected(g.subgraph(t)):
                continue
            cut = frozenset(k for u, v, k in g.edges(keys=True) if (u in s) != (v in s))
            if cut:
                out.add(cut)
    return out


def graph_rank(edges, subset):
    g = nx.MultiGraph()
    g.add_edges_from(edges[e] for e in subset)
    return g.number_of_nodes() - nx.number_connected_components(g)


def antichains(n):
    """Every family of nonempty subsets of range(n) with no member inside another."""
    subsets = [frozenset(c) for k in range(1, n + 1) for c in combinations(range(n), k)]
    out = []

    def go(i, chosen):
        if i == len(subsets):
            out.append(list(chosen))
            return
        go(i + 1, chosen)
        s = subsets[i]
        if all(not (s <= c or c <= s) for c in chosen):
            chosen.append(s)
            go(i + 1, chosen)
            chosen.pop()

    go(0, [])
    return out


def q_graph(k):
    """The first k copies of K4 glued along opposite edges, last out-edge removed.

    Level j has vertices x_j and y_j; copy i uses levels i - 1 and i.
    """
    edges = {"a_1": ("x0", "y0")}
    for i in range(1, k + 1):
        edges[f"b0_{i}"] = (f"x{i-1}", f"x{i}")
        edges[f"c0_{i}"] = (f"y{i-1}", f"y{i}")
        edges[f"b1_{i}"] = (f"y{i-1}", f"x{i}")
        edges[f"c1_{i}"] = (f"x{i-1}", f"y{i}")
    return edges
