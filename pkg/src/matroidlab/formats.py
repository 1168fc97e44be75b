"""YAML input and output for matroids, decompositions, rays, symbolic objects, Phi and tau."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping

import yaml

from .core import FiniteMatroid, set_key
from .decomp import Torso, TreeDecomposition
from .epword import EPWord
from .errors import InputError
from .raylab import PhiSet, SymbolicRayCircuit, SymbolicRayCocircuit, q_circuit, q_cocircuit, q_word
from .rayspec import RayNode, RaySpec, q_ray
from .wexample import TauSpec

RESERVED = "!"


def load_yaml(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
        problem = getattr(exc, "problem", None) or str(exc)
        raise InputError(f"{path}: {where}: {problem}") from None


def dump_yaml(data: Any) -> str:
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None, width=100000)


def need_field(data: Any, key: str, where: str):
    if not isinstance(data, Mapping):
        raise InputError(f"{where}: expected a mapping")
    if key not in data:
        raise InputError(f"{where}: missing field '{key}'")
    return data[key]


def label_list(raw: Any, where: str, allow_reserved: bool = False) -> list[str]:
    if not isinstance(raw, list):
        raise InputError(f"{where}: expected a list")
    out = []
    for i, x in enumerate(raw):
        if isinstance(x, (list, dict)) or x is None:
            raise InputError(f"{where}[{i}]: expected a label")
        s = str(x)
        if not allow_reserved and RESERVED in s:
            raise InputError(f"{where}[{i}]: label {s!r} uses the reserved '{RESERVED}' character")
        out.append(s)
    return out


# ---------------------------------------------------------------------------
# matroids

def matroid_from_data(data: Any, where: str = "matroid", allow_reserved: bool = False) -> FiniteMatroid:
    elements = label_list(need_field(data, "elements", where), f"{where}.elements", allow_reserved)
    raw = need_field(data, "circuits", where)
    if not isinstance(raw, list):
        raise InputError(f"{where}.circuits: expected a list of lists")
    circuits = [label_list(c, f"{where}.circuits[{i}]", allow_reserved) for i, c in enumerate(raw)]
    if len(set(elements)) != len(elements):
        raise InputError(f"{where}.elements: repeated label")
    return FiniteMatroid(elements, circuits)


def family_from_data(data: Any, key: str, where: str) -> list[list[str]]:
    raw = need_field(data, key, where)
    if not isinstance(raw, list):
        raise InputError(f"{where}.{key}: expected a list of lists")
    return [label_list(c, f"{where}.{key}[{i}]") for i, c in enumerate(raw)]


def matroid_to_data(m: FiniteMatroid) -> dict:
    return {
        "elements": list(m.elements),
        "circuits": [list(set_key(c)) for c in sorted(m.circuits, key=lambda c: (len(c), set_key(c)))],
    }


def load_matroid(path: str | Path) -> FiniteMatroid:
    return matroid_from_data(load_yaml(path), str(path))


# ---------------------------------------------------------------------------
# decompositions

def decomposition_to_data(m: FiniteMatroid, deco: TreeDecomposition, torsos: Mapping[str, Torso]) -> dict:
    return {
        "matroid": matroid_to_data(m),
        "nodes": list(deco.nodes),
        "edges": [list(e) for e in deco.edges],
        "parts": {n: sorted(deco.parts[n]) for n in deco.nodes},
        "torsos": {
            n: {**matroid_to_data(torsos[n].matroid), "virtual": dict(sorted(torsos[n].virtual.items()))}
            for n in deco.nodes
        },
    }


def decomposition_from_data(data: Any, where: str = "decomposition"):
    source = matroid_from_data(need_field(data, "matroid", where), f"{where}.matroid")
    nodes = label_list(need_field(data, "nodes", where), f"{where}.nodes")
    raw_edges = need_field(data, "edges", where)
    if not isinstance(raw_edges, list):
        raise InputError(f"{where}.edges: expected a list of pairs")
    edges = []
    for i, e in enumerate(raw_edges):
        pair = label_list(e, f"{where}.edges[{i}]")
        if len(pair) != 2:
            raise InputError(f"{where}.edges[{i}]: expected two nodes")
        edges.append(tuple(pair))
    parts_raw = need_field(data, "parts", where)
    if not isinstance(parts_raw, Mapping):
        raise InputError(f"{where}.parts: expected a mapping")
    parts = {str(n): label_list(p or [], f"{where}.parts.{n}") for n, p in parts_raw.items()}
    deco = TreeDecomposition.build(nodes, edges, parts)
    torsos_raw = need_field(data, "torsos", where)
    if not isinstance(torsos_raw, Mapping):
        raise InputError(f"{where}.torsos: expected a mapping")
    torsos = {}
    for n in nodes:
        t = need_field(torsos_raw, n, f"{where}.torsos")
        mat = matroid_from_data(t, f"{where}.torsos.{n}", allow_reserved=True)
        virtual = need_field(t, "virtual", f"{where}.torsos.{n}")
        if not isinstance(virtual, Mapping):
            raise InputError(f"{where}.torsos.{n}.virtual: expected a mapping")
        torsos[n] = Torso(mat, {str(k): str(v) for k, v in virtual.items()})
    return source, deco, torsos


# ---------------------------------------------------------------------------
# rays

def _graph(raw: Any, where: str) -> dict[str, tuple[str, str]]:
    if not isinstance(raw, Mapping):
        raise InputError(f"{where}: expected a mapping from edge label to [u, v]")
    out = {}
    for lbl, uv in raw.items():
        ends = label_list(uv, f"{where}.{lbl}")
        if len(ends) != 2:
            raise InputError(f"{where}.{lbl}: an edge needs two endpoints")
        out[str(lbl)] = (ends[0], ends[1])
    return out


def _ray_node(raw: Any, where: str) -> RayNode:
    out_label = str(need_field(raw, "out", where))
    in_label = raw.get("in")
    in_label = None if in_label is None else str(in_label)
    if "graph" in raw:
        return RayNode.from_graph(_graph(raw["graph"], f"{where}.graph"), in_label, out_label)
    return RayNode(matroid_from_data(raw, where), in_label, out_label)


def ray_from_data(data: Any, where: str = "ray") -> RaySpec:
    if data == "Q" or (isinstance(data, Mapping) and data.get("builtin") == "Q"):
        return q_ray()
    prefix = data.get("prefix", []) if isinstance(data, Mapping) else None
    cycle = need_field(data, "cycle", where)
    if not isinstance(prefix, list) or not isinstance(cycle, list):
        raise InputError(f"{where}: prefix and cycle must be lists of nodes")
    return RaySpec(
        tuple(_ray_node(n, f"{where}.prefix[{i}]") for i, n in enumerate(prefix)),
        tuple(_ray_node(n, f"{where}.cycle[{i}]") for i, n in enumerate(cycle)),
        str(data.get("name", "ray")),
    )


def _letters(raw: Any, where: str) -> list[frozenset[str]]:
    if not isinstance(raw, list):
        raise InputError(f"{where}: expected a list of letters")
    return [frozenset(label_list(x, f"{where}[{i}]")) for i, x in enumerate(raw)]


def symbolic_from_data(data: Any, where: str = "object") -> SymbolicRayCircuit:
    """``{word, n, cocircuit}`` on Q, or ``{start, prefix, cycle, cocircuit}`` in general."""
    if isinstance(data, str):
        return q_circuit(0, q_word(data))
    if not isinstance(data, Mapping):
        raise InputError(f"{where}: expected a mapping")
    co = bool(data.get("cocircuit", False))
    if "word" in data:
        n = int(data.get("n", 0))
        word = q_word(str(data["word"]))
        return q_cocircuit(n, word) if co else q_circuit(n, word)
    start = int(need_field(data, "start", where))
    cls = SymbolicRayCocircuit if co else SymbolicRayCircuit
    prefix = _letters(data.get("prefix", []), f"{where}.prefix")
    cycle = _letters(need_field(data, "cycle", where), f"{where}.cycle")
    if not cycle:
        raise InputError(f"{where}.cycle: must be nonempty")
    return cls(start, EPWord(prefix, cycle))


def phi_from_data(data: Any, ray: RaySpec, where: str = "phi") -> PhiSet:
    if isinstance(data, Mapping):
        data = need_field(data, "phi", where)
    if data is None:
        data = []
    if not isinstance(data, list):
        raise InputError(f"{where}: expected a list of classes")
    return PhiSet.build(ray, [symbolic_from_data(x, f"{where}[{i}]") for i, x in enumerate(data)])


def tau_from_data(data: Any, where: str = "tau") -> TauSpec:
    default = str(need_field(data, "default", where))
    raw = data.get("ends", []) or []
    if not isinstance(raw, list):
        raise InputError(f"{where}.ends: expected a list")
    pairs = []
    for i, item in enumerate(raw):
        end = str(need_field(item, "end", f"{where}.ends[{i}]"))
        signs = label_list(need_field(item, "signs", f"{where}.ends[{i}]"), f"{where}.ends[{i}].signs")
        pairs.append((end, signs))
    return TauSpec.build(pairs, default)
