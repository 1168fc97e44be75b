"""Prolonged circuits and cocircuits of eventually periodic rays, as symbolic objects.

A symbolic object starts at node ``start`` and carries one local letter per node
from there on: an eventually periodic word of local circuits (or cocircuits).
The first letter contains the out-element but not the in-element; every later
letter contains both.  Everything here is decided on one aligned period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import ClassVar, Iterable, Sequence

import networkx as nx

from .core import set_key
from .epword import EPWord, lcm, letter_key, parse_binary
from .errors import Indeterminate, InputError
from .graphic import is_two_connected
from .rayspec import RaySpec, global_name, q_ray, truncate
from .treeglue import is_nice_ray

EQUIVALENT = "equivalent"
INEQUIVALENT = "inequivalent"
UNKNOWN = "unknown"
DEFAULT_CHAIN_DEPTH = 3


@dataclass(frozen=True)
class SymbolicRayCircuit:
    start: int
    letters: EPWord
    cocircuit: ClassVar[bool] = False

    def __post_init__(self):
        if self.start < 1:
            raise InputError("symbolic objects start at node 1 or later")
        for x in self.letters.prefix + self.letters.cycle:
            if not isinstance(x, frozenset):
                raise InputError("letters must be frozensets of local labels")

    @classmethod
    def build(cls, start: int, prefix: Iterable[Iterable[str]], cycle: Iterable[Iterable[str]]):
        return cls(start, EPWord([frozenset(x) for x in prefix], [frozenset(x) for x in cycle]))

    def letter(self, i: int) -> frozenset[str]:
        """Local letter at node ``i`` (empty before the start)."""
        return frozenset() if i < self.start else self.letters[i - self.start]

    def padded(self) -> EPWord:
        """Node-indexed word: position ``i - 1`` holds the letter at node ``i``."""
        blank = (frozenset(),) * (self.start - 1)
        return EPWord(blank + self.letters.prefix, self.letters.cycle)

    def describe(self) -> str:
        kind = "cocircuit" if self.cocircuit else "circuit"
        return f"{kind}@{self.start}:{self.letters}"


class SymbolicRayCocircuit(SymbolicRayCircuit):
    cocircuit: ClassVar[bool] = True


def window(r: RaySpec, *words: EPWord) -> tuple[int, int]:
    """(H, P): nodes H+1.. are jointly periodic with period P for the ray and all words."""
    h = r.horizon
    p = r.period
    for w in words:
        h = max(h, len(w.prefix))
        p = lcm(p, len(w.cycle))
    return h, p


def _real(r: RaySpec, i: int, letter: frozenset[str]) -> frozenset[str]:
    return letter - r.virtual_at(i)


def check_omega(r: RaySpec, x: SymbolicRayCircuit) -> str | None:
    """Reason why ``x`` is not a prolonged (co)circuit of ``r``, or None."""
    h, p = window(r, x.padded())
    for i in range(x.start, h + p + 1):
        letter = x.letter(i)
        if letter not in r.local_family(i, x.cocircuit):
            kind = "cocircuit" if x.cocircuit else "circuit"
            return f"letter {set_key(letter)} at node {i} is not a local {kind}"
        out = r.node(i).out_label
        inn = r.in_of(i)
        if out not in letter:
            return f"letter at node {i} does not continue to node {i + 1}"
        if i == x.start:
            if inn is not None and inn in letter:
                return f"start letter at node {i} uses the in element"
        elif inn not in letter:
            return f"letter at node {i} is not joined to node {i - 1}"
    if all(not _real(r, i, x.letter(i)) for i in range(h + 1, h + p + 1)):
        return "tail uses only virtual elements"
    return None


def is_omega_circuit(r: RaySpec, x: SymbolicRayCircuit) -> bool:
    if x.cocircuit:
        raise InputError("expected a symbolic circuit")
    return check_omega(r, x) is None


def is_omega_cocircuit(r: RaySpec, x: SymbolicRayCircuit) -> bool:
    if not x.cocircuit:
        raise InputError("expected a symbolic cocircuit")
    return check_omega(r, x) is None


def _pair(x: SymbolicRayCircuit, y: SymbolicRayCircuit):
    if x.cocircuit == y.cocircuit:
        raise InputError("the relation ~ joins a circuit to a cocircuit")
    return (x, y) if not x.cocircuit else (y, x)


def tilde(r: RaySpec, x: SymbolicRayCircuit, y: SymbolicRayCircuit) -> bool:
    """Whether the real parts are disjoint at all but finitely many nodes."""
    o, b = _pair(x, y)
    h, p = window(r, o.padded(), b.padded())
    return all(
        not (_real(r, i, o.letter(i)) & b.letter(i)) for i in range(h + 1, h + p + 1)
    )


def intersection_cardinality(r: RaySpec, x: SymbolicRayCircuit, y: SymbolicRayCircuit) -> int | float:
    """Number of shared real elements, or ``math.inf``."""
    o, b = _pair(x, y)
    if not tilde(r, o, b):
        return math.inf
    h, _ = window(r, o.padded(), b.padded())
    return sum(len(_real(r, i, o.letter(i)) & b.letter(i)) for i in range(1, h + 1))


# ---------------------------------------------------------------------------
# symbolic sets

@dataclass(frozen=True)
class SymbolicSet:
    """Set of real elements given node by node (position ``i - 1`` is node ``i``)."""

    word: EPWord

    @classmethod
    def from_object(cls, r: RaySpec, x: SymbolicRayCircuit) -> "SymbolicSet":
        h, p = window(r, x.padded())
        parts = [_real(r, i, x.letter(i)) for i in range(1, h + p + 1)]
        return cls(EPWord(parts[:h], parts[h:]))

    @classmethod
    def from_finite(cls, elements: Iterable[str]) -> "SymbolicSet":
        by_node: dict[int, set[str]] = {}
        for e in elements:
            local, _, idx = e.rpartition("_")
            if not local or not idx.isdigit() or int(idx) < 1:
                raise InputError(f"{e!r} is not a real element of a ray")
            by_node.setdefault(int(idx), set()).add(local)
        n = max(by_node, default=0)
        return cls(EPWord([frozenset(by_node.get(i, ())) for i in range(1, n + 1)], [frozenset()]))

    def at(self, i: int) -> frozenset[str]:
        return self.word[i - 1]

    def _combine(self, other: "SymbolicSet", f) -> "SymbolicSet":
        return SymbolicSet(self.word.zip_with(other.word, f))

    def __xor__(self, other: "SymbolicSet") -> "SymbolicSet":
        return self._combine(other, lambda a, b: a ^ b)

    def __or__(self, other: "SymbolicSet") -> "SymbolicSet":
        return self._combine(other, lambda a, b: a | b)

    def __and__(self, other: "SymbolicSet") -> "SymbolicSet":
        return self._combine(other, lambda a, b: a & b)

    def __sub__(self, other: "SymbolicSet") -> "SymbolicSet":
        return self._combine(other, lambda a, b: a - b)

    def issubset(self, other: "SymbolicSet") -> bool:
        return (self - other).is_empty()

    def is_empty(self) -> bool:
        return not any(self.word.prefix) and not any(self.word.cycle)

    def is_finite(self) -> bool:
        return not any(self.word.cycle)

    def last_node(self) -> int:
        if not self.is_finite():
            raise InputError("set is infinite")
        return len(self.word.prefix)

    def elements(self, upto: int | None = None) -> frozenset[str]:
        """Global names of the elements at nodes ``<= upto`` (all elements if finite)."""
        if upto is None:
            upto = self.last_node()
        return frozenset(global_name(x, i) for i in range(1, upto + 1) for x in self.at(i))

    def __str__(self) -> str:
        return str(self.word)


def sym_diff_symbolic(r: RaySpec, *objs: SymbolicRayCircuit | SymbolicSet) -> SymbolicSet:
    out = SymbolicSet(EPWord((), (frozenset(),)))
    for x in objs:
        out = out ^ (x if isinstance(x, SymbolicSet) else SymbolicSet.from_object(r, x))
    return out


# ---------------------------------------------------------------------------
# finite samples of the prolonged objects

def start_letters(r: RaySpec, i: int, cocircuits: bool = False) -> list[frozenset[str]]:
    out, inn = r.node(i).out_label, r.in_of(i)
    fam = r.local_family(i, cocircuits)
    return sorted((c for c in fam if out in c and (inn is None or inn not in c)), key=set_key)


def through_letters(r: RaySpec, i: int, cocircuits: bool = False) -> list[frozenset[str]]:
    if i == 1:
        return []
    out, inn = r.node(i).out_label, r.in_of(i)
    fam = r.local_family(i, cocircuits)
    return sorted((c for c in fam if out in c and inn in c), key=set_key)


def omega_universe(
    r: RaySpec,
    cocircuits: bool = False,
    max_start: int | None = None,
    max_prefix: int = 0,
    max_cycle: int = 3,
) -> list[SymbolicRayCircuit]:
    """All prolonged objects with the given start range and word shape, canonically ordered."""
    cls = SymbolicRayCocircuit if cocircuits else SymbolicRayCircuit
    if max_start is None:
        max_start = r.horizon + r.period
    seen = set()
    out = []
    for s in range(1, max_start + 1):
        for first in start_letters(r, s, cocircuits):
            for pl in range(max_prefix + 1):
                pl_eff = max(pl, r.horizon - s)
                for ell in range(1, max_cycle + 1):
                    clen = ell * r.period
                    pre_opts = [through_letters(r, s + 1 + j, cocircuits) for j in range(pl_eff)]
                    cyc_opts = [through_letters(r, s + 1 + pl_eff + j, cocircuits) for j in range(clen)]
                    for pre in product(*pre_opts):
                        for cyc in product(*cyc_opts):
                            x = cls(s, EPWord((first,) + pre, cyc))
                            key = (x.start, x.letters)
                            if key in seen:
                                continue
                            seen.add(key)
                            if check_omega(r, x) is None:
                                out.append(x)
    out.sort(key=_object_key)
    return out


def _object_key(x: SymbolicRayCircuit):
    w = x.letters
    return (
        x.cocircuit,
        x.start,
        len(w.prefix),
        len(w.cycle),
        tuple(letter_key(a) for a in w.prefix),
        tuple(letter_key(a) for a in w.cycle),
    )


# ---------------------------------------------------------------------------
# the generated equivalence

_Q_CACHE: list[RaySpec] = []


def is_q(r: RaySpec) -> bool:
    if not _Q_CACHE:
        _Q_CACHE.append(q_ray())
    return r == _Q_CACHE[0]


def chain_search(
    r: RaySpec,
    x: SymbolicRayCircuit,
    y: SymbolicRayCircuit,
    depth: int = DEFAULT_CHAIN_DEPTH,
    universe: Sequence[SymbolicRayCircuit] | None = None,
) -> str:
    """Breadth-first search for a ~-chain from ``x`` to ``y`` of at most ``depth`` steps.

    Chains run through ``universe`` (by default: objects with cycle length at
    most 3 and start within the first period).  If the component of ``x`` in
    the universe closes up before the depth bound, the answer is
    ``inequivalent`` relative to that universe; otherwise ``unknown``.
    """
    if x == y:
        return EQUIVALENT
    if universe is None:
        universe = omega_universe(r, False) + omega_universe(r, True)
    pool = list(dict.fromkeys(list(universe) + [x, y]))
    seen = {x}
    frontier = [x]
    for _ in range(depth):
        fresh = []
        for z in frontier:
            for w in pool:
                if w in seen or w.cocircuit == z.cocircuit:
                    continue
                if tilde(r, z, w):
                    seen.add(w)
                    fresh.append(w)
        if y in seen:
            return EQUIVALENT
        if not fresh:
            return INEQUIVALENT
        frontier = fresh
    # one more round decides whether the component was already complete
    for z in frontier:
        for w in pool:
            if w not in seen and w.cocircuit != z.cocircuit and tilde(r, z, w):
                return UNKNOWN
    return INEQUIVALENT


def simeq(
    r: RaySpec,
    x: SymbolicRayCircuit,
    y: SymbolicRayCircuit,
    depth: int = DEFAULT_CHAIN_DEPTH,
    exact: bool = True,
) -> str:
    """Decide the generated equivalence between two prolonged objects.

    On the ray Q the answer is exact; elsewhere (or with ``exact=False``) a
    bounded chain search is used.
    """
    for z in (x, y):
        reason = check_omega(r, z)
        if reason:
            raise InputError(f"{z.describe()}: {reason}")
    if exact and is_q(r):
        return EQUIVALENT if q_signature(x).eventually_equal(q_signature(y)) else INEQUIVALENT
    return chain_search(r, x, y, depth)


# ---------------------------------------------------------------------------
# Phi-matroids

@dataclass(frozen=True)
class PhiSet:
    """Representatives of chosen classes of prolonged circuits."""

    reps: tuple[SymbolicRayCircuit, ...]

    @classmethod
    def build(cls, r: RaySpec, reps: Iterable[SymbolicRayCircuit]) -> "PhiSet":
        reps = tuple(reps)
        for x in reps:
            if x.cocircuit:
                raise InputError("class representatives must be circuits")
            reason = check_omega(r, x)
            if reason:
                raise InputError(f"{x.describe()}: {reason}")
        for i, x in enumerate(reps):
            for y in reps[i + 1:]:
                verdict = simeq(r, x, y)
                if verdict == EQUIVALENT:
                    raise InputError(f"{x.describe()} and {y.describe()} lie in the same class")
                if verdict == UNKNOWN:
                    raise Indeterminate("could not separate two representatives")
        return cls(reps)

    @classmethod
    def q(cls, words: Iterable[EPWord | str]) -> "PhiSet":
        """Classes on Q given by node-indexed {0,1} words; representatives o(0, w)."""
        return cls.build(q_ray(), [q_circuit(0, q_word(w)) for w in words])

    def __len__(self) -> int:
        return len(self.reps)


def in_phi_star(r: RaySpec, b: SymbolicRayCircuit, phi: PhiSet) -> bool:
    """Whether the class of the cocircuit ``b`` avoids every class in ``phi``."""
    if not b.cocircuit:
        raise InputError("expected a symbolic cocircuit")
    for o in phi.reps:
        verdict = simeq(r, o, b)
        if verdict == EQUIVALENT:
            return False
        if verdict == UNKNOWN:
            raise Indeterminate(f"cannot decide whether {o.describe()} and {b.describe()} are related")
    return True


def is_phi_circuit(r: RaySpec, s, phi: PhiSet) -> bool:
    """Circuit test for the Phi-matroid: finite sets via truncation, symbolic ones via classes."""
    if isinstance(s, SymbolicRayCircuit):
        if s.cocircuit or check_omega(r, s) is not None:
            return False
        for o in phi.reps:
            verdict = simeq(r, o, s)
            if verdict == EQUIVALENT:
                return True
            if verdict == UNKNOWN:
                raise Indeterminate(f"cannot decide the class of {s.describe()}")
        return False
    elements = frozenset(s)
    if not elements:
        return False
    k = SymbolicSet.from_finite(elements).last_node()
    return elements in truncate(r, k).circuits


def finfix_check(r: RaySpec, x: SymbolicRayCircuit, x2: SymbolicRayCircuit, phi: PhiSet) -> bool:
    """If ``x`` is a Phi-circuit and ``x2`` differs from it finitely, ``x2`` must be one too."""
    if not is_phi_circuit(r, x, phi):
        raise InputError(f"{x.describe()} is not a Phi-circuit")
    if check_omega(r, x2) is not None:
        raise InputError(f"{x2.describe()} is not a prolonged circuit")
    if not sym_diff_symbolic(r, x, x2).is_finite():
        raise InputError("the two circuits differ at infinitely many nodes")
    return is_phi_circuit(r, x2, phi)


def cir_closed_check(
    r: RaySpec, x: SymbolicRayCircuit, x2: SymbolicRayCircuit, b: SymbolicRayCircuit, phi: PhiSet
) -> bool:
    """If ``x`` is a Phi-circuit and both circuits are ~-related to ``b``, ``x2`` is a Phi-circuit."""
    if not is_phi_circuit(r, x, phi):
        raise InputError(f"{x.describe()} is not a Phi-circuit")
    if check_omega(r, b) is not None or not b.cocircuit:
        raise InputError(f"{b.describe()} is not a prolonged cocircuit")
    if not (tilde(r, x, b) and tilde(r, x2, b)):
        raise InputError("both circuits must be ~-related to the cocircuit")
    return is_phi_circuit(r, x2, phi)


# ---------------------------------------------------------------------------
# the ray Q

def q_word(w: EPWord | str | Sequence[int]) -> EPWord:
    """{0,1} word from ``prefix(cycle)`` notation or an existing word."""
    if isinstance(w, str):
        w = parse_binary(w)
    if not isinstance(w, EPWord):
        raise InputError("expected a word")
    out = w.map(lambda c: int(c) if str(c) in ("0", "1") else c)
    if any(c not in (0, 1) for c in out.prefix + out.cycle):
        raise InputError(f"{w} is not a word over 0 and 1")
    return out


def _q_through(bit: int) -> frozenset[str]:
    return frozenset(["in", "out", f"b{bit}", f"c{bit}"])


def q_circuit(n: int, word: EPWord | str) -> SymbolicRayCircuit:
    """o(n, v): ``word[j]`` is v at node max(n, 1) + j.

    For n = 0 the circuit uses ``a_1``; otherwise it starts at node n with
    b^{v(n)} and c^{1-v(n)}.
    """
    v = q_word(word)
    if n < 0:
        raise InputError("n must be nonnegative")
    s = max(n, 1)
    if n == 0:
        first = frozenset(["a", "out", f"b{v[0]}", f"c{v[0]}"])
    else:
        first = frozenset(["out", f"b{v[0]}", f"c{1 - v[0]}"])
    rest = v.shift(1).map(_q_through)
    return SymbolicRayCircuit(s, rest.prepend([first]))


def q_cocircuit(n: int, word: EPWord | str) -> SymbolicRayCocircuit:
    """Prolonged cocircuit with tail letters {in, out, b^w, c^w}.

    For n = 0 it starts at node 1 with the cut {a, out, b^w, c^w}; otherwise
    at node n with the vertex star {b0, b1, out} (w = 0) or {c0, c1, out} (w = 1).
    """
    w = q_word(word)
    s = max(n, 1)
    if n == 0:
        first = frozenset(["a", "out", f"b{w[0]}", f"c{w[0]}"])
    else:
        first = frozenset(["out", "b0", "b1"] if w[0] == 0 else ["out", "c0", "c1"])
    rest = w.shift(1).map(_q_through)
    return SymbolicRayCocircuit(s, rest.prepend([first]))


def q_bits(x: SymbolicRayCircuit) -> EPWord:
    """Node-indexed word of tail choices; None where the node is not passed through."""

    def bit(letter: frozenset[str]):
        return next((j for j in (0, 1) if letter == _q_through(j)), None)

    w = x.padded()
    return EPWord([bit(a) for a in w.prefix], [bit(a) for a in w.cycle])


def q_signature(x: SymbolicRayCircuit) -> EPWord:
    """Word whose eventual value decides the class: tail bits, complemented for cocircuits."""
    bits = q_bits(x)
    if x.cocircuit:
        return bits.map(lambda c: None if c is None else 1 - c)
    return bits


def q_class(word: EPWord | str) -> EPWord:
    """Purely periodic representative of the finite-change class of a node-indexed word."""
    w = q_word(word)
    shift = len(w.prefix) % len(w.cycle)
    cyc = w.cycle[-shift:] + w.cycle[:-shift] if shift else w.cycle
    return EPWord((), cyc)


def q_class_of(x: SymbolicRayCircuit) -> EPWord:
    bits = q_signature(x)
    return q_class(EPWord([0] * len(bits.prefix), bits.cycle))


def q_phi_classes(phi: PhiSet) -> list[EPWord]:
    return [q_class_of(o) for o in phi.reps]


def ternary_f(c1: EPWord | str, c2: EPWord | str, c3: EPWord | str) -> EPWord:
    """Class of the pointwise parity of three classes."""
    a, b, c = (q_word(x) for x in (c1, c2, c3))
    return q_class(a.zip_with(b, lambda x, y: x ^ y).zip_with(c, lambda x, y: x ^ y))


def _class_in(cls: EPWord, classes: Iterable[EPWord]) -> bool:
    return any(cls.eventually_equal(c) for c in classes)


def is_closed_under_f(classes: Sequence[EPWord | str]) -> tuple[bool, tuple | None]:
    """Closure of a finite set of classes under the parity operation.

    Returns the first failing ordered triple and its image on failure.
    """
    cs = [q_class(c) for c in classes]
    for t in product(range(len(cs)), repeat=3):
        image = ternary_f(*(cs[i] for i in t))
        if not _class_in(image, cs):
            return False, (tuple(cs[i] for i in t), image)
    return True, None


# ---------------------------------------------------------------------------
# planar rays

@dataclass(frozen=True)
class CollapseReport:
    collapsed: bool
    reason: str
    representatives: int = 0
    reference: SymbolicRayCircuit | None = None
    witnesses: tuple[tuple[SymbolicRayCircuit, SymbolicRayCircuit], ...] = ()

    def lines(self) -> list[str]:
        out = [
            f"collapsed: {'yes' if self.collapsed else 'no'}",
            f"reason: {self.reason}",
            f"representatives: {self.representatives}",
        ]
        if self.reference is not None:
            out.append(f"reference: {self.reference.describe()}")
        return out


def shared_face_problem(graph, in_label: str | None, out_label: str) -> str | None:
    """Why the node graph has no plane embedding with both virtual edges on one face."""
    if not is_two_connected(graph):
        return "node graph is not 2-connected"
    h = nx.Graph()
    for lbl, (u, v) in graph.items():
        if lbl in (in_label, out_label):
            mid = ("mid", lbl)
            h.add_edge(("v", u), mid)
            h.add_edge(mid, ("v", v))
        else:
            h.add_edge(("v", u), ("v", v))
    if in_label is not None:
        h.add_edge(("mid", in_label), ("mid", out_label))
    planar, _ = nx.check_planarity(h)
    if not planar:
        if in_label is None:
            return "node graph is not planar"
        return f"no plane embedding puts {in_label!r} and {out_label!r} on a common face"
    return None


def _separating_cocircuit(
    r: RaySpec, o: SymbolicRayCircuit, ref: SymbolicRayCircuit
) -> SymbolicRayCocircuit | None:
    """A prolonged cocircuit whose tail avoids the real parts of both circuits."""
    h, p = window(r, o.padded(), ref.padded())
    choice = []
    for i in range(h + 1, h + p + 1):
        used = _real(r, i, o.letter(i)) | _real(r, i, ref.letter(i))
        options = [d for d in through_letters(r, i, True) if not (d & used)]
        if not options:
            return None
        choice.append(options[0])
    starts = start_letters(r, h + 1, True)
    if not starts:
        return None
    b = SymbolicRayCocircuit(h + 1, EPWord((starts[0],), choice[1:] + choice[:1]))
    if check_omega(r, b) is not None:
        return None
    return b


def planar_ray_collapse(r: RaySpec, max_cycle: int = 3) -> CollapseReport:
    """Check that all sampled prolonged circuits of a planar ray form one class.

    Every node must come with a graph certificate; the node graphs must be
    2-connected and embeddable with the in- and out-edges on a common face.
    For each sampled circuit o, a cocircuit b with o ~ b ~ o_ref is constructed
    explicitly, where o_ref is a fixed reference circuit.
    """
    if not r.has_certificates:
        raise InputError("planar collapse needs a graph certificate at every node")
    if not is_nice_ray(r):
        raise InputError("ray is not nice")
    kinds = sorted({r.kind(i) for i in range(1, r.horizon + r.period + 1)})
    for k in kinds:
        i = next(i for i in range(1, r.horizon + r.period + 1) if r.kind(i) == k)
        node = r.node(i)
        graph = dict(node.graph)
        if i == 1 and node.in_label is not None:
            graph.pop(node.in_label)
        problem = shared_face_problem(graph, r.in_of(i), node.out_label)
        if problem:
            return CollapseReport(False, f"node {i}: {problem}")
    sample = omega_universe(r, False, max_cycle=max_cycle)
    if not sample:
        return CollapseReport(False, "no prolonged circuits in the sample")
    ref = sample[0]
    witnesses = []
    for o in sample:
        b = _separating_cocircuit(r, o, ref)
        if b is None or not (tilde(r, o, b) and tilde(r, ref, b)):
            return CollapseReport(False, f"no separating cocircuit for {o.describe()}", len(sample), ref)
        witnesses.append((o, b))
    return CollapseReport(True, "every sampled circuit is related to the reference", len(sample), ref, tuple(witnesses))


# ---------------------------------------------------------------------------
# circuits inside symbolic sets

Letter = tuple[frozenset[str], bool, bool]  # (real part, uses in, uses out)


def _letters_at(r: RaySpec, i: int) -> list[Letter]:
    virt_in, out = r.in_of(i), r.node(i).out_label
    fam = r.local_family(i)
    return sorted(
        ((c - {virt_in, out}, virt_in is not None and virt_in in c, out in c) for c in fam),
        key=lambda t: (set_key(t[0]), t[1], t[2]),
    )


def finite_circuit_within(r: RaySpec, x: SymbolicSet) -> tuple[int, int] | None:
    """Node span (first, last) of some finite precircuit whose underlying set lies in ``x``."""
    h, p = window(r, x.word)
    limit = h + 2 * p + 1

    def kinds(i: int) -> set[tuple[bool, bool, bool]]:
        return {(a, b, bool(c)) for c, a, b in _letters_at(r, i) if c <= x.at(i)}

    for first in range(1, h + p + 1):
        here = kinds(first)
        if (False, False, True) in here:
            return first, first
        opens = [ne for a, b, ne in here if (a, b) == (False, True)]
        if not opens:
            continue
        visible = any(opens)
        for i in range(first + 1, limit + 1):
            here = kinds(i)
            closes = [ne for a, b, ne in here if (a, b) == (True, False)]
            if closes and (visible or any(closes)):
                return first, i
            through = [ne for a, b, ne in here if (a, b) == (True, True)]
            if not through:
                break
            visible = visible or any(through)
    return None


def _q_options(x: SymbolicSet, i: int) -> set[int]:
    return {j for j in (0, 1) if {f"b{j}", f"c{j}"} <= x.at(i)}


def q_infinite_circuit_within(x: SymbolicSet, classes: Sequence[EPWord]) -> SymbolicRayCircuit | None:
    """A prolonged Q-circuit inside ``x`` whose class is among ``classes``."""
    q = q_ray()
    for cls in classes:
        h, p = window(q, x.word, cls)
        if not all(cls[i - 1] in _q_options(x, i) for i in range(h + 1, h + p + 1)):
            continue
        for n in range(0, h + p + 1):
            s = max(n, 1)
            if n == 0:
                first = _q_options(x, 1) if "a" in x.at(1) else set()
            else:
                first = {j for j in (0, 1) if {f"b{j}", f"c{1 - j}"} <= x.at(s)}
            if not first:
                continue
            top = max(h, s)
            vals = [min(first)]
            for i in range(s + 1, top + 1):
                opts = _q_options(x, i)
                if not opts:
                    break
                vals.append(cls[i - 1] if cls[i - 1] in opts else min(opts))
            else:
                vals += [cls[i - 1] for i in range(top + 1, top + p + 1)]
                o = q_circuit(n, EPWord(vals[:-p], vals[-p:]))
                if SymbolicSet.from_object(q, o).issubset(x):
                    return o
    return None


def q_includes_circuit(x: SymbolicSet, classes: Sequence[EPWord]) -> str | None:
    """Description of a circuit of the Phi-matroid inside ``x``, or None."""
    q = q_ray()
    span = finite_circuit_within(q, x)
    if span is not None:
        return f"finite circuit on nodes {span[0]}..{span[1]}"
    o = q_infinite_circuit_within(x, classes)
    if o is not None:
        return f"prolonged circuit {o.describe()}"
    return None


def _exact_covers(x: frozenset[str], letters: list[Letter]) -> list[tuple[Letter, ...]]:
    """Partitions of ``x`` into real parts of letters (letters with empty real part are skipped)."""
    usable = [t for t in letters if t[0] and t[0] <= x]
    out = []

    def go(rest: frozenset[str], start: int, acc: list[Letter]):
        if not rest:
            out.append(tuple(acc))
            return
        pivot = min(rest)
        for k in range(start, len(usable)):
            c = usable[k][0]
            if pivot in c and c <= rest:
                acc.append(usable[k])
                go(rest - c, 0, acc)
                acc.pop()

    go(x, 0, [])
    return out


def q_disjoint_union(x: SymbolicSet, classes: Sequence[EPWord]) -> str | None:
    """Description of a partition of ``x`` into circuits of the Phi-matroid, or None.

    Works node by node: a partition of each local set into real parts of local
    circuits fixes how many pieces enter and leave the node.  Pieces that never
    close are prolonged circuits and need their class in ``classes``.
    """
    q = q_ray()
    h, p = window(q, x.word)

    def moves(i: int) -> list[tuple[int, int, tuple[Letter, ...]]]:
        out = []
        for cover in _exact_covers(x.at(i), _letters_at(q, i)):
            ins = sum(1 for t in cover if t[1])
            outs = sum(1 for t in cover if t[2])
            out.append((ins, outs, cover))
        return out

    reach = {0}
    for i in range(1, h + 1):
        reach = {o for c in reach for ins, o, _ in moves(i) if ins == c}
        if not reach:
            return None
    per = [moves(i) for i in range(h + 1, h + p + 1)]
    entry_states = set(reach)
    for _ in range(3):
        nxt = set(entry_states)
        for c in list(entry_states):
            states = {c}
            for mv in per:
                states = {o for s in states for ins, o, _ in mv if ins == s}
            nxt |= states
        entry_states = nxt

    def cycles_from(c: int):
        """Letter sequences over one period that start and end in state ``c``."""
        def go(k: int, state: int, acc: list):
            if k == len(per):
                if state == c:
                    yield list(acc)
                return
            for ins, outs, cover in per[k]:
                if ins == state:
                    acc.append((ins, outs, cover))
                    yield from go(k + 1, outs, acc)
                    acc.pop()

        yield from go(0, c, [])

    def strand_bits(seq) -> list[int] | None:
        bits = []
        for ins, outs, cover in seq:
            through = [t for t in cover if t[1] and t[2]]
            if len(through) != 1:
                return None
            real = through[0][0]
            bits.append(0 if real == frozenset(["b0", "c0"]) else 1)
        return bits

    for c in sorted(entry_states):
        for seq in cycles_from(c):
            states = [s[0] for s in seq]
            if 0 in states:
                return "finite circuits only"
            if c == 1:
                bits = strand_bits(seq)
                tail = EPWord([0] * h, bits)
                if _class_in(q_class(tail), classes):
                    return f"finite circuits and one prolonged circuit of class {q_class(tail)}"
            if c == 2:
                for cls in classes:
                    comp = cls.map(lambda b: 1 - b)
                    if _class_in(comp, classes):
                        return f"finite circuits and prolonged circuits of classes {cls} and {q_class(comp)}"
    return None
