"""Which binary-matroid conditions hold for the Phi-matroids of the ray Q.

Conditions are numbered 1-9 in the order used throughout the package:
thin-sums representability, even intersections, no intersection of size 3,
no U_{2,4} minor, symmetric differences of two circuits (contain a circuit /
split into circuits), the same for finite families, and the fundamental
circuit decomposition for every base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import combinations_with_replacement, product

from .core import fundamental_circuit
from .epword import EPWord
from .raylab import (
    PhiSet,
    SymbolicSet,
    _class_in,
    in_phi_star,
    intersection_cardinality,
    is_closed_under_f,
    omega_universe,
    q_circuit,
    q_class,
    q_cocircuit,
    q_disjoint_union,
    q_includes_circuit,
    q_phi_classes,
    sym_diff_symbolic,
)
from .rayspec import q_ray, truncate, truncate_dual

PASS = "pass"
FAIL = "fail"
DOCUMENTED = "documented-negative"

CONDITIONS = {
    1: "binary thin sums representation",
    2: "circuit-cocircuit intersections even",
    3: "no circuit-cocircuit intersection of size 3",
    4: "no U24 minor",
    5: "two-circuit symmetric difference empty or includes a circuit",
    6: "two-circuit symmetric difference is a disjoint union of circuits",
    7: "finite-family symmetric difference empty or includes a circuit",
    8: "finite-family symmetric difference is a disjoint union of circuits",
    9: "fundamental circuits decompose every circuit for every base",
}


@dataclass(frozen=True)
class ConditionVerdict:
    condition: int
    status: str
    detail: str

    def line(self) -> str:
        return f"condition-{self.condition}: {self.status} | {self.detail}"


@dataclass(frozen=True)
class BinaryReport:
    classes: tuple[EPWord, ...]
    depth: int
    trivial: str | None
    verdicts: tuple[ConditionVerdict, ...]

    def status(self, n: int) -> str:
        return next(v.status for v in self.verdicts if v.condition == n)

    def matches_summary(self) -> bool:
        """Nontrivial Phi: (3)-(6) hold, (1), (2) and (9) do not."""
        if self.trivial:
            return all(v.status == PASS for v in self.verdicts)
        return (
            all(self.status(n) == PASS for n in (3, 4, 5, 6))
            and self.status(1) == DOCUMENTED
            and self.status(2) == FAIL
            and self.status(9) == FAIL
        )

    def lines(self) -> list[str]:
        out = [
            "phi: [" + ", ".join(str(c) for c in self.classes) + "]",
            f"depth: {self.depth}",
            f"trivial: {self.trivial or 'no'}",
        ]
        out += [v.line() for v in self.verdicts]
        out.append(f"summary-match: {'yes' if self.matches_summary() else 'no'}")
        return out


def _show(x) -> str:
    if isinstance(x, SymbolicSet):
        return str(x)
    return x.describe()


def _phi_circuits(classes) -> list:
    """A few members of each chosen class: several starts and a finite change."""
    out = []
    for cls in classes:
        for n in (0, 1, 2):
            out.append(q_circuit(n, cls.shift(max(n, 1) - 1)))
        out.append(q_circuit(0, cls.replace(0, 1 - cls[0])))
    return list(dict.fromkeys(out))


def _small_words(max_cycle: int = 3) -> list[EPWord]:
    words = []
    for ell in range(1, max_cycle + 1):
        for cyc in product((0, 1), repeat=ell):
            w = EPWord((), cyc)
            if w not in words:
                words.append(w)
    return words


def _condition_2(q, phi, classes) -> ConditionVerdict:
    o = phi.reps[0]
    for w in _small_words():
        b = q_cocircuit(0, w)
        if in_phi_star(q, b, phi) and intersection_cardinality(q, o, b) == math.inf:
            return ConditionVerdict(
                2, FAIL, f"{_show(o)} and {_show(b)} (class in Phi*) meet in infinitely many elements"
            )
    return ConditionVerdict(2, "undetermined", "no infinite-intersection witness among short words")


def _even_pairs(circuits, cocircuits) -> tuple[int, int | None]:
    checked = 0
    for o in circuits:
        for b in cocircuits:
            checked += 1
            if len(o & b) % 2:
                return checked, len(o & b)
    return checked, None


def _condition_3(q, phi, classes, depth) -> ConditionVerdict:
    counts = {}
    for k in range(1, depth + 1):
        circuits = truncate(q, k).circuits
        finite_cocircuits = truncate_dual(q, k, "contract").circuits
        n, bad = _even_pairs(circuits, finite_cocircuits)
        if bad is not None:
            return ConditionVerdict(3, FAIL, f"finite pair meets in {bad} elements at depth {k}")
        counts["finite-finite"] = counts.get("finite-finite", 0) + n
    k = min(depth, 3)
    finite_circuits = [SymbolicSet.from_finite(c) for c in truncate(q, k).circuits]
    finite_cocircuits = truncate_dual(q, k, "contract").circuits
    symbolic_co = omega_universe(q, True)
    for o in finite_circuits:
        for b in symbolic_co:
            size = len(o.elements() & SymbolicSet.from_object(q, b).elements(k))
            counts["finite-prolonged"] = counts.get("finite-prolonged", 0) + 1
            if size % 2:
                return ConditionVerdict(3, FAIL, f"{o} and {_show(b)} meet in {size} elements")
    for o in _phi_circuits(classes):
        s = SymbolicSet.from_object(q, o)
        for b in finite_cocircuits:
            size = len(s.elements(k) & b)
            counts["prolonged-finite"] = counts.get("prolonged-finite", 0) + 1
            if size % 2:
                return ConditionVerdict(3, FAIL, f"{_show(o)} meets a finite cocircuit in {size} elements")
    star = [b for b in symbolic_co if in_phi_star(q, b, phi)]
    for o in _phi_circuits(classes):
        for b in star:
            counts["phi-phistar"] = counts.get("phi-phistar", 0) + 1
            if intersection_cardinality(q, o, b) != math.inf:
                return ConditionVerdict(3, FAIL, f"{_show(o)} and {_show(b)} meet finitely")
    detail = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    return ConditionVerdict(3, PASS, f"finite intersections are even, Phi/Phi* intersections infinite ({detail})")


def _condition_4(q, depth) -> ConditionVerdict:
    total = 0
    for k in range(1, depth + 1):
        n, bad = _even_pairs(truncate(q, k).circuits, truncate_dual(q, k).circuits)
        total += n
        if bad is not None:
            return ConditionVerdict(4, FAIL, f"truncation {k} has an odd circuit-cocircuit intersection")
    return ConditionVerdict(
        4, PASS, f"truncations 1..{depth} are binary ({total} even pairs); a U24 minor would lift to a size-3 intersection"
    )


def _pair_cases(classes):
    finite = [SymbolicSet.from_finite(c) for c in sorted(truncate(q_ray(), 2).circuits, key=sorted)]
    prolonged = [SymbolicSet.from_object(q_ray(), o) for o in _phi_circuits(classes)]
    items = [("finite", x) for x in finite] + [("prolonged", x) for x in prolonged]
    for (k1, x1), (k2, x2) in combinations_with_replacement(items, 2):
        yield f"{k1}-{k2}", x1, x2


def _condition_56(classes) -> tuple[ConditionVerdict, ConditionVerdict]:
    counts: dict[str, int] = {}
    fail5 = fail6 = None
    for case, x1, x2 in _pair_cases(classes):
        counts[case] = counts.get(case, 0) + 1
        x = x1 ^ x2
        if x.is_empty():
            continue
        if fail5 is None and q_includes_circuit(x, classes) is None:
            fail5 = f"{x1} xor {x2} = {x} includes no circuit"
        if fail6 is None and q_disjoint_union(x, classes) is None:
            fail6 = f"{x1} xor {x2} = {x} is not a disjoint union of circuits"
    detail = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    v5 = ConditionVerdict(5, FAIL, fail5) if fail5 else ConditionVerdict(5, PASS, f"all sampled pairs ({detail})")
    v6 = ConditionVerdict(6, FAIL, fail6) if fail6 else ConditionVerdict(6, PASS, f"all sampled pairs ({detail})")
    return v5, v6


def _condition_78(q, classes) -> tuple[ConditionVerdict, ConditionVerdict]:
    closed, witness = is_closed_under_f(classes)
    if closed:
        sample = []
        for cls in classes:
            sample += [q_circuit(0, cls), q_circuit(2, cls.shift(1))]
        for trio in combinations_with_replacement(sample, 3):
            x = sym_diff_symbolic(q, *trio)
            if not x.is_empty() and q_includes_circuit(x, classes) is None:
                msg = f"closed under f but {', '.join(_show(t) for t in trio)} has a circuit-free sum"
                return ConditionVerdict(7, FAIL, msg), ConditionVerdict(8, FAIL, msg)
        detail = f"closed under f; {len(sample)} sampled circuits checked in triples"
        return ConditionVerdict(7, PASS, detail), ConditionVerdict(8, PASS, detail)
    triple, image = witness
    circuits = [q_circuit(0, c) for c in triple]
    x = sym_diff_symbolic(q, *circuits)
    target = SymbolicSet.from_object(q, q_circuit(0, image))
    equal = x == target
    detail = (
        f"f({', '.join(str(c) for c in triple)}) = {image} not in Phi; "
        f"sum of o(0, .) over the triple {'equals' if equal else 'differs from'} o(0, {image})"
    )
    no_circuit = q_includes_circuit(x, classes) is None
    no_union = q_disjoint_union(x, classes) is None
    v7 = ConditionVerdict(7, FAIL if no_circuit else PASS, detail + ("; includes no circuit" if no_circuit else ""))
    v8 = ConditionVerdict(8, FAIL if no_union else PASS, detail + ("; not a disjoint union of circuits" if no_union else ""))
    return v7, v8


def _window_base(s: SymbolicSet, k: int) -> frozenset[str]:
    return s.elements(k)


def _condition_9(q, phi, classes, depth) -> ConditionVerdict:
    k = max(depth, 4)
    m = truncate(q, k)
    v = classes[0]
    o = q_circuit(0, v)
    w = next((w for w in _small_words() if not _class_in(w, classes)), None)
    if w is None:
        return ConditionVerdict(9, "undetermined", "every short word lies in Phi")
    s_circuit = q_circuit(0, w)
    s = _window_base(SymbolicSet.from_object(q, s_circuit), k)
    if not m.is_base(s):
        return ConditionVerdict(9, "undetermined", f"{_show(s_circuit)} does not give a base at depth {k}")
    hits = []
    for i in range(1, k):
        if v[i - 1] != w[i - 1]:
            e = f"b{v[i - 1]}_{i}"
            if "a_1" not in fundamental_circuit(m, s, e):
                return ConditionVerdict(9, "undetermined", f"fundamental circuit of {e} avoids a_1")
            hits.append(e)
    # the two words differ somewhere in every period, so the hits never stop
    per = len(v.cycle) * len(w.cycle)
    recurring = any(v[i] != w[i] for i in range(per, 2 * per))
    if not hits or not recurring:
        return ConditionVerdict(9, "undetermined", "no recurring disagreement found")
    good = _good_base_ok(q, classes, k)
    detail = (
        f"base from {_show(s_circuit)}: fundamental circuits of {', '.join(hits)} contain a_1, "
        f"recurring every period, so the sum for {_show(o)} is not thin"
    )
    if good:
        detail += f"; base a_1 + b0_i + c1_i decomposes every circuit in the depth-{k} window"
    return ConditionVerdict(9, FAIL, detail)


def _good_base_ok(q, classes, k) -> bool:
    m = truncate(q, k)
    base = frozenset(["a_1"] + [f"b0_{i}" for i in range(1, k + 1)] + [f"c1_{i}" for i in range(1, k + 1)])
    if not m.is_base(base):
        return False
    fund = {e: fundamental_circuit(m, base, e) for e in sorted(m.ground - base)}
    for e, c in fund.items():
        i = int(e.rsplit("_", 1)[1])
        nodes = {int(x.rsplit("_", 1)[1]) for x in c}
        if not nodes <= {i - 1, i}:
            return False
    for c in m.circuits:
        parts = [fund[e] for e in c - base]
        if reduce(lambda a, b: a ^ b, parts, frozenset()) != c:
            return False
    for o in [q_circuit(0, c) for c in classes] + [q_circuit(2, c.shift(1)) for c in classes]:
        s = SymbolicSet.from_object(q, o)
        inside = s.elements(k - 1)
        total = reduce(lambda a, b: a ^ b, (fund[e] for e in inside - base), frozenset())
        lhs = {x for x in inside if int(x.rsplit("_", 1)[1]) <= k - 2}
        rhs = {x for x in total if int(x.rsplit("_", 1)[1]) <= k - 2}
        if lhs != rhs:
            return False
    return True


def binary_report(phi: PhiSet, depth: int = 5) -> BinaryReport:
    q = q_ray()
    classes = tuple(q_phi_classes(phi))
    if not classes:
        note = "finitary, tame; all conditions hold"
        verdicts = tuple(ConditionVerdict(n, PASS, "Phi is empty: " + note) for n in CONDITIONS)
        v4 = _condition_4(q, depth)
        if v4.status != PASS:
            verdicts = tuple(v4 if v.condition == 4 else v for v in verdicts)
        return BinaryReport(classes, depth, note, verdicts)
    verdicts = [
        ConditionVerdict(1, DOCUMENTED, "excluded by a nonexistence argument; not machine-checked"),
        _condition_2(q, phi, classes),
        _condition_3(q, phi, classes, depth),
        _condition_4(q, depth),
        *_condition_56(classes),
        *_condition_78(q, classes),
        _condition_9(q, phi, classes, depth),
    ]
    return BinaryReport(tuple(classes), depth, None, tuple(verdicts))


__all__ = ["BinaryReport", "ConditionVerdict", "binary_report", "CONDITIONS", "q_class"]
