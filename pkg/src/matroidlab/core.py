"""Finite matroids given by their circuits.

Every matroid here is a ground set of opaque string labels plus a family of
circuits.  Rank, bases and cocircuits are derived from the circuits.  The
operations that need to look at every subset of the ground set refuse to run
above a size cap (``DEFAULT_CAP`` elements) instead of silently taking hours.

When several witnesses would do, the functions below
return the least one in the order given by :func:`set_key`, so repeated runs
give identical answers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CapExceeded, InputError, InternalError

DEFAULT_CAP = 12

AXIOMS = ("C1", "C2", "C3", "CM", "O1", "O2", "hybrid-ok")


def set_key(s: Iterable[str]) -> tuple[str, ...]:
    """Canonical sort key of a finite set of labels."""
    return tuple(sorted(s))


def family_key(sets: Iterable[Iterable[str]]) -> list[tuple[str, ...]]:
    return sorted(set_key(s) for s in sets)


def minimal_nonempty(sets: Iterable[frozenset]) -> frozenset[frozenset]:
    """Inclusion-minimal nonempty members of a family."""
    ordered = sorted({frozenset(s) for s in sets if s}, key=len)
    kept: list[frozenset] = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return frozenset(kept)


def _check_cap(what: str, size: int, cap: int) -> None:
    if size > cap:
        raise CapExceeded(what, size, cap)


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _bits(m: int):
    while m:
        low = m & -m
        yield low
        m ^= low


def _submasks(m: int):
    sub = m
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & m


class _Indexer:
    """Bijection between a sorted label tuple and bit positions."""

    def __init__(self, labels: Sequence[str]):
        self.labels = tuple(labels)
        self.bit = {e: 1 << i for i, e in enumerate(self.labels)}
        self.full = (1 << len(self.labels)) - 1

    def mask(self, s: Iterable[str]) -> int:
        m = 0
        for e in s:
            try:
                m |= self.bit[e]
            except KeyError:
                raise InputError(f"element {e!r} is not in the ground set") from None
        return m

    def unmask(self, m: int) -> frozenset[str]:
        return frozenset(self.labels[i] for i in range(len(self.labels)) if m >> i & 1)


def _normalize_ground(elements: Iterable[str]) -> tuple[str, ...]:
    items = list(elements)
    for e in items:
        if not isinstance(e, str):
            raise InputError(f"element labels must be strings, got {e!r}")
    if len(set(items)) != len(items):
        dupes = sorted({e for e in items if items.count(e) > 1})
        raise InputError(f"duplicate element labels: {dupes}")
    return tuple(sorted(items))


def _normalize_family(ground: frozenset[str], sets: Iterable[Iterable[str]]) -> frozenset[frozenset[str]]:
    out = set()
    for s in sets:
        fs = frozenset(s)
        stray = sorted(fs - ground)
        if stray:
            raise InputError(f"element {stray[0]!r} is not in the ground set")
        out.add(fs)
    return frozenset(out)


class FiniteMatroid:
    """A finite matroid represented by its ground set and circuit family.

    The constructor only checks that every circuit lies inside the ground set;
    use :func:`validate_circuits` to check the circuit axioms.
    """

    __slots__ = ("elements", "ground", "circuits", "_ix", "_cmasks", "_rank_table", "_dual")

    def __init__(self, elements: Iterable[str], circuits: Iterable[Iterable[str]]):
        self.elements = _normalize_ground(elements)
        self.ground = frozenset(self.elements)
        self.circuits = _normalize_family(self.ground, circuits)
        self._ix = _Indexer(self.elements)
        self._cmasks: tuple[int, ...] | None = None
        self._rank_table: list[int] | None = None
        self._dual: FiniteMatroid | None = None

    # -- value semantics ---------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteMatroid):
            return NotImplemented
        return self.ground == other.ground and self.circuits == other.circuits

    def __hash__(self) -> int:
        return hash((self.ground, self.circuits))

    def __repr__(self) -> str:
        return f"FiniteMatroid({len(self.elements)} elements, {len(self.circuits)} circuits)"

    def __len__(self) -> int:
        return len(self.elements)

    def sorted_circuits(self) -> list[tuple[str, ...]]:
        return family_key(self.circuits)

    # -- bit helpers -------------------------------------------------------
    @property
    def circuit_masks(self) -> tuple[int, ...]:
        if self._cmasks is None:
            self._cmasks = tuple(sorted(self._ix.mask(c) for c in self.circuits))
        return self._cmasks

    def mask(self, s: Iterable[str]) -> int:
        return self._ix.mask(s)

    def unmask(self, m: int) -> frozenset[str]:
        return self._ix.unmask(m)

    def _subset(self, s: Iterable[str], what: str = "set") -> frozenset[str]:
        fs = frozenset(s)
        stray = sorted(fs - self.ground)
        if stray:
            raise InputError(f"{what} contains {stray[0]!r}, which is not in the ground set")
        return fs

    # -- derived structure -------------------------------------------------
    def is_independent(self, s: Iterable[str]) -> bool:
        fs = self._subset(s)
        return not any(c <= fs for c in self.circuits)

    def _indep_mask(self, m: int) -> bool:
        return not any(c & ~m == 0 for c in self.circuit_masks)

    def rank(self, s: Iterable[str] | None = None) -> int:
        fs = self.ground if s is None else self._subset(s)
        if self._rank_table is not None:
            return self._rank_table[self.mask(fs)]
        m = 0
        r = 0
        for e in sorted(fs):
            trial = m | self._ix.bit[e]
            if self._indep_mask(trial):
                m = trial
                r += 1
        return r

    def rank_table(self, cap: int = DEFAULT_CAP) -> list[int]:
        """Rank of every subset, indexed by bitmask (exhaustive)."""
        if self._rank_table is None:
            n = len(self.elements)
            _check_cap("rank table", n, cap)
            size = 1 << n
            circ = set(self.circuit_masks)
            dep = bytearray(size)
            rank = [0] * size
            for m in range(1, size):
                d = m in circ
                best = 0
                for b in _bits(m):
                    sub = m ^ b
                    if dep[sub]:
                        d = True
                    if rank[sub] > best:
                        best = rank[sub]
                dep[m] = d
                rank[m] = best if d else _popcount(m)
            self._rank_table = rank
        return self._rank_table

    def greedy_base(self, within: Iterable[str] | None = None) -> frozenset[str]:
        """Lexicographically greedy maximal independent subset of ``within``."""
        fs = self.ground if within is None else self._subset(within)
        m = 0
        for e in sorted(fs):
            trial = m | self._ix.bit[e]
            if self._indep_mask(trial):
                m = trial
        return self.unmask(m)

    def is_base(self, s: Iterable[str]) -> bool:
        fs = self._subset(s)
        return self.is_independent(fs) and len(fs) == self.rank()

    def loops(self) -> frozenset[str]:
        return frozenset(next(iter(c)) for c in self.circuits if len(c) == 1)

    def coloops(self) -> frozenset[str]:
        used = frozenset().union(*self.circuits) if self.circuits else frozenset()
        return self.ground - used

    def relabel(self, mapping: Mapping[str, str]) -> "FiniteMatroid":
        """Rename elements; labels missing from ``mapping`` are kept."""
        def f(e: str) -> str:
            return mapping.get(e, e)
        new = [f(e) for e in self.elements]
        if len(set(new)) != len(new):
            raise InputError("relabelling is not injective")
        return FiniteMatroid(new, ({f(e) for e in c} for c in self.circuits))


# ---------------------------------------------------------------------------
# axiom checking

@dataclass(frozen=True)
class Verdict:
    holds: bool | None
    witness: tuple | None = None
    note: str = ""

    def render(self) -> str:
        if self.holds is None:
            text = "n/a"
        else:
            text = "pass" if self.holds else "fail"
        if self.witness is not None:
            text += f" witness={_render_witness(self.witness)}"
        if self.note:
            text += f" ({self.note})"
        return text


def _render_witness(w) -> str:
    if isinstance(w, (frozenset, set)):
        return "{" + ",".join(sorted(w)) + "}"
    if isinstance(w, (tuple, list)):
        return "(" + " ".join(_render_witness(x) for x in w) + ")"
    return str(w)


@dataclass(frozen=True)
class AxiomReport:
    verdicts: Mapping[str, Verdict] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Verdict:
        return self.verdicts[key]

    def holds(self, key: str) -> bool:
        return bool(self.verdicts[key].holds)

    @property
    def ok(self) -> bool:
        return all(v.holds is not False for v in self.verdicts.values())

    def lines(self) -> list[str]:
        keys = [k for k in AXIOMS if k in self.verdicts]
        keys += [k for k in self.verdicts if k not in AXIOMS]
        return [f"{k}: {self.verdicts[k].render()}" for k in keys]


def _c1_violation(family: frozenset[frozenset]) -> tuple | None:
    return (frozenset(),) if frozenset() in family else None


def _c2_violation(family: frozenset[frozenset]) -> tuple | None:
    ordered = sorted(family, key=lambda s: (len(s), set_key(s)))
    for i, small in enumerate(ordered):
        for big in ordered[i + 1:]:
            if small < big:
                return (small, big)
    return None


def _c3_violation(ix: _Indexer, cmasks: Sequence[int]) -> tuple | None:
    """Exhaustive circuit elimination check; returns (o, X, family, z) on failure."""
    cmasks = sorted(set(cmasks))
    for o in cmasks:
        elems = list(_bits(o))
        for xmask in _submasks(o):
            if xmask == 0:
                continue
            xs = list(_bits(xmask))
            # reachable unions of compatible families, each with one sample family
            reach: dict[int, tuple[int, ...]] = {0: ()}
            for x in xs:
                cands = [c for c in cmasks if c & xmask == x]
                nxt: dict[int, tuple[int, ...]] = {}
                for u, fam in reach.items():
                    for c in cands:
                        nu = u | c
                        if nu not in nxt:
                            nxt[nu] = fam + (c,)
                reach = nxt
                if not reach:
                    break
            for u, fam in reach.items():
                allowed = (o | u) & ~xmask
                for z in elems:
                    if z & u:
                        continue
                    if not any(c & z and c & ~allowed == 0 for c in cmasks):
                        family = tuple(
                            (ix.unmask(x), ix.unmask(c)) for x, c in zip(xs, fam)
                        )
                        return (ix.unmask(o), ix.unmask(xmask), family, ix.unmask(z))
    return None


def _o1_violation(cs: Iterable[frozenset], ds: Iterable[frozenset]) -> tuple | None:
    ds = sorted(ds, key=set_key)
    for c in sorted(cs, key=set_key):
        for d in ds:
            if len(c & d) == 1:
                return (c, d)
    return None


def _o2_violation(ix: _Indexer, cmasks: Sequence[int], dmasks: Sequence[int]) -> tuple | None:
    full = ix.full
    for i in range(len(ix.labels)):
        e = 1 << i
        rest = full & ~e
        ce = [c & ~e for c in cmasks if c & e]
        de = [d & ~e for d in dmasks if d & e]
        for p in _submasks(rest):
            q = rest & ~p
            if any(c & ~p == 0 for c in ce):
                continue
            if any(d & ~q == 0 for d in de):
                continue
            return (ix.unmask(p), ix.unmask(q), ix.labels[i])
    return None


def validate_circuits(
    ground: Iterable[str], circuits: Iterable[Iterable[str]], cap: int = DEFAULT_CAP
) -> AxiomReport:
    """Check (C1), (C2), (C3) and (CM) for a set family.

    When the family passes (C1)-(C3) the derived cocircuits are also checked
    against (O1)/(O2), which makes ``hybrid-ok`` meaningful.
    """
    labels = _normalize_ground(ground)
    gset = frozenset(labels)
    family = _normalize_family(gset, circuits)
    if not labels and any(family):
        raise InputError("nonempty circuit over an empty ground set")
    _check_cap("validate_circuits", len(labels), cap)
    ix = _Indexer(labels)
    v: dict[str, Verdict] = {}
    w = _c1_violation(family)
    v["C1"] = Verdict(w is None, w)
    w = _c2_violation(family)
    v["C2"] = Verdict(w is None, w)
    cmasks = [ix.mask(c) for c in family if c]
    w = _c3_violation(ix, cmasks)
    v["C3"] = Verdict(w is None, w)
    v["CM"] = Verdict(True, note="vacuous on a finite ground set")
    if v["C1"].holds and v["C2"].holds and v["C3"].holds:
        m = FiniteMatroid(labels, family)
        d = _dual_unchecked(m, cap).circuits
        w = _o1_violation(family, d)
        v["O1"] = Verdict(w is None, w)
        w = _o2_violation(ix, cmasks, [ix.mask(b) for b in d])
        v["O2"] = Verdict(w is None, w)
        v["hybrid-ok"] = Verdict(bool(v["O1"].holds and v["O2"].holds))
    else:
        note = "requires C1-C3"
        v["O1"] = Verdict(None, note=note)
        v["O2"] = Verdict(None, note=note)
        v["hybrid-ok"] = Verdict(False, note="circuit axioms fail")
    return AxiomReport(v)


def is_valid_matroid(m: FiniteMatroid, cap: int = DEFAULT_CAP) -> bool:
    """(C1)-(C3) for the circuit family of ``m``."""
    _check_cap("is_valid_matroid", len(m.elements), cap)
    family = m.circuits
    if _c1_violation(family) or _c2_violation(family):
        return False
    return _c3_violation(m._ix, [m._ix.mask(c) for c in family]) is None


# ---------------------------------------------------------------------------
# independence, rank, duality, minors

def is_independent(m: FiniteMatroid, s: Iterable[str]) -> bool:
    return m.is_independent(s)


def rank(m: FiniteMatroid, s: Iterable[str] | None = None) -> int:
    return m.rank(s)


def dual(m: FiniteMatroid, cap: int = DEFAULT_CAP) -> FiniteMatroid:
    """The dual matroid: its circuits are the minimal sets meeting every base."""
    if m._dual is not None:
        return m._dual
    _check_cap("dual", len(m.elements), cap)
    if not is_valid_matroid(m, cap=cap):
        raise InputError("dual of a family that violates the circuit axioms")
    return _dual_unchecked(m, cap)


def _dual_unchecked(m: FiniteMatroid, cap: int) -> FiniteMatroid:
    if m._dual is not None:
        return m._dual
    table = m.rank_table(cap)
    full = m._ix.full
    r = table[full]
    cocircuits = []
    for d in range(1, full + 1):
        if table[full & ~d] >= r:
            continue
        if all(table[full & ~(d ^ b)] == r for b in _bits(d)):
            cocircuits.append(m.unmask(d))
    out = FiniteMatroid(m.elements, cocircuits)
    m._dual = out
    out._dual = m
    return out


def cocircuits(m: FiniteMatroid, cap: int = DEFAULT_CAP) -> frozenset[frozenset[str]]:
    return dual(m, cap=cap).circuits


def minor(
    m: FiniteMatroid, contract: Iterable[str] = (), delete: Iterable[str] = ()
) -> FiniteMatroid:
    """``m / contract \\ delete``."""
    c = m._subset(contract, "contract set")
    d = m._subset(delete, "delete set")
    if c & d:
        raise InputError(f"contract and delete sets overlap in {sorted(c & d)}")
    if not c and not d:
        return m
    survivors = (o - c for o in m.circuits if not o & d)
    return FiniteMatroid(m.ground - c - d, minimal_nonempty(survivors))


def restrict(m: FiniteMatroid, keep: Iterable[str]) -> FiniteMatroid:
    k = m._subset(keep)
    return minor(m, (), m.ground - k)


def contract_to(m: FiniteMatroid, keep: Iterable[str]) -> FiniteMatroid:
    """Contract everything outside ``keep``."""
    k = m._subset(keep)
    return minor(m, m.ground - k, ())


def lift_circuit(
    m: FiniteMatroid,
    contract: Iterable[str],
    delete: Iterable[str],
    small: Iterable[str],
) -> frozenset[str]:
    """Least circuit ``o`` of ``m`` with ``small <= o <= small | contract``."""
    c = frozenset(contract)
    d = frozenset(delete)
    s = frozenset(small)
    if s not in minor(m, c, d).circuits:
        raise InputError(f"{set_key(s)} is not a circuit of the minor")
    cands = [o for o in m.circuits if s <= o <= s | c]
    if not cands:
        raise InternalError("no lift found for a circuit of the minor")
    return min(cands, key=set_key)


def fundamental_circuit(m: FiniteMatroid, base: Iterable[str], e: str) -> frozenset[str]:
    s = m._subset(base, "base")
    if not m.is_base(s):
        raise InputError(f"{set_key(s)} is not a base")
    if e not in m.ground:
        raise InputError(f"element {e!r} is not in the ground set")
    if e in s:
        raise InputError(f"element {e!r} lies in the base")
    inside = s | {e}
    cands = [o for o in m.circuits if e in o and o <= inside]
    if len(cands) != 1:
        raise InternalError(f"expected one fundamental circuit, found {len(cands)}")
    return cands[0]


def fundamental_cocircuit(
    m: FiniteMatroid, base: Iterable[str], f: str, cap: int = DEFAULT_CAP
) -> frozenset[str]:
    """The unique cocircuit meeting the base exactly in ``f``."""
    s = m._subset(base, "base")
    if f not in s:
        raise InputError(f"element {f!r} is not in the base")
    if not m.is_base(s):
        raise InputError(f"{set_key(s)} is not a base")
    cands = [b for b in cocircuits(m, cap) if b & s == {f}]
    if len(cands) != 1:
        raise InternalError(f"expected one fundamental cocircuit, found {len(cands)}")
    return cands[0]


def cocircuit_through_pair(
    m: FiniteMatroid, o: Iterable[str], e: str, f: str, cap: int = DEFAULT_CAP
) -> frozenset[str]:
    """Least cocircuit ``b`` with ``o & b == {e, f}``."""
    circ = frozenset(o)
    if circ not in m.circuits:
        raise InputError(f"{set_key(circ)} is not a circuit")
    if len(circ) < 2:
        raise InputError("the circuit has fewer than two elements")
    if e == f or e not in circ or f not in circ:
        raise InputError("e and f must be two distinct elements of the circuit")
    pair = {e, f}
    cands = [b for b in cocircuits(m, cap) if b & circ == pair]
    if not cands:
        raise InternalError("no cocircuit meets the circuit in exactly the pair")
    return min(cands, key=set_key)


def eliminate(
    m: FiniteMatroid,
    o: Iterable[str],
    family: Sequence[tuple[str, Iterable[str]]],
    z: str,
) -> frozenset[str]:
    """Least circuit through ``z`` inside ``(o | U) - X`` where the family is (x, o_x)."""
    circ = frozenset(o)
    if circ not in m.circuits:
        raise InputError(f"{set_key(circ)} is not a circuit")
    xs = [x for x, _ in family]
    xset = frozenset(xs)
    if len(xset) != len(xs):
        raise InputError("repeated element in the eliminated set")
    union: frozenset[str] = frozenset()
    for i, (x, ox) in enumerate(family):
        ox = frozenset(ox)
        if x not in circ:
            raise InputError(f"family entry {i}: {x!r} is not in the circuit")
        if ox not in m.circuits:
            raise InputError(f"family entry {i}: not a circuit")
        if ox & xset != {x}:
            raise InputError(f"family entry {i}: must meet the eliminated set exactly in {x!r}")
        union |= ox
    if z not in circ or z in union:
        raise InputError(f"{z!r} must lie in the circuit and outside every o_x")
    allowed = (circ | union) - xset
    cands = [c for c in m.circuits if z in c and c <= allowed]
    if not cands:
        raise InternalError("elimination failed; the family is not a matroid")
    return min(cands, key=set_key)


@dataclass(frozen=True)
class EliminationInstance:
    eliminated: frozenset[str]
    family: tuple[tuple[str, frozenset[str]], ...]


def strong_elimination_family(
    m: FiniteMatroid, o: Iterable[str], target: Iterable[str], z: str, cap: int = DEFAULT_CAP
) -> EliminationInstance:
    """Eliminate a set X from ``o`` so that ``target`` is the only circuit left through ``z``.

    Construction: contract ``target - z``, take a base ``s`` of ``o - target`` in
    that contraction, eliminate the rest of ``o - target`` using lifts of the
    fundamental circuits with respect to ``s``.  The result is checked
    exhaustively before it is returned.
    """
    src = frozenset(o)
    dst = frozenset(target)
    for c in (src, dst):
        if c not in m.circuits:
            raise InputError(f"{set_key(c)} is not a circuit")
    if z not in src or z not in dst:
        raise InputError(f"{z!r} must lie in both circuits")
    _check_cap("strong_elimination_family", len(m.elements), cap)
    if src == dst:
        return EliminationInstance(frozenset(), ())
    shrink = dst - {z}
    contracted = minor(m, shrink, ())
    outside = src - dst
    s = contracted.greedy_base(outside)
    xset = outside - s
    family = []
    for x in sorted(xset):
        inside = s | {x}
        local = [c for c in contracted.circuits if x in c and c <= inside]
        if len(local) != 1:
            raise InternalError("fundamental circuit in the contraction is not unique")
        family.append((x, lift_circuit(m, shrink, (), local[0])))
    union = frozenset().union(*(c for _, c in family)) if family else frozenset()
    for x, ox in family:
        if ox & (xset | {z}) != {x}:
            raise InternalError("lifted circuit meets the eliminated set wrongly")
    allowed = (src | union) - xset
    survivors = [c for c in m.circuits if z in c and c <= allowed]
    if survivors != [dst]:
        raise InternalError("strong elimination instance failed its uniqueness check")
    return EliminationInstance(xset, tuple(family))


def is_scrawl(m: FiniteMatroid, w: Iterable[str], cap: int = DEFAULT_CAP) -> bool:
    """Whether ``w`` is a union of circuits, via the cocircuit test, cross-checked."""
    ws = m._subset(w)
    by_cocircuits = all(len(ws & b) != 1 for b in cocircuits(m, cap))
    inside = [c for c in m.circuits if c <= ws]
    by_union = (frozenset().union(*inside) if inside else frozenset()) == ws
    if by_cocircuits != by_union:
        raise InternalError("scrawl criteria disagree")
    return by_union


def minimize_circuit_outside(
    m: FiniteMatroid, o: Iterable[str], x: Iterable[str], e: str, cap: int = DEFAULT_CAP
) -> frozenset[str]:
    """Circuit through ``e`` inside ``x | o`` whose part outside ``x`` is inclusion-minimal."""
    circ = frozenset(o)
    xs = m._subset(x)
    if circ not in m.circuits:
        raise InputError(f"{set_key(circ)} is not a circuit")
    if e not in circ - xs:
        raise InputError(f"{e!r} must lie in the circuit and outside X")
    _check_cap("minimize_circuit_outside", len(m.elements), cap)
    contracted = minor(m, xs, ())
    outside = circ - xs
    local = [c for c in contracted.circuits if e in c and c <= outside]
    if not local:
        raise InternalError("no circuit of the contraction inside o - X")
    best = lift_circuit(m, xs, (), min(local, key=set_key))
    core_part = best - xs
    region = xs | circ
    for c in m.circuits:
        if e in c and c <= region and (c - xs) < core_part:
            raise InternalError("lifted circuit is not minimal outside X")
    return best


# ---------------------------------------------------------------------------
# orthogonality

@dataclass(frozen=True)
class PerpFamily:
    """Subsets of the ground set meeting no member of a family exactly once."""

    ground: tuple[str, ...]
    family: frozenset[frozenset[str]]

    def contains(self, s: Iterable[str]) -> bool:
        fs = frozenset(s)
        return all(len(fs & c) != 1 for c in self.family)

    def members(self, cap: int = DEFAULT_CAP) -> list[frozenset[str]]:
        _check_cap("perp", len(self.ground), cap)
        ix = _Indexer(self.ground)
        cm = [ix.mask(c) for c in self.family]
        out = []
        for s in range(ix.full + 1):
            if all(_popcount(s & c) != 1 for c in cm):
                out.append(ix.unmask(s))
        return out

    def member_masks(self, ix: _Indexer, cap: int = DEFAULT_CAP) -> list[int]:
        _check_cap("perp", len(self.ground), cap)
        cm = [ix.mask(c) for c in self.family]
        return [s for s in range(ix.full + 1) if all(_popcount(s & c) != 1 for c in cm)]

    def minimal_members(self, cap: int = DEFAULT_CAP) -> frozenset[frozenset[str]]:
        return minimal_nonempty(self.members(cap))


def perp(ground: Iterable[str], family: Iterable[Iterable[str]]) -> PerpFamily:
    labels = _normalize_ground(ground)
    return PerpFamily(labels, _normalize_family(frozenset(labels), family))


def check_o1_o2(
    ground: Iterable[str],
    cs: Iterable[Iterable[str]],
    ds: Iterable[Iterable[str]],
    cap: int = DEFAULT_CAP,
) -> AxiomReport:
    labels = _normalize_ground(ground)
    gset = frozenset(labels)
    cfam = _normalize_family(gset, cs)
    dfam = _normalize_family(gset, ds)
    _check_cap("check_o1_o2", len(labels), cap)
    ix = _Indexer(labels)
    w1 = _o1_violation(cfam, dfam)
    w2 = _o2_violation(ix, [ix.mask(c) for c in cfam], [ix.mask(d) for d in dfam])
    return AxiomReport({"O1": Verdict(w1 is None, w1), "O2": Verdict(w2 is None, w2)})


def check_cireli_equivalence(
    ground: Iterable[str], family: Iterable[Iterable[str]], cap: int = DEFAULT_CAP
) -> bool:
    """Whether [family and its perp satisfy (O2)] agrees with [family satisfies (C3)].

    Both sides are computed independently.  The two always agree for set
    families, so ``False`` points at a bug.
    """
    labels = _normalize_ground(ground)
    cfam = _normalize_family(frozenset(labels), family)
    _check_cap("check_cireli_equivalence", len(labels), cap)
    ix = _Indexer(labels)
    cm = [ix.mask(c) for c in cfam]
    pm = PerpFamily(labels, cfam).member_masks(ix, cap)
    o2 = _o2_violation(ix, cm, pm) is None
    c3 = _c3_violation(ix, [c for c in cm if c]) is None
    return o2 == c3


def hybrid_check(
    ground: Iterable[str],
    cs: Iterable[Iterable[str]],
    ds: Iterable[Iterable[str]],
    cap: int = DEFAULT_CAP,
) -> AxiomReport:
    """Decide whether ``cs`` and ``ds`` are the circuits and cocircuits of one matroid.

    The verdict uses only (C1), (C2), (O1), (O2) and (CM).  When it is positive the
    matroid with circuit set ``cs`` is built and its cocircuits compared with
    ``ds``; the outcome is recorded under ``reconstruction``.
    """
    labels = _normalize_ground(ground)
    gset = frozenset(labels)
    cfam = _normalize_family(gset, cs)
    dfam = _normalize_family(gset, ds)
    _check_cap("hybrid_check", len(labels), cap)
    ix = _Indexer(labels)
    v: dict[str, Verdict] = {}
    wc, wd = _c1_violation(cfam), _c1_violation(dfam)
    v["C1"] = Verdict(wc is None and wd is None, ("circuits",) + wc if wc else (("cocircuits",) + wd if wd else None))
    wc, wd = _c2_violation(cfam), _c2_violation(dfam)
    v["C2"] = Verdict(wc is None and wd is None, ("circuits",) + wc if wc else (("cocircuits",) + wd if wd else None))
    v["C3"] = Verdict(None, note="implied by O1/O2 when they hold")
    v["CM"] = Verdict(True, note="vacuous on a finite ground set")
    w = _o1_violation(cfam, dfam)
    v["O1"] = Verdict(w is None, w)
    w = _o2_violation(ix, [ix.mask(c) for c in cfam if c], [ix.mask(d) for d in dfam if d])
    v["O2"] = Verdict(w is None, w)
    ok = all(v[k].holds for k in ("C1", "C2", "O1", "O2", "CM"))
    v["hybrid-ok"] = Verdict(ok)
    if ok:
        rebuilt = dual(FiniteMatroid(labels, cfam), cap=cap).circuits
        same = rebuilt == dfam
        diff = None if same else (frozenset().union(*(rebuilt ^ dfam)),)
        v["reconstruction"] = Verdict(same, diff)
    else:
        v["reconstruction"] = Verdict(None, note="skipped")
    return AxiomReport(v)


# ---------------------------------------------------------------------------
# small constructors used throughout

def uniform(r: int, labels: Sequence[str]) -> FiniteMatroid:
    """U_{r,n} on the given labels."""
    from itertools import combinations

    if r > len(labels):
        return FiniteMatroid(labels, ())
    return FiniteMatroid(labels, (set(c) for c in combinations(labels, r + 1)))


def free(labels: Sequence[str]) -> FiniteMatroid:
    return FiniteMatroid(labels, ())


def circuit_matroid(labels: Sequence[str]) -> FiniteMatroid:
    """The matroid whose only circuit is the whole ground set."""
    return FiniteMatroid(labels, [set(labels)] if labels else [])


def is_circuit_matroid(m: FiniteMatroid) -> bool:
    return len(m.elements) > 0 and m.circuits == {m.ground}


def is_cocircuit_matroid(m: FiniteMatroid) -> bool:
    """Every pair of elements is a circuit (the whole set is one cocircuit)."""
    n = len(m.elements)
    if n < 2:
        return False
    return all(len(c) == 2 for c in m.circuits) and len(m.circuits) == n * (n - 1) // 2
