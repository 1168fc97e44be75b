"""Command-line front end.

Every command prints a line-oriented ``key: value`` report on stdout.  Commands
that produce a matroid or a decomposition write it as YAML to ``--output``;
the others copy their report there.  Exit status is 0 on success, 1 when a
checked property fails and 2 on bad input or an exceeded cap.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Sequence

from .core import DEFAULT_CAP, dual, hybrid_check, is_valid_matroid, minor, validate_circuits
from .decomp import (
    canonical_decomposition,
    decomposition_tree,
    glue_decomposition,
    realistic_minor_witness,
    shape_violations,
    torso_kind,
)
from .epword import EPWord, parse_binary
from .errors import CapExceeded, Indeterminate, InputError, InternalError
from .formats import (
    decomposition_from_data,
    decomposition_to_data,
    dump_yaml,
    family_from_data,
    label_list,
    load_yaml,
    matroid_from_data,
    matroid_to_data,
    need_field,
    phi_from_data,
    ray_from_data,
    symbolic_from_data,
    tau_from_data,
)
from .graphic import cycle_matroid
from .qreport import binary_report
from .raylab import (
    DEFAULT_CHAIN_DEPTH,
    PhiSet,
    check_omega,
    in_phi_star,
    intersection_cardinality,
    is_phi_circuit,
    planar_ray_collapse,
    simeq,
    tilde,
)
from .rayspec import q_ray, truncate, truncate_graph
from .suites import (
    DEFAULT_SEED,
    cir_closed_cases,
    finfix_cases,
    fixture_matroids,
    hybrid_ok,
    random_matroids,
    round_trip,
    run_cir_closed,
    run_finfix,
)
from .treeglue import enumerate_precircuits, enumerate_psi_circuits, is_nice_ray, is_phantom, validate_matroid_tree
from .wexample import (
    W_DEPTH_CAP,
    WDoubleRay,
    TauSpec,
    check_o1_sample,
    parallel_edges_cases,
    verify_w_decomposition,
)


class Outcome:
    """Report lines plus the exit status they imply."""

    def __init__(self, command: str):
        self.lines = [f"command: {command}"]
        self.failed = False
        self.data: str | None = None

    def add(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = "yes" if value else "no"
        self.lines.append(f"{key}: {value}")

    def extend(self, lines: Sequence[str], prefix: str = "") -> None:
        self.lines.extend(f"{prefix}{line}" for line in lines)

    def require(self, key: str, ok: bool) -> None:
        self.add(key, ok)
        if not ok:
            self.failed = True

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _need_input(args) -> str:
    if not args.input:
        raise InputError("--input is required")
    return args.input


def _matroid_arg(args):
    data = load_yaml(_need_input(args))
    return data, matroid_from_data(data, args.input)


# ---------------------------------------------------------------------------
# finite matroids

def cmd_check_axioms(args, out: Outcome) -> None:
    data = load_yaml(_need_input(args))
    elements = label_list(need_field(data, "elements", args.input), f"{args.input}.elements")
    circuits = family_from_data(data, "circuits", args.input)
    out.add("elements", len(elements))
    out.add("circuits", len(circuits))
    report = validate_circuits(elements, circuits, args.cap)
    out.extend(report.lines())
    ok = report.ok
    if isinstance(data, dict) and "cocircuits" in data:
        cocircuits = family_from_data(data, "cocircuits", args.input)
        hybrid = hybrid_check(elements, circuits, cocircuits, args.cap)
        out.extend(hybrid.lines(), "with-cocircuits-")
        ok = ok and hybrid.ok
    out.require("all-pass", ok)


def cmd_dualize(args, out: Outcome) -> None:
    _, m = _matroid_arg(args)
    if not is_valid_matroid(m, args.cap):
        out.require("valid-matroid", False)
        return
    d = dual(m, args.cap)
    out.add("elements", len(m.elements))
    out.add("rank", m.rank())
    out.add("corank", d.rank())
    out.add("cocircuits", len(d.circuits))
    out.require("involution", dual(d, args.cap) == m)
    out.data = dump_yaml(matroid_to_data(d))


def cmd_minorize(args, out: Outcome) -> None:
    data, m = _matroid_arg(args)
    contract = label_list(data.get("contract", []) or [], f"{args.input}.contract")
    delete = label_list(data.get("delete", []) or [], f"{args.input}.delete")
    if not is_valid_matroid(m, args.cap):
        out.require("valid-matroid", False)
        return
    n = minor(m, contract, delete)
    out.add("contract", ",".join(sorted(contract)) or "-")
    out.add("delete", ",".join(sorted(delete)) or "-")
    out.add("elements", len(n.elements))
    out.add("rank", n.rank())
    out.add("circuits", len(n.circuits))
    dual_side = minor(dual(m, args.cap), delete, contract)
    out.require("dual-commutes", dual(n, args.cap) == dual_side)
    out.data = dump_yaml(matroid_to_data(n))


def _decomposition_lines(m, deco, torsos, cap, out: Outcome) -> None:
    out.add("nodes", len(deco.nodes))
    out.add("tree-edges", len(deco.edges))
    for n in deco.nodes:
        t = torsos[n].matroid
        out.add(f"node {n}", f"{torso_kind(t, cap)} size={len(t.elements)} real={len(deco.parts[n])}")


def cmd_decompose(args, out: Outcome) -> None:
    _, m = _matroid_arg(args)
    deco, torsos = canonical_decomposition(m, args.cap)
    _decomposition_lines(m, deco, torsos, args.cap, out)
    problems = shape_violations(deco, torsos, args.cap)
    out.extend([f"shape-problem: {p}" for p in problems])
    out.require("shape-ok", not problems)
    out.require("glue-equal", glue_decomposition(deco, torsos) == m)
    out.data = dump_yaml(decomposition_to_data(m, deco, torsos))


def cmd_glue(args, out: Outcome) -> None:
    source, deco, torsos = decomposition_from_data(load_yaml(_need_input(args)), args.input)
    glued = glue_decomposition(deco, torsos)
    out.add("nodes", len(deco.nodes))
    out.add("elements", len(glued.elements))
    out.add("circuits", len(glued.circuits))
    out.require("equal-to-source", glued == source)
    out.data = dump_yaml(matroid_to_data(glued))


def cmd_torso(args, out: Outcome) -> None:
    _, m = _matroid_arg(args)
    deco, torsos = canonical_decomposition(m, args.cap)
    ok = True
    for n in deco.nodes:
        w = realistic_minor_witness(m, deco, [n], args.cap)
        good = w.apply(m) == torsos[n].matroid
        ok = ok and good
        out.add(
            f"node {n}",
            f"{torso_kind(torsos[n].matroid, args.cap)} contract={len(w.contract)} "
            f"delete={len(w.delete)} renamed={len(w.relabel)} minor={'yes' if good else 'no'}",
        )
    out.require("all-witnessed", ok)


def cmd_precircuit(args, out: Outcome) -> None:
    _, m = _matroid_arg(args)
    deco, torsos = canonical_decomposition(m, args.cap)
    tree = decomposition_tree(deco, torsos)
    report = validate_matroid_tree(tree, args.cap)
    out.extend(report.lines(), "tree-")
    pres = enumerate_precircuits(tree)
    out.add("precircuits", len(pres))
    out.add("phantom", sum(1 for p in pres if is_phantom(tree, p)))
    psi = enumerate_psi_circuits(tree)
    out.add("psi-circuits", len(psi))
    out.require("psi-equals-circuits", psi == m.circuits)


# ---------------------------------------------------------------------------
# rays

def _ray_and_data(args):
    data = load_yaml(_need_input(args))
    if isinstance(data, dict) and "ray" in data:
        return ray_from_data(data["ray"], f"{args.input}.ray"), data
    if isinstance(data, dict) and ("cycle" in data or data.get("builtin") == "Q"):
        return ray_from_data(data, args.input), data
    return q_ray(), data


def cmd_ray_validate(args, out: Outcome) -> None:
    r, _ = _ray_and_data(args)
    depth = args.depth or 3
    out.add("ray", r.name)
    out.add("prefix-nodes", len(r.prefix))
    out.add("cycle-nodes", len(r.cycle))
    nice = is_nice_ray(r)
    out.require("nice", nice)
    for k in range(1, depth + 1):
        m = truncate(r, k)
        line = f"elements={len(m.elements)} circuits={len(m.circuits)}"
        if r.has_certificates:
            same = cycle_matroid(truncate_graph(r, k)) == m
            line += f" graph-oracle={'match' if same else 'MISMATCH'}"
            out.failed |= not same
        out.add(f"truncation {k}", line)
    if nice and r.has_certificates:
        out.extend(planar_ray_collapse(r).lines(), "collapse-")


def _object(data, key: str, where: str):
    if not isinstance(data, dict) or key not in data:
        raise InputError(f"{where}: missing field '{key}'")
    return symbolic_from_data(data[key], f"{where}.{key}")


def cmd_ray_equiv(args, out: Outcome) -> None:
    r, data = _ray_and_data(args)
    x = _object(data, "x", args.input)
    y = _object(data, "y", args.input)
    for key, obj in (("x", x), ("y", y)):
        reason = check_omega(r, obj)
        out.add(key, obj.describe())
        if reason:
            raise InputError(f"{key} is not a prolonged object: {reason}")
    if x.cocircuit != y.cocircuit:
        c, b = (y, x) if x.cocircuit else (x, y)
        out.add("tilde", tilde(r, c, b))
    card = intersection_cardinality(r, x, y) if x.cocircuit != y.cocircuit else None
    if card is not None:
        out.add("intersection", "infinite" if card == float("inf") else card)
    verdict = simeq(r, x, y, depth=args.depth or DEFAULT_CHAIN_DEPTH)
    out.add("simeq", verdict)


def _phi_for(args, r, data) -> PhiSet:
    if args.phi:
        return phi_from_data(load_yaml(args.phi), r, args.phi)
    if isinstance(data, dict) and "phi" in data:
        return phi_from_data(data["phi"], r, f"{args.input}.phi")
    raise InputError("no Phi given (use --phi or a 'phi' field)")


def cmd_ray_member(args, out: Outcome) -> None:
    r, data = _ray_and_data(args)
    phi = _phi_for(args, r, data)
    x = _object(data, "object", args.input)
    out.add("object", x.describe())
    out.add("phi-classes", len(phi))
    reason = check_omega(r, x)
    out.add("prolonged", reason is None)
    if reason:
        out.add("reason", reason)
        return
    if x.cocircuit:
        out.add("in-phi-star", in_phi_star(r, x, phi))
    else:
        out.add("phi-circuit", is_phi_circuit(r, x, phi))


def cmd_q_report(args, out: Outcome) -> None:
    phi = phi_from_data(load_yaml(args.phi), q_ray(), args.phi) if args.phi else PhiSet.q(["(0)"])
    report = binary_report(phi, depth=args.depth or 5)
    out.extend(report.lines())
    out.failed |= not report.matches_summary()


def _w_sample() -> list[WDoubleRay]:
    ends = ["(0)", "(1)", "(01)", "1(0)"]
    choices = ["S", "X", "SX", "XXS"]
    return [
        WDoubleRay(parse_binary(e), EPWord((), tuple(c)), s)
        for e in ends
        for c in choices
        for s in (0, 1, 2)
    ]


def cmd_w_verify(args, out: Outcome) -> None:
    depth = args.depth or W_DEPTH_CAP
    if depth < 2:
        raise InputError("--depth must be at least 2")
    for d in range(2, depth + 1):
        report = verify_w_decomposition(d)
        out.extend(report.lines(), f"w{d}-")
        out.failed |= not report.ok
    cases = parallel_edges_cases()
    out.add("remark-cases", len(cases))
    out.require("remark-holds", all(c.holds for c in cases))
    tau = tau_from_data(load_yaml(args.tau), args.tau) if args.tau else TauSpec({}, "allow")
    bad = check_o1_sample(min(depth, 3), _w_sample(), tau)
    out.add("o1-sample-depth", min(depth, 3))
    out.extend([f"o1-violation: {b}" for b in bad])
    out.require("o1-sample", not bad)


def cmd_roundtrip_suite(args, out: Outcome) -> None:
    seed = DEFAULT_SEED if args.seed is None else args.seed
    out.add("seed", seed)
    fixtures = list(fixture_matroids().items()) + random_matroids(seed, 40)
    failures = []
    for name, m in fixtures:
        rt = round_trip(name, m)
        if not (rt.ok and hybrid_ok(m) and dual(dual(m)) == m):
            failures.append(name)
    out.add("matroids", len(fixtures))
    out.extend([f"roundtrip-failure: {n}" for n in failures])
    out.require("roundtrip", not failures)
    ff = run_finfix(finfix_cases(seed))
    cc = run_cir_closed(cir_closed_cases(seed))
    out.add("finfix-cases", 100)
    out.extend([f"finfix-failure: {x}" for x in ff])
    out.require("finfix", not ff)
    out.add("cir-closed-cases", 100)
    out.extend([f"cir-closed-failure: {x}" for x in cc])
    out.require("cir-closed", not cc)


COMMANDS: dict[str, tuple[Callable, tuple[str, ...], str]] = {
    "check-axioms": (cmd_check_axioms, ("input", "output", "cap"), "check circuit axioms of a set family"),
    "dualize": (cmd_dualize, ("input", "output", "cap"), "write the dual matroid"),
    "minorize": (cmd_minorize, ("input", "output", "cap"), "contract and delete the listed elements"),
    "decompose": (cmd_decompose, ("input", "output", "cap"), "canonical 2-sum decomposition"),
    "glue": (cmd_glue, ("input", "output", "cap"), "glue a decomposition back together"),
    "torso": (cmd_torso, ("input", "output", "cap"), "torsos and their minor witnesses"),
    "precircuit": (cmd_precircuit, ("input", "output", "cap"), "precircuits of the decomposition tree"),
    "ray-validate": (cmd_ray_validate, ("input", "output", "depth"), "check a ray and its truncations"),
    "ray-equiv": (cmd_ray_equiv, ("input", "output", "depth"), "relate two prolonged objects"),
    "ray-member": (cmd_ray_member, ("input", "output", "phi"), "membership in the Phi-matroid"),
    "q-report": (cmd_q_report, ("output", "phi", "depth"), "binary conditions for a Phi-matroid of Q"),
    "w-verify": (cmd_w_verify, ("output", "depth", "tau"), "decomposition shape of W and the K4 parallel-edge check"),
    "roundtrip-suite": (cmd_roundtrip_suite, ("output", "seed", "cap"), "seeded property suites"),
}

DATA_COMMANDS = {"dualize", "minorize", "decompose", "glue"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matroidlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, flags, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        if "input" in flags:
            p.add_argument("--input", help="input YAML file")
        if "output" in flags:
            p.add_argument("--output", help="output file")
        if "cap" in flags:
            p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="ground set cap for exhaustive steps")
        if "depth" in flags:
            p.add_argument("--depth", type=int, default=None, help="truncation or search depth")
        if "phi" in flags:
            p.add_argument("--phi", help="YAML list of Phi classes")
        if "tau" in flags:
            p.add_argument("--tau", help="YAML tau specification")
        if "seed" in flags:
            p.add_argument("--seed", type=int, default=None, help="seed for random cases")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    func = COMMANDS[args.command][0]
    out = Outcome(args.command)
    try:
        func(args, out)
    except (InputError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Indeterminate as exc:
        out.add("undecided", str(exc))
        out.failed = True
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    out.add("status", "fail" if out.failed else "ok")
    text = out.text()
    sys.stdout.write(text)
    if getattr(args, "output", None):
        payload = out.data if args.command in DATA_COMMANDS and out.data is not None else text
        Path(args.output).write_text(payload)
    return 1 if out.failed else 0


if __name__ == "__main__":
    sys.exit(main())
