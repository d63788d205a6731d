"""Command-line surface with JSON certificate emission.

Exit codes: 0 all checks pass, 1 a mathematical check failed (the report
carries its witness), 2 usage or parse error.  Reports are deterministic;
wall time lives in its own key so the rest of a report is byte-stable
across runs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from matlift.core import (
    CircuitAxiomError,
    HyperplaneAxiomError,
    Matroid,
    find_isomorphism,
    is_quotient,
    is_sparse_paving,
    mask_of,
    one_based,
    validate_circuits,
)
from matlift.gain import NoPartitionError, full_gain_graph, rank2_lift_k3
from matlift.gf import DependentColumnsError, WitnessProblem, lift_witness, verify_witness
from matlift.groups import FinGroup, GroupAxiomError, builtin_group, group_partitions
from matlift.io import (
    ParseError,
    emit_matroid_text,
    parse_group,
    parse_lift,
    parse_matrix,
    parse_matroid,
    write_matroid,
)
from matlift.krt import (
    KrtSpec,
    build_krt,
    ingleton_inequality,
    intersection_certificate,
    is_ingleton_sparse_paving,
    obstruction_report,
    scan_vamos_like_minors,
)
from matlift.lifts import (
    LiftConditionError,
    build_lift,
    check_star,
    check_star_prime,
    elementary_lift,
    evaluate_lift_formula,
    is_linear_class,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

VAMOS_SCAN_CAP = 10  # certify runs the minor scan only up to this ground size


class Report:
    """Accumulates named checks and renders the JSON certificate."""

    def __init__(self, command: Sequence[str], inputs: dict) -> None:
        self.command = list(command)
        self.inputs = inputs
        self.checks: list[dict] = []
        self.conclusion = ""
        self.extra: dict = {}

    def check(self, name: str, ok: bool, witness: object = None) -> bool:
        entry: dict = {"name": name, "pass": bool(ok)}
        if witness is not None:
            entry["witness"] = witness
        self.checks.append(entry)
        return ok

    @property
    def all_pass(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def as_dict(self, wall_time_s: float) -> dict:
        body = {
            "command": self.command,
            "inputs": self.inputs,
            "checks": self.checks,
            "conclusion": self.conclusion,
        }
        body.update(self.extra)
        body["wall_time_s"] = round(wall_time_s, 6)
        return body


def _emit(report_dict: dict, json_path: Optional[str]) -> None:
    if json_path:
        Path(json_path).write_text(json.dumps(report_dict, indent=2, sort_keys=True) + "\n")


def _parse_element_set(text: str, n: int) -> int:
    toks = text.replace(",", " ").split()
    try:
        elems = [int(t) for t in toks]
    except ValueError:
        raise ValueError(f"bad element list {text!r}") from None
    for e in elems:
        if not 1 <= e <= n:
            raise ValueError(f"element {e} outside [1, {n}]")
    return mask_of(e - 1 for e in elems)


def _load_group(spec: str) -> FinGroup:
    if spec.startswith("builtin:"):
        return builtin_group(spec.split(":", 1)[1])
    return parse_group(spec)


def _class_indices(value: str, m: Matroid) -> frozenset[int]:
    body = value
    if not all(ch.isdigit() or ch in ", " for ch in value):
        body = Path(value).read_text()
    toks = body.replace(",", " ").split()
    idxs = set()
    for t in toks:
        k = int(t)
        if not 1 <= k <= len(m.circuits):
            raise ValueError(f"circuit index {k} outside [1, {len(m.circuits)}]")
        idxs.add(k - 1)
    return frozenset(idxs)


# ---------------------------------------------------------------------------
# command handlers; each returns (exit_code, report_dict)


def cmd_check(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    rep = Report(argv, {"matroid": args.matroid})
    m = parse_matroid(args.matroid, validate=False)
    result = validate_circuits(m.circuits, m.n)
    witness = None if result.ok else {"kind": result.kind, "detail": result.describe()}
    rep.check("circuit_axioms", result.ok, witness)
    rep.conclusion = (
        f"valid matroid: n={m.n}, {len(m.circuits)} circuits, rank {m.full_rank}"
        if result.ok
        else f"invalid circuit family: {result.describe()}"
    )
    print(rep.conclusion)
    code = EXIT_OK if result.ok else EXIT_CHECK_FAILED
    return code, rep.as_dict(time.perf_counter() - t0)


def cmd_rank(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    m = parse_matroid(args.matroid)
    mask = _parse_element_set(args.set, m.n)
    rep = Report(argv, {"matroid": args.matroid, "set": one_based(mask)})
    value = m.rank(mask)
    rep.extra["rank"] = value
    rep.check("rank_computed", True)
    rep.conclusion = f"rank {one_based(mask)} = {value}"
    print(rep.conclusion)
    return EXIT_OK, rep.as_dict(time.perf_counter() - t0)


def cmd_lift_elementary(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    m = parse_matroid(args.matroid)
    members = _class_indices(args.linear_class, m)
    rep = Report(
        argv,
        {"matroid": args.matroid, "class": sorted(k + 1 for k in members)},
    )
    if not rep.check("linear_class", is_linear_class(m, members)):
        rep.conclusion = "the given circuits are not a linear class"
        print(rep.conclusion)
        return EXIT_CHECK_FAILED, rep.as_dict(time.perf_counter() - t0)
    lifted = elementary_lift(m, members)
    rep.check("rank_increase", lifted.full_rank in (m.full_rank, m.full_rank + 1))
    rep.extra["lift"] = {
        "rank": lifted.full_rank,
        "circuits": [one_based(c) for c in lifted.circuits],
    }
    rep.conclusion = f"elementary lift has rank {lifted.full_rank}"
    out = emit_matroid_text(lifted)
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK, rep.as_dict(time.perf_counter() - t0)


def cmd_lift_general(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    spec = parse_lift(args.spec)
    rep = Report(argv, {"spec": args.spec})
    ok_prime, witness_prime = check_star_prime(spec)
    rep.check(
        "star_prime",
        ok_prime,
        None if ok_prime else str(witness_prime),
    )
    if args.check_star:
        ok_star, witness_star = check_star(spec)
        rep.check("star", ok_star, None if ok_star else str(witness_star))
    if ok_prime:
        lifted = build_lift(spec)
        rep.check("lift_rank", lifted.full_rank == spec.base.full_rank + spec.overlay.full_rank)
        rep.extra["lift"] = {
            "rank": lifted.full_rank,
            "circuits": [one_based(c) for c in lifted.circuits],
        }
        rep.conclusion = f"lift built, rank {lifted.full_rank}"
        if args.out:
            write_matroid(lifted, args.out)
        else:
            sys.stdout.write(emit_matroid_text(lifted))
    elif args.force:
        built, diag = evaluate_lift_formula(spec)
        rep.check("formula_rank_axioms", diag.ok, None if diag.ok else diag.describe())
        if built is not None:
            rep.extra["lift"] = {
                "rank": built.full_rank,
                "circuits": [one_based(c) for c in built.circuits],
            }
            rep.conclusion = "condition (*') fails, yet the formula still gives a matroid"
        else:
            rep.conclusion = f"condition (*') fails and the formula breaks: {diag.describe()}"
        print(rep.conclusion)
    else:
        rep.conclusion = f"lift refused: {witness_prime}"
        print(rep.conclusion)
    code = EXIT_OK if rep.all_pass else EXIT_CHECK_FAILED
    return code, rep.as_dict(time.perf_counter() - t0)


def cmd_rep_witness(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    a = parse_matrix(args.matrix)
    cols = []
    if args.x:
        cols = [int(t) - 1 for t in args.x.replace(",", " ").split()]
    rep = Report(argv, {"matrix": args.matrix, "x_columns": [c + 1 for c in cols]})
    witness = lift_witness(WitnessProblem(a, tuple(cols)))
    ok_prime, _ = check_star_prime(witness.spec)
    rep.check("star_prime", ok_prime)
    rep.check("witness_verifies", verify_witness(witness.spec, witness.l))
    rep.extra["witness"] = {
        "quotient_rank": witness.m.full_rank,
        "deletion_rank": witness.l.full_rank,
        "overlay_rank": witness.spec.overlay.full_rank,
        "circuits_of_quotient": [one_based(c) for c in witness.m.circuits],
    }
    rep.conclusion = (
        f"(K/X)^N = K\\X verified: r(M)={witness.m.full_rank}, "
        f"r(N)={witness.spec.overlay.full_rank}, r(L)={witness.l.full_rank}"
    )
    print(rep.conclusion)
    code = EXIT_OK if rep.all_pass else EXIT_CHECK_FAILED
    return code, rep.as_dict(time.perf_counter() - t0)


def cmd_krt_build(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    spec = KrtSpec(args.r, args.t)
    m = build_krt(spec)
    rep = Report(argv, {"r": args.r, "t": args.t})
    rep.check("sparse_paving", is_sparse_paving(m))
    chs = [one_based(c) for c in m.circuits if c.bit_count() == spec.r]
    rep.extra["circuit_hyperplanes"] = chs
    rep.extra["ground_size"] = m.n
    rep.conclusion = f"K({args.r},{args.t}): rank {m.full_rank} on {m.n} elements, {len(chs)} circuit-hyperplanes"
    for ch in chs:
        print(" ".join(str(e) for e in ch))
    if args.out:
        write_matroid(m, args.out)
    return EXIT_OK if rep.all_pass else EXIT_CHECK_FAILED, rep.as_dict(time.perf_counter() - t0)


def cmd_krt_certify(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    spec = KrtSpec(args.r, args.t)
    m = build_krt(spec)
    facts = obstruction_report(spec)
    ingleton_ok, ingleton_witness = is_ingleton_sparse_paving(m)

    body: dict = {
        "command": list(argv),
        "params": {
            "r": spec.r,
            "t": spec.t,
            "ground_size": spec.ground_size,
            "regime": {
                "construction": True,
                "ingleton_guarantee": spec.in_ingleton_regime,
                "antichain_guarantee": spec.in_antichain_regime,
            },
        },
        "sparse_paving": intersection_certificate(spec) and is_sparse_paving(m),
        "facts": facts.as_dict(),
        "ingleton": {
            "is_ingleton": ingleton_ok,
            "witness": ingleton_witness.as_dict() if ingleton_witness else None,
        },
    }
    if args.deep or spec.ground_size <= VAMOS_SCAN_CAP:
        minors = scan_vamos_like_minors(m)
        body["vamos_like_minors"] = {
            "scanned": True,
            "witnesses": [w.as_dict() for w in minors],
        }
    else:
        body["vamos_like_minors"] = {
            "scanned": False,
            "reason": f"ground size {spec.ground_size} above scan cap {VAMOS_SCAN_CAP}; run krt vamos-scan",
        }
    all_facts = facts.all_true and body["sparse_paving"]
    body["conclusion"] = (
        "non-representable over every field" if all_facts else "certificate incomplete"
    )
    body["wall_time_s"] = round(time.perf_counter() - t0, 6)
    print(
        f"K({spec.r},{spec.t}): sparse_paving={body['sparse_paving']} "
        f"facts a={facts.fact_a} b={facts.fact_b} c={facts.fact_c} d={facts.fact_d} "
        f"ingleton={ingleton_ok} -> {body['conclusion']}"
    )
    return (EXIT_OK if all_facts else EXIT_CHECK_FAILED), body


def cmd_krt_ingleton(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    spec = KrtSpec(args.r, args.t)
    m = build_krt(spec)
    rep = Report(argv, {"r": args.r, "t": args.t})
    ok, witness = is_ingleton_sparse_paving(m)
    rep.check("is_ingleton", ok, witness.as_dict() if witness else None)
    if witness is not None:
        a, b, c, d = witness.pairs
        core = witness.core
        sat, lhs, rhs = ingleton_inequality(m, core | a, core | b, core | c, core | d)
        rep.extra["violation"] = {"lhs": lhs, "rhs": rhs, "satisfied": sat}
    rep.conclusion = (
        f"K({args.r},{args.t}) is Ingleton"
        if ok
        else f"K({args.r},{args.t}) violates Ingleton at {witness.as_dict()}"
    )
    print(rep.conclusion)
    return (EXIT_OK if ok else EXIT_CHECK_FAILED), rep.as_dict(time.perf_counter() - t0)


def cmd_krt_vamos_scan(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    spec = KrtSpec(args.r, args.t)
    m = build_krt(spec)
    rep = Report(argv, {"r": args.r, "t": args.t})
    minors = scan_vamos_like_minors(m)
    rep.check("no_vamos_like_minor", not minors, [w.as_dict() for w in minors] or None)
    rep.extra["witnesses"] = [w.as_dict() for w in minors]
    rep.conclusion = (
        f"no Vamos-like minor in K({args.r},{args.t})"
        if not minors
        else f"{len(minors)} Vamos-like minor(s) found"
    )
    print(rep.conclusion)
    return (EXIT_OK if not minors else EXIT_CHECK_FAILED), rep.as_dict(time.perf_counter() - t0)


def cmd_gain_build(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    group = _load_group(args.group)
    gg = full_gain_graph(group, args.n)
    rep = Report(argv, {"group": args.group, "n": args.n})
    expected = args.n * (args.n - 1) // 2 * group.order
    rep.check("edge_count", gg.edge_count == expected)
    rep.extra["edges"] = [
        {"i": e.i + 1, "j": e.j + 1, "label": group.names[e.label]} for e in gg.edges
    ]
    rep.conclusion = f"full gain graph over {group.name} on {args.n} vertices: {gg.edge_count} edges"
    for e in gg.edges:
        print(e.i + 1, e.j + 1, group.names[e.label])
    return EXIT_OK, rep.as_dict(time.perf_counter() - t0)


def cmd_gain_partitions(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    group = _load_group(args.group)
    rep = Report(argv, {"group": args.group})
    partitions = group_partitions(group)
    rep.extra["partitions"] = [
        [sorted(group.names[x] for x in part) for part in p.parts] for p in partitions
    ]
    rep.check("has_nontrivial_partition", bool(partitions))
    rep.conclusion = f"{group.name} has {len(partitions)} nontrivial partition(s)"
    print(rep.conclusion)
    for p in rep.extra["partitions"]:
        print("  " + " | ".join(",".join(part) for part in p))
    return (EXIT_OK if partitions else EXIT_CHECK_FAILED), rep.as_dict(time.perf_counter() - t0)


def cmd_gain_lift3(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    group = _load_group(args.group)
    rep = Report(argv, {"group": args.group})
    try:
        result = rank2_lift_k3(group)
    except NoPartitionError as exc:
        rep.check("nontrivial_partition", False, str(exc))
        rep.conclusion = "no nontrivial partition"
        print(rep.conclusion)
        return EXIT_CHECK_FAILED, rep.as_dict(time.perf_counter() - t0)
    rep.check("nontrivial_partition", True)
    rep.check("hyperplane_axioms", True)
    rep.check("rank_is_4", result.matroid.full_rank == 4)
    rep.check("balanced_circuit_audit", result.audit.ok)
    rep.check("graphic_is_quotient", result.quotient_ok)
    rep.extra["lift"] = {
        "ground_size": result.matroid.n,
        "rank": result.matroid.full_rank,
        "hyperplane_count": len(result.hyperplanes),
        "circuit_count": len(result.matroid.circuits),
        "partition": [sorted(group.names[x] for x in part) for part in result.partition.parts],
    }
    rep.conclusion = (
        f"rank-2 lift over {group.name}: rank 4 on {result.matroid.n} edges, all checks pass"
    )
    print(rep.conclusion)
    if args.out:
        write_matroid(result.matroid, args.out)
    return (EXIT_OK if rep.all_pass else EXIT_CHECK_FAILED), rep.as_dict(time.perf_counter() - t0)


def cmd_iso(args: argparse.Namespace, argv: Sequence[str]) -> tuple[int, dict]:
    t0 = time.perf_counter()
    m1 = parse_matroid(args.m1)
    m2 = parse_matroid(args.m2)
    rep = Report(argv, {"m1": args.m1, "m2": args.m2})
    perm = find_isomorphism(m1, m2)
    rep.check("isomorphic", perm is not None, None if perm else "no ground-set bijection maps circuits onto circuits")
    if perm is not None:
        rep.extra["permutation"] = [p + 1 for p in perm]
        rep.conclusion = "isomorphic"
        print(" ".join(str(p + 1) for p in perm))
    else:
        rep.conclusion = "not isomorphic"
        print(rep.conclusion)
    return (EXIT_OK if perm is not None else EXIT_CHECK_FAILED), rep.as_dict(time.perf_counter() - t0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matlift",
        description="Matroid lift constructions, K(r,t) certificates, and gain-graph lifts.",
    )
    parser.add_argument("--json", metavar="PATH", help="write the JSON certificate here")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a .ckt circuit family")
    p.add_argument("matroid")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("rank", help="rank of a 1-based element set")
    p.add_argument("matroid")
    p.add_argument("set", help="elements, e.g. '1,2,7,8'")
    p.set_defaults(handler=cmd_rank)

    p_lift = sub.add_parser("lift", help="lift constructions")
    lift_sub = p_lift.add_subparsers(dest="lift_command", required=True)
    p = lift_sub.add_parser("elementary", help="elementary lift from a linear class")
    p.add_argument("matroid")
    p.add_argument("--class", dest="linear_class", required=True, help="1-based circuit ids or a file of ids")
    p.add_argument("--out", help="write the lifted matroid here")
    p.set_defaults(handler=cmd_lift_elementary)
    p = lift_sub.add_parser("general", help="the M^N lift from a .lift spec")
    p.add_argument("spec")
    p.add_argument("--check-star", action="store_true", help="also check the perfect-collection condition")
    p.add_argument("--check-star-prime", action="store_true", help="(default) check the modular-pair condition")
    p.add_argument("--force", action="store_true", help="evaluate the formula even when (*') fails and report the first axiom violation")
    p.add_argument("--out", help="write the lifted matroid here")
    p.set_defaults(handler=cmd_lift_general)

    p_rep = sub.add_parser("rep", help="representable witness construction")
    rep_sub = p_rep.add_subparsers(dest="rep_command", required=True)
    p = rep_sub.add_parser("witness", help="build N on circuits of K/X with (K/X)^N = K\\X")
    p.add_argument("matrix")
    p.add_argument("--x", default="", help="1-based column indices of X, e.g. '1,2'")
    p.set_defaults(handler=cmd_rep_witness)

    p_krt = sub.add_parser("krt", help="the K(r,t) family")
    krt_sub = p_krt.add_subparsers(dest="krt_command", required=True)
    p = krt_sub.add_parser("build", help="emit the circuit-hyperplanes of K(r,t)")
    p.add_argument("r", type=int)
    p.add_argument("t", type=int)
    p.add_argument("--out", help="write the full .ckt here")
    p.set_defaults(handler=cmd_krt_build)
    p = krt_sub.add_parser("certify", help="the non-representability certificate")
    p.add_argument("r", type=int)
    p.add_argument("t", type=int)
    p.add_argument("--deep", action="store_true", help="run the Vamos-like minor scan regardless of size")
    p.set_defaults(handler=cmd_krt_certify)
    p = krt_sub.add_parser("ingleton", help="the sparse-paving Ingleton criterion")
    p.add_argument("r", type=int)
    p.add_argument("t", type=int)
    p.set_defaults(handler=cmd_krt_ingleton)
    p = krt_sub.add_parser("vamos-scan", help="scan rank-4 8-element minors for Vamos-likeness")
    p.add_argument("r", type=int)
    p.add_argument("t", type=int)
    p.set_defaults(handler=cmd_krt_vamos_scan)

    p_gain = sub.add_parser("gain", help="gain graphs over finite groups")
    gain_sub = p_gain.add_subparsers(dest="gain_command", required=True)
    p = gain_sub.add_parser("build", help="enumerate the full gain graph")
    p.add_argument("group", help="a .grp file or builtin:<name>")
    p.add_argument("n", type=int)
    p.set_defaults(handler=cmd_gain_build)
    p = gain_sub.add_parser("lift3", help="the rank-2 lift on 3 vertices")
    p.add_argument("group", help="a .grp file or builtin:<name>")
    p.add_argument("--out", help="write the lift matroid here")
    p.set_defaults(handler=cmd_gain_lift3)
    p = gain_sub.add_parser("partitions", help="enumerate nontrivial group partitions")
    p.add_argument("group", help="a .grp file or builtin:<name>")
    p.set_defaults(handler=cmd_gain_partitions)

    p = sub.add_parser("iso", help="search for a circuit-preserving bijection")
    p.add_argument("m1")
    p.add_argument("m2")
    p.set_defaults(handler=cmd_iso)

    return parser


def _strip_json_flag(argv: list[str]) -> list[str]:
    """Drop --json and its value from the command echo so reports do not
    depend on where they are written."""
    out = []
    skip = False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--json":
            skip = True
            continue
        if tok.startswith("--json="):
            continue
        out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        code, report = args.handler(args, _strip_json_flag(argv))
    except (ParseError, GroupAxiomError, CircuitAxiomError, HyperplaneAxiomError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DependentColumnsError, LiftConditionError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report, args.json)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
