"""Command-line front end.

Exit codes: 0 yes/ok, 1 no/invalid, 2 resource limit, 3 input error,
4 internal invariant failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats, oracles
from .crbds import solve_cds, solve_crbds
from .formats import ParseError
from .hardness import binpacking_to_aonf, binpacking_to_too, nnccm_to_aonf
from .ilp import RESOURCE, ResourceLimitError, solve_ilp
from .oro import InvariantViolation, solve_family, solve_oro
from .problems import (
    AonfInstance,
    CdsInstance,
    CrbdsInstance,
    OroInstance,
    UflbInstance,
    witness_violations,
)
from .reductions import aonf_to_too, cds_to_crbds, lift_to_oro, too_to_cmo, too_to_co, uflb_to_co
from .trees import (
    TreePartition,
    bfs_layer_partition,
    morphism_to_tree_partition,
    validate_harmonic_morphism,
    validate_path_decomposition,
    validate_tree_partition,
)

OK, NO, RESOURCE_EXIT, INPUT_ERROR, INTERNAL = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int = INPUT_ERROR):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; input errors here use 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8") if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def _parse(kind: str, path: str, *args):
    fn = getattr(formats, f"parse_{kind}")
    try:
        return fn(_read(path), *args)
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _graph_of(inst):
    return inst.network if isinstance(inst, AonfInstance) else inst.graph


def _load_partition(path: str | None, inst):
    """Partition from a file, or BFS layers of the instance graph."""
    G = _graph_of(inst)
    if path is None:
        T = bfs_layer_partition(G)
        if isinstance(inst, CrbdsInstance) and any(T.bag_of[b] != T.bag_of[r] for b, r in inst.anchors.items()):
            T = TreePartition({0: frozenset(G.vertices)}, ())
        return T
    parsed = _parse("partition", path)
    try:
        if isinstance(inst, AonfInstance):
            if parsed.chains:
                raise ParseError("subdivided partitions are not supported for AONF networks")
            return parsed.resolve(None)
        return parsed.resolve(G)
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _emit(args, record: dict, lines: list) -> None:
    if getattr(args, "json", False):
        print(json.dumps(record, sort_keys=True, default=str))
    else:
        for line in lines:
            print(line)


# --------------------------------------------------------------------------
# validate


def cmd_validate(args) -> int:
    if args.what == "morphism":
        pm = _parse("morphism", args.file or _required(args, "file"))
        rep = validate_harmonic_morphism(pm.morphism)
        _emit(args, {"ok": rep.ok, "degree": rep.degree, "violations": rep.violations},
              [f"ok degree={rep.degree}"] if rep.ok else rep.violations)
        return OK if rep.ok else NO
    inst = _parse("instance", _required(args, "input")).instance
    if args.what == "witness":
        problem = formats.problem_name(inst)
        w = _parse("witness", args.witness or args.file or _required(args, "witness"), problem)
        try:
            bad = witness_violations(inst, w)
        except (ValueError, KeyError, TypeError) as exc:
            bad = [f"malformed witness: {exc}"]
        _emit(args, {"ok": not bad, "violations": bad}, ["ok"] if not bad else bad)
        return OK if not bad else NO
    path = args.partition or args.file or _required(args, "partition")
    parsed = _parse("partition", path)
    G = _graph_of(inst)
    if args.what == "pathdecomp":
        if not parsed.is_path:
            raise CliError(f"{path}: expected a path decomposition ('flag pathdecomp')")
        rep = validate_path_decomposition(G, parsed.partition)
        _emit(args, {"ok": rep.ok, "width": rep.width, "violations": rep.violations},
              [f"ok width={rep.width}"] if rep.ok else rep.violations)
        return OK if rep.ok else NO
    if parsed.is_path:
        raise CliError(f"{path}: a path decomposition is not a tree partition")
    try:
        target = parsed.resolve(G) if not isinstance(inst, AonfInstance) else parsed.partition
    except (ParseError, ValueError) as exc:
        raise CliError(f"{path}: {exc}") from None
    H, T = (target.graph, target.partition) if hasattr(target, "chains") else (G, target)
    rep = validate_tree_partition(H, T)
    _emit(args, {"ok": rep.ok, "breadth": rep.breadth, "width": rep.width, "violations": rep.violations},
          [f"ok breadth={rep.breadth} width={rep.width}"] if rep.ok else rep.violations)
    return OK if rep.ok else NO


def _required(args, name: str):
    value = getattr(args, name, None)
    if value is None:
        raise CliError(f"'{args.command} {args.what}' needs --{name}")
    return value


# --------------------------------------------------------------------------
# convert


def cmd_convert(args) -> int:
    pm = _parse("morphism", args.file)
    try:
        sub = morphism_to_tree_partition(pm.graph, pm.morphism)
    except ValueError as exc:
        raise CliError(str(exc), NO) from None
    rep = validate_tree_partition(sub.graph, sub.partition)
    _write(args.out, formats.write_partition(sub))
    summary = {"breadth": rep.breadth, "nodes": len(sub.partition.bags), "subdivision_vertices": len(sub.subdivision)}
    msg = " ".join(f"{k}={v}" for k, v in summary.items())
    if args.json:
        print(json.dumps(summary, sort_keys=True), file=sys.stderr if args.out is None else sys.stdout)
    else:
        print(f"ok {msg}", file=sys.stderr if args.out is None else sys.stdout)
    return OK


# --------------------------------------------------------------------------
# reduce

REDUCTIONS = {
    "lift-to-oro": lift_to_oro,
    "too-to-cmo": too_to_cmo,
    "too-to-co": too_to_co,
    "aonf-to-too": aonf_to_too,
    "uflb-to-co": uflb_to_co,
    "cds-to-crbds": cds_to_crbds,
}
_TAKES_PARTITION = {"aonf-to-too", "uflb-to-co", "cds-to-crbds"}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in x]
    return x if isinstance(x, (int, str, bool)) or x is None else str(x)


def cmd_reduce(args) -> int:
    inst = _parse("instance", args.input).instance
    fn = REDUCTIONS[args.name]
    try:
        if args.name in _TAKES_PARTITION:
            T = _load_partition(args.partition, inst) if args.partition else None
            red = fn(inst, T)
        else:
            red = fn(inst)
    except TypeError as exc:
        raise CliError(f"{args.name} does not apply to this instance: {exc}") from None
    except ResourceLimitError as exc:
        raise CliError(str(exc), RESOURCE_EXIT) from None
    _write(args.out, formats.write_instance(red.instance))
    if args.partition_out and red.partition is not None:
        _write(args.partition_out, formats.write_partition(red.partition))
    sidecar = args.provenance or (f"{args.out}.prov.json" if args.out and args.out != "-" else None)
    if sidecar:
        record = {"reduction": args.name, "input": args.input, "provenance": _jsonable(red.provenance),
                  "notes": _jsonable(red.notes)}
        _write(sidecar, json.dumps(record, indent=2, sort_keys=True) + "\n")
    return OK


# --------------------------------------------------------------------------
# solve


def _solve_fpt(inst, T, limit):
    if isinstance(inst, (CrbdsInstance, CdsInstance)):
        opts = {} if limit is None else {"max_width": limit}
        res = (solve_crbds if isinstance(inst, CrbdsInstance) else solve_cds)(inst, T, **opts)
        return res.status == "size", res.witness, {"status": res.status, "size": res.size}
    opts = {} if limit is None else {"max_breadth": limit}
    if isinstance(inst, OroInstance):
        res = solve_oro(inst, T, **opts)
        return res.yes, res.orientation, {}
    res = solve_family(inst, T, **opts)
    return res.yes, res.witness, {}


def _solve_oracle(inst):
    if getattr(inst, "trivial_no", False):
        return False, None, {}
    if isinstance(inst, AonfInstance):
        f = oracles.oracle_aonf(inst)
        return f is not None, f, {}
    if isinstance(inst, UflbInstance):
        w = oracles.oracle_uflb(inst)
        return w is not None, w, {}
    if isinstance(inst, (CrbdsInstance, CdsInstance)):
        found = (oracles.oracle_crbds if isinstance(inst, CrbdsInstance) else oracles.oracle_cds)(inst)
        if found is None:
            return False, None, {"status": "infeasible", "size": None}
        size, w = found
        if size > inst.budget:
            return False, None, {"status": "over-budget", "size": size}
        return True, w, {"status": "size", "size": size}
    o = oracles.oracle_oro(inst)
    return o is not None, o, {}


def cmd_solve(args) -> int:
    parsed = _parse("instance", args.input)
    inst = parsed.instance
    if parsed.problem != args.problem.upper():
        raise CliError(f"{args.input} holds a {parsed.problem} instance, not {args.problem.upper()}")
    try:
        if args.method == "fpt":
            T = _load_partition(args.partition, inst)
            yes, witness, extra = _solve_fpt(inst, T, args.limit)
        else:
            yes, witness, extra = _solve_oracle(inst)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        _emit(args, {"answer": "resource", "reason": str(exc)}, ["resource"])
        return RESOURCE_EXIT
    except InvariantViolation as exc:
        raise CliError(f"internal invariant failed: {exc}", INTERNAL) from None
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if yes and witness is not None:
        bad = witness_violations(inst, witness)
        if bad:
            raise CliError("solver produced an invalid witness: " + "; ".join(bad), INTERNAL)
        if args.witness:
            _write(args.witness, formats.write_witness(witness, parsed.problem))
    if "status" in extra:
        line = f"size {extra['size']}" if extra["status"] == "size" else extra["status"]
        record = {"answer": "yes" if yes else "no", **extra}
    else:
        line = "yes" if yes else "no"
        record = {"answer": line}
    record.update(problem=parsed.problem, method=args.method)
    _emit(args, record, [line])
    return OK if yes else NO


# --------------------------------------------------------------------------
# generate


def cmd_generate(args) -> int:
    if args.family == "nnccm-aonf":
        if not args.machine:
            raise CliError("generate nnccm-aonf needs --machine")
        m = _parse("machine", args.machine)
        net = nnccm_to_aonf(m)
        _write(args.out, formats.write_instance(net.instance, net.manifest))
        if args.decomposition:
            _write(args.decomposition, formats.write_partition(net.decomposition))
        return OK
    if not args.items or args.bins is None:
        raise CliError(f"generate {args.family} needs --items and --bins")
    size = args.size if args.size is not None else sum(args.items) // args.bins
    manifest = {"items": args.items, "bins": args.bins, "size": size}
    try:
        if args.family == "binpacking-too":
            inst = binpacking_to_too(args.items, size, args.bins).instance
        else:
            inst = binpacking_to_aonf(args.items, size, args.bins)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    _write(args.out, formats.write_instance(inst, manifest))
    return OK


# --------------------------------------------------------------------------
# ilp


def cmd_ilp(args) -> int:
    model = _parse("ilp", args.file)
    res = solve_ilp(model, args.node_budget)
    if res.status == RESOURCE:
        _emit(args, {"status": res.status, "nodes": res.nodes}, ["resource"])
        return RESOURCE_EXIT
    lines = [res.status if res.value is None else f"{res.status} value={res.value}"]
    if res.assignment:
        lines += [f"{k} = {v}" for k, v in res.assignment.items()]
    _emit(args, {"status": res.status, "value": res.value, "assignment": res.assignment, "nodes": res.nodes}, lines)
    return OK if res.feasible else NO


# --------------------------------------------------------------------------
# selftest


def cmd_selftest(args) -> int:
    from .acceptance import CRITERIA, run_criterion

    names = args.only or list(CRITERIA)
    failed = 0
    for name in names:
        if name not in CRITERIA:
            raise CliError(f"unknown criterion {name!r}; choose from {', '.join(CRITERIA)}")
        res = run_criterion(name, scale=args.scale)
        failed += not res.passed
        print(res.line(), flush=True)
    return OK if not failed else NO


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gonflow", description="Tree-partition solvers for orientation, flow and domination problems.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    v = sub.add_parser("validate", help="check a partition, path decomposition, morphism or witness")
    v.add_argument("what", choices=["partition", "pathdecomp", "morphism", "witness"])
    v.add_argument("file", nargs="?", help="file to check (same as --partition or --witness)")
    v.add_argument("--input", help="instance file")
    v.add_argument("--partition", help="partition or path decomposition file")
    v.add_argument("--witness", help="witness file")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("convert", help="turn a harmonic morphism into a tree partition")
    c.add_argument("what", choices=["morphism-to-partition"])
    c.add_argument("file")
    c.add_argument("--out")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_convert)

    r = sub.add_parser("reduce", help="apply a reduction and write a provenance sidecar")
    r.add_argument("name", choices=sorted(REDUCTIONS))
    r.add_argument("--input", required=True)
    r.add_argument("--partition")
    r.add_argument("--out")
    r.add_argument("--partition-out")
    r.add_argument("--provenance", help="sidecar path (default: <out>.prov.json)")
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", help="decide an instance")
    s.add_argument("problem", type=str.upper, choices=list(formats.PROBLEMS))
    s.add_argument("--input", required=True)
    s.add_argument("--partition", help="tree partition (default: BFS layers)")
    s.add_argument("--method", choices=["fpt", "oracle"], default="fpt")
    s.add_argument("--witness", help="write the witness here on a yes answer")
    s.add_argument("--limit", type=int,
                   help="largest breadth (orientation and flow problems) or width (domination) to attempt")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("generate", help="build hard instances")
    g.add_argument("family", choices=["nnccm-aonf", "binpacking-too", "binpacking-aonf"])
    g.add_argument("--machine")
    g.add_argument("--items", type=int, nargs="+")
    g.add_argument("--bins", type=int)
    g.add_argument("--size", type=int)
    g.add_argument("--out")
    g.add_argument("--decomposition", help="path decomposition output (nnccm-aonf)")
    g.set_defaults(func=cmd_generate)

    i = sub.add_parser("ilp", help="integer linear programs")
    i.add_argument("what", choices=["solve"])
    i.add_argument("file")
    i.add_argument("--node-budget", type=int)
    i.add_argument("--json", action="store_true")
    i.set_defaults(func=cmd_ilp)

    t = sub.add_parser("selftest", help="run the acceptance corpus")
    t.add_argument("--scale", choices=["quick", "full"], default="quick")
    t.add_argument("--only", nargs="+", help="criteria to run")
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return INPUT_ERROR
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
