"""Command line front end. Every subcommand reads JSON (``-`` for stdin) and
writes JSON or text to stdout; domain errors exit 1 with a JSON report on
stderr, usage errors exit 2."""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from typing import Any

from .certificate import build_certificate, check_certificate, quiver_hash
from .expr import eval_text
from .grading import solve_collapse_grading
from .leavitt import Field, normal_form
from .moves import apply_move, attach_heads, collapse, higher_edge, in_delay, out_delay, source_eliminate
from .quiver import Quiver, QuiverError, UndecidedError, bridge_paths, closure_levels, is_isomorphic
from .shift import (
    EsseWitness,
    ResourceError,
    ShiftEquivalenceWitness,
    find_esse_factorization,
    verify_esse,
    verify_shift_equivalence,
)


class DomainFailure(Exception):
    """A check ran and said no; reported like an error but with a payload."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("message", "check failed"))
        self.payload = payload


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_json(path: str) -> Any:
    return json.loads(_read(path))


def _load_quiver(path: str) -> Quiver:
    return Quiver.from_json_obj(_load_json(path))


def _emit(obj: Any, out: str = "-") -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _csv(text: str) -> list[str]:
    return [x for x in (s.strip() for s in text.split(",")) if x]


# -- subcommands ----------------------------------------------------------


def cmd_collapse(args) -> None:
    q = _load_quiver(args.quiver)
    c = collapse(q, _csv(args.keep))
    if args.output:
        _emit(c.q_prime.to_json(), args.output)
        _emit(f"n_max={c.n_max}\n")
    else:
        _emit({
            "n_max": c.n_max,
            "q_prime": c.q_prime.to_json_obj(),
            "edge_origin": {e: list(p.edges) for e, p in sorted(c.edge_origin.items())},
        })


def cmd_move(args) -> None:
    q = _load_quiver(args.quiver)
    name = args.name
    if name in ("in_split", "in_amalgamate", "out_split", "out_amalgamate"):
        if args.partition is None:
            raise QuiverError(f"{name} needs --partition")
        res = apply_move(q, {"move": name, "partition": json.loads(args.partition)})
    elif name in ("expand", "contract"):
        res = apply_move(q, {"move": name, "vertex": args.vertex})
    elif name == "source_eliminate":
        res = source_eliminate(q, args.vertex)
    elif name == "attach_heads":
        res = attach_heads(q, args.n)
    elif name == "higher_edge":
        res = higher_edge(q, args.n)
    elif name in ("out_delay", "in_delay"):
        if args.delays is None:
            raise QuiverError(f"{name} needs --delays")
        fn = out_delay if name == "out_delay" else in_delay
        res = fn(q, json.loads(args.delays))
    else:
        raise QuiverError(f"unknown move {name!r}")
    _emit(res.to_json(), args.output)


def cmd_closure(args) -> None:
    q = _load_quiver(args.quiver)
    levels = closure_levels(q, _csv(args.set))
    _emit({"closure": sorted(levels[-1]), "levels": [sorted(x) for x in levels]})


def cmd_bridge_paths(args) -> None:
    q = _load_quiver(args.quiver)
    bp = bridge_paths(q, _csv(args.keep))
    _emit({v: [list(p.edges) for p in ps] for v, ps in bp.items()})


def cmd_eval(args) -> None:
    q = _load_quiver(args.quiver)
    x = eval_text(args.expr, q, Field.parse(args.field))
    if args.normal_form:
        x = normal_form(x)
    _emit(x.to_json_obj() if args.json else f"{x}\n")


def cmd_grade(args) -> None:
    q = _load_quiver(args.collapse_of)
    c = collapse(q, _csv(args.keep))
    g = solve_collapse_grading(q, c)
    _emit(g.to_json_obj())


def cmd_esse_verify(args) -> None:
    q1, q2 = _load_quiver(args.q1), _load_quiver(args.q2)
    w = EsseWitness.from_json_obj(_load_json(args.witness))
    ok, failures = verify_esse(q1, q2, w)
    if not ok:
        raise DomainFailure({"error": "esse", "message": "witness rejected", "failures": failures})
    _emit({"ok": True})


def cmd_esse_find(args) -> None:
    found = find_esse_factorization(
        json.loads(args.a), json.loads(args.b), args.entry_bound, args.dim_bound
    )
    _emit({"found": found is not None, "L": found[0] if found else None, "R": found[1] if found else None})


def cmd_se_verify(args) -> None:
    obj = _load_json(args.file)
    w = ShiftEquivalenceWitness(obj["c"], obj["d"], int(obj["lag"]))
    ok, failed = verify_shift_equivalence(obj["a"], obj["b"], w)
    if not ok:
        raise DomainFailure({"error": "shift-equivalence", "message": "witness rejected", "failed": failed})
    _emit({"ok": True})


def cmd_cert(args) -> None:
    if args.action == "build":
        initial = _load_quiver(args.initial)
        moves = _load_json(args.moves)
        cert = build_certificate(initial, moves)
        _emit(cert.to_json(), args.output)
        return
    res = check_certificate(_load_json(args.file))
    if not res.ok:
        raise DomainFailure(
            {"error": "certificate", "message": res.reason, "failed_step": res.failed_step}
        )
    _emit({"ok": True, "final_hash": None if res.final is None else quiver_hash(res.final)})


def cmd_export_dot(args) -> None:
    _emit(_load_quiver(args.quiver).to_dot(args.name), args.output)


def cmd_iso(args) -> None:
    iso = is_isomorphic(_load_quiver(args.a), _load_quiver(args.b))
    if iso is None:
        _emit({"isomorphic": False})
    else:
        _emit({"isomorphic": True, "vertex_map": iso.vertex_map, "edge_map": iso.edge_map})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quiverlpa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("collapse", help="collapse paths through dropped vertices")
    p.add_argument("quiver")
    p.add_argument("--keep", required=True, help="comma separated kept vertices")
    p.add_argument("-o", "--output", help="write Q' here and print n_max only")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("move", help="apply one quiver move")
    p.add_argument("name", choices=[
        "in_split", "in_amalgamate", "out_split", "out_amalgamate", "expand", "contract",
        "source_eliminate", "attach_heads", "higher_edge", "out_delay", "in_delay",
    ])
    p.add_argument("quiver")
    p.add_argument("--vertex")
    p.add_argument("--partition", help='JSON, e.g. {"v": [["a"], ["b"]]}')
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--delays", help="JSON map id -> delay")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_move)

    p = sub.add_parser("closure", help="hereditary saturated closure with its levels")
    p.add_argument("quiver")
    p.add_argument("--set", required=True)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("bridge-paths", help="B_v for every vertex")
    p.add_argument("quiver")
    p.add_argument("--keep", required=True)
    p.set_defaults(func=cmd_bridge_paths)

    p = sub.add_parser("eval", help="evaluate an expression in L_k(Q)")
    p.add_argument("expr")
    p.add_argument("--quiver", required=True)
    p.add_argument("--field", default="q", help="q or fp:<prime>")
    p.add_argument("--normal-form", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grade", help="solve the collapse grading")
    p.add_argument("--collapse-of", required=True, metavar="QUIVER")
    p.add_argument("--keep", required=True)
    p.set_defaults(func=cmd_grade)

    p = sub.add_parser("esse-verify", help="check an ESSE witness")
    p.add_argument("q1")
    p.add_argument("q2")
    p.add_argument("witness")
    p.set_defaults(func=cmd_esse_verify)

    p = sub.add_parser("esse-find", help="bounded search for A = LR, B = RL")
    p.add_argument("--a", required=True, help="JSON matrix")
    p.add_argument("--b", required=True, help="JSON matrix")
    p.add_argument("--entry-bound", type=int, default=2)
    p.add_argument("--dim-bound", type=int, default=2)
    p.set_defaults(func=cmd_esse_find)

    p = sub.add_parser("se-verify", help="check a shift equivalence witness")
    p.add_argument("file", help='JSON {"a", "b", "c", "d", "lag"}')
    p.set_defaults(func=cmd_se_verify)

    p = sub.add_parser("cert", help="build or check a certificate")
    csub = p.add_subparsers(dest="action", required=True)
    b = csub.add_parser("build")
    b.add_argument("initial")
    b.add_argument("moves", help="JSON list of move descriptors")
    b.add_argument("-o", "--output", default="-")
    b.set_defaults(func=cmd_cert)
    c = csub.add_parser("check")
    c.add_argument("file")
    c.set_defaults(func=cmd_cert)

    p = sub.add_parser("export-dot", help="write Graphviz DOT")
    p.add_argument("quiver")
    p.add_argument("--name", default="Q")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("iso", help="test two quivers for isomorphism")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_iso)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except DomainFailure as exc:
        sys.stderr.write(json.dumps(exc.payload, sort_keys=True) + "\n")
        return 1
    except (QuiverError, UndecidedError, ResourceError, ValueError, KeyError, OSError) as exc:
        report = {"error": type(exc).__name__, "message": str(exc)}
        if hasattr(exc, "index"):
            report["index"] = exc.index
        sys.stderr.write(json.dumps(report, sort_keys=True) + "\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
