"""Replayable certificates: a chain of quiver moves from an initial quiver, each
step carrying the hash of its result and a re-checkable verification payload.

Every constructive claim (collapse hypotheses, the collapsed family, fullness,
the grading, ESSE witnesses, move premises) is recomputed by
:func:`check_certificate`. The passage from graded Morita equivalence of
Leavitt path algebras to singular equivalence of kQ/J^2 and kQ'/J^2 (for
finite quivers without sinks) is a cited result and is only recorded.
"""

from __future__ import annotations

import hashlib
import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Callable

from .equivalence import check_collapse_preconditions, verify_fullness, verify_q_prime_family
from .grading import GradingInfeasible, solve_collapse_grading
from .moves import (
    Partition,
    attach_heads,
    collapse,
    contract,
    expand,
    higher_edge,
    in_amalgamate,
    in_delay,
    in_split,
    out_amalgamate,
    out_delay,
    out_split,
    source_eliminate,
)
from .quiver import Quiver, QuiverError, UndecidedError, is_isomorphic
from .shift import EsseWitness, verify_esse

__all__ = [
    "SCHEMA",
    "CertificateError",
    "Certificate",
    "CertificateCheck",
    "quiver_hash",
    "build_certificate",
    "check_certificate",
    "JUSTIFICATIONS",
]

SCHEMA = "quiverlpa.certificate/1"


class CertificateError(QuiverError):
    def __init__(self, index: int | None, reason: str):
        where = "certificate" if index is None else f"step {index}"
        super().__init__(f"{where}: {reason}")
        self.index = index
        self.reason = reason


def quiver_hash(q: Quiver) -> str:
    blob = json.dumps(q.to_json_obj(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return "sha256:" + hashlib.sha256(blob.encode("utf-8")).hexdigest()


JUSTIFICATIONS = {
    "collapse": "collapse of paths through dropped vertices: L_k(Q) and L_k(Q') are (1/n)Z-graded "
    "Morita equivalent when every sink is kept and every cycle meets the kept set",
    "collapse_inverse": "the current quiver is the collapse of the next one (the collapse result applied in reverse)",
    "esse": "elementary strong shift equivalent quivers without sinks have Z-graded Morita equivalent "
    "Leavitt path algebras (two collapses of the bridging quiver, then restriction of the grading group)",
    "in_split": "in-splitting is an elementary strong shift equivalence (quivers without sinks)",
    "out_split": "out-splitting is an elementary strong shift equivalence (quivers without sinks)",
    "in_amalgamate": "inverse of an in-splitting",
    "out_amalgamate": "inverse of an out-splitting",
    "source_eliminate": "source elimination is the collapse keeping every vertex but a source that is not a sink",
    "expand": "expansion at a non-sink vertex is inverse to the collapse dropping the new vertex",
    "contract": "contraction is the inverse of an expansion",
    "attach_heads": "attaching heads is inverse to the collapse keeping the original vertices",
    "higher_edge": "the higher edge quiver of a quiver without sinks is strong shift equivalent to it",
    "out_delay": "out-delays by a (necessarily proper) finite source-vector are inverse to the collapse "
    "keeping the level-0 vertices",
    "in_delay": "in-delays are inverse to the collapse keeping the level-0 vertices",
    "isomorphism": "isomorphic quivers have isomorphic Leavitt path algebras",
}

SINGULAR = (
    "kQ/J^2 and kQ'/J^2 are singularly equivalent: graded Morita equivalence of the Leavitt path "
    "algebras of finite quivers without sinks is equivalent to singular equivalence of the "
    "radical-square-zero algebras (cited, not computed)"
)


# -- per-move verification ------------------------------------------------


def _collapse_payload(q: Quiver, keep: Sequence[str]) -> dict:
    pre = check_collapse_preconditions(q, keep)
    if not pre.ok:
        raise QuiverError("collapse hypotheses fail: " + "; ".join(c.name for c in pre.failures))
    c = collapse(q, keep)
    family = verify_q_prime_family(q, c)
    full, levels = verify_fullness(q, keep)
    try:
        g = solve_collapse_grading(q, c)
        grading: Any = g.to_json_obj()
        degrees_one = all(g.path_degree(p) == 1 for p in c.origin_paths)
    except GradingInfeasible as exc:
        grading, degrees_one = {"infeasible": str(exc)}, False
    payload = {
        "keep": sorted(c.keep),
        "n_max": c.n_max,
        "origin_paths": {e: list(p.edges) for e, p in sorted(c.edge_origin.items())},
        "preconditions": pre.to_json_obj(),
        "family": family.to_json_obj(),
        "fullness": {"full": full, "levels": levels},
        "grading": grading,
        "origin_degrees_one": degrees_one,
    }
    if not (family.ok and full):
        raise QuiverError("collapse verification failed")
    return payload


def _no_sinks(q: Quiver, label: str) -> dict:
    sinks = sorted(q.sinks)
    if sinks:
        raise QuiverError(f"{label} has sinks {sinks}")
    return {"no_sinks": label}


def _step(q: Quiver, name: str, params: Mapping[str, Any]) -> tuple[Quiver, dict]:
    """Apply one certified move; returns the next quiver and the payload."""
    if name == "collapse":
        keep = list(params["keep"])
        payload = _collapse_payload(q, keep)
        return collapse(q, keep).q_prime, payload
    if name == "collapse_inverse":
        bigger = Quiver.from_json_obj(params["quiver"])
        keep = list(params["keep"])
        payload = _collapse_payload(bigger, keep)
        iso = is_isomorphic(collapse(bigger, keep).q_prime, q)
        if iso is None:
            raise QuiverError("collapse of the given quiver is not isomorphic to the current quiver")
        payload["isomorphism"] = dict(sorted(iso.vertex_map.items()))
        return bigger, payload
    if name == "esse":
        target = Quiver.from_json_obj(params["target"])
        w = EsseWitness.from_json_obj(params["witness"])
        _no_sinks(q, "current quiver")
        _no_sinks(target, "target quiver")
        ok, why = verify_esse(q, target, w)
        if not ok:
            raise QuiverError("ESSE witness rejected: " + "; ".join(why))
        return target, {"esse": "verified"}
    if name == "isomorphism":
        target = Quiver.from_json_obj(params["target"])
        iso = is_isomorphic(q, target)
        if iso is None:
            raise QuiverError("target is not isomorphic to the current quiver")
        return target, {"vertex_map": dict(sorted(iso.vertex_map.items()))}
    if name in ("in_split", "out_split", "in_amalgamate", "out_amalgamate"):
        kind = name.split("_")[0]
        p = Partition.from_json_obj(kind, params["partition"])
        fn: Callable = {"in_split": in_split, "out_split": out_split,
                        "in_amalgamate": in_amalgamate, "out_amalgamate": out_amalgamate}[name]
        nxt = fn(q, p)
        _no_sinks(q, "current quiver")
        return nxt, _no_sinks(nxt, "result")
    if name == "source_eliminate":
        v = params["vertex"]
        if not q.out_edges[q.check_vertex(v)]:
            raise QuiverError(f"source {v!r} is a sink")
        return source_eliminate(q, v), {"source_not_sink": v}
    if name == "expand":
        v = params["vertex"]
        if not q.out_edges[q.check_vertex(v)]:
            raise QuiverError(f"cannot certify expansion at sink {v!r}")
        return expand(q, v), {"vertex_not_sink": v}
    if name == "contract":
        v = params["vertex"]
        nxt = contract(q, v)
        if not nxt.out_edges[v]:
            raise QuiverError(f"contraction leaves {v!r} a sink")
        return nxt, {"vertex_not_sink": v}
    if name == "attach_heads":
        return attach_heads(q, int(params["n"])), {"n": int(params["n"])}
    if name == "higher_edge":
        _no_sinks(q, "current quiver")
        return higher_edge(q, int(params["n"])), {"n": int(params["n"]), "no_sinks": "current quiver"}
    if name in ("out_delay", "in_delay"):
        d = {k: int(v) for k, v in params["delays"].items()}
        nxt = (out_delay if name == "out_delay" else in_delay)(q, d)
        # the delayed quiver collapses back onto the level-0 vertices
        payload = _collapse_payload(nxt, list(q.vertices))
        if is_isomorphic(collapse(nxt, list(q.vertices)).q_prime, q) is None:
            raise QuiverError("delayed quiver does not collapse back to the current quiver")
        return nxt, payload
    raise QuiverError(f"unknown move {name!r}")


# -- certificates ---------------------------------------------------------


def _plain(obj: Any) -> Any:
    return json.loads(json.dumps(obj, sort_keys=True))


@dataclass
class Certificate:
    initial: Quiver
    steps: list[dict] = field(default_factory=list)
    conclusion: str = ""

    def to_json_obj(self) -> dict:
        return {
            "schema": SCHEMA,
            "initial": self.initial.to_json_obj(),
            "initial_hash": quiver_hash(self.initial),
            "steps": self.steps,
            "conclusion": self.conclusion,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _conclusion(initial: Quiver, final: Quiver, steps: Sequence[dict]) -> str:
    head = (
        f"Q (hash {quiver_hash(initial)}) and Q' (hash {quiver_hash(final)}): "
        "L_k(Q) and L_k(Q') are graded Morita equivalent"
    )
    if not steps:
        head = f"Q (hash {quiver_hash(initial)}) is equivalent to itself"
    if initial.sinks or final.sinks:
        return head + "; singular equivalence is not concluded because a quiver at an end of the chain has sinks"
    return head + "; hence " + SINGULAR


def build_certificate(initial: Quiver, moves: Sequence[Mapping[str, Any]]) -> Certificate:
    """Apply and verify each ``{"move": name, ...params}``; raises
    CertificateError at the first move that cannot be certified."""
    q = initial
    steps = []
    for i, desc in enumerate(moves):
        name = desc.get("move")
        params = {k: v for k, v in desc.items() if k != "move"}
        try:
            q, payload = _step(q, name, params)
        except (QuiverError, UndecidedError, KeyError, TypeError) as exc:
            raise CertificateError(i, str(exc)) from exc
        steps.append(
            {
                "move": name,
                "params": json.loads(json.dumps(params)),
                "result_hash": quiver_hash(q),
                "payload": _plain(payload),
                "justification": JUSTIFICATIONS[name],
            }
        )
    return Certificate(initial, steps, _conclusion(initial, q, steps))


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    failed_step: int | None = None
    reason: str = ""
    final: Quiver | None = None


def check_certificate(cert: Certificate | Mapping[str, Any]) -> CertificateCheck:
    """Replay a certificate from its JSON content alone; reports the first failure."""
    obj = cert.to_json_obj() if isinstance(cert, Certificate) else cert
    try:
        if obj.get("schema") != SCHEMA:
            return CertificateCheck(False, None, f"unsupported schema {obj.get('schema')!r}")
        q = Quiver.from_json_obj(obj["initial"])
        initial = q
        if obj.get("initial_hash") != quiver_hash(q):
            return CertificateCheck(False, None, "initial quiver hash mismatch")
        steps = obj["steps"]
    except (QuiverError, KeyError, TypeError) as exc:
        return CertificateCheck(False, None, f"malformed certificate: {exc}")
    for i, step in enumerate(steps):
        try:
            name = step["move"]
            if name not in JUSTIFICATIONS:
                return CertificateCheck(False, i, f"unknown move {name!r}")
            q, payload = _step(q, name, step["params"])
        except (QuiverError, UndecidedError, KeyError, TypeError) as exc:
            return CertificateCheck(False, i, f"replay failed: {exc}")
        if quiver_hash(q) != step.get("result_hash"):
            return CertificateCheck(False, i, "result hash mismatch")
        if _plain(payload) != step.get("payload"):
            return CertificateCheck(False, i, "verification payload does not re-check")
    if obj.get("conclusion") != _conclusion(initial, q, steps):
        return CertificateCheck(False, None, "conclusion does not match the replayed chain")
    return CertificateCheck(True, None, "", q)
