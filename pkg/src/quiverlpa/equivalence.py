"""Checks behind the collapse move: its hypotheses, the family of collapsed
edges inside L_k(Q), fullness of the corner idempotent, and the rewriting of
corner monomials in terms of the collapsed generators."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import NamedTuple

from .leavitt import QQ, Element, Field, Monomial, normal_form, path_element, star, vertex
from .moves import CollapseResult, collapse_edge_id
from .quiver import (
    Path,
    PreconditionError,
    Quiver,
    bridge_paths,
    closure_levels,
    cycles_meet,
    reaches_set,
)

__all__ = [
    "Check",
    "Report",
    "check_collapse_preconditions",
    "verify_q_prime_family",
    "verify_fullness",
    "Letter",
    "CornerExpression",
    "express_in_corner",
    "substitute",
]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __bool__(self) -> bool:
        return self.ok

    def to_json_obj(self) -> list[dict]:
        return [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks]

    def __str__(self) -> str:
        return "\n".join(f"[{'ok' if c.passed else 'FAIL'}] {c.name}{': ' + c.detail if c.detail else ''}" for c in self.checks)


def check_collapse_preconditions(q: Quiver, keep: Iterable[str]) -> Report:
    keep = q.check_vertices(keep)
    rep = Report()
    rep.add("keep nonempty", bool(keep))
    stray = sorted(q.sinks - keep)
    rep.add("sinks kept", not stray, f"sinks outside keep: {stray}" if stray else "")
    rep.add("cycles meet keep", cycles_meet(q, keep))
    # consequence of the first two: every dropped vertex flows into keep
    lost = [v for v in q.vertices if v not in keep and not reaches_set(q, v, keep)]
    rep.add("dropped vertices reach keep", not lost, f"cannot reach keep: {lost}" if lost else "")
    return rep


# -- the family of collapsed edges ----------------------------------------


def verify_q_prime_family(q: Quiver, c: CollapseResult, field: Field = QQ) -> Report:
    """Check inside L_k(Q), via normal forms, that q_v = v (v kept) and
    T_{e_mu} = mu satisfy the Leavitt relations of the collapsed quiver."""
    qp = c.q_prime
    rep = Report()
    qv = {v: vertex(q, v, field) for v in qp.vertices}
    T = {e.id: path_element(q, c.edge_origin[e.id], field) for e in qp.edges}
    Ts = {k: star(t) for k, t in T.items()}

    def nf_eq(a: Element, b: Element) -> bool:
        return normal_form(a - b) == 0

    for v in qp.vertices:
        for w in qp.vertices:
            want = qv[v] if v == w else Element.zero(q, field)
            if not nf_eq(qv[v] * qv[w], want):
                rep.add("orthogonal idempotents", False, f"q_{v} q_{w}")
    for e in qp.edges:
        t, ts = T[e.id], Ts[e.id]
        s, r = qv[e.src], qv[e.dst]
        if not (nf_eq(s * t, t) and nf_eq(t * r, t)):
            rep.add("source/range of T", False, e.id)
        if not (nf_eq(r * ts, ts) and nf_eq(ts * s, ts)):
            rep.add("source/range of T*", False, e.id)
    for a in qp.edges:
        for b in qp.edges:
            want = qv[a.dst] if a.id == b.id else Element.zero(q, field)
            if not nf_eq(Ts[a.id] * T[b.id], want):
                rep.add("T* T relation", False, f"({a.id}, {b.id})")
    for v in qp.vertices:
        out = qp.out_edges[v]
        if not out:
            continue
        total = Element.zero(q, field)
        for eid in out:
            total = total + T[eid] * Ts[eid]
        if not nf_eq(qv[v], total):
            rep.add("CK-2 at kept vertex", False, v)
    for name in ("orthogonal idempotents", "source/range of T", "source/range of T*", "T* T relation", "CK-2 at kept vertex"):
        if not any(ch.name == name for ch in rep.checks):
            rep.add(name, True)
    return rep


def verify_fullness(q: Quiver, keep: Iterable[str]) -> tuple[bool, list[list[str]]]:
    """Whether the hereditary saturated closure of ``keep`` is every vertex;
    the trace lists the closure levels."""
    levels = closure_levels(q, keep)
    trace = [sorted(level) for level in levels]
    return levels[-1] == frozenset(q.vertices), trace


# -- corner decomposition -------------------------------------------------


class Letter(NamedTuple):
    """One generator of the corner: ("T", e), ("T*", e) or ("q", v)."""

    kind: str
    name: str

    def __str__(self) -> str:
        if self.kind == "q":
            return f"q[{self.name}]"
        return f"T[{self.name}]" + ("*" if self.kind == "T*" else "")


@dataclass(frozen=True)
class CornerExpression:
    """A linear combination of words in the collapsed generators."""

    terms: tuple[tuple[int, tuple[Letter, ...]], ...]

    def __str__(self) -> str:
        parts = []
        for coeff, word in self.terms:
            body = " ".join(map(str, word))
            parts.append(body if coeff == 1 else f"{coeff} {body}")
        return " + ".join(parts) if parts else "0"


def _split_at_keep(q: Quiver, keep: frozenset[str], p: Path) -> list[Path]:
    """Cut a path that starts and ends in ``keep`` at every visit to ``keep``."""
    pieces, start, cur = [], p.source, []
    for eid in p.edges:
        cur.append(eid)
        dst = q.edge_map[eid].dst
        if dst in keep:
            pieces.append(Path(start, tuple(cur), dst))
            start, cur = dst, []
    if cur:
        raise PreconditionError(f"path {p} does not end in the kept set")
    return pieces


def _t_word(q: Quiver, c: CollapseResult, p: Path) -> list[Letter]:
    letters = []
    for piece in _split_at_keep(q, c.keep, p):
        eid = collapse_edge_id(piece)
        if eid not in c.edge_origin:
            raise AssertionError(f"piece {piece} is not a collapsed edge")
        letters.append(Letter("T", eid))
    return letters


def _word(q: Quiver, c: CollapseResult, p: Path, r: Path) -> tuple[Letter, ...]:
    left = _t_word(q, c, p)
    right = [Letter("T*", x.name) for x in reversed(_t_word(q, c, r))]
    word = left + right
    return tuple(word) if word else (Letter("q", p.source),)


def express_in_corner(q: Quiver, c: CollapseResult, m: Monomial) -> CornerExpression:
    """Write a corner monomial p q* (both starting in the kept set) as a
    combination of words in T_e, T_e* and q_v.

    When r(p) is kept both paths split into collapsed edges. Otherwise cut each
    path at its last kept vertex, p = alpha beta and q = gamma delta, and use
    r(p) = sum over eta in B_{r(p)} of eta eta*, so that
    p q* = sum alpha T_{beta eta} T*_{delta eta} gamma*.
    """
    p, r = m
    keep = c.keep
    if p.source not in keep or r.source not in keep:
        raise PreconditionError("corner monomials must start and end in the kept set")
    if p.range != r.range:
        raise PreconditionError("monomial needs r(p) == r(q)")
    if p.range in keep:
        return CornerExpression(((1, _word(q, c, p, r)),))

    def cut(path: Path) -> tuple[Path, Path]:
        j = max(i for i, eid in enumerate(path.edges) if q.edge_map[eid].src in keep)
        mid = q.edge_map[path.edges[j]].src
        return Path(path.source, path.edges[:j], mid), Path(mid, path.edges[j:], path.range)

    alpha, beta = cut(p)
    gamma, delta = cut(r)
    etas = bridge_paths(q, keep, [p.range])[p.range]
    if not etas:
        raise AssertionError(f"no bridge path leaves {p.range!r}")
    terms = []
    for eta in etas:
        be = Path(beta.source, beta.edges + eta.edges, eta.range)
        de = Path(delta.source, delta.edges + eta.edges, eta.range)
        for piece in (be, de):
            if collapse_edge_id(piece) not in c.edge_origin:
                raise AssertionError(f"{piece} is not a collapsed edge")
        word = (
            _t_word(q, c, alpha)
            + [Letter("T", collapse_edge_id(be)), Letter("T*", collapse_edge_id(de))]
            + [Letter("T*", x.name) for x in reversed(_t_word(q, c, gamma))]
        )
        terms.append((1, tuple(word)))
    return CornerExpression(tuple(terms))


def substitute(q: Quiver, c: CollapseResult, expr: CornerExpression, field: Field = QQ) -> Element:
    """Evaluate a corner expression in L_k(Q) with T_e -> origin path of e and q_v -> v."""
    total = Element.zero(q, field)
    for coeff, word in expr.terms:
        acc: Element | None = None
        for letter in word:
            if letter.kind == "q":
                x = vertex(q, letter.name, field)
            else:
                x = path_element(q, c.edge_origin[letter.name], field)
                if letter.kind == "T*":
                    x = star(x)
            acc = x if acc is None else acc * x
        if acc is not None:
            total = total + acc.scale(coeff)
    return total
