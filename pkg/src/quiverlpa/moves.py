"""Quiver transformations: the collapse move, splittings and amalgamations,
source elimination, expansion/contraction, Drinen delays, heads, higher edge
quivers, and flow sequences of standard moves."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from .quiver import (
    Edge,
    Path,
    PreconditionError,
    Quiver,
    QuiverError,
    bridge_paths,
    cycles_meet,
    paths_of_length,
)

__all__ = [
    "CollapseResult",
    "Partition",
    "DrinenVector",
    "collapse",
    "collapse_edge_id",
    "parse_collapse_edge_id",
    "in_split",
    "in_amalgamate",
    "out_split",
    "out_amalgamate",
    "trivial_partition",
    "source_eliminate",
    "expand",
    "contract",
    "out_delay",
    "in_delay",
    "is_strictly_proper",
    "attach_heads",
    "higher_edge",
    "FlowError",
    "STANDARD_MOVES",
    "apply_move",
    "apply_flow_sequence",
]


# -- collapse -------------------------------------------------------------

_COLLAPSE_PREFIX = "e__"


def collapse_edge_id(p: Path) -> str:
    return _COLLAPSE_PREFIX + "/".join(p.edges)


def parse_collapse_edge_id(edge_id: str) -> tuple[str, ...]:
    if not edge_id.startswith(_COLLAPSE_PREFIX):
        raise QuiverError(f"{edge_id!r} is not a collapse edge id")
    return tuple(edge_id[len(_COLLAPSE_PREFIX):].split("/"))


@dataclass(frozen=True)
class CollapseResult:
    q_prime: Quiver
    n_max: int
    keep: frozenset[str]
    edge_origin: dict[str, Path] = field(hash=False)

    @property
    def origin_paths(self) -> list[Path]:
        return [self.edge_origin[e.id] for e in self.q_prime.edges]


def collapse(q: Quiver, keep: Iterable[str]) -> CollapseResult:
    """Replace every path between kept vertices that runs through dropped
    vertices by a single edge.

    ``keep`` must contain every sink and meet every cycle.
    """
    keep = q.check_vertices(keep)
    if not keep:
        raise PreconditionError("kept vertex set is empty")
    missing = sorted(q.sinks - keep)
    if missing:
        raise PreconditionError(f"sinks outside the kept set: {missing}")
    if not cycles_meet(q, keep):
        raise PreconditionError("some cycle avoids the kept set")
    kept = [v for v in q.vertices if v in keep]
    bridges = bridge_paths(q, keep, kept)
    edges, origin = [], {}
    for v in kept:
        for p in bridges[v]:
            eid = collapse_edge_id(p)
            edges.append(Edge(eid, p.source, p.range))
            origin[eid] = p
    n_max = max((p.length for p in origin.values()), default=1)
    return CollapseResult(Quiver(tuple(kept), tuple(edges)), n_max, keep, origin)


# -- splittings -----------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Blocks of an edge fiber for each vertex, keyed by vertex.

    ``kind`` is ``"in"`` (fibers r^{-1}(v)) or ``"out"`` (fibers s^{-1}(v)).
    Vertices with an empty fiber are absent.
    """

    kind: str
    blocks: dict[str, tuple[tuple[str, ...], ...]]

    def __post_init__(self) -> None:
        if self.kind not in ("in", "out"):
            raise QuiverError(f"partition kind must be 'in' or 'out', not {self.kind!r}")
        object.__setattr__(
            self, "blocks", {v: tuple(tuple(b) for b in bs) for v, bs in self.blocks.items()}
        )

    def m(self, v: str) -> int:
        return len(self.blocks.get(v, ()))

    def block_of(self) -> dict[str, int]:
        """Edge id -> 1-based block index."""
        return {e: i for bs in self.blocks.values() for i, b in enumerate(bs, 1) for e in b}

    def to_json_obj(self) -> dict:
        return {v: [list(b) for b in bs] for v, bs in sorted(self.blocks.items())}

    @classmethod
    def from_json_obj(cls, kind: str, obj: Mapping[str, Sequence[Sequence[str]]]) -> Partition:
        return cls(kind, {v: tuple(tuple(b) for b in bs) for v, bs in obj.items()})


def trivial_partition(q: Quiver, kind: str) -> Partition:
    fibers = q.in_edges if kind == "in" else q.out_edges
    return Partition(kind, {v: (fibers[v],) for v in q.vertices if fibers[v]})


def _validate_partition(q: Quiver, p: Partition) -> None:
    fibers = q.in_edges if p.kind == "in" else q.out_edges
    for v in p.blocks:
        q.check_vertex(v)
    for v in q.vertices:
        blocks = p.blocks.get(v, ())
        if not fibers[v]:
            if blocks:
                raise QuiverError(f"vertex {v!r} has an empty fiber but a nonempty partition")
            continue
        flat = [e for b in blocks for e in b]
        if any(not b for b in blocks):
            raise QuiverError(f"empty block at vertex {v!r}")
        if len(flat) != len(set(flat)):
            raise QuiverError(f"overlapping blocks at vertex {v!r}")
        if set(flat) != set(fibers[v]):
            raise QuiverError(f"blocks at vertex {v!r} do not cover its fiber exactly")


def _named(ids: list[str], what: str) -> None:
    if len(ids) != len(set(ids)):
        raise QuiverError(f"generated {what} ids collide; rename the input")


def in_split(q: Quiver, p: Partition) -> Quiver:
    """The in-split quiver: v becomes v_1..v_m(v); e becomes e_1..e_m(s(e))."""
    if p.kind != "in":
        raise QuiverError("in_split needs an 'in' partition")
    _validate_partition(q, p)
    block = p.block_of()

    def vname(v: str, i: int) -> str:
        return f"{v}_{i}"

    verts = [vname(v, i) for v in q.vertices for i in range(1, p.m(v) + 1)]
    verts += [v for v in q.vertices if p.m(v) == 0]
    edges = []
    for e in q.edges:
        dst = vname(e.dst, block[e.id])
        ms = p.m(e.src)
        if ms == 0:
            edges.append(Edge(e.id, e.src, dst))
        else:
            edges.extend(Edge(f"{e.id}_{j}", vname(e.src, j), dst) for j in range(1, ms + 1))
    _named(verts, "vertex")
    _named([e.id for e in edges], "edge")
    return Quiver(tuple(verts), tuple(edges))


def out_split(q: Quiver, p: Partition) -> Quiver:
    """The out-split quiver: v becomes v^1..v^m(v); e becomes e^1..e^m(r(e))."""
    if p.kind != "out":
        raise QuiverError("out_split needs an 'out' partition")
    _validate_partition(q, p)
    block = p.block_of()

    def vname(v: str, i: int) -> str:
        return f"{v}^{i}"

    verts = [vname(v, i) for v in q.vertices for i in range(1, p.m(v) + 1)]
    verts += [v for v in q.vertices if p.m(v) == 0]
    edges = []
    for e in q.edges:
        src = vname(e.src, block[e.id])
        mr = p.m(e.dst)
        if mr == 0:
            edges.append(Edge(e.id, src, e.dst))
        else:
            edges.extend(Edge(f"{e.id}^{j}", src, vname(e.dst, j)) for j in range(1, mr + 1))
    _named(verts, "vertex")
    _named([e.id for e in edges], "edge")
    return Quiver(tuple(verts), tuple(edges))


def _amalgamate(q: Quiver, p: Partition, sep: str) -> Quiver:
    vmap: dict[str, str] = {}
    for v, bs in p.blocks.items():
        for i in range(1, len(bs) + 1):
            vmap[f"{v}{sep}{i}"] = v
    orig_edges = {e for bs in p.blocks.values() for b in bs for e in b}
    verts: list[str] = []
    for x in q.vertices:
        v = vmap.get(x, x)
        if x not in vmap and x in p.blocks:
            raise QuiverError(f"vertex {x!r} is partitioned but appears unsplit")
        if v not in verts:
            verts.append(v)
    ends: dict[str, tuple[str, str]] = {}
    for y in q.edges:
        if y.id in orig_edges:
            e = y.id
        else:
            e, _, j = y.id.rpartition(sep)
            if e not in orig_edges or not j.isdigit():
                raise QuiverError(f"edge {y.id!r} is not a copy of a partitioned edge")
        ends.setdefault(e, (vmap.get(y.src, y.src), vmap.get(y.dst, y.dst)))
    missing = orig_edges - set(ends)
    if missing:
        raise QuiverError(f"partitioned edges with no copy: {sorted(missing)}")
    order = [e for e in sorted(ends)]
    return Quiver(tuple(verts), tuple(Edge(e, *ends[e]) for e in order))


def in_amalgamate(q: Quiver, p: Partition) -> Quiver:
    """Inverse of :func:`in_split`; ``q`` must be exactly ``in_split(Q, p)`` for
    some Q, which is returned."""
    if p.kind != "in":
        raise QuiverError("in_amalgamate needs an 'in' partition")
    cand = _amalgamate(q, p, "_")
    if in_split(cand, p).canonical() != q.canonical():
        raise QuiverError("quiver is not the in-split of any quiver under this partition")
    return cand


def out_amalgamate(q: Quiver, p: Partition) -> Quiver:
    """Inverse of :func:`out_split`, with the same exactness requirement."""
    if p.kind != "out":
        raise QuiverError("out_amalgamate needs an 'out' partition")
    cand = _amalgamate(q, p, "^")
    if out_split(cand, p).canonical() != q.canonical():
        raise QuiverError("quiver is not the out-split of any quiver under this partition")
    return cand


# -- source elimination, expansion, contraction ---------------------------


def source_eliminate(q: Quiver, v: str) -> Quiver:
    q.check_vertex(v)
    if q.in_edges[v]:
        raise PreconditionError(f"{v!r} is not a source")
    if len(q.vertices) < 2:
        raise PreconditionError("source elimination needs at least two vertices")
    return Quiver(
        tuple(w for w in q.vertices if w != v),
        tuple(e for e in q.edges if e.src != v),
    )


def _expansion_names(v: str) -> tuple[str, str]:
    return f"{v}*", f"f({v})"


def expand(q: Quiver, v: str) -> Quiver:
    """Insert a new vertex v* after v: v -> v* along a new edge f, and every
    edge formerly leaving v now leaves v*."""
    q.check_vertex(v)
    star, f = _expansion_names(v)
    if star in q or f in q.edge_map:
        raise QuiverError(f"expansion names {star!r}/{f!r} already in use")
    edges = [Edge(e.id, star if e.src == v else e.src, e.dst) for e in q.edges]
    edges.append(Edge(f, v, star))
    return Quiver(q.vertices + (star,), tuple(edges))


def contract(q: Quiver, v: str) -> Quiver:
    """Undo an expansion at ``v``: requires s^{-1}(v) = {f}, r(f) = v* != v and
    r^{-1}(v*) = {f}."""
    q.check_vertex(v)
    out = q.out_edges[v]
    if len(out) != 1:
        raise PreconditionError(f"{v!r} must emit exactly one edge to be contracted")
    f = q.edge_map[out[0]]
    star = f.dst
    if star == v or q.in_edges[star] != (f.id,):
        raise PreconditionError(f"edge {f.id!r} does not end at a vertex entered only by it")
    edges = [Edge(e.id, v if e.src == star else e.src, e.dst) for e in q.edges if e.id != f.id]
    return Quiver(tuple(w for w in q.vertices if w != star), tuple(edges))


# -- Drinen delays --------------------------------------------------------

DrinenVector = Mapping[str, int]
"""Nonnegative delays for vertices and edges; ids absent from the map count as 0."""


def _delay_value(d: DrinenVector, key: str) -> int:
    x = d.get(key, 0)
    if not isinstance(x, int) or x < 0:
        raise QuiverError(f"delay for {key!r} must be a nonnegative integer, got {x!r}")
    return x


def _check_drinen(q: Quiver, d: DrinenVector, kind: str) -> None:
    unknown = set(d) - set(q.vertices) - set(q.edge_map)
    if unknown:
        raise QuiverError(f"delays given for unknown ids: {sorted(unknown)}")
    fibers = q.out_edges if kind == "source" else q.in_edges
    for w in q.vertices:
        if fibers[w]:
            want = max(_delay_value(d, e) for e in fibers[w])
            if _delay_value(d, w) != want:
                raise QuiverError(
                    f"Drinen {kind}-vector invariant fails at {w!r}: d={_delay_value(d, w)}, max over edges={want}"
                )


def _vsup(v: str, i: int) -> str:
    return v if i == 0 else f"{v}^{i}"


def _vsub(v: str, i: int) -> str:
    return v if i == 0 else f"{v}_{i}"


def out_delay(q: Quiver, d: DrinenVector, strict: bool = True) -> Quiver:
    """Out-delayed quiver: each edge e leaves s(e)^{d(e)} and enters r(e)^0, with
    delay chains v^0 -> v^1 -> ... -> v^{d(v)}. Level 0 keeps the original name."""
    if strict:
        _check_drinen(q, d, "source")
    verts = [_vsup(v, i) for v in q.vertices for i in range(_delay_value(d, v) + 1)]
    edges = [Edge(e.id, _vsup(e.src, _delay_value(d, e.id)), e.dst) for e in q.edges]
    for v in q.vertices:
        edges += [Edge(f"f({v})^{i}", _vsup(v, i - 1), _vsup(v, i)) for i in range(1, _delay_value(d, v) + 1)]
    _named(verts, "vertex")
    _named([e.id for e in edges], "edge")
    return Quiver(tuple(verts), tuple(edges))


def in_delay(q: Quiver, d: DrinenVector, strict: bool = True) -> Quiver:
    """In-delayed quiver: each edge e leaves s(e)_0 and enters r(e)_{d(e)}, with
    delay chains v_{d(v)} -> ... -> v_1 -> v_0.

    ``strict=False`` skips the range-vector check and just builds the quiver.
    """
    if strict:
        _check_drinen(q, d, "range")
    verts = [_vsub(v, i) for v in q.vertices for i in range(_delay_value(d, v) + 1)]
    edges = [Edge(e.id, e.src, _vsub(e.dst, _delay_value(d, e.id))) for e in q.edges]
    for v in q.vertices:
        edges += [Edge(f"f({v})_{i}", _vsub(v, i), _vsub(v, i - 1)) for i in range(1, _delay_value(d, v) + 1)]
    _named(verts, "vertex")
    _named([e.id for e in edges], "edge")
    return Quiver(tuple(verts), tuple(edges))


def is_strictly_proper(d: DrinenVector, q: Quiver) -> bool:
    """Strict properness only restricts vertices of infinite valency. Quivers
    here are finite, so every valid finite source-vector is strictly proper."""
    _check_drinen(q, d, "source")
    return True


# -- heads and higher edge quivers ----------------------------------------


def attach_heads(q: Quiver, n: int) -> Quiver:
    """Attach a chain v_{n-1} -> ... -> v_1 -> v to every vertex v."""
    if n < 1:
        raise PreconditionError("head length parameter must be >= 1")
    verts = list(q.vertices)
    edges = list(q.edges)
    for v in q.vertices:
        verts += [f"{v}_{i}" for i in range(1, n)]
        edges += [Edge(f"e{i}^{v}", f"{v}_{i}", _vsub(v, i - 1)) for i in range(1, n)]
    _named(verts, "vertex")
    _named([e.id for e in edges], "edge")
    return Quiver(tuple(verts), tuple(edges))


def higher_edge(q: Quiver, n: int) -> Quiver:
    """Q^[n]: vertices are paths of length n-1 (ids joined by '/'); each path of
    length n gives one edge from its first n-1 edges to its last n-1 edges."""
    if n < 2:
        raise PreconditionError("higher edge quiver needs n >= 2")
    verts = ["/".join(p.edges) for p in paths_of_length(q, n - 1)]
    edges = [
        Edge("/".join(p.edges), "/".join(p.edges[:-1]), "/".join(p.edges[1:]))
        for p in paths_of_length(q, n)
    ]
    return Quiver(tuple(verts), tuple(edges))


# -- flow sequences -------------------------------------------------------

STANDARD_MOVES = ("in_split", "in_amalgamate", "out_split", "out_amalgamate", "expand", "contract")


class FlowError(QuiverError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"move {index} failed: {reason}")
        self.index = index
        self.reason = reason


def _partition_param(desc: Mapping[str, Any], kind: str) -> Partition:
    p = desc.get("partition")
    if isinstance(p, Partition):
        return p
    if not isinstance(p, Mapping):
        raise QuiverError("missing 'partition'")
    return Partition.from_json_obj(kind, p)


def apply_move(q: Quiver, desc: Mapping[str, Any]) -> Quiver:
    """Apply one standard move given as ``{"move": name, ...params}``."""
    name = desc.get("move")
    if name in ("in_split", "in_amalgamate"):
        p = _partition_param(desc, "in")
        return in_split(q, p) if name == "in_split" else in_amalgamate(q, p)
    if name in ("out_split", "out_amalgamate"):
        p = _partition_param(desc, "out")
        return out_split(q, p) if name == "out_split" else out_amalgamate(q, p)
    if name in ("expand", "contract"):
        v = desc.get("vertex")
        if not isinstance(v, str):
            raise QuiverError("missing 'vertex'")
        return expand(q, v) if name == "expand" else contract(q, v)
    raise QuiverError(f"not a standard move: {name!r}")


def apply_flow_sequence(q: Quiver, moves: Sequence[Mapping[str, Any]]) -> tuple[Quiver, list[Quiver]]:
    """Fold standard moves left to right; returns the result and every quiver
    along the way (starting with ``q``)."""
    log = [q]
    for i, desc in enumerate(moves):
        try:
            q = apply_move(q, desc)
        except QuiverError as exc:
            raise FlowError(i, str(exc)) from exc
        log.append(q)
    return q, log
