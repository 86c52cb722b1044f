"""Finite quivers: paths, reachability, hereditary/saturated closure, incidence
matrices and isomorphism testing."""

from __future__ import annotations

import itertools
import json
from collections import Counter, defaultdict
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

__all__ = [
    "Edge",
    "Path",
    "Quiver",
    "QuiverError",
    "PreconditionError",
    "UndecidedError",
    "Isomorphism",
    "classify_vertices",
    "reaches_set",
    "tree",
    "hereditary_saturated_closure",
    "closure_levels",
    "is_hereditary",
    "is_saturated",
    "bridge_paths",
    "cycles_meet",
    "incidence",
    "from_incidence",
    "is_isomorphic",
    "paths_of_length",
    "enumerate_quivers",
]


class QuiverError(ValueError):
    """Malformed quiver data or an unknown vertex/edge id."""


class PreconditionError(QuiverError):
    """An operation was called outside its domain."""


class UndecidedError(RuntimeError):
    """The exact answer is not computed at this size bound."""


class Edge(NamedTuple):
    id: str
    src: str
    dst: str


class Path(NamedTuple):
    """A path in a quiver. A trivial path has no edges and ``source == range``."""

    source: str
    edges: tuple[str, ...]
    range: str

    @classmethod
    def trivial(cls, v: str) -> Path:
        return cls(v, (), v)

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def is_trivial(self) -> bool:
        return not self.edges

    def __str__(self) -> str:
        return " ".join(self.edges) if self.edges else self.source


@dataclass(frozen=True)
class Quiver:
    """A finite quiver with named vertices and edges.

    Vertex order is the order given at construction; canonical (serialized)
    forms sort ids lexicographically.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    _vset: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        verts = tuple(str(v) for v in self.vertices)
        edges = tuple(Edge(str(e[0]), str(e[1]), str(e[2])) for e in self.edges)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        vset = frozenset(verts)
        if len(vset) != len(verts):
            dup = [v for v, c in Counter(verts).items() if c > 1]
            raise QuiverError(f"duplicate vertex ids: {sorted(dup)}")
        ids = Counter(e.id for e in edges)
        dup = [e for e, c in ids.items() if c > 1]
        if dup:
            raise QuiverError(f"duplicate edge ids: {sorted(dup)}")
        for e in edges:
            if e.src not in vset or e.dst not in vset:
                raise QuiverError(f"edge {e.id!r} has an endpoint outside the vertex set")
        object.__setattr__(self, "_vset", vset)

    # -- construction helpers ---------------------------------------------

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, str]], vertices: Iterable[str] = ()) -> Quiver:
        """Build a quiver from ``(id, src, dst)`` triples; vertices are collected
        in first-seen order after any explicitly listed ones."""
        edges = [Edge(*e) for e in edges]
        verts = list(dict.fromkeys(vertices))
        seen = set(verts)
        for e in edges:
            for v in (e.src, e.dst):
                if v not in seen:
                    seen.add(v)
                    verts.append(v)
        return cls(tuple(verts), tuple(edges))

    # -- lookup -----------------------------------------------------------

    def __contains__(self, v: object) -> bool:
        return v in self._vset

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def out_edges(self) -> dict[str, tuple[str, ...]]:
        """s^{-1}(v), sorted by edge id."""
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e.id)
        return {v: tuple(sorted(ids)) for v, ids in out.items()}

    @cached_property
    def in_edges(self) -> dict[str, tuple[str, ...]]:
        """r^{-1}(v), sorted by edge id."""
        inc: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.dst].append(e.id)
        return {v: tuple(sorted(ids)) for v, ids in inc.items()}

    @cached_property
    def successors(self) -> dict[str, frozenset[str]]:
        return {v: frozenset(self.edge_map[e].dst for e in ids) for v, ids in self.out_edges.items()}

    def s(self, edge: str) -> str:
        return self.edge(edge).src

    def r(self, edge: str) -> str:
        return self.edge(edge).dst

    def edge(self, edge_id: str) -> Edge:
        try:
            return self.edge_map[edge_id]
        except KeyError:
            raise QuiverError(f"unknown edge {edge_id!r}") from None

    def check_vertex(self, v: str) -> str:
        if v not in self._vset:
            raise QuiverError(f"unknown vertex {v!r}")
        return v

    def check_vertices(self, vs: Iterable[str]) -> frozenset[str]:
        vs = frozenset(vs)
        unknown = vs - self._vset
        if unknown:
            raise QuiverError(f"unknown vertices: {sorted(unknown)}")
        return vs

    @property
    def sinks(self) -> frozenset[str]:
        return frozenset(v for v in self.vertices if not self.out_edges[v])

    @property
    def sources(self) -> frozenset[str]:
        return frozenset(v for v in self.vertices if not self.in_edges[v])

    def is_regular(self, v: str) -> bool:
        # no infinite emitters: regular just means "not a sink"
        return bool(self.out_edges[self.check_vertex(v)])

    def path(self, *edge_ids: str) -> Path:
        """The path through ``edge_ids``; a single vertex id gives a trivial path."""
        if len(edge_ids) == 1 and edge_ids[0] in self._vset and edge_ids[0] not in self.edge_map:
            return Path.trivial(edge_ids[0])
        if not edge_ids:
            raise QuiverError("empty path needs a vertex")
        edges = [self.edge(e) for e in edge_ids]
        for a, b in zip(edges, edges[1:]):
            if a.dst != b.src:
                raise QuiverError(f"edges {a.id!r} and {b.id!r} are not composable")
        return Path(edges[0].src, tuple(edge_ids), edges[-1].dst)

    def path_vertices(self, p: Path) -> frozenset[str]:
        return frozenset([p.source, *(self.edge_map[e].dst for e in p.edges)])

    # -- serialization ----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in sorted(self.edges)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> Quiver:
        try:
            verts = tuple(obj["vertices"])
            edges = tuple(Edge(d["id"], d["src"], d["dst"]) for d in obj.get("edges", []))
        except (KeyError, TypeError) as exc:
            raise QuiverError(f"bad quiver JSON: {exc}") from None
        return cls(verts, edges)

    @classmethod
    def from_json(cls, text: str) -> Quiver:
        return cls.from_json_obj(json.loads(text))

    def canonical(self) -> Quiver:
        """Same quiver with vertices and edges in sorted id order."""
        return Quiver(tuple(sorted(self.vertices)), tuple(sorted(self.edges)))

    def to_dot(self, name: str = "Q") -> str:
        lines = [f"digraph {json.dumps(name)} {{"]
        for v in sorted(self.vertices):
            lines.append(f"  {json.dumps(v, ensure_ascii=False)};")
        for e in sorted(self.edges):
            lines.append(
                f"  {json.dumps(e.src, ensure_ascii=False)} -> {json.dumps(e.dst, ensure_ascii=False)}"
                f" [label={json.dumps(e.id, ensure_ascii=False)}];"
            )
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        body = ", ".join(f"{e.id}:{e.src}->{e.dst}" for e in self.edges)
        return f"Quiver({len(self.vertices)} vertices; {body})"


# -- vertex classification and reachability -------------------------------


def classify_vertices(q: Quiver) -> dict[str, str]:
    out = {}
    for v in q.vertices:
        emits, receives = bool(q.out_edges[v]), bool(q.in_edges[v])
        if not emits and not receives:
            out[v] = "both-source-and-sink"
        elif not emits:
            out[v] = "sink"
        elif not receives:
            out[v] = "source"
        else:
            out[v] = "regular"
    return out


def _forward_closure(q: Quiver, start: Iterable[str]) -> set[str]:
    seen = set(start)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for w in q.successors[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def reaches_set(q: Quiver, v: str, targets: Iterable[str]) -> bool:
    """Whether some (possibly trivial) path runs from ``v`` into ``targets``."""
    q.check_vertex(v)
    targets = q.check_vertices(targets)
    return not targets.isdisjoint(_forward_closure(q, [v]))


def tree(q: Quiver, v: str | Iterable[str]) -> frozenset[str]:
    """T(v): every vertex reachable from ``v`` (or from any vertex of a set)."""
    start = [q.check_vertex(v)] if isinstance(v, str) else list(q.check_vertices(v))
    return frozenset(_forward_closure(q, start))


def closure_levels(q: Quiver, x: Iterable[str]) -> list[frozenset[str]]:
    """The increasing chain Λ_0(X) ⊆ Λ_1(X) ⊆ ... up to its fixpoint (inclusive)."""
    level = tree(q, q.check_vertices(x))
    levels = [level]
    while True:
        grown = level | {
            y for y in q.vertices if q.out_edges[y] and q.successors[y] <= level
        }
        if grown == level:
            return levels
        level = frozenset(grown)
        levels.append(level)


def hereditary_saturated_closure(q: Quiver, x: Iterable[str]) -> frozenset[str]:
    return closure_levels(q, x)[-1]


def is_hereditary(q: Quiver, h: Iterable[str]) -> bool:
    h = set(h)
    return all(q.edge_map[e].dst in h for v in h for e in q.out_edges[v])


def is_saturated(q: Quiver, h: Iterable[str]) -> bool:
    h = set(h)
    return all(v in h for v in q.vertices if q.out_edges[v] and q.successors[v] <= h)


# -- bridge paths (B_v) and cycle hypothesis ------------------------------


def bridge_paths(q: Quiver, keep: Iterable[str], vertices: Iterable[str] | None = None) -> dict[str, list[Path]]:
    """B_v for each vertex: nontrivial paths from v that end in ``keep`` and whose
    intermediate vertices all lie outside ``keep``.

    Raises PreconditionError when a cycle avoiding ``keep`` is reachable, since
    B_v would then be infinite.
    """
    keep = q.check_vertices(keep)
    todo = q.vertices if vertices is None else [q.check_vertex(v) for v in vertices]
    result: dict[str, list[Path]] = {}
    for v in todo:
        found: list[Path] = []
        on_stack = set() if v in keep else {v}

        def walk(at: str, edges: list[str]) -> None:
            for eid in q.out_edges[at]:
                dst = q.edge_map[eid].dst
                edges.append(eid)
                if dst in keep:
                    found.append(Path(v, tuple(edges), dst))
                elif dst in on_stack:
                    raise PreconditionError(
                        f"cycle avoiding the kept set through {dst!r} (path {' '.join(edges)})"
                    )
                else:
                    on_stack.add(dst)
                    walk(dst, edges)
                    on_stack.discard(dst)
                edges.pop()

        walk(v, [])
        result[v] = sorted(found, key=lambda p: p.edges)
    return result


def cycles_meet(q: Quiver, keep: Iterable[str]) -> bool:
    """True iff every cycle of ``q`` passes through ``keep``."""
    keep = q.check_vertices(keep)
    # Kahn's algorithm on the subquiver induced by the dropped vertices
    rest = [v for v in q.vertices if v not in keep]
    rest_set = set(rest)
    indeg = {v: 0 for v in rest}
    for e in q.edges:
        if e.src in rest_set and e.dst in rest_set:
            indeg[e.dst] += 1
    queue = [v for v in rest if indeg[v] == 0]
    removed = 0
    while queue:
        u = queue.pop()
        removed += 1
        for eid in q.out_edges[u]:
            w = q.edge_map[eid].dst
            if w in rest_set:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
    return removed == len(rest)


def paths_of_length(q: Quiver, n: int) -> list[Path]:
    """All paths with exactly ``n`` edges (trivial paths when n == 0), in
    lexicographic order of their edge sequences."""
    if n < 0:
        raise ValueError("negative path length")
    if n == 0:
        return [Path.trivial(v) for v in sorted(q.vertices)]
    paths = [Path(e.src, (e.id,), e.dst) for e in sorted(q.edges)]
    for _ in range(n - 1):
        paths = [
            Path(p.source, p.edges + (eid,), q.edge_map[eid].dst)
            for p in paths
            for eid in q.out_edges[p.range]
        ]
    return sorted(paths, key=lambda p: p.edges)


# -- incidence matrices ---------------------------------------------------


def incidence(q: Quiver) -> list[list[int]]:
    """Entry (i, j) counts edges from ``q.vertices[i]`` to ``q.vertices[j]``."""
    index = {v: i for i, v in enumerate(q.vertices)}
    m = [[0] * len(index) for _ in index]
    for e in q.edges:
        m[index[e.src]][index[e.dst]] += 1
    return m


def _check_matrix(m: Sequence[Sequence[int]], square: bool = True) -> list[list[int]]:
    rows = [list(r) for r in m]
    width = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != width:
            raise QuiverError("ragged matrix")
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                raise QuiverError(f"matrix entries must be nonnegative integers, got {x!r}")
    if square and width != len(rows):
        raise QuiverError(f"matrix is {len(rows)}x{width}, not square")
    return rows


def from_incidence(m: Sequence[Sequence[int]], names: Sequence[str] | None = None) -> Quiver:
    """The quiver whose incidence matrix is ``m``. Edge ids are ``u>v#k``."""
    rows = _check_matrix(m)
    names = [f"v{i}" for i in range(len(rows))] if names is None else [str(x) for x in names]
    if len(names) != len(rows):
        raise QuiverError("wrong number of vertex names")
    edges = [
        Edge(f"{names[i]}>{names[j]}#{k}", names[i], names[j])
        for i, row in enumerate(rows)
        for j, count in enumerate(row)
        for k in range(count)
    ]
    return Quiver(tuple(names), tuple(edges))


# -- isomorphism ----------------------------------------------------------


@dataclass(frozen=True)
class Isomorphism:
    vertex_map: dict[str, str]
    edge_map: dict[str, str]


def _multiplicities(q: Quiver) -> dict[tuple[str, str], list[str]]:
    mult: dict[tuple[str, str], list[str]] = defaultdict(list)
    for e in sorted(q.edges):
        mult[e.src, e.dst].append(e.id)
    return mult


def _profile(q: Quiver, v: str, mult) -> tuple[int, int, int]:
    return (len(q.out_edges[v]), len(q.in_edges[v]), len(mult.get((v, v), ())))


def is_isomorphic(a: Quiver, b: Quiver, max_vertices: int = 10) -> Isomorphism | None:
    """A source/range preserving bijection ``a -> b``, or None if there is none.

    Exact for up to ``max_vertices`` vertices; larger inputs raise
    UndecidedError unless cheap invariants already tell them apart.
    """
    if len(a.vertices) != len(b.vertices) or len(a.edges) != len(b.edges):
        return None
    ma, mb = _multiplicities(a), _multiplicities(b)
    pa = {v: _profile(a, v, ma) for v in a.vertices}
    pb = {v: _profile(b, v, mb) for v in b.vertices}
    if sorted(pa.values()) != sorted(pb.values()):
        return None
    if len(a.vertices) > max_vertices:
        raise UndecidedError(f"isomorphism undecided above {max_vertices} vertices")

    # most constrained first: rare profiles, then high degree
    freq = Counter(pa.values())
    order = sorted(a.vertices, key=lambda v: (freq[pa[v]], -sum(pa[v][:2]), v))
    candidates = {v: [w for w in sorted(b.vertices) if pb[w] == pa[v]] for v in order}
    phi: dict[str, str] = {}
    used: set[str] = set()

    def count(m, u, v) -> int:
        return len(m.get((u, v), ()))

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in candidates[v]:
            if w in used:
                continue
            if any(
                count(ma, v, u) != count(mb, w, phi[u]) or count(ma, u, v) != count(mb, phi[u], w)
                for u in phi
            ):
                continue
            phi[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del phi[v]
            used.discard(w)
        return False

    if not extend(0):
        return None
    edge_map = {}
    for (u, v), ids in ma.items():
        for x, y in zip(ids, mb[phi[u], phi[v]]):
            edge_map[x] = y
    return Isomorphism(dict(phi), edge_map)


# -- exhaustive small families --------------------------------------------


def _canonical_matrix(m: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    n = len(m)
    return min(
        tuple(tuple(m[p[i]][p[j]] for j in range(n)) for i in range(n))
        for p in itertools.permutations(range(n))
    )


def enumerate_quivers(max_vertices: int, max_edges: int, min_vertices: int = 1) -> Iterator[Quiver]:
    """Every quiver with the given size bounds, one per isomorphism class.

    Vertices are named ``"1"``, ``"2"``, ...; intended for small exhaustive tests.
    """
    for n in range(min_vertices, max_vertices + 1):
        cells = [(i, j) for i in range(n) for j in range(n)]
        seen = set()
        for total in range(max_edges + 1):
            for combo in itertools.combinations_with_replacement(range(len(cells)), total):
                m = [[0] * n for _ in range(n)]
                for c in combo:
                    i, j = cells[c]
                    m[i][j] += 1
                key = _canonical_matrix(tuple(map(tuple, m)))
                if key in seen:
                    continue
                seen.add(key)
                yield from_incidence(key, [str(i + 1) for i in range(n)])
