"""Elementary strong shift equivalence witnesses and shift equivalence checks
for nonnegative integer matrices and their quivers."""

from __future__ import annotations

import itertools
from collections import defaultdict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from .quiver import Edge, Quiver, QuiverError, _check_matrix, from_incidence, paths_of_length

__all__ = [
    "EsseWitness",
    "ShiftEquivalenceWitness",
    "ResourceError",
    "matmul",
    "matpow",
    "esse_from_factorization",
    "esse_witness",
    "verify_esse",
    "find_esse_factorization",
    "verify_shift_equivalence",
    "shift_witness_from_chain",
]

Matrix = list[list[int]]


class ResourceError(RuntimeError):
    pass


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    inner = len(b)
    if any(len(row) != inner for row in a):
        raise QuiverError("dimension mismatch in matrix product")
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matpow(a: Sequence[Sequence[int]], n: int) -> Matrix:
    out = identity(len(a))
    for _ in range(n):
        out = matmul(out, a)
    return out


# -- ESSE witnesses -------------------------------------------------------


@dataclass(frozen=True)
class EsseWitness:
    """A bridging quiver ``q3`` on the disjoint union of the two vertex sets,
    and bijections from each side's edges to length-2 paths of ``q3``."""

    q3: Quiver
    side1: frozenset[str]
    side2: frozenset[str]
    theta1: dict[str, tuple[str, str]] = field(hash=False)
    theta2: dict[str, tuple[str, str]] = field(hash=False)

    def to_json_obj(self) -> dict:
        return {
            "q3": self.q3.to_json_obj(),
            "side1": sorted(self.side1),
            "side2": sorted(self.side2),
            "theta1": {e: list(p) for e, p in sorted(self.theta1.items())},
            "theta2": {e: list(p) for e, p in sorted(self.theta2.items())},
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> EsseWitness:
        return cls(
            Quiver.from_json_obj(obj["q3"]),
            frozenset(obj["side1"]),
            frozenset(obj["side2"]),
            {e: tuple(p) for e, p in obj["theta1"].items()},
            {e: tuple(p) for e, p in obj["theta2"].items()},
        )


def esse_from_factorization(
    l: Sequence[Sequence[int]], r: Sequence[Sequence[int]]
) -> tuple[Quiver, Quiver, EsseWitness]:
    """Quivers with incidence matrices LR (vertices x0, x1, ...) and RL
    (vertices y0, y1, ...), plus the bridging witness with incidence
    [[0, L], [R, 0]]."""
    l = _check_matrix(l, square=False)
    r = _check_matrix(r, square=False)
    p = len(l)
    k = len(r)
    if any(len(row) != k for row in l) or any(len(row) != p for row in r):
        raise QuiverError(f"L must be p x k and R k x p; got {p}x{len(l[0]) if l else 0} and {k}x{len(r[0]) if r else 0}")
    xs = [f"x{i}" for i in range(p)]
    ys = [f"y{j}" for j in range(k)]
    q1 = from_incidence(matmul(l, r), xs)
    q2 = from_incidence(matmul(r, l), ys)
    edges = [
        Edge(f"L{i}.{j}#{c}", xs[i], ys[j]) for i in range(p) for j in range(k) for c in range(l[i][j])
    ] + [Edge(f"R{j}.{i}#{c}", ys[j], xs[i]) for j in range(k) for i in range(p) for c in range(r[j][i])]
    q3 = Quiver(tuple(xs + ys), tuple(edges))
    theta1 = _pair_with_paths(q1, q3)
    theta2 = _pair_with_paths(q2, q3)
    return q1, q2, EsseWitness(q3, frozenset(xs), frozenset(ys), theta1, theta2)


def _pair_with_paths(qi: Quiver, q3: Quiver) -> dict[str, tuple[str, str]]:
    side = set(qi.vertices)
    by_ends: dict[tuple[str, str], list[tuple[str, str]]] = defaultdict(list)
    for path in paths_of_length(q3, 2):
        if path.source in side and path.range in side:
            by_ends[path.source, path.range].append(path.edges)
    theta = {}
    for e in sorted(qi.edges):
        candidates = by_ends[e.src, e.dst]
        if not candidates:
            raise QuiverError(f"no unused length-2 path of the bridge matches edge {e.id!r}")
        theta[e.id] = candidates.pop(0)
    return theta


def esse_witness(q1: Quiver, q2: Quiver, q3: Quiver) -> EsseWitness:
    """Pair each edge of q1 and q2 with a length-2 path of the bridge q3 that has
    the same endpoints, in sorted order. The result still has to pass
    :func:`verify_esse`; leftover paths make it fail there."""
    return EsseWitness(
        q3, frozenset(q1.vertices), frozenset(q2.vertices), _pair_with_paths(q1, q3), _pair_with_paths(q2, q3)
    )


def verify_esse(q1: Quiver, q2: Quiver, w: EsseWitness) -> tuple[bool, list[str]]:
    """Check the three ESSE conditions; returns ``(ok, failures)`` where each
    failure names the condition ("vertex union", "edge split", "theta1", "theta2")."""
    failures = []
    v1, v2 = set(q1.vertices), set(q2.vertices)
    if v1 & v2 or set(w.q3.vertices) != v1 | v2 or w.side1 != v1 or w.side2 != v2:
        failures.append("vertex union: Q3 vertices must be the disjoint union of Q1 and Q2 vertices")
    for e in w.q3.edges:
        crossing = (e.src in v1 and e.dst in v2) or (e.src in v2 and e.dst in v1)
        if not crossing:
            failures.append(f"edge split: edge {e.id!r} does not cross between the two sides")
    for name, qi, theta in (("theta1", q1, w.theta1), ("theta2", q2, w.theta2)):
        side = set(qi.vertices)
        targets = {
            p.edges for p in paths_of_length(w.q3, 2) if p.source in side and p.range in side
        }
        if set(theta) != {e.id for e in qi.edges}:
            failures.append(f"{name}: domain is not the edge set")
            continue
        images = list(theta.values())
        if len(set(images)) != len(images) or set(images) != targets:
            failures.append(f"{name}: not a bijection onto length-2 paths within the side")
            continue
        for eid, (a, b) in theta.items():
            ea, eb = w.q3.edge_map[a], w.q3.edge_map[b]
            if ea.src != qi.s(eid) or eb.dst != qi.r(eid):
                failures.append(f"{name}: edge {eid!r} source/range not preserved")
    return not failures, failures


# -- factorization search -------------------------------------------------


def find_esse_factorization(
    a: Sequence[Sequence[int]],
    b: Sequence[Sequence[int]],
    entry_bound: int,
    dim_bound: int,
    budget: int = 5_000_000,
) -> tuple[Matrix, Matrix] | None:
    """Lexicographically least (L, R) with a = LR and b = RL and entries at
    most ``entry_bound``. None only means nothing exists within the bounds."""
    a = _check_matrix(a)
    b = _check_matrix(b)
    p, k = len(a), len(b)
    if k > dim_bound:
        return None
    vals = range(entry_bound + 1)
    l_count = (entry_bound + 1) ** (p * k)
    # R is solved column by column given L, so the cost is ~ l_count * p * (e+1)^k
    if l_count * max(1, p) * (entry_bound + 1) ** k > budget:
        raise ResourceError("search space exceeds the budget; lower entry_bound")
    for flat_l in itertools.product(vals, repeat=p * k):
        l = [list(flat_l[i * k:(i + 1) * k]) for i in range(p)]
        # column j of R must satisfy L @ R[:, j] == a[:, j]
        columns = []
        for j in range(p):
            target = [a[i][j] for i in range(p)]
            cands = [
                col for col in itertools.product(vals, repeat=k)
                if all(sum(l[i][t] * col[t] for t in range(k)) == target[i] for i in range(p))
            ]
            if not cands:
                break
            columns.append(cands)
        else:
            for r in _r_candidates(columns, k, p):
                if matmul(r, l) == b:
                    return l, r
    return None


def _r_candidates(columns: list[list[tuple[int, ...]]], k: int, p: int) -> list[Matrix]:
    """All R assembled from per-column candidates, sorted row-major."""
    return sorted(
        [[choice[j][t] for j in range(p)] for t in range(k)] for choice in itertools.product(*columns)
    )


# -- shift equivalence ----------------------------------------------------

SE_IDENTITIES = ("A^n=CD", "B^n=DC", "AC=CB", "DA=BD")


@dataclass(frozen=True)
class ShiftEquivalenceWitness:
    c: Matrix
    d: Matrix
    lag: int


def verify_shift_equivalence(
    a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], w: ShiftEquivalenceWitness
) -> tuple[bool, list[str]]:
    """Check the four lag-n identities exactly; failures are named by identity."""
    a = _check_matrix(a)
    b = _check_matrix(b)
    c = _check_matrix(w.c, square=False)
    d = _check_matrix(w.d, square=False)
    p, k = len(a), len(b)
    if len(c) != p or any(len(row) != k for row in c) or len(d) != k or any(len(row) != p for row in d):
        raise QuiverError("witness dimensions do not match A and B")
    if w.lag < 1:
        return False, ["lag must be >= 1"]
    checks = {
        "A^n=CD": matpow(a, w.lag) == matmul(c, d),
        "B^n=DC": matpow(b, w.lag) == matmul(d, c),
        "AC=CB": matmul(a, c) == matmul(c, b),
        "DA=BD": matmul(d, a) == matmul(b, d),
    }
    failed = [name for name in SE_IDENTITIES if not checks[name]]
    return not failed, failed


def shift_witness_from_chain(chain: Sequence[tuple[Matrix, Matrix]]) -> ShiftEquivalenceWitness:
    """Compose a strong shift equivalence chain A_0 = L_1 R_1, R_1 L_1 = A_1 = L_2 R_2, ...
    into a shift equivalence witness of lag len(chain): C = L_1 ... L_n, D = R_n ... R_1."""
    if not chain:
        raise QuiverError("empty chain")
    c = chain[0][0]
    d = chain[0][1]
    for l, r in chain[1:]:
        c = matmul(c, l)
        d = matmul(r, d)
    return ShiftEquivalenceWitness(c, d, len(chain))
