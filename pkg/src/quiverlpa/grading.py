"""Edge weights that make every collapsed path homogeneous of degree 1."""

from __future__ import annotations

from collections import defaultdict

from .leavitt import Grading
from .moves import CollapseResult
from .quiver import Path, Quiver, QuiverError

__all__ = ["GradingInfeasible", "solve_collapse_grading"]


class GradingInfeasible(QuiverError):
    """No positive weights in (1/n)Z give every origin path total weight 1."""

    def __init__(self, constraints: list[Path], n: int):
        names = ", ".join(" ".join(p.edges) for p in constraints)
        super().__init__(f"no positive (1/{n})Z weights give weight 1 to each of: {names}")
        self.constraints = constraints
        self.denominator = n


def _components(paths: list[Path]) -> list[list[Path]]:
    # paths sharing an edge constrain each other; solve each group on its own
    parent = list(range(len(paths)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[str, int] = {}
    for i, p in enumerate(paths):
        for e in p.edges:
            if e in owner:
                parent[find(i)] = find(owner[e])
            else:
                owner[e] = i
    groups: dict[int, list[Path]] = defaultdict(list)
    for i, p in enumerate(paths):
        groups[find(i)].append(p)
    return list(groups.values())


def _solve_group(paths: list[Path], n: int) -> dict[str, int] | None:
    """Lexicographically least positive integer solution of
    sum(x_e for e in path) == n for every path, or None."""
    variables = sorted({e for p in paths for e in p.edges})
    index = {e: i for i, e in enumerate(variables)}
    rows = [[index[e] for e in p.edges] for p in paths]
    touching: dict[int, list[int]] = defaultdict(list)
    for r, row in enumerate(rows):
        for i in set(row):
            touching[i].append(r)
    # a row is decided once its last variable (in assignment order) is set
    last_var = [max(row) for row in rows]
    x = [0] * len(variables)

    def feasible(i: int) -> bool:
        for r in touching[i]:
            row = rows[r]
            assigned = sum(x[j] for j in row if j <= i)
            free = sum(1 for j in row if j > i)
            if last_var[r] == i:
                if assigned != n:
                    return False
            elif assigned + free > n or assigned + free * n < n:
                return False
        return True

    def search(i: int) -> bool:
        if i == len(variables):
            return True
        for value in range(1, n + 1):
            x[i] = value
            if feasible(i) and search(i + 1):
                return True
        x[i] = 0
        return False

    if not search(0):
        return None
    return {e: x[index[e]] for e in variables}


def solve_collapse_grading(q: Quiver, c: CollapseResult) -> Grading:
    """Weights with common denominator ``c.n_max``: each origin path has total
    weight 1, edges on no origin path get weight 1, all weights are positive,
    and the weight vector (edges in id order) is lexicographically least.

    Raises GradingInfeasible with the offending group of paths otherwise.
    """
    n = c.n_max
    paths = c.origin_paths
    for p in paths:
        for e in p.edges:
            q.edge(e)
    weights = {e.id: n for e in q.edges}
    for group in _components(paths):
        sol = _solve_group(group, n)
        if sol is None:
            raise GradingInfeasible(group, n)
        weights.update(sol)
    return Grading(n, weights)
