"""Small named quivers used throughout the tests, the CLI and the docs."""

from __future__ import annotations

from .quiver import Quiver


def line3() -> Quiver:
    """1 --a--> 2 --b--> 3"""
    return Quiver.from_edges([("a", "1", "2"), ("b", "2", "3")])


def two_cycle() -> Quiver:
    """1 --a--> 2 --b--> 1"""
    return Quiver.from_edges([("a", "1", "2"), ("b", "2", "1")])


def loop(v: str = "v", e: str = "a") -> Quiver:
    return Quiver.from_edges([(e, v, v)])


def rose(petals: int, v: str = "v") -> Quiver:
    return Quiver.from_edges([(f"x{i}", v, v) for i in range(1, petals + 1)])


def two_disjoint_loops() -> Quiver:
    return Quiver.from_edges([("a", "1", "1"), ("b", "2", "2")])


def bowtie_through_b(m: int, n: int) -> Quiver:
    """A -> v_i -> B for i <= n, and B -> w_j -> A for j <= m: every cycle through
    A has length 4 and there are m*n of them."""
    edges = []
    for i in range(1, n + 1):
        edges += [(f"a{i}", "A", f"v{i}"), (f"b{i}", f"v{i}", "B")]
    for j in range(1, m + 1):
        edges += [(f"c{j}", "B", f"w{j}"), (f"d{j}", f"w{j}", "A")]
    return Quiver.from_edges(edges)


def fan_through_c(m: int, n: int) -> Quiver:
    """A -> v_i -> B (i <= n), A -> w_j -> B (j <= m), then B -> C -> A: m+n
    cycles through A, each of length 4."""
    edges = []
    for i in range(1, n + 1):
        edges += [(f"a{i}", "A", f"v{i}"), (f"b{i}", f"v{i}", "B")]
    for j in range(1, m + 1):
        edges += [(f"c{j}", "A", f"w{j}"), (f"d{j}", f"w{j}", "B")]
    edges += [("g", "B", "C"), ("h", "C", "A")]
    return Quiver.from_edges(edges)


def esse_pair() -> tuple[Quiver, Quiver, Quiver]:
    """Q1 (x1 -> x2 plus a loop at x2), Q2 (two edges y1 -> y2 plus a loop at
    y2) and the bipartite quiver Q3 on all four vertices bridging them."""
    q1 = Quiver.from_edges([("p", "x1", "x2"), ("l1", "x2", "x2")])
    q2 = Quiver.from_edges([("s", "y1", "y2"), ("t", "y1", "y2"), ("l2", "y2", "y2")])
    q3 = Quiver.from_edges(
        [
            ("u1", "y1", "x1"),
            ("u2", "y1", "x1"),
            ("k", "y2", "x2"),
            ("m", "x1", "y2"),
            ("n", "x2", "y2"),
        ],
        vertices=["x1", "x2", "y1", "y2"],
    )
    return q1, q2, q3


def higher_edge_example() -> Quiver:
    """alpha: L -> T, beta: T -> R, gamma: L -> R, delta: loop at R."""
    return Quiver.from_edges(
        [("alpha", "L", "T"), ("beta", "T", "R"), ("gamma", "L", "R"), ("delta", "R", "R")]
    )


def higher_edge_example_q2() -> Quiver:
    """The displayed second higher edge quiver of :func:`higher_edge_example`."""
    return Quiver.from_edges(
        [
            ("alpha/beta", "alpha", "beta"),
            ("beta/delta", "beta", "delta"),
            ("gamma/delta", "gamma", "delta"),
            ("delta/delta", "delta", "delta"),
        ]
    )
