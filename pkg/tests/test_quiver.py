import itertools
import json

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverlpa.catalog import bowtie_through_b, esse_pair, line3, two_cycle, two_disjoint_loops
from quiverlpa.quiver import (
    Path,
    PreconditionError,
    Quiver,
    QuiverError,
    UndecidedError,
    bridge_paths,
    classify_vertices,
    closure_levels,
    cycles_meet,
    enumerate_quivers,
    from_incidence,
    hereditary_saturated_closure,
    incidence,
    is_hereditary,
    is_isomorphic,
    is_saturated,
    paths_of_length,
    reaches_set,
    tree,
)


@st.composite
def quivers(draw, max_vertices=5, max_edges=8):
    n = draw(st.integers(1, max_vertices))
    verts = [f"v{i}" for i in range(n)]
    m = draw(st.integers(0, max_edges))
    ends = draw(st.lists(st.tuples(st.sampled_from(verts), st.sampled_from(verts)), min_size=m, max_size=m))
    return Quiver.from_edges([(f"e{j}", s, r) for j, (s, r) in enumerate(ends)], vertices=verts)


class TestConstruction:
    def test_duplicate_edge_rejected(self):
        with pytest.raises(QuiverError):
            Quiver.from_edges([("a", "1", "2"), ("a", "2", "1")])

    def test_dangling_edge_rejected(self):
        with pytest.raises(QuiverError):
            Quiver(("1",), (("a", "1", "2"),))

    def test_duplicate_vertex_rejected(self):
        with pytest.raises(QuiverError):
            Quiver(("1", "1"), ())

    def test_sinks_sources(self):
        q = line3()
        assert q.sinks == {"3"} and q.sources == {"1"}
        assert q.is_regular("1") and not q.is_regular("3")

    def test_path_composability(self):
        q = line3()
        assert q.path("a", "b") == Path("1", ("a", "b"), "3")
        assert q.path("2").is_trivial
        with pytest.raises(QuiverError):
            q.path("b", "a")

    def test_unknown_vertex(self):
        with pytest.raises(QuiverError):
            line3().check_vertex("9")


class TestClassify:
    def test_line(self):
        assert classify_vertices(line3()) == {"1": "source", "2": "regular", "3": "sink"}

    def test_two_cycle_regular(self):
        assert set(classify_vertices(two_cycle()).values()) == {"regular"}

    def test_isolated_vertex(self):
        assert classify_vertices(Quiver(("x",), ())) == {"x": "both-source-and-sink"}


class TestReachability:
    def test_bowtie_reaches_a(self):
        q = bowtie_through_b(2, 3)
        assert all(reaches_set(q, v, ["A"]) for v in q.vertices)

    def test_tree_of_two_cycle(self):
        assert tree(two_cycle(), "1") == {"1", "2"}

    @given(quivers())
    @settings(max_examples=60, deadline=None)
    def test_tree_matches_networkx(self, q):
        g = nx.MultiDiGraph()
        g.add_nodes_from(q.vertices)
        g.add_edges_from((e.src, e.dst) for e in q.edges)
        v = q.vertices[0]
        assert tree(q, v) == nx.descendants(g, v) | {v}


class TestClosure:
    def test_line_saturation(self):
        levels = closure_levels(line3(), ["3"])
        assert levels[-1] == {"1", "2", "3"}
        assert [sorted(x) for x in levels] == [["3"], ["2", "3"], ["1", "2", "3"]]

    def test_bowtie_full(self):
        q = bowtie_through_b(2, 3)
        assert hereditary_saturated_closure(q, ["A"]) == set(q.vertices)

    def test_disjoint_loops_not_full(self):
        assert hereditary_saturated_closure(two_disjoint_loops(), ["1"]) == {"1"}

    @given(quivers(), st.data())
    @settings(max_examples=80, deadline=None)
    def test_closure_is_smallest_hereditary_saturated(self, q, data):
        x = data.draw(st.sets(st.sampled_from(q.vertices)))
        h = hereditary_saturated_closure(q, x)
        assert x <= h and is_hereditary(q, h) and is_saturated(q, h)
        # brute-force oracle: intersection of all hereditary saturated supersets
        best = set(q.vertices)
        for r in range(len(q.vertices) + 1):
            for cand in itertools.combinations(q.vertices, r):
                c = set(cand)
                if x <= c and is_hereditary(q, c) and is_saturated(q, c):
                    best &= c
        assert h == best


class TestBridgePaths:
    def test_line_keep_23(self):
        bp = bridge_paths(line3(), ["2", "3"])
        assert [p.edges for p in bp["1"]] == [("a",)]
        assert [p.edges for p in bp["2"]] == [("b",)]
        assert bp["3"] == []

    def test_two_cycle_keep_1(self):
        bp = bridge_paths(two_cycle(), ["1"])
        assert [p.edges for p in bp["1"]] == [("a", "b")]
        assert [p.edges for p in bp["2"]] == [("b",)]

    def test_cycle_avoiding_keep(self):
        with pytest.raises(PreconditionError):
            bridge_paths(two_disjoint_loops(), ["1"])

    def test_bowtie_count(self):
        bp = bridge_paths(bowtie_through_b(2, 3), ["A"])
        assert len(bp["A"]) == 6
        assert all(p.length == 4 for p in bp["A"])


class TestCyclesMeet:
    def test_two_cycle(self):
        assert cycles_meet(two_cycle(), ["1"])

    def test_disjoint_loops(self):
        assert not cycles_meet(two_disjoint_loops(), ["1"])

    def test_bowtie(self):
        assert cycles_meet(bowtie_through_b(2, 3), ["A"])

    @given(quivers(), st.data())
    @settings(max_examples=80, deadline=None)
    def test_matches_networkx(self, q, data):
        keep = data.draw(st.sets(st.sampled_from(q.vertices)))
        g = nx.DiGraph()
        g.add_nodes_from(v for v in q.vertices if v not in keep)
        g.add_edges_from((e.src, e.dst) for e in q.edges if e.src not in keep and e.dst not in keep)
        assert cycles_meet(q, keep) == nx.is_directed_acyclic_graph(g)


class TestIncidence:
    def test_q2_of_esse_pair(self):
        _, q2, _ = esse_pair()
        assert incidence(q2) == [[0, 2], [0, 1]]

    def test_from_incidence_q1(self):
        q1, _, _ = esse_pair()
        assert is_isomorphic(from_incidence([[0, 1], [0, 1]]), q1) is not None

    def test_negative_rejected(self):
        with pytest.raises(QuiverError):
            from_incidence([[0, -1], [0, 0]])

    def test_non_square_rejected(self):
        with pytest.raises(QuiverError):
            from_incidence([[0, 1]])

    @given(quivers())
    @settings(max_examples=60, deadline=None)
    def test_round_trip(self, q):
        back = from_incidence(incidence(q), list(q.vertices))
        assert incidence(back) == incidence(q)


class TestPaths:
    def test_counts_match_matrix_powers(self):
        q = bowtie_through_b(2, 3)
        assert len(paths_of_length(q, 4)) == sum(
            sum(row) for row in _mpow(incidence(q), 4)
        )


def _mpow(m, n):
    out = [[int(i == j) for j in range(len(m))] for i in range(len(m))]
    for _ in range(n):
        out = [[sum(out[i][k] * m[k][j] for k in range(len(m))) for j in range(len(m))] for i in range(len(m))]
    return out


class TestIsomorphism:
    def test_relabelled(self):
        q = bowtie_through_b(2, 2)
        ren = {v: f"z{v}" for v in q.vertices}
        r = Quiver.from_edges([(e.id + "'", ren[e.src], ren[e.dst]) for e in q.edges])
        iso = is_isomorphic(q, r)
        assert iso is not None
        for e in q.edges:
            img = r.edge_map[iso.edge_map[e.id]]
            assert (img.src, img.dst) == (iso.vertex_map[e.src], iso.vertex_map[e.dst])

    def test_multiplicity_matters(self):
        a = Quiver.from_edges([("x", "1", "2"), ("y", "1", "2")])
        b = Quiver.from_edges([("x", "1", "2"), ("y", "2", "1")])
        assert is_isomorphic(a, b) is None

    def test_bound(self):
        big = Quiver(tuple(str(i) for i in range(11)), ())
        with pytest.raises(UndecidedError):
            is_isomorphic(big, big)

    @given(quivers(max_vertices=4, max_edges=5), st.permutations(range(4)))
    @settings(max_examples=60, deadline=None)
    def test_agrees_with_networkx(self, q, perm):
        r = Quiver.from_edges(
            [(e.id, f"w{perm[int(e.src[1:])]}", f"w{perm[int(e.dst[1:])]}") for e in q.edges],
            vertices=[f"w{perm[int(v[1:])]}" for v in q.vertices],
        )
        assert is_isomorphic(q, r) is not None


class TestEnumeration:
    def test_small_counts(self):
        # oracle: one vertex with k loops, k = 0..3
        assert len(list(enumerate_quivers(1, 3))) == 4
        # two vertices, at most one edge: 1-vertex cases (2) plus 2-vertex: empty, loop, arrow
        assert len(list(enumerate_quivers(2, 1))) == 5

    def test_pairwise_non_isomorphic(self):
        fam = list(enumerate_quivers(2, 3))
        for a, b in itertools.combinations(fam, 2):
            assert is_isomorphic(a, b) is None


class TestSerialization:
    def test_json_round_trip(self):
        q = bowtie_through_b(1, 2)
        assert Quiver.from_json(q.to_json()).canonical() == q.canonical()

    def test_json_is_sorted(self):
        obj = json.loads(line3().to_json())
        assert obj["vertices"] == ["1", "2", "3"]

    def test_dot(self):
        dot = line3().to_dot()
        assert dot.startswith("digraph") and '"1" -> "2"' in dot

    def test_bad_json(self):
        with pytest.raises(QuiverError):
            Quiver.from_json_obj({"edges": []})
        with pytest.raises(QuiverError):
            Quiver.from_json_obj({"vertices": ["1"], "edges": [{"id": "a", "src": "1"}]})

    def test_missing_edges_means_none(self):
        assert Quiver.from_json_obj({"vertices": ["1"]}).edges == ()
