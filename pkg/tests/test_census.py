import math
from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from hyperchroma import (
    Hypergraph,
    HypergraphError,
    Pattern,
    copies_at,
    delta_H,
    generate,
    link,
    max_degree,
    max_jl_degree,
    triangle_family,
    two_edge_pattern,
)
from hyperchroma.census import (
    all_copy_sets,
    copy_table,
    format_pattern,
    is_connected,
    is_triangle,
    named_pattern,
    parse_pattern,
    rooted_copy_count,
)
from tests.strategies import hypergraphs

PATH = Pattern(Hypergraph(3, 2, [(0, 1), (1, 2)]), name="path")
K5 = Hypergraph(5, 2, list(combinations(range(5), 2)))


def brute_copies(G, H):
    """Edge sets of G that are images of H under an injective vertex map."""
    found = set()
    for phi in permutations(range(G.vertex_count), H.vertex_count):
        image = frozenset(tuple(sorted(phi[x] for x in e)) for e in H.edges)
        if all(e in G.edge_set for e in image):
            found.add(image)
    return found


class TestFrozenExamples:
    def test_path_in_k5_middle_root(self):
        assert rooted_copy_count(K5, PATH, 1, 0) == 6

    def test_path_in_k5_end_root(self):
        assert rooted_copy_count(K5, PATH, 0, 3) == 12

    def test_delta_path_k5(self):
        assert delta_H(K5, PATH) == (6, 1)

    def test_delta_edgeless(self):
        assert delta_H(Hypergraph.empty(5, 2), PATH) == (0, 0)

    def test_k4minus_on_fano_matches_brute_force(self, fano):
        k4 = named_pattern("K4-")
        assert len(brute_copies(fano, k4.hypergraph)) == 0
        assert delta_H(fano, k4)[0] == 0

    def test_copies_at_absent_vertex(self, g0):
        P = Pattern(Hypergraph(3, 3, [(0, 1, 2)]), root=0)
        G = Hypergraph(6, 3, list(g0.edges))
        assert len(copies_at(G, P, 5).copies) == 0

    def test_two_k4minus_sharing_root(self):
        k4 = named_pattern("K4-").with_root(0)
        base = k4.hypergraph.edges
        second = [tuple(sorted({0: 0, 1: 4, 2: 5, 3: 6}[v] for v in e)) for e in base]
        G = Hypergraph(7, 3, list(base) + second)
        T = copies_at(G, k4, 0)
        assert T.copies.edges == ((1, 2, 3), (4, 5, 6))

    def test_single_edge_pattern_gives_link(self, g0):
        for root in range(3):
            P = Pattern(Hypergraph(3, 3, [(0, 1, 2)]), root=root)
            assert copies_at(g0, P, 2).copies.edges == link(g0, {2}, 3).edges

    def test_triangle_family(self):
        fam = triangle_family()
        assert [P.name for P in fam] == ["C3", "F5", "K4-"]
        assert fam[2].v == 4
        for P in fam:
            assert is_triangle(*P.hypergraph.edges)
            assert is_connected(P.hypergraph)

    def test_is_triangle_examples(self):
        a, b, c, d = range(4)
        assert is_triangle((a, b, c), (b, c, d), (a, b, d))
        assert not is_triangle((0, 1, 2), (0, 1, 2), (2, 3, 4))
        assert not is_triangle((0, 1, 2), (3, 4, 5), (6, 7, 8))

    def test_connectivity_examples(self):
        assert is_connected(Hypergraph(3, 3, [(0, 1, 2)]))
        assert not is_connected(Hypergraph(6, 3, [(0, 1, 2), (3, 4, 5)]))

    def test_two_edge_pattern_shape(self):
        H = two_edge_pattern(4, 2).hypergraph
        assert H.vertex_count == 6 and len(set(H.edges[0]) & set(H.edges[1])) == 2


class TestPatternIO:
    def test_round_trip_with_root(self):
        P = named_pattern("F5").with_root(3)
        Q = parse_pattern(format_pattern(P), "F5")
        assert Q == P

    def test_disconnected_pattern_rejected(self):
        with pytest.raises(HypergraphError):
            Pattern(Hypergraph(6, 3, [(0, 1, 2), (3, 4, 5)]))

    def test_unrooted_copies_at_rejected(self, g0):
        with pytest.raises(HypergraphError):
            copies_at(g0, named_pattern("C3"), 0)

    def test_named_two_edge(self):
        assert named_pattern("H2:4") == two_edge_pattern(4, 2)


class TestProperties:
    @given(hypergraphs(max_n=6, max_rank=3, uniform=True, max_edges=10))
    def test_copy_table_matches_brute_force(self, G):
        for P in triangle_family()[1:]:  # C3 needs 6 vertices, covered below
            if G.rank != 3:
                continue
            assert set(copy_table(G, P.hypergraph)) == brute_copies(G, P.hypergraph)

    @given(hypergraphs(max_n=7, max_rank=3, uniform=True, max_edges=12))
    def test_all_copy_sets_agree_with_copies_at(self, G):
        if G.rank != 3:
            return
        for P in triangle_family():
            P = P.with_root(0)
            table = all_copy_sets(G, P)
            for u in range(G.vertex_count):
                assert table[u].edges == copies_at(G, P, u).copies.edges

    @given(hypergraphs(max_n=7, max_rank=3, uniform=True, max_edges=12))
    def test_delta_is_min_over_roots(self, G):
        if G.rank != 3:
            return
        P = named_pattern("K4-")
        val, root = delta_H(G, P)
        per_root = [max((rooted_copy_count(G, P, v, u) for u in range(G.vertex_count)), default=0) for v in range(P.v)]
        assert val == min(per_root) and per_root[root] == val

    @given(hypergraphs(max_n=8, max_rank=3, uniform=True, max_edges=12))
    def test_copy_sets_bounded_by_rooted_counts(self, G):
        if G.rank != 3:
            return
        for P in triangle_family():
            for v in range(P.v):
                Pv = P.with_root(v)
                for u in range(G.vertex_count):
                    assert len(copies_at(G, Pv, u).copies) <= rooted_copy_count(G, P, v, u)

    @given(hypergraphs(max_n=8, max_rank=3, uniform=True, max_edges=12), st.randoms(use_true_random=False))
    def test_delta_invariant_under_relabeling(self, G, rnd):
        perm = list(range(G.vertex_count))
        rnd.shuffle(perm)
        H = Hypergraph(G.vertex_count, G.rank, [tuple(perm[v] for v in e) for e in G.edges])
        for P in triangle_family():
            assert delta_H(G, P)[0] == delta_H(H, P)[0]

    @given(st.integers(0, 2**32), st.integers(10, 16), st.integers(5, 40))
    def test_f5_root_bound(self, seed, n, m):
        # with f = Delta^(1/2) / Delta_{3,2}, copies of F5 at its doubled vertex number at most Delta^2 / f^2
        G = generate("uniform_random", {"n": n, "m": min(m, 200), "k": 3}, seed)
        big, co = max_degree(G, 3), max_jl_degree(G, 3, 2)
        if co == 0:
            return
        f = math.sqrt(big) / co
        F5 = named_pattern("F5")
        worst = max(rooted_copy_count(G, F5, 0, u) for u in range(G.vertex_count))
        assert worst <= big**2 / f**2 + 1e-9
