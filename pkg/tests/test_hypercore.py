from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from hyperchroma import (
    Hypergraph,
    HypergraphError,
    SparsityProfile,
    b_codegree,
    degree,
    induced,
    is_sparse,
    link,
    load,
    max_degree,
    max_jl_degree,
    profile,
    save,
)
from hyperchroma.hypercore import ceil_root, format_hgt, parse_hgt, restrict
from tests.strategies import hypergraphs


def brute_jl(G, j, l):
    best = 0
    for A in combinations(range(G.vertex_count), l):
        best = max(best, sum(1 for e in G.edges if len(e) == j and set(A) <= set(e)))
    return best


def brute_codegree(G, b):
    best = 0
    for v, w in permutations(range(G.vertex_count), 2):
        cnt = 0
        for e in G.edges:
            for f in G.edges:
                if e != f and v in e and w in f and len(set(e) & set(f)) == b:
                    cnt += 1
        best = max(best, cnt)
    return best


class TestFrozenExamples:
    def test_degree_g0(self, g0):
        assert degree(g0, {1, 2}, 3) == 2

    def test_degree_isolated_vertex(self):
        G = Hypergraph(4, 3, [(0, 1, 2)])
        assert degree(G, {3}, 3) == 0

    def test_degree_fano_every_point(self, fano):
        assert [degree(fano, {v}, 3) for v in range(7)] == [3] * 7

    def test_link_g0(self, g0):
        assert link(g0, {2}, 3).edges == ((0, 1), (1, 3), (3, 4))

    def test_link_of_absent_set_is_empty(self, g0):
        assert len(link(g0, {0, 4}, 3)) == 0

    def test_link_fano_is_perfect_matching(self, fano):
        for v in range(7):
            L = link(fano, {v}, 3)
            covered = [w for e in L.edges for w in e]
            assert len(L) == 3 and sorted(covered) == sorted(set(range(7)) - {v})

    def test_max_jl_degree(self, g0, fano):
        assert max_jl_degree(g0, 3, 2) == 2
        assert max_jl_degree(Hypergraph.empty(5, 3), 3, 2) == 0
        assert max_jl_degree(fano, 3, 2) == 1

    def test_b_codegree(self, g0, fano):
        assert b_codegree(Hypergraph.empty(4, 3), 2) == 0
        assert b_codegree(g0, 2) == brute_codegree(g0, 2)
        assert b_codegree(fano, 2) == 0

    def test_is_sparse_examples(self, g0, fano):
        assert is_sparse(Hypergraph.empty(5, 3), SparsityProfile(1, {2: 1, 3: 1})).ok
        rep = is_sparse(g0, SparsityProfile(3, {2: 1.0, 3: 1.0}))
        # Delta_{3,2} = 2 > 3^(1/2): the one violation
        assert [(v.j, v.l, v.observed) for v in rep.violations] == [(3, 2, 2)]
        assert is_sparse(fano, SparsityProfile(3, {2: 1.0, 3: 1.0})).ok

    def test_induced_examples(self, g0):
        sub, ids = induced(g0, range(5))
        assert sub == g0 and ids == list(range(5))
        sub, ids = induced(g0, {0, 1, 2})
        assert sub.edges == ((0, 1, 2),) and ids == [0, 1, 2]
        sub, ids = induced(g0, ())
        assert sub.vertex_count == 0 and len(sub) == 0

    def test_profile_of_fano(self, fano):
        prof = profile(fano)
        assert prof.delta == 3
        assert is_sparse(fano, prof).ok


class TestValidation:
    def test_rejects_out_of_range(self):
        with pytest.raises(HypergraphError):
            Hypergraph(3, 3, [(0, 1, 5)])

    def test_rejects_oversized_edge(self):
        with pytest.raises(HypergraphError):
            Hypergraph(5, 2, [(0, 1, 2)])

    def test_degree_needs_nonempty_set(self, g0):
        with pytest.raises(HypergraphError):
            degree(g0, (), 3)

    def test_unknown_vertex(self, g0):
        with pytest.raises(HypergraphError):
            degree(g0, {9}, 3)

    def test_edges_are_canonical(self):
        G = Hypergraph(4, 3, [(2, 1, 0), (0, 1, 2), (3, 1)])
        assert G.edges == ((0, 1, 2), (1, 3))

    def test_ceil_root_exact(self):
        assert ceil_root(192, 2) == 14
        assert ceil_root(144, 2) == 12
        assert ceil_root(0, 3) == 0
        assert ceil_root(27, 3) == 3 and ceil_root(28, 3) == 4


class TestFormats:
    def test_hgt_round_trip_with_root(self, g0):
        text = format_hgt(g0, comment="g0", root=2)
        G, root = parse_hgt(text)
        assert G == g0 and root == 2

    def test_hgt_rejects_unsorted_edge(self):
        with pytest.raises(HypergraphError):
            parse_hgt("3 4\n2 1 0\n")

    def test_hgt_missing_header(self):
        with pytest.raises(HypergraphError):
            parse_hgt("# nothing\n")

    @pytest.mark.parametrize("suffix", [".hgt", ".json"])
    def test_file_round_trip(self, tmp_path, fano, suffix):
        path = tmp_path / f"fano{suffix}"
        save(fano, path)
        assert load(path) == fano


class TestProperties:
    @given(hypergraphs(), st.data())
    def test_degree_equals_link_size(self, G, data):
        A = data.draw(st.frozensets(st.integers(0, G.vertex_count - 1), min_size=1, max_size=G.rank - 1))
        for j in range(len(A) + 1, G.rank + 1):
            assert degree(G, A, j) == len(link(G, A, j))

    @given(hypergraphs(max_n=7))
    def test_jl_degree_matches_brute_force(self, G):
        for j in range(2, G.rank + 1):
            for l in range(1, j):
                assert max_jl_degree(G, j, l) == brute_jl(G, j, l)

    @given(hypergraphs(max_n=6, max_edges=10))
    def test_codegree_matches_brute_force(self, G):
        for b in range(1, G.rank):
            assert b_codegree(G, b) == brute_codegree(G, b)

    @given(hypergraphs(), st.floats(1, 50), st.floats(0.1, 5), st.floats(1.0, 3.0))
    def test_sparsity_monotone_in_delta_and_omega(self, G, delta, omega, scale):
        small = SparsityProfile(delta, {j: omega for j in range(2, G.rank + 1)})
        big = SparsityProfile(delta * scale, {j: omega * scale for j in range(2, G.rank + 1)})
        if is_sparse(G, small).ok:
            assert is_sparse(G, big).ok

    @given(hypergraphs(), st.data())
    def test_induced_composes(self, G, data):
        S = data.draw(st.frozensets(st.integers(0, G.vertex_count - 1)))
        T = data.draw(st.frozensets(st.sampled_from(sorted(S)))) if S else frozenset()
        sub, ids = induced(G, S)
        inner, inner_ids = induced(sub, [ids.index(v) for v in T])
        direct, direct_ids = induced(G, T)
        assert inner == direct
        assert [ids[i] for i in inner_ids] == direct_ids

    @given(hypergraphs())
    def test_restrict_matches_induced(self, G):
        S = range(0, G.vertex_count, 2)
        sub, ids = induced(G, S)
        relabeled = {tuple(ids[v] for v in e) for e in sub.edges}
        assert relabeled == set(restrict(G, S).edges)

    @given(hypergraphs())
    def test_observed_profile_is_sparse(self, G):
        assert is_sparse(G, profile(G)).ok
        assert profile(G).delta == max_degree(G, G.rank)

    @given(hypergraphs(), st.floats(1, 20), st.floats(0.2, 3), st.data())
    def test_sparsity_survives_edge_removal(self, G, delta, omega, data):
        prof = SparsityProfile(delta, {j: omega for j in range(2, G.rank + 1)})
        if not G.edges or not is_sparse(G, prof).ok:
            return
        drop = data.draw(st.sampled_from(G.edges))
        smaller = Hypergraph(G.vertex_count, G.rank, [e for e in G.edges if e != drop])
        assert is_sparse(smaller, prof).ok
