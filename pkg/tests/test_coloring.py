import math

import pytest
from hypothesis import given, settings, strategies as st

from hyperchroma import Hypergraph, check_proper, chromatic_number_exact, generate, max_degree
from hyperchroma.census import two_edge_pattern
from hyperchroma.pipeline import HypothesisError, color_corlin, color_cortri
from hyperchroma.pipeline.coloring import codegree_reduction, corlin_hypothesis, cortri_hypothesis
from hyperchroma.process import partial_steiner
from hyperchroma.rng import make_rng


def sunflower_pairs(pairs: int, petals: int) -> Hypergraph:
    """Disjoint pairs, each lying in ``petals`` triples with private third vertices."""
    edges, nxt = [], 2 * pairs
    for i in range(pairs):
        for _ in range(petals):
            edges.append((2 * i, 2 * i + 1, nxt))
            nxt += 1
    return Hypergraph(nxt, 3, edges)


class TestCorlin:
    def test_fano(self, fano):
        res = color_corlin(fano, math.sqrt(3), seed=0)
        assert check_proper(fano, res.coloring).ok
        assert res.num_colors >= chromatic_number_exact(fano)[0]

    def test_edgeless(self):
        res = color_corlin(Hypergraph.empty(5, 3), 2.0, seed=0)
        assert res.num_colors == 1

    def test_partial_steiner(self):
        G = partial_steiner(50, 3, make_rng(5))
        f = math.sqrt(max_degree(G, 3))
        res = color_corlin(G, f, seed=1)
        assert check_proper(G, res.coloring).ok
        assert res.details["scale"] is not None

    def test_rank_four_route(self):
        G = partial_steiner(40, 4, make_rng(2))
        res = color_corlin(G, 1.0, seed=4)
        assert check_proper(G, res.coloring).ok

    def test_hypothesis_rejected(self):
        G = Hypergraph(5, 3, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])
        assert corlin_hypothesis(G, 10)
        with pytest.raises(HypothesisError):
            color_corlin(G, 10, seed=0)

    @settings(max_examples=15)
    @given(st.integers(0, 2**32))
    def test_always_proper(self, seed):
        G = partial_steiner(25, 3, make_rng(seed))
        res = color_corlin(G, 1.5, seed=seed)
        assert check_proper(G, res.coloring).ok


class TestCortri:
    def test_linear_keeps_graph(self, fano):
        red = codegree_reduction(fano, 3)
        assert red.pairs == [] and red.reduced == fano

    def test_planted_pair_becomes_edge(self):
        big = 9  # pair {0,1} sits in sqrt(9) + 1 = 4 triples
        G = sunflower_pairs(1, 4)
        red = codegree_reduction(G, big)
        assert red.pairs == [(0, 1)]
        assert red.reduced.edges == ((0, 1),)
        assert red.removed_edges == 4

    def test_sunflower_partition_route(self):
        G = sunflower_pairs(1, 10)
        res = color_cortri(G, 1e4, seed=0)
        assert check_proper(G, res.coloring).ok
        assert res.route == "partition"
        assert res.details["pairs"] == 1 and res.details["removed_edges"] == 10

    def test_fano_rejected(self, fano):
        assert cortri_hypothesis(fano, 2.0)
        with pytest.raises(HypothesisError):
            color_cortri(fano, 2.0, seed=0)

    def test_edgeless(self):
        assert color_cortri(Hypergraph.empty(4, 3), 5.0, seed=0).num_colors == 1

    @given(st.integers(0, 2**32), st.integers(1, 3), st.integers(2, 8))
    def test_always_proper(self, seed, pairs, petals):
        G = sunflower_pairs(pairs, petals)
        res = color_cortri(G, 50.0, seed=seed)
        assert check_proper(G, res.coloring).ok

    def test_random_sparse_instance(self):
        G = generate("partial_steiner", {"n": 40, "k": 3, "m": 25}, 3)
        res = color_cortri(G, 1.0, seed=2)
        assert check_proper(G, res.coloring).ok
