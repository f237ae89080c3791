import json
import math

import pytest
from hypothesis import given, strategies as st

from hyperchroma import Hypergraph, check_pattern_free, generate, induced, max_degree, named_pattern, triangle_family
from hyperchroma.pipeline import (
    CertificateError,
    HypothesisError,
    eps_partition,
    partition_full,
    random_halving,
)
from hyperchroma.pipeline.partition import (
    certify,
    check_recursion,
    color_count,
    degeneracy_coloring,
    halving_events,
    halving_steps,
    recursion_trace,
)

K4 = named_pattern("K4-")


def recheck(G, res, patterns):
    """Certificates recomputed by the oracles, independent of the construction."""
    seen = sorted(v for part in res.parts for v in part)
    assert seen == list(range(G.vertex_count))
    for i, part in enumerate(res.parts):
        assert all(res.part_of[v] == i for v in part)
        sub, _ = induced(G, part)
        assert check_pattern_free(sub, patterns).ok
        for j, bound in res.certificates[i].bounds.items():
            assert max_degree(sub, j) <= bound * (1 + 1e-9)


def planted(seed, n=30, m=30, copies=3):
    base = {"kind": "uniform_random", "params": {"n": n, "m": m, "k": 3}}
    return generate("planted_pattern", {"base": base, "pattern": "K4-", "copies": copies}, seed)


class TestEpsPartition:
    def test_edgeless(self):
        G = Hypergraph.empty(6, 3)
        res = eps_partition(G, [K4], 0.2)
        assert 1 <= len(res.parts) <= res.meta["r"]
        assert all(c.ok for c in res.certificates)

    @pytest.mark.parametrize("seed", range(3))
    def test_planted_k4minus(self, seed):
        G = planted(seed)
        assert not check_pattern_free(G, [K4]).ok
        res = eps_partition(G, [K4], 0.2, seed=seed)
        recheck(G, res, [K4])

    def test_fano_triangles(self, fano):
        res = eps_partition(fano, triangle_family(), 0.2, seed=0)
        recheck(fano, res, triangle_family())
        assert res.meta["r"] == 2
        assert len(res.parts) <= res.meta["part_bound"]

    def test_epsilon_range(self, fano):
        with pytest.raises(HypothesisError):
            eps_partition(fano, [K4], 0.5)

    def test_json_is_deterministic(self, fano):
        a = eps_partition(fano, triangle_family(), 0.2, seed=9).to_json()
        b = eps_partition(fano, triangle_family(), 0.2, seed=9).to_json()
        assert a == b
        data = json.loads(a)
        assert set(data) >= {"part_of", "certificates", "trace", "seeds"}

    def test_color_count_clamped(self):
        assert color_count(1, 3, 0.2) == 2
        assert color_count(1e6, 3, 0.25) == round(1e6**0.25)


class TestCertify:
    def test_rejects_dirty_part(self):
        G = K4.hypergraph
        with pytest.raises(CertificateError):
            certify(G, [[0, 1, 2, 3]], [K4], {2: 10, 3: 10})

    def test_rejects_dense_part(self, fano):
        with pytest.raises(CertificateError):
            certify(fano, [list(range(7))], [], {3: 2})


class TestDegeneracy:
    def test_proper_and_small(self):
        adj = {0: {1, 2}, 1: {0, 2}, 2: {0, 1, 3}, 3: {2}}
        col = degeneracy_coloring([0, 1, 2, 3], adj)
        assert all(col[u] != col[v] for u in adj for v in adj[u])
        assert max(col.values()) + 1 <= 3

    @given(st.integers(1, 12), st.data())
    def test_uses_at_most_degeneracy_plus_one(self, n, data):
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        edges = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
        adj = {v: set() for v in range(n)}
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        col = degeneracy_coloring(list(range(n)), adj)
        assert all(col[a] != col[b] for a, b in edges)
        assert max(col.values()) <= max((len(s) for s in adj.values()), default=0)


class TestHalving:
    def test_edgeless(self):
        res = random_halving(Hypergraph.empty(5, 3), [K4], seed=1)
        assert sorted(res.vertex_maps[0] + res.vertex_maps[1]) == list(range(5))

    def test_random_instance_meets_thresholds(self):
        G = generate("uniform_random", {"n": 40, "m": 80, "k": 3}, 2)
        res = random_halving(G, [K4], seed=3)
        c_events, _ = halving_events(G, [K4.with_root(0)], float(max_degree(G, 3)))
        for A, j, thr, edges in c_events:
            sides = {res.side[v] for v in A}
            if len(sides) > 1:
                continue
            same = sum(1 for e in edges if all(res.side[w] == res.side[A[0]] for w in e))
            assert same <= thr

    def test_single_edge(self):
        G = Hypergraph(3, 3, [(0, 1, 2)])
        res = random_halving(G, [], seed=0)
        assert len(res.halves[0]) + len(res.halves[1]) == (1 if len(set(res.side)) == 1 else 0)


class TestRecursion:
    def test_steps_negative_for_large_f(self):
        assert halving_steps(1e6, 4, 6, 3) < 0

    def test_first_step(self):
        trace = recursion_trace(1e6, {2: 1.0, 3: 1.0}, [], 4, 3, 1)
        assert trace[1].d == pytest.approx(350000)
        assert trace[1].d <= 2 * 1e6 * 2**-2

    @pytest.mark.parametrize("d0", [1e4, 1e8, 1e12])
    def test_trace_checks(self, d0):
        om = {2: 1.0, 3: 1.0}
        T = max(0, halving_steps(d0, 1.01, 4, 3))
        check_recursion(recursion_trace(d0, om, [K4], 1.01, 3, T), d0, om, 3)


class TestPartitionFull:
    def test_edgeless(self):
        res = partition_full(Hypergraph.empty(4, 3), [K4], 2.0)
        assert res.meta["T"] == 0 and all(c.ok for c in res.certificates)

    @pytest.mark.parametrize("seed", range(3))
    def test_with_halving(self, seed):
        G = planted(seed, n=40, m=60)
        res = partition_full(G, [K4], 1.01, seed=seed)
        assert res.meta["T"] >= 1
        recheck(G, res, [K4])
        for j, bound in res.meta["conclusion_bounds"].items():
            assert bound == math.ceil(2**6 * 1.01 ** (int(j) - 1) * res.meta["omega"][j])

    def test_direct_eps_when_f_large(self):
        G = generate("uniform_random", {"n": 40, "m": 80, "k": 3}, 0)
        res = partition_full(G, triangle_family(), 1.2, seed=0)
        assert res.meta["T"] == 0
        recheck(G, res, triangle_family())

    def test_hypothesis_rejected(self):
        G = planted(0)
        with pytest.raises(HypothesisError):
            partition_full(G, [K4], 50.0)
