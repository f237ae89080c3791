"""Hypothesis strategies shared by the property tests."""
from itertools import combinations

from hypothesis import strategies as st

from hyperchroma import Hypergraph


@st.composite
def hypergraphs(draw, max_n=9, max_rank=4, min_rank=2, uniform=False, max_edges=18):
    n = draw(st.integers(min_value=min_rank, max_value=max_n))
    k = draw(st.integers(min_value=min_rank, max_value=min(max_rank, n)))
    sizes = [k] if uniform else list(range(2, k + 1))
    pool = [c for s in sizes for c in combinations(range(n), s)]
    edges = draw(st.lists(st.sampled_from(pool), max_size=max_edges, unique=True))
    return Hypergraph(n, k, edges)


def vertex_subsets(n, max_size=None):
    return st.frozensets(st.integers(min_value=0, max_value=n - 1), max_size=max_size)
