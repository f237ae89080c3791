"""The random greedy independent set process and the instance generators."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import kernels
from .census import Pattern, named_pattern
from .hypercore import Hypergraph, HypergraphError
from .rng import derive_seed, make_rng


@dataclass
class ProcessTrace:
    independent_set: list[int]  # insertion order
    eligible_counts: list[int]  # addable vertices just before each insertion
    seed: int

    def __len__(self) -> int:
        return len(self.independent_set)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "chosen_vertex", "eligible_count"])
        for step, (v, c) in enumerate(zip(self.independent_set, self.eligible_counts)):
            w.writerow([step, v, c])
        return buf.getvalue()

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())


def read_trace_csv(text: str, seed: int = 0) -> ProcessTrace:
    rows = list(csv.DictReader(io.StringIO(text)))
    return ProcessTrace([int(r["chosen_vertex"]) for r in rows], [int(r["eligible_count"]) for r in rows], seed)


def random_greedy_is(G: Hypergraph, seed: int) -> ProcessTrace:
    """Add uniformly random addable vertices until none is left.

    A uniform permutation is scanned once; the first addable vertex met at any
    point is uniform among the currently addable ones, so the scan realizes
    the process exactly.
    """
    rng = make_rng(seed)
    order = rng.permutation(G.vertex_count).astype(np.int64)
    edge_ptr, edge_verts, inc_ptr, inc_edges = G.csr()
    chosen, eligible, count = kernels.greedy_is(G.vertex_count, edge_ptr, edge_verts, inc_ptr, inc_edges, order)
    return ProcessTrace([int(v) for v in chosen[:count]], [int(c) for c in eligible[:count]], seed)


def is_independent(G: Hypergraph, S) -> bool:
    S = set(S)
    return not any(S.issuperset(e) for e in G.edges)


def is_maximal_independent(G: Hypergraph, S) -> bool:
    S = set(S)
    if not is_independent(G, S):
        return False
    for v in range(G.vertex_count):
        if v not in S and is_independent(G, S | {v}):
            return False
    return True


def scaling_ratio(size: int, N: int, D: int, k: int = 3) -> float:
    """|I| / (N (log N / D)^(1/(k-1)))."""
    return size / (N * (np.log(N) / D) ** (1 / (k - 1)))


# -- generators -----------------------------------------------------------------------------


def triangle_hypergraph(n: int) -> Hypergraph:
    """Vertices are the edges of K_n (lexicographic pairs), hyperedges its triangles."""
    if n < 3:
        raise HypergraphError("need n >= 3")
    index = {pair: i for i, pair in enumerate(combinations(range(n), 2))}
    edges = [
        tuple(sorted((index[(a, b)], index[(a, c)], index[(b, c)])))
        for a, b, c in combinations(range(n), 3)
    ]
    return Hypergraph(len(index), 3, edges, validate=False)


def fano() -> Hypergraph:
    return Hypergraph(7, 3, [tuple(sorted((i % 7, (i + 1) % 7, (i + 3) % 7))) for i in range(7)])


def uniform_random(n: int, m: int, k: int, rng: np.random.Generator) -> Hypergraph:
    """m distinct k-sets drawn uniformly."""
    if k < 1 or (k > n and m > 0):
        raise HypergraphError(f"no {k}-sets on {n} vertices")
    total = comb(n, k)
    if m > total:
        raise HypergraphError(f"m = {m} exceeds C({n}, {k}) = {total}")
    if m > total // 2:  # dense: sample from the explicit list
        pool = list(combinations(range(n), k))
        pick = rng.choice(total, size=m, replace=False)
        return Hypergraph(n, k, [pool[i] for i in sorted(pick)])
    edges: set[tuple[int, ...]] = set()
    while len(edges) < m:
        edges.add(tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False))))
    return Hypergraph(n, k, edges)


def partial_steiner(n: int, k: int, rng: np.random.Generator, m: int | None = None, patience: int = 2000) -> Hypergraph:
    """Greedily add random k-sets sharing at most one vertex with every chosen edge."""
    if k < 2 or k > n:
        raise HypergraphError("need 2 <= k <= n")
    covered: set[tuple[int, int]] = set()
    edges = []
    misses = 0
    while misses < patience and (m is None or len(edges) < m):
        e = tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False)))
        pairs = list(combinations(e, 2))
        if any(p in covered for p in pairs):
            misses += 1
            continue
        covered.update(pairs)
        edges.append(e)
        misses = 0
    return Hypergraph(n, k, edges)


def planted_pattern(base: Hypergraph, pattern: Pattern | Hypergraph, copies: int, rng: np.random.Generator) -> Hypergraph:
    """Add ``copies`` vertex-disjoint copies of the pattern on random vertices of ``base``."""
    H = pattern.hypergraph if isinstance(pattern, Pattern) else pattern
    need = copies * H.vertex_count
    if need > base.vertex_count:
        raise HypergraphError(f"{copies} disjoint copies need {need} vertices, base has {base.vertex_count}")
    if H.rank > base.rank:
        raise HypergraphError("pattern rank exceeds the base rank")
    slots = [int(v) for v in rng.permutation(base.vertex_count)[:need]]
    edges = list(base.edges)
    for c in range(copies):
        phi = slots[c * H.vertex_count:(c + 1) * H.vertex_count]
        edges.extend(tuple(sorted(phi[x] for x in e)) for e in H.edges)
    return Hypergraph(base.vertex_count, base.rank, edges)


GENERATORS = ("uniform_random", "partial_steiner", "fano", "triangle_of_Kn", "planted_pattern")


def generate(kind: str, params: Mapping[str, Any] | None = None, seed: int = 0) -> Hypergraph:
    """Build an experiment instance. Deterministic per (kind, params, seed)."""
    p = dict(params or {})
    rng = make_rng(seed)
    if kind == "fano":
        return fano()
    if kind == "triangle_of_Kn":
        return triangle_hypergraph(int(p["n"]))
    if kind == "uniform_random":
        return uniform_random(int(p["n"]), int(p["m"]), int(p.get("k", 3)), rng)
    if kind == "partial_steiner":
        m = p.get("m")
        return partial_steiner(int(p["n"]), int(p.get("k", 3)), rng, None if m is None else int(m))
    if kind == "planted_pattern":
        base = p["base"]
        if not isinstance(base, Hypergraph):
            base = generate(base["kind"], base.get("params"), derive_seed(seed, 1))
        pattern = p["pattern"]
        if isinstance(pattern, str):
            pattern = named_pattern(pattern)
        return planted_pattern(base, pattern, int(p.get("copies", 1)), rng)
    raise HypergraphError(f"unknown generator {kind!r}; choose from {', '.join(GENERATORS)}")
