"""Transversals of randomly surviving sub-hypergraphs via the heavy-set hierarchy.

For an s-uniform F and thresholds tau_k = |F| p^((1-alpha) k), level k holds the
k-sets of degree above tau_k all of whose proper subsets are light. The heavy
sets whose vertices all survive cover every surviving edge as long as
|F| p^((1-alpha) s) < 1, since then every edge is itself above tau_s.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from ..hypercore import Edge, Hypergraph
from ..oracles import TransversalCertificate, minimum_hitting_set
from .errors import HypothesisError


def subset_degrees(F: Hypergraph) -> Counter:
    """d(A) for every nonempty A contained in some edge."""
    d: Counter = Counter()
    for e in F.edges:
        for size in range(1, len(e) + 1):
            d.update(combinations(e, size))
    return d


@dataclass
class HeavyHierarchy:
    s: int
    p: float
    alpha: float
    c: float | None
    thresholds: list[float]  # tau_0 .. tau_s
    heavy_sets: dict[int, list[Edge]]  # H_k
    surviving: dict[int, list[Edge]] = field(default_factory=dict)  # Z_k
    x_b: dict[tuple[int, int], float] = field(default_factory=dict)  # (k, b) -> (c/alpha)/(k-b)
    degrees: Counter = field(default_factory=Counter, repr=False)

    def level_of(self, A: Iterable[int]) -> int | None:
        A = tuple(sorted(A))
        return len(A) if A in set(self.heavy_sets.get(len(A), ())) else None


def thresholds(size: int, p: float, alpha: float, s: int) -> list[float]:
    return [size * p ** ((1 - alpha) * k) for k in range(s + 1)]


def heavy_hierarchy(F: Hypergraph, p: float, alpha: float, c: float | None = None) -> HeavyHierarchy:
    """Levels H_1..H_s for F (no survivor sampling)."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    s = F.uniformity() or F.rank
    if F.edges and not F.is_uniform(s):
        raise ValueError("F must be uniform")
    tau = thresholds(len(F), p, alpha, s)
    d = subset_degrees(F)
    heavy: dict[int, list[Edge]] = {k: [] for k in range(1, s + 1)}
    for A, deg in d.items():
        k = len(A)
        if deg <= tau[k]:
            continue
        if all(d[B] <= tau[b] for b in range(1, k) for B in combinations(A, b)):
            heavy[k].append(A)
    for k in heavy:
        heavy[k].sort()
    xb = {}
    if c is not None:
        xb = {(k, b): (c / alpha) / (k - b) for k in range(1, s + 1) for b in range(0, k)}
    return HeavyHierarchy(s, p, alpha, c, tau, heavy, {}, xb, d)


@dataclass
class TransversalResult:
    certificate: TransversalCertificate  # K for the surviving hypergraph F'
    hierarchy: HeavyHierarchy
    surviving_edges: list[Edge]
    in_hypothesis: bool  # |F| p^((1-alpha)s) < 1
    constant_ok: bool | None  # c >= e 2^s s alpha
    size_bound: float | None  # s^2 (c/alpha)^(s+1)
    patched: int = 0  # vertices added outside the hierarchy (only out of hypothesis)

    @property
    def K(self) -> frozenset[int]:
        return self.certificate.hitting_set

    @property
    def within_bound(self) -> bool | None:
        if self.size_bound is None:
            return None
        return self.certificate.size <= self.size_bound


def hypothesis_value(F: Hypergraph, p: float, alpha: float) -> float:
    s = F.uniformity() or F.rank
    return len(F) * p ** ((1 - alpha) * s)


def extract_transversal(
    F: Hypergraph,
    survivors: Iterable[int],
    p: float,
    alpha: float,
    c: float | None = None,
    *,
    strict: bool = True,
) -> TransversalResult:
    """K = union of V(Z_k): the surviving heavy sets, a transversal of the surviving edges.

    With ``strict`` the hypothesis |F| p^((1-alpha)s) < 1 is required. Otherwise the
    construction still runs and any surviving edge it misses is covered by a
    minimum hitting set of the missed edges, so K is always a transversal.
    """
    value = hypothesis_value(F, p, alpha)
    in_hyp = value < 1
    if strict and not in_hyp:
        raise HypothesisError(f"|F| p^((1-alpha)s) = {value:.6g} >= 1; the transversal guarantee is void")
    H = heavy_hierarchy(F, p, alpha, c)
    alive = set(survivors)
    for k, level in H.heavy_sets.items():
        H.surviving[k] = [A for A in level if alive.issuperset(A)]
    K = {v for level in H.surviving.values() for A in level for v in A}
    surviving_edges = [e for e in F.edges if alive.issuperset(e)]
    missed = [e for e in surviving_edges if K.isdisjoint(e)]
    patched = 0
    if missed:
        if in_hyp:  # pragma: no cover - would contradict the covering argument
            raise AssertionError(f"hierarchy missed surviving edges {missed[:3]}")
        extra = minimum_hitting_set(missed)
        patched = len(extra - K)
        K |= extra
    s = H.s
    constant_ok = size_bound = None
    if c is not None:
        constant_ok = c >= math.e * 2**s * s * alpha
        size_bound = s**2 * (c / alpha) ** (s + 1)
    sub = Hypergraph(F.vertex_count, F.rank, surviving_edges, validate=False)
    return TransversalResult(
        TransversalCertificate(sub, frozenset(K)), H, surviving_edges, in_hyp, constant_ok, size_bound, patched
    )
