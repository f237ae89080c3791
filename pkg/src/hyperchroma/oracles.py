"""Exhaustive ground truth for small instances.

These solvers are deliberately plain: branch and bound with light pruning.
They certify the constructive procedures elsewhere in the package and are
not meant for large inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .census import Pattern, find_copy
from .hypercore import Edge, Hypergraph, HypergraphError, link, max_degree


class SearchLimitExceeded(RuntimeError):
    """The exact search visited more nodes than allowed."""

    def __init__(self, limit: int, partial: int | None = None):
        super().__init__(f"exact search exceeded {limit} nodes")
        self.limit = limit
        self.partial = partial


def _as_list(coloring: Sequence[int] | Mapping[int, int], n: int) -> list[int]:
    if isinstance(coloring, Mapping):
        return [coloring[v] for v in range(n)]
    if len(coloring) != n:
        raise HypergraphError(f"coloring has {len(coloring)} entries, expected {n}")
    return list(coloring)


class ProperCheck(NamedTuple):
    ok: bool
    edge: Edge | None

    def __bool__(self) -> bool:
        return self.ok


def check_proper(G: Hypergraph, coloring: Sequence[int] | Mapping[int, int]) -> ProperCheck:
    """True iff no edge is monochromatic; otherwise the first monochromatic edge."""
    col = _as_list(coloring, G.vertex_count)
    for e in G.edges:
        c = col[e[0]]
        if all(col[v] == c for v in e[1:]):
            return ProperCheck(False, e)
    return ProperCheck(True, None)


def chromatic_number_exact(G: Hypergraph, limit: int = 10_000_000) -> tuple[int, list[int]]:
    """Minimum number of colors with no monochromatic edge, plus an optimal coloring.

    Raises :class:`SearchLimitExceeded` rather than returning a truncated answer.
    """
    n = G.vertex_count
    if any(len(e) < 2 for e in G.edges):
        raise HypergraphError("a singleton edge can never be properly colored")
    if n == 0:
        return 0, []
    if not G.edges:
        return 1, [0] * n
    order = sorted(G.support(), key=lambda v: (-len(G.incidence[v]), v))
    nodes = 0

    def attempt(r: int) -> list[int] | None:
        nonlocal nodes
        col = [-1] * n

        def clashes(v: int, c: int) -> bool:
            for i in G.incidence[v]:
                e = G.edges[i]
                if all(w == v or col[w] == c for w in e):
                    return True
            return False

        def place(pos: int, used: int) -> bool:
            nonlocal nodes
            if pos == len(order):
                return True
            nodes += 1
            if nodes > limit:
                raise SearchLimitExceeded(limit)
            v = order[pos]
            # colors are interchangeable: only open one new color at a time
            for c in range(min(r, used + 1)):
                if clashes(v, c):
                    continue
                col[v] = c
                if place(pos + 1, max(used, c + 1)):
                    return True
                col[v] = -1
            return False

        if place(0, 0):
            return [c if c >= 0 else 0 for c in col]
        return None

    for r in range(2, n + 1):
        coloring = attempt(r)
        if coloring is not None:
            return r, coloring
    raise AssertionError("n colors always suffice")  # pragma: no cover


@dataclass(frozen=True)
class TransversalCertificate:
    target: Hypergraph
    hitting_set: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.hitting_set)

    def is_valid(self) -> bool:
        return all(self.hitting_set.intersection(e) for e in self.target.edges)

    def missed(self) -> list[Edge]:
        return [e for e in self.target.edges if not self.hitting_set.intersection(e)]


def _greedy_disjoint(edges: Sequence[frozenset[int]]) -> int:
    taken: set[int] = set()
    count = 0
    for e in edges:
        if taken.isdisjoint(e):
            taken |= e
            count += 1
    return count


def minimum_hitting_set(edges: Iterable[Iterable[int]]) -> frozenset[int]:
    """A minimum vertex set meeting every edge (iterative deepening branch and bound)."""
    sets = [frozenset(e) for e in edges]
    if not sets:
        return frozenset()
    if any(not s for s in sets):
        raise HypergraphError("an empty edge cannot be hit")

    def search(rem: list[frozenset[int]], budget: int) -> list[int] | None:
        if not rem:
            return []
        if budget == 0 or _greedy_disjoint(rem) > budget:
            return None
        pick = min(rem, key=len)
        freq: dict[int, int] = {}
        for s in rem:
            for v in s:
                freq[v] = freq.get(v, 0) + 1
        for v in sorted(pick, key=lambda x: (-freq[x], x)):
            sub = search([s for s in rem if v not in s], budget - 1)
            if sub is not None:
                return [v, *sub]
        return None

    t = _greedy_disjoint(sets)
    while True:
        found = search(sets, t)
        if found is not None:
            return frozenset(found)
        t += 1


def transversal_number_exact(F: Hypergraph) -> tuple[int, TransversalCertificate]:
    K = minimum_hitting_set(F.edges)
    return len(K), TransversalCertificate(F, K)


def max_matching_exact(F: Hypergraph) -> int:
    """Maximum number of pairwise disjoint edges."""
    sets = [frozenset(e) for e in F.edges]

    def best(rem: list[frozenset[int]]) -> int:
        if not rem:
            return 0
        v = min(min(s) for s in rem)
        without_v = [s for s in rem if v not in s]
        score = best(without_v)
        for s in rem:
            if v in s:
                score = max(score, 1 + best([t for t in without_v if t.isdisjoint(s)]))
        return score

    return best(sets)


def greedy_matching(edges: Iterable[Edge]) -> list[Edge]:
    """Maximal matching taking edges in lexicographic order."""
    taken: set[int] = set()
    out = []
    for e in sorted(edges):
        if taken.isdisjoint(e):
            taken.update(e)
            out.append(e)
    return out


def greedy_link_matching(F: Hypergraph, k: int | None = None) -> tuple[frozenset[int], list[Edge]]:
    """A vertex set A and a matching in the link of A of size >= |F|^(1/k) / (k - |A|).

    Either a greedy matching of F is already that large, or some vertex has degree
    above |F|^((k-1)/k) and we recurse into its (k-1)-uniform link. Ties go to the
    lowest vertex id.
    """
    if k is None:
        k = F.uniformity() or F.rank
    if not F.is_uniform(k):
        raise HypergraphError(f"greedy_link_matching needs a {k}-uniform hypergraph")
    if k == 1 or not F.edges:
        return frozenset(), list(F.edges)
    size = len(F)
    M = greedy_matching(F.edges)
    if len(M) >= size ** (1 / k) / k:
        return frozenset(), M
    top = max_degree(F, k)
    u = min(v for v in F.support() if len(F.incidence[v]) == top)
    sub = link(F, [u], k)
    B, M2 = greedy_link_matching(sub, k - 1)
    return frozenset({u}) | B, M2


class PatternCheck(NamedTuple):
    ok: bool
    witness: tuple[str, frozenset] | None

    def __bool__(self) -> bool:
        return self.ok


def check_pattern_free(G: Hypergraph, patterns: Iterable[Pattern]) -> PatternCheck:
    """True iff G contains no copy of any listed pattern; else a witness copy."""
    for P in patterns:
        hit = find_copy(G, P.hypergraph)
        if hit is not None:
            return PatternCheck(False, (P.label(), hit))
    return PatternCheck(True, None)
