"""Copies of small fixed patterns inside a hypergraph.

A copy of a pattern H in G is a set A of edges of G for which some bijection
V(H) -> V(A) carries the edges of H exactly onto A. Copies are counted as edge
sets: automorphisms of H never produce extra copies.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterator

from .hypercore import Edge, Hypergraph, HypergraphError, format_hgt, parse_hgt

Copy = frozenset  # frozenset of G-edges


def is_connected(H: Hypergraph) -> bool:
    """Every vertex pair joined by a walk of pairwise-intersecting edges."""
    n = H.vertex_count
    if n <= 1:
        return True
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in H.edges:
        r = find(e[0])
        for v in e[1:]:
            parent[find(v)] = r
    root = find(0)
    return all(find(v) == root for v in range(n))


@dataclass(frozen=True)
class Pattern:
    hypergraph: Hypergraph
    root: int | None = None
    name: str = ""

    def __post_init__(self):
        if not is_connected(self.hypergraph):
            raise HypergraphError(f"pattern {self.name or self.hypergraph!r} is not connected")
        if len(self.hypergraph) == 0:
            raise HypergraphError("pattern needs at least one edge")
        if self.root is not None and not 0 <= self.root < self.hypergraph.vertex_count:
            raise HypergraphError(f"root {self.root} outside the pattern")

    @property
    def v(self) -> int:
        return self.hypergraph.vertex_count

    def with_root(self, root: int) -> "Pattern":
        return Pattern(self.hypergraph, root, self.name)

    def label(self) -> str:
        return self.name or format_hgt(self.hypergraph).replace("\n", ";")


def parse_pattern(text: str, name: str = "") -> Pattern:
    H, root = parse_hgt(text)
    return Pattern(H, root, name)


def format_pattern(P: Pattern) -> str:
    return format_hgt(P.hypergraph, comment=P.name or None, root=P.root)


def triangle_family() -> list[Pattern]:
    """The three 3-uniform triangles C3, F5 and K4-."""
    # a b c d e f -> 0 1 2 3 4 5
    c3 = Hypergraph(6, 3, [(0, 1, 2), (2, 3, 4), (4, 5, 0)])
    f5 = Hypergraph(5, 3, [(0, 1, 2), (0, 1, 3), (2, 4, 3)])
    k4 = Hypergraph(4, 3, [(0, 1, 2), (1, 2, 3), (0, 1, 3)])
    return [Pattern(c3, name="C3"), Pattern(f5, name="F5"), Pattern(k4, name="K4-")]


def two_edge_pattern(k: int, l: int) -> Pattern:
    """Two k-edges sharing exactly l vertices."""
    if not 1 <= l < k:
        raise HypergraphError("need 1 <= l < k")
    first = tuple(range(k))
    second = tuple(range(l)) + tuple(range(k, 2 * k - l))
    return Pattern(Hypergraph(2 * k - l, k, [first, second]), name=f"H{l}")


PATTERN_LIBRARY = {p.name: p for p in triangle_family()}


def named_pattern(name: str) -> Pattern:
    if name in PATTERN_LIBRARY:
        return PATTERN_LIBRARY[name]
    if name.startswith("H") and ":" in name:  # H<l>:<k>
        l, k = name[1:].split(":")
        return two_edge_pattern(int(k), int(l))
    raise HypergraphError(f"unknown pattern {name!r}")


def is_triangle(e: Edge, f: Edge, g: Edge) -> bool:
    """Three distinct edges with distinct u, v, w such that u,v in e; v,w in f; w,u in g,
    and none of u, v, w lies in all three edges."""
    e, f, g = frozenset(e), frozenset(f), frozenset(g)
    if len({e, f, g}) < 3:
        return False
    common = e & f & g
    for v in e & f:
        for w in f & g:
            if w == v:
                continue
            for u in g & e:
                if u in (v, w):
                    continue
                if not {u, v, w} & common:
                    return True
    return False


# -- embedding search -------------------------------------------------------------


def _edge_order(H: Hypergraph, start_vertex: int | None) -> list[Edge]:
    """H's edges ordered so each edge after the first meets an earlier one."""
    remaining = list(H.edges)
    if start_vertex is not None:
        first = next(e for e in remaining if start_vertex in e)
    else:
        first = remaining[0]
    order = [first]
    remaining.remove(first)
    seen = set(first)
    while remaining:
        nxt = next(e for e in remaining if seen.intersection(e))
        order.append(nxt)
        remaining.remove(nxt)
        seen.update(nxt)
    return order


def embeddings(G: Hypergraph, H: Hypergraph, fixed: tuple[int, int] | None = None) -> Iterator[tuple[int, ...]]:
    """Injective maps V(H) -> V(G) sending every H-edge onto a G-edge.

    ``fixed=(x, u)`` pins pattern vertex x to G-vertex u.
    """
    nh = H.vertex_count
    order = _edge_order(H, fixed[0] if fixed else None)
    h_deg = [len(H.incidence[x]) for x in range(nh)]
    g_deg = [len(G.incidence[v]) for v in range(G.vertex_count)]
    phi = [-1] * nh
    used: set[int] = set()
    if fixed is not None:
        x, u = fixed
        if g_deg[u] < h_deg[x]:
            return
        phi[x] = u
        used.add(u)

    def extend(step: int) -> Iterator[tuple[int, ...]]:
        if step == len(order):
            yield tuple(phi)
            return
        E = order[step]
        mapped = [phi[x] for x in E if phi[x] >= 0]
        free = [x for x in E if phi[x] < 0]
        if mapped:
            pivot = min(mapped, key=lambda v: g_deg[v])
            cands = (G.edges[i] for i in G.incidence[pivot])
        else:
            cands = iter(G.edges)
        mset = set(mapped)
        for g in cands:
            if len(g) != len(E) or not mset.issubset(g):
                continue
            rest = [v for v in g if v not in mset]
            if any(v in used for v in rest):
                continue
            if not free:
                yield from extend(step + 1)
                continue
            for perm in permutations(rest):
                if any(g_deg[v] < h_deg[x] for x, v in zip(free, perm)):
                    continue
                for x, v in zip(free, perm):
                    phi[x] = v
                    used.add(v)
                yield from extend(step + 1)
                for x, v in zip(free, perm):
                    phi[x] = -1
                    used.discard(v)

    yield from extend(0)


def _image(H: Hypergraph, phi: tuple[int, ...]) -> Copy:
    return frozenset(tuple(sorted(phi[x] for x in e)) for e in H.edges)


def copy_table(G: Hypergraph, H: Hypergraph) -> dict[Copy, frozenset[tuple[int, int]]]:
    """Every copy of H in G with the (pattern vertex, G vertex) pairs some isomorphism realizes.

    Results are memoized per (G, H) and shared, so callers must not mutate them.
    """
    return _copy_table(G, H)


@lru_cache(maxsize=64)
def _copy_table(G: Hypergraph, H: Hypergraph) -> dict[Copy, frozenset[tuple[int, int]]]:
    table: dict[Copy, set[tuple[int, int]]] = defaultdict(set)
    for phi in embeddings(G, H):
        table[_image(H, phi)].update(enumerate(phi))
    return {copy: frozenset(pairs) for copy, pairs in table.items()}


def find_copy(G: Hypergraph, H: Hypergraph) -> Copy | None:
    for phi in embeddings(G, H):
        return _image(H, phi)
    return None


def rooted_copy_count(G: Hypergraph, P: Pattern, v: int, u: int) -> int:
    """|{A subset of G : A is a copy of H with u playing the role of v}|."""
    if not 0 <= v < P.v:
        raise HypergraphError(f"{v} is not a vertex of the pattern")
    if not 0 <= u < G.vertex_count:
        raise HypergraphError(f"{u} is not a vertex of G")
    return len({_image(P.hypergraph, phi) for phi in embeddings(G, P.hypergraph, (v, u))})


def rooted_count_table(G: Hypergraph, P: Pattern) -> dict[int, dict[int, int]]:
    """counts[v][u] = rooted_copy_count(G, P, v, u), zeros omitted."""
    counts: dict[int, dict[int, int]] = {v: defaultdict(int) for v in range(P.v)}
    for pairs in copy_table(G, P.hypergraph).values():
        for v, u in pairs:
            counts[v][u] += 1
    return {v: dict(c) for v, c in counts.items()}


def delta_H(G: Hypergraph, P: Pattern) -> tuple[int, int]:
    """(min over pattern vertices v of max over u of the rooted count, the minimizing v)."""
    counts = rooted_count_table(G, P)
    best = None
    for v in range(P.v):
        val = max(counts[v].values(), default=0)
        if best is None or val < best[0]:
            best = (val, v)
    return best


def rooted(G: Hypergraph, P: Pattern) -> Pattern:
    """P with its root set to a minimizing vertex of delta_H (kept if already set)."""
    if P.root is not None:
        return P
    return P.with_root(delta_H(G, P)[1])


@dataclass(frozen=True)
class CopySet:
    base_vertex: int
    pattern: Pattern
    copies: Hypergraph  # (v(H)-1)-uniform, on G's vertex ids


def copies_at(G: Hypergraph, P: Pattern, u: int) -> CopySet:
    """T_H(u): vertex sets V(A) - u over copies A with u in the root position."""
    if P.root is None:
        raise HypergraphError("copies_at needs a rooted pattern")
    residues = set()
    for phi in embeddings(G, P.hypergraph, (P.root, u)):
        residues.add(tuple(sorted(w for w in phi if w != u)))
    width = max(P.v - 1, 1)
    return CopySet(u, P, Hypergraph(G.vertex_count, width, residues, validate=False))


def all_copy_sets(G: Hypergraph, P: Pattern) -> dict[int, Hypergraph]:
    """T_H(u) for every u at once (one global enumeration)."""
    if P.root is None:
        raise HypergraphError("all_copy_sets needs a rooted pattern")
    residues: dict[int, set] = defaultdict(set)
    for pairs in copy_table(G, P.hypergraph).values():
        verts = sorted({w for _, w in pairs})
        for x, u in pairs:
            if x == P.root:
                residues[u].add(tuple(w for w in verts if w != u))
    width = max(P.v - 1, 1)
    return {u: Hypergraph(G.vertex_count, width, residues.get(u, ()), validate=False) for u in range(G.vertex_count)}
