"""Rank-k hypergraphs and the degree, link, codegree and sparsity queries on them."""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

Edge = tuple[int, ...]

# relative slack for comparing integer counts against real-valued bounds
REL_TOL = 1e-9


class HypergraphError(ValueError):
    """Malformed hypergraph or out-of-range query."""


class Hypergraph:
    """Immutable hypergraph on vertices ``0..vertex_count-1`` with edges of size 1..rank.

    Edges are stored as strictly increasing tuples, sorted lexicographically,
    without duplicates. Ordinary rank-k instances have every edge of size at
    least 2; links and copy hypergraphs may be 1-uniform.
    """

    def __init__(self, vertex_count: int, rank: int, edges: Iterable[Iterable[int]] = (), *, validate: bool = True):
        self.vertex_count = int(vertex_count)
        self.rank = int(rank)
        canon = {tuple(sorted(int(v) for v in e)) for e in edges}
        if validate:
            if self.vertex_count < 0:
                raise HypergraphError("vertex_count must be nonnegative")
            if self.rank < 1:
                raise HypergraphError("rank must be at least 1")
            for e in canon:
                if not 1 <= len(e) <= self.rank:
                    raise HypergraphError(f"edge {e} has size outside [1, {self.rank}]")
                if len(set(e)) != len(e):
                    raise HypergraphError(f"edge {e} repeats a vertex")
                if e[0] < 0 or e[-1] >= self.vertex_count:
                    raise HypergraphError(f"edge {e} has a vertex outside [0, {self.vertex_count})")
        self.edges: tuple[Edge, ...] = tuple(sorted(canon))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]], vertex_count: int | None = None, rank: int | None = None) -> "Hypergraph":
        edges = [tuple(e) for e in edges]
        if vertex_count is None:
            vertex_count = 1 + max((max(e) for e in edges if e), default=-1)
        if rank is None:
            rank = max((len(e) for e in edges), default=2)
        return cls(vertex_count, rank, edges)

    @classmethod
    def empty(cls, vertex_count: int = 0, rank: int = 2) -> "Hypergraph":
        return cls(vertex_count, rank, ())

    # -- basic views ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, edge) -> bool:
        return tuple(sorted(edge)) in self.edge_set

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.vertex_count, self.rank, self.edges) == (other.vertex_count, other.rank, other.edges)

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.rank, self.edges))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.vertex_count}, k={self.rank}, m={len(self.edges)})"

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices containing each vertex, in increasing order."""
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def edge_sizes(self) -> Counter:
        return Counter(len(e) for e in self.edges)

    def support(self) -> list[int]:
        """Vertices lying in at least one edge."""
        return sorted({v for e in self.edges for v in e})

    def is_uniform(self, size: int | None = None) -> bool:
        sizes = set(self.edge_sizes)
        if not sizes:
            return True
        return len(sizes) == 1 and (size is None or size in sizes)

    def uniformity(self) -> int | None:
        sizes = set(self.edge_sizes)
        return sizes.pop() if len(sizes) == 1 else None

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Edge and incidence lists as CSR arrays: (edge_ptr, edge_verts, inc_ptr, inc_edges)."""
        edge_ptr = np.zeros(len(self.edges) + 1, dtype=np.int64)
        for i, e in enumerate(self.edges):
            edge_ptr[i + 1] = edge_ptr[i] + len(e)
        edge_verts = np.fromiter((v for e in self.edges for v in e), dtype=np.int64, count=int(edge_ptr[-1]))
        inc_ptr = np.zeros(self.vertex_count + 1, dtype=np.int64)
        for v, es in enumerate(self.incidence):
            inc_ptr[v + 1] = inc_ptr[v] + len(es)
        inc_edges = np.fromiter((i for es in self.incidence for i in es), dtype=np.int64, count=int(inc_ptr[-1]))
        return edge_ptr, edge_verts, inc_ptr, inc_edges

    @cached_property
    def _subset_degree_tables(self) -> dict[int, Counter]:
        return {}

    def subset_degrees(self, j: int) -> Counter:
        """Counter of d_j(A) over every nonempty A contained in some j-edge."""
        tables = self._subset_degree_tables
        if j not in tables:
            cnt: Counter = Counter()
            for e in self.edges:
                if len(e) != j:
                    continue
                for l in range(1, j + 1):
                    cnt.update(combinations(e, l))
            tables[j] = cnt
        return tables[j]

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {"rank": self.rank, "vertex_count": self.vertex_count, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Hypergraph":
        return cls(data["vertex_count"], data["rank"], data["edges"])


# -- queries ----------------------------------------------------------------------


def _check_vertices(G: Hypergraph, A: Iterable[int]) -> tuple[int, ...]:
    A = tuple(sorted(set(int(v) for v in A)))
    for v in A:
        if not 0 <= v < G.vertex_count:
            raise HypergraphError(f"vertex {v} outside [0, {G.vertex_count})")
    return A


def _edges_containing(G: Hypergraph, A: tuple[int, ...]) -> Iterable[Edge]:
    pivot = min(A, key=lambda v: len(G.incidence[v]))
    aset = set(A)
    for i in G.incidence[pivot]:
        e = G.edges[i]
        if aset.issubset(e):
            yield e


def degree(G: Hypergraph, A: Iterable[int], j: int) -> int:
    """Number of size-j edges containing the vertex set A."""
    A = _check_vertices(G, A)
    if not A:
        raise HypergraphError("degree needs a nonempty vertex set")
    if not len(A) <= j <= G.rank:
        raise HypergraphError(f"need |A| <= j <= rank, got |A|={len(A)}, j={j}, rank={G.rank}")
    return sum(1 for e in _edges_containing(G, A) if len(e) == j)


def link(G: Hypergraph, A: Iterable[int], j: int) -> Hypergraph:
    """The (j-|A|)-uniform hypergraph {B - A : B in G, A <= B, |B| = j}, on G's vertex ids."""
    A = _check_vertices(G, A)
    if not len(A) < j <= G.rank:
        raise HypergraphError(f"need |A| < j <= rank, got |A|={len(A)}, j={j}, rank={G.rank}")
    width = j - len(A)
    if A:
        source = _edges_containing(G, A)
    else:
        source = iter(G.edges)
    aset = set(A)
    residues = [tuple(v for v in e if v not in aset) for e in source if len(e) == j]
    return Hypergraph(G.vertex_count, width, residues, validate=False)


def neighborhood(G: Hypergraph, A: Iterable[int], j: int) -> list[int]:
    """N_j(A): the vertex support of the link of A."""
    return link(G, A, j).support()


def max_jl_degree(G: Hypergraph, j: int, l: int) -> int:
    """Maximum number of j-edges containing a fixed l-set; 0 without j-edges."""
    if not 1 <= l <= j <= G.rank:
        raise HypergraphError(f"need 1 <= l <= j <= rank, got l={l}, j={j}, rank={G.rank}")
    table = G.subset_degrees(j)
    return max((c for s, c in table.items() if len(s) == l), default=0)


def max_degree(G: Hypergraph, j: int) -> int:
    """Maximum j-degree, i.e. the (j, 1)-degree."""
    return max_jl_degree(G, j, 1)


def b_codegree(G: Hypergraph, b: int) -> int:
    """Maximum over distinct vertices v, v' of the number of ordered pairs of distinct
    edges (e, e') with v in e, v' in e' and |e & e'| = b."""
    if not 1 <= b < max(G.rank, 2):
        raise HypergraphError(f"need 1 <= b < rank, got b={b}")
    counts: Counter = Counter()
    edges = G.edges
    for i, e in enumerate(edges):
        partners = {x for v in e for x in G.incidence[v] if x != i}
        for x in partners:
            f = edges[x]
            if len(set(e) & set(f)) != b:
                continue
            for v in e:
                for w in f:
                    if v != w:
                        counts[(v, w)] += 1
    return max(counts.values(), default=0)


@dataclass
class SparsityProfile:
    """Declared or observed (delta, omega_2..omega_k) sparsity with the coloring parameter f."""

    delta: float
    omega: dict[int, float]
    f: float = 1.0

    def bound(self, rank: int, j: int, l: int) -> float:
        # delta below 1 (no top-rank edges) is read as 1, the same base profile() uses
        return max(self.delta, 1) ** ((j - l) / (rank - 1)) * self.omega[j]


class Violation(NamedTuple):
    j: int
    l: int
    observed: int
    bound: float


class SparsityReport(NamedTuple):
    ok: bool
    violations: list[Violation]

    def __bool__(self) -> bool:
        return self.ok


def is_sparse(G: Hypergraph, prof: SparsityProfile) -> SparsityReport:
    """Check max k-degree <= delta and Delta_{j,l} <= delta^{(j-l)/(k-1)} omega_j for 1 <= l < j <= k."""
    k = G.rank
    violations: list[Violation] = []
    top = max_degree(G, k) if k >= 1 else 0
    if top > prof.delta * (1 + REL_TOL):
        violations.append(Violation(k, 1, top, float(prof.delta)))
    if k >= 2:
        for j in range(2, k + 1):
            for l in range(1, j):
                obs = max_jl_degree(G, j, l)
                if obs == 0:
                    continue
                bound = prof.bound(k, j, l)
                if obs > bound * (1 + REL_TOL):
                    violations.append(Violation(j, l, obs, bound))
    return SparsityReport(not violations, violations)


def profile(G: Hypergraph, f: float = 1.0) -> SparsityProfile:
    """Observed profile: delta is the max k-degree and each omega_j is the least value
    making G sparse (1.0 when no j-edges constrain it)."""
    k = G.rank
    delta = max_degree(G, k)
    base = max(delta, 1)
    omega: dict[int, float] = {}
    for j in range(2, k + 1):
        need = 0.0
        for l in range(1, j):
            obs = max_jl_degree(G, j, l)
            if obs:
                need = max(need, obs / base ** ((j - l) / (k - 1)))
        omega[j] = need if need > 0 else 1.0
    return SparsityProfile(delta=delta, omega=omega, f=f)


def induced(G: Hypergraph, S: Iterable[int]) -> tuple[Hypergraph, list[int]]:
    """Subhypergraph induced on S, relabeled to 0..|S|-1; returns it with the old ids in new-id order."""
    keep = _check_vertices(G, S)
    new_id = {v: i for i, v in enumerate(keep)}
    edges = [tuple(new_id[v] for v in e) for e in G.edges if all(v in new_id for v in e)]
    return Hypergraph(len(keep), G.rank, edges, validate=False), list(keep)


def restrict(G: Hypergraph, S: Iterable[int]) -> Hypergraph:
    """Edges of G inside S, keeping G's vertex ids."""
    sset = set(S)
    return Hypergraph(G.vertex_count, G.rank, [e for e in G.edges if sset.issuperset(e)], validate=False)


def degree_table(G: Hypergraph) -> dict[tuple[int, int], int]:
    """All Delta_{j,l} for 1 <= l <= j <= rank."""
    return {(j, l): max_jl_degree(G, j, l) for j in range(1, G.rank + 1) for l in range(1, j + 1)}


def ceil_root(value: int, degree: int) -> int:
    """Smallest integer r >= 0 with r**degree >= value, computed exactly."""
    if value <= 0:
        return 0
    if degree == 1:
        return value
    r = math.isqrt(value) if degree == 2 else int(round(value ** (1.0 / degree)))
    while r ** degree < value:
        r += 1
    while r > 0 and (r - 1) ** degree >= value:
        r -= 1
    return r


# -- text and JSON formats ------------------------------------------------------


def parse_hgt(text: str) -> tuple[Hypergraph, int | None]:
    """Parse the HGT text format; returns the hypergraph and an optional ``root`` trailer."""
    header = None
    edges: list[tuple[int, ...]] = []
    root = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "root":
            if len(parts) != 2:
                raise HypergraphError(f"line {lineno}: malformed root trailer")
            root = int(parts[1])
            continue
        if root is not None:
            raise HypergraphError(f"line {lineno}: data after root trailer")
        try:
            nums = [int(x) for x in parts]
        except ValueError as exc:
            raise HypergraphError(f"line {lineno}: {exc}") from None
        if header is None:
            if len(nums) != 2:
                raise HypergraphError(f"line {lineno}: header must be 'k n'")
            header = nums
            continue
        if any(b <= a for a, b in zip(nums, nums[1:])):
            raise HypergraphError(f"line {lineno}: edge ids must be strictly increasing")
        edges.append(tuple(nums))
    if header is None:
        raise HypergraphError("missing 'k n' header")
    k, n = header
    if len(set(edges)) != len(edges):
        raise HypergraphError("duplicate edge")
    return Hypergraph(n, k, edges), root


def format_hgt(G: Hypergraph, comment: str | None = None, root: int | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{G.rank} {G.vertex_count}")
    lines.extend(" ".join(map(str, e)) for e in G.edges)
    if root is not None:
        lines.append(f"root {root}")
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> Hypergraph:
    """Read a hypergraph from ``.json`` or HGT text."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return Hypergraph.from_dict(json.loads(text))
    return parse_hgt(text)[0]


def save(G: Hypergraph, path: str | Path, comment: str | None = None) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(G.to_dict(), sort_keys=True) + "\n")
    else:
        path.write_text(format_hgt(G, comment))
