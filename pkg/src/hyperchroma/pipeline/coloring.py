"""End-to-end colorers: partition into sparse pattern-free parts, color each part
with its own palette.

Both colorers reduce to the local-lemma colorer when the partition machinery
cannot run (parameter too small, hypotheses of an inner step failing at desk
scale, or resampling exhausted). The route taken is reported, never hidden.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from math import comb

from ..census import delta_H, triangle_family, two_edge_pattern
from ..hypercore import REL_TOL, Hypergraph, HypergraphError, induced, max_degree, max_jl_degree
from ..oracles import SearchLimitExceeded, check_proper, chromatic_number_exact
from ..resample import DEFAULT_CAP, ResampleFailure, rankk_color
from ..rng import derive_seed
from .errors import HypothesisError
from .partition import PartitionResult, partition_full

log = logging.getLogger(__name__)

EXACT_LIMIT = 20
EXACT_NODES = 200_000


@dataclass
class ColoringResult:
    coloring: list[int]
    num_colors: int
    route: str  # "partition" or "rankk-fallback"
    parts: PartitionResult | None = None
    details: dict = field(default_factory=dict)


def base_color(G: Hypergraph, seed: int, cap: int = DEFAULT_CAP) -> list[int]:
    """Color one part: exact search when small, the local-lemma colorer otherwise."""
    if G.vertex_count == 0:
        return []
    if not G.edges:
        return [0] * G.vertex_count
    if G.vertex_count <= EXACT_LIMIT:
        try:
            return chromatic_number_exact(G, limit=EXACT_NODES)[1]
        except SearchLimitExceeded:
            pass
    return rankk_color(G, seed, cap).coloring


def _compact(coloring: list[int]) -> tuple[list[int], int]:
    relabel: dict[int, int] = {}
    out = [relabel.setdefault(c, len(relabel)) for c in coloring]
    return out, len(relabel)


def color_parts(G: Hypergraph, result: PartitionResult, seed: int, cap: int = DEFAULT_CAP) -> list[int]:
    """Distinct palettes per part; each part colored by ``base_color``."""
    coloring = [0] * G.vertex_count
    offset = 0
    for i, part in enumerate(result.parts):
        sub, ids = induced(G, part)
        local = base_color(sub, derive_seed(seed, 7, i), cap)
        for v, c in zip(ids, local):
            coloring[v] = offset + c
        offset += max(local, default=-1) + 1
    return coloring


def _fallback(G: Hypergraph, seed: int, cap: int, reason: str, details: dict) -> ColoringResult:
    log.info("falling back to the local-lemma colorer: %s", reason)
    res = rankk_color(G, derive_seed(seed, 9), cap)
    coloring, used = _compact(res.coloring)
    details = {**details, "fallback_reason": reason, "rankk_r": res.r}
    return ColoringResult(coloring, used, "rankk-fallback", None, details)


def _trivial(G: Hypergraph) -> ColoringResult | None:
    if G.vertex_count == 0:
        return ColoringResult([], 0, "trivial")
    if not G.edges:
        return ColoringResult([0] * G.vertex_count, 1, "trivial")
    return None


def corlin_hypothesis(G: Hypergraph, f: float) -> list[str]:
    """Failing inequalities of Delta_{k,l} <= Delta^((k-l)/(k-1)) / f, l = 2..k-1."""
    k = G.rank
    big = max_degree(G, k)
    bad = []
    for l in range(2, k):
        obs = max_jl_degree(G, k, l)
        bound = big ** ((k - l) / (k - 1)) / f
        if obs > bound * (1 + REL_TOL):
            bad.append(f"Delta_{{{k},{l}}} = {obs} > {bound:.6g}")
    return bad


def color_corlin(G: Hypergraph, f: float, seed: int, cap: int = DEFAULT_CAP) -> ColoringResult:
    """Proper coloring of a k-uniform G with bounded (k,l)-codegrees."""
    k = G.rank
    if G.edges and not G.is_uniform(k):
        raise HypergraphError("color_corlin needs a k-uniform hypergraph")
    if f <= 0:
        raise HypothesisError("f must be positive")
    bad = corlin_hypothesis(G, f)
    if bad:
        raise HypothesisError("; ".join(bad))
    trivial = _trivial(G)
    if trivial is not None:
        return trivial
    patterns = [two_edge_pattern(k, l) for l in range(2, k)]
    f_prime = f ** (1 / (2 * k - 2))
    slack = {P.label(): comb(k - 1, l - 1) for P, l in zip(patterns, range(2, k))}
    details = {"f": f, "f_prime": f_prime, "delta": max_degree(G, k)}
    if f_prime <= 1:
        return _fallback(G, seed, cap, "f' <= 1 leaves nothing to partition", details)
    try:
        parts = partition_full(G, patterns, f_prime, 1.0, derive_seed(seed, 1), cap, slack=slack)
    except (HypothesisError, ResampleFailure) as exc:
        return _fallback(G, seed, cap, f"{type(exc).__name__}: {exc}", details)
    coloring = color_parts(G, parts, derive_seed(seed, 2), cap)
    assert check_proper(G, coloring).ok
    coloring, used = _compact(coloring)
    details["num_parts"] = len(parts.parts)
    details["scale"] = (max(details["delta"], 1) / math.log(f)) ** (1 / (k - 1)) if f > 1 else None
    return ColoringResult(coloring, used, "partition", parts, details)


# -- rank 3, triangle-sparse -------------------------------------------------------------


def cortri_hypothesis(G: Hypergraph, f: float) -> list[str]:
    """Failing inequalities of Delta_H <= max(Delta^(1/2), Delta_2)^(v(H)-1) / f over the triangles."""
    big = max_degree(G, 3)
    d2 = max_degree(G, 2)
    base = max(math.sqrt(big), d2)
    bad = []
    for P in triangle_family():
        val = delta_H(G, P)[0]
        bound = base ** (P.v - 1) / f
        if val > bound * (1 + REL_TOL):
            bad.append(f"Delta_{P.label()} = {val} > {bound:.6g}")
    return bad


@dataclass
class CodegreeReduction:
    """G' = G with every 3-edge through a high-codegree pair replaced by that pair."""

    reduced: Hypergraph
    pairs: list[tuple[int, int]]
    threshold: float
    max_pairs_per_vertex: int
    removed_edges: int


def codegree_reduction(G: Hypergraph, big_delta: float) -> CodegreeReduction:
    threshold = math.sqrt(big_delta)
    codeg = G.subset_degrees(3)
    pairs = sorted(A for A, d in codeg.items() if len(A) == 2 and d >= threshold)
    pair_set = set(pairs)
    kept, removed = [], 0
    for e in G.edges:
        if len(e) == 3 and any(p in pair_set for p in ((e[0], e[1]), (e[0], e[2]), (e[1], e[2]))):
            removed += 1
            continue
        kept.append(e)
    per_vertex = [0] * G.vertex_count
    for a, b in pairs:
        per_vertex[a] += 1
        per_vertex[b] += 1
    reduced = Hypergraph(G.vertex_count, 3, kept + pairs)
    return CodegreeReduction(reduced, pairs, threshold, max(per_vertex, default=0), removed)


def _omega_needed(G: Hypergraph, big_delta: float) -> dict[int, float]:
    need = {2: 0.0, 3: 0.0}
    for j in (2, 3):
        for l in range(1, j):
            obs = max_jl_degree(G, j, l)
            if obs:
                need[j] = max(need[j], obs / big_delta ** ((j - l) / 2))
    return need


def color_cortri(G: Hypergraph, f: float, seed: int, cap: int = DEFAULT_CAP) -> ColoringResult:
    """Proper coloring of a rank-3 G whose triangle degrees are small relative to f."""
    if G.rank != 3:
        raise HypergraphError("color_cortri needs a rank-3 hypergraph")
    if f <= 0:
        raise HypothesisError("f must be positive")
    bad = cortri_hypothesis(G, f)
    if bad:
        raise HypothesisError("; ".join(bad))
    trivial = _trivial(G)
    if trivial is not None:
        return trivial
    big = max(max_degree(G, 3), 1)
    d2 = max_degree(G, 2)
    details: dict = {"f": f, "delta": big, "delta_2": d2}
    if f <= math.e:
        return _fallback(G, seed, cap, "log f <= 1", details)
    log_f = math.log(f)
    case = 1 if d2 <= math.sqrt(big * log_f) else 2
    work_delta = big if case == 1 else d2 * d2 / log_f
    details.update(case=case, work_delta=work_delta)

    red = codegree_reduction(G, work_delta)
    if red.max_pairs_per_vertex > 2 * math.sqrt(work_delta) * (1 + REL_TOL):
        raise AssertionError(f"{red.max_pairs_per_vertex} high-codegree pairs at one vertex exceed 2 Delta^(1/2)")
    details.update(
        pairs=len(red.pairs),
        pair_threshold=red.threshold,
        max_pairs_per_vertex=red.max_pairs_per_vertex,
        removed_edges=red.removed_edges,
    )
    Gp = red.reduced
    g = f / log_f**2.5
    if g <= math.e:
        return _fallback(G, seed, cap, "g = f / log^(5/2) f is too small", details)
    g_prime = g ** (1 / 6)
    delta_p = 2 * work_delta
    need = _omega_needed(Gp, delta_p)
    omega = {2: max(math.sqrt(math.log(g)), need[2]), 3: max(1.0, need[3])}
    details.update(g=g, g_prime=g_prime, omega={str(j): w for j, w in omega.items()})
    patterns = triangle_family()
    try:
        parts = partition_full(
            Gp, patterns, g_prime, omega, derive_seed(seed, 1), cap,
            delta=delta_p, slack={P.label(): 2.0 for P in patterns},
        )
    except (HypothesisError, ResampleFailure) as exc:
        return _fallback(G, seed, cap, f"{type(exc).__name__}: {exc}", details)
    coloring = color_parts(Gp, parts, derive_seed(seed, 2), cap)
    assert check_proper(Gp, coloring).ok
    assert check_proper(G, coloring).ok
    coloring, used = _compact(coloring)
    details["num_parts"] = len(parts.parts)
    details["scale"] = math.sqrt(big / log_f)
    return ColoringResult(coloring, used, "partition", parts, details)
