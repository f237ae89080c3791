"""Vertex partitions into pattern-free parts of bounded degree.

``eps_partition`` colors randomly (resampled until no vertex sees too many
same-colored link edges or copy residues), then splits each color class along a
greedy coloring of the auxiliary graph W joining every u to a transversal of
its surviving copies. ``random_halving`` is the two-color splitting step, and
``partition_full`` drives the halving recursion before handing leaves to
``eps_partition``.
"""
from __future__ import annotations

import heapq
import json
import logging
import math
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..census import Pattern, all_copy_sets, delta_H, rooted
from ..hypercore import (
    REL_TOL,
    Hypergraph,
    HypergraphError,
    SparsityProfile,
    degree_table,
    induced,
    is_sparse,
    link,
    max_degree,
    max_jl_degree,
    profile,
)
from ..oracles import check_pattern_free, minimum_hitting_set
from ..resample import DEFAULT_CAP, DEFAULT_RESTARTS, BadEvent, BadEventSystem, solve
from ..rng import derive_seed
from .errors import CertificateError, HypothesisError
from .transversal import extract_transversal

log = logging.getLogger(__name__)


# -- constants of the epsilon partition ----------------------------------------------


def alpha_for(v: int, k: int, epsilon: float) -> float:
    """alpha_H = eps / ((1/(k-1) - eps) (v(H) - 1))."""
    return epsilon / ((1 / (k - 1) - epsilon) * (v - 1))


def c_constant(N: int, k: int, epsilon: float) -> float:
    """c = (N^2 + 3N) 2^N / (1/(k-1) - eps)."""
    return (N * N + 3 * N) * 2**N / (1 / (k - 1) - epsilon)


def color_count(delta: float, k: int, epsilon: float) -> int:
    return max(2, round(max(delta, 1) ** (1 / (k - 1) - epsilon)))


def degeneracy_coloring(vertices: Sequence[int], adj: Mapping[int, set[int]]) -> dict[int, int]:
    """Greedy coloring in reverse smallest-last order (minimum degree removed first, ties by id)."""
    deg = {v: len(adj.get(v, ())) for v in vertices}
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)
    removed: set[int] = set()
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if v in removed or d != deg[v]:
            continue
        removed.add(v)
        order.append(v)
        for w in adj.get(v, ()):
            if w not in removed:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    color: dict[int, int] = {}
    for v in reversed(order):
        taken = {color[w] for w in adj.get(v, ()) if w in color}
        c = 0
        while c in taken:
            c += 1
        color[v] = c
    return color


# -- results ------------------------------------------------------------------------------


@dataclass
class PartCertificate:
    vertices: list[int]
    pattern_free: bool
    witness: str | None
    degrees: dict[int, int]  # j -> max j-degree inside the part
    bounds: dict[int, float]  # j -> allowed max j-degree

    @property
    def ok(self) -> bool:
        return self.pattern_free and all(self.degrees[j] <= self.bounds[j] * (1 + REL_TOL) for j in self.bounds)


@dataclass
class PartitionResult:
    part_of: list[int]
    parts: list[list[int]]
    certificates: list[PartCertificate]
    transversals: dict[str, list[int]] = field(default_factory=dict)  # "u:pattern" -> K(u, H)
    aux_graph: list[tuple[int, int]] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    trace: list[dict] = field(default_factory=list)
    seeds: list[int] = field(default_factory=list)

    def part_graph(self, G: Hypergraph, i: int) -> Hypergraph:
        return induced(G, self.parts[i])[0]

    def to_dict(self) -> dict:
        return {
            "part_of": self.part_of,
            "parts": self.parts,
            "certificates": [
                {
                    "part": i,
                    "size": len(c.vertices),
                    "pattern_free": c.pattern_free,
                    "witness": c.witness,
                    "max_degree": {str(j): d for j, d in c.degrees.items()},
                    "degree_bound": {str(j): b for j, b in c.bounds.items()},
                    "ok": c.ok,
                }
                for i, c in enumerate(self.certificates)
            ],
            "transversals": self.transversals,
            "aux_graph": [list(e) for e in self.aux_graph],
            "meta": self.meta,
            "trace": self.trace,
            "seeds": [str(s) for s in self.seeds],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def certify(G: Hypergraph, parts: Sequence[Sequence[int]], patterns: Sequence[Pattern], bounds: Mapping[int, float]) -> list[PartCertificate]:
    """Recompute every certificate from scratch; raise if any part fails."""
    certs = []
    for i, part in enumerate(parts):
        sub, _ = induced(G, part)
        free = check_pattern_free(sub, patterns)
        degrees = {j: max_degree(sub, j) for j in bounds}
        witness = None
        if not free.ok:
            name, copy = free.witness
            witness = f"{name}:{sorted(copy)}"
        cert = PartCertificate(list(part), free.ok, witness, degrees, dict(bounds))
        if not cert.ok:
            raise CertificateError(f"part {i} failed its certificate: free={free.ok}, degrees={degrees}, bounds={dict(bounds)}")
        certs.append(cert)
    return certs


# -- epsilon partition ----------------------------------------------------------------------


def _resolve_omega(G: Hypergraph, omega: Mapping[int, float] | float | None) -> dict[int, float]:
    k = G.rank
    if omega is None:
        return profile(G).omega
    if isinstance(omega, (int, float)):
        return {j: float(omega) for j in range(2, k + 1)}
    out = {j: float(omega[j]) for j in range(2, k + 1) if j in omega}
    for j in range(2, k + 1):
        out.setdefault(j, 1.0)
    return out


def _override(value, name: str, default: float) -> float:
    if value is None:
        return default
    if isinstance(value, Mapping):
        return float(value.get(name, default))
    return float(value)


def eps_partition(
    G: Hypergraph,
    patterns: Sequence[Pattern],
    epsilon: float,
    omega: Mapping[int, float] | float | None = None,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    *,
    delta: float | None = None,
    alpha: Mapping[str, float] | float | None = None,
    c: float | None = None,
    restarts: int = DEFAULT_RESTARTS,
) -> PartitionResult:
    """Partition V(G) into pattern-free parts with max j-degree below 2 delta^((j-1) eps) omega_j."""
    k = G.rank
    if k < 2:
        raise HypergraphError("eps_partition needs rank >= 2")
    if not 0 < epsilon < 1 / (k - 1):
        raise HypothesisError(f"epsilon={epsilon} outside (0, {1 / (k - 1)})")
    n = G.vertex_count
    observed = max_degree(G, k)
    big_delta = float(delta) if delta is not None else float(observed)
    eff = max(big_delta, 1.0)
    om = _resolve_omega(G, omega)
    r = color_count(eff, k, epsilon)
    deg_bound = {j: 2 * eff ** ((j - 1) * epsilon) * om[j] for j in range(2, k + 1)}

    pats = [rooted(G, P) for P in patterns]
    N = max((P.v for P in pats), default=2)
    cc = c if c is not None else c_constant(N, k, epsilon)
    alphas = {P.label(): _override(alpha, P.label(), alpha_for(P.v, k, epsilon)) for P in pats}
    tau_bound = {P.label(): (P.v - 1) ** 2 * (cc / alphas[P.label()]) ** P.v for P in pats}
    copy_sets = {P.label(): all_copy_sets(G, P) for P in pats}

    # stage 1: r colors with no A_{u,j} and no B_{u,H}
    def sampler(rng: np.random.Generator) -> int:
        return int(rng.integers(r))

    events: list[BadEvent] = []
    for u in range(n):
        for j in range(2, k + 1):
            L = link(G, [u], j)
            if not L.edges:
                continue
            residues = L.edges
            limit = deg_bound[j]

            def too_many(x, u=u, residues=residues, limit=limit):
                cu = x[u]
                z = sum(1 for B in residues if all(x[w] == cu for w in B))
                return z >= limit

            events.append(BadEvent((u, *L.support()), too_many, name=f"A[{u},{j}]"))
        for P in pats:
            T = copy_sets[P.label()][u]
            if not T.edges:
                continue
            bound = tau_bound[P.label()]
            if len(T) <= bound:
                continue  # tau(T') <= |T'| <= |T| never exceeds the bound

            def wide(x, u=u, T=T, bound=bound):
                cu = x[u]
                alive = [A for A in T.edges if all(x[w] == cu for w in A)]
                if len(alive) <= bound:
                    return False
                return len(minimum_hitting_set(alive)) > bound

            events.append(BadEvent((u, *T.support()), wide, name=f"B[{u},{P.label()}]"))
    system = BadEventSystem([sampler] * n, events)
    mt = solve(system, seed, cap, restarts)
    colors = [int(x) for x in mt.assignment]

    # stage 2: split each class along a coloring of W
    classes: dict[int, list[int]] = defaultdict(list)
    for v, col in enumerate(colors):
        classes[col].append(v)
    transversals: dict[str, list[int]] = {}
    aux_edges: set[tuple[int, int]] = set()
    part_key: dict[int, tuple[int, int]] = {}
    for col in sorted(classes):
        S = classes[col]
        Sset = set(S)
        adj: dict[int, set[int]] = defaultdict(set)
        for u in S:
            for P in pats:
                T = copy_sets[P.label()][u]
                if not any(Sset.issuperset(A) for A in T.edges):
                    continue
                res = extract_transversal(T, Sset, 1 / r, alphas[P.label()], cc, strict=False)
                K = sorted(res.K)
                transversals[f"{u}:{P.label()}"] = K
                for w in K:
                    if w != u:
                        adj[u].add(w)
                        adj[w].add(u)
                        aux_edges.add((min(u, w), max(u, w)))
        wcol = degeneracy_coloring(S, adj)
        for u in S:
            part_key[u] = (col, wcol[u])
    keys = sorted(set(part_key.values()))
    index = {key: i for i, key in enumerate(keys)}
    part_of = [index[part_key[v]] for v in range(n)]
    parts: list[list[int]] = [[] for _ in keys]
    for v in range(n):
        parts[part_of[v]].append(v)

    certs = certify(G, parts, patterns, deg_bound)
    a_min = min(alphas.values(), default=1.0)
    part_bound = r * (2 * len(pats) * (N - 1) ** 2 * (cc / a_min) ** N + 1)
    meta = {
        "epsilon": epsilon,
        "delta": big_delta,
        "observed_delta": observed,
        "r": r,
        "omega": {str(j): w for j, w in om.items()},
        "degree_bounds": {str(j): b for j, b in deg_bound.items()},
        "alpha": alphas,
        "c": cc,
        "roots": {P.label(): P.root for P in pats},
        "events": len(events),
        "resamples": mt.resamples,
        "num_parts": len(parts),
        "part_bound": part_bound,
        "stage1_colors": colors,
    }
    return PartitionResult(part_of, parts, certs, transversals, sorted(aux_edges), meta, [], [mt.seed])


# -- random halving ------------------------------------------------------------------------


@dataclass
class HalvingResult:
    halves: tuple[Hypergraph, Hypergraph]
    vertex_maps: tuple[list[int], list[int]]  # old ids of each half, in new-id order
    side: list[int]  # 0/1 per vertex of G
    thresholds: dict[str, float]
    achieved: list[dict]
    resamples: int
    sparse_ok: bool
    seed: int


def halving_events(
    G: Hypergraph,
    patterns: Sequence[Pattern],
    big_delta: float,
) -> tuple[list[tuple], list[tuple]]:
    """Non-vacuous halving events.

    Returns (C-events as (A, j, threshold, edges), B-events as (u, label, threshold, residues)).
    An event whose threshold is at least its deterministic maximum is dropped.
    """
    k = G.rank
    eff = max(big_delta, 1.0)
    c_events = []
    for j in range(2, k + 1):
        containing: dict[tuple, list] = defaultdict(list)
        for e in G.edges:
            if len(e) != j:
                continue
            for size in range(1, j):
                for A in _subsets(e, size):
                    containing[A].append(e)
        for A in sorted(containing):
            a = len(A)
            thr = max_jl_degree(G, j, a) / 2 ** (j - a) + eff ** ((j - a) / (k - 1) - 1 / (2 * k))
            if len(containing[A]) > thr:
                c_events.append((A, j, thr, containing[A]))
    b_events = []
    for P in patterns:
        val = delta_H(G, P)[0]
        thr = val / 2 ** (P.v - 1) + eff ** ((P.v - 1) / (k - 1) - 1 / (2 * k))
        for u, T in all_copy_sets(G, P).items():
            if len(T) > thr:
                b_events.append((u, P.label(), thr, T.edges))
    return c_events, b_events


def _subsets(e: tuple, size: int):
    from itertools import combinations

    return combinations(e, size)


def random_halving(
    G: Hypergraph,
    patterns: Sequence[Pattern],
    omega: Mapping[int, float] | float | None = None,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    *,
    delta: float | None = None,
    require_sparse: bool = True,
    restarts: int = DEFAULT_RESTARTS,
) -> HalvingResult:
    """Two-color V(G) so no set's same-side j-degree and no vertex's same-side copy count
    exceeds half-scaled expectation plus a delta^(... - 1/(2k)) margin."""
    k = G.rank
    n = G.vertex_count
    big_delta = float(delta) if delta is not None else float(max_degree(G, k))
    if omega is None:
        om = {j: w / 2 for j, w in profile(G).omega.items()}
    else:
        om = _resolve_omega(G, omega)
    report = is_sparse(G, SparsityProfile(big_delta, {j: 2 * w for j, w in om.items()}))
    if require_sparse and not report.ok:
        raise HypothesisError(f"G is not (delta, 2 omega)-sparse: {report.violations}")
    pats = [rooted(G, P) for P in patterns]
    c_events, b_events = halving_events(G, pats, big_delta)

    def sampler(rng: np.random.Generator) -> int:
        return int(rng.integers(2))

    events = []
    for A, j, thr, edges in c_events:
        def too_many(x, A=A, thr=thr, edges=edges):
            c0 = x[A[0]]
            if any(x[v] != c0 for v in A[1:]):
                return False
            return sum(1 for e in edges if all(x[w] == c0 for w in e)) > thr

        scope = sorted({v for e in edges for v in e})
        events.append(BadEvent(tuple(scope), too_many, name=f"C[{A},{j}]"))
    for u, label, thr, residues in b_events:
        def too_many_copies(x, u=u, thr=thr, residues=residues):
            cu = x[u]
            return sum(1 for R in residues if all(x[w] == cu for w in R)) > thr

        scope = sorted({u, *(v for R in residues for v in R)})
        events.append(BadEvent(tuple(scope), too_many_copies, name=f"B[{u},{label}]"))
    mt = solve(BadEventSystem([sampler] * n, events), seed, cap, restarts)
    side = [int(x) for x in mt.assignment]
    halves, maps, achieved = [], [], []
    for s in (0, 1):
        H, ids = induced(G, [v for v in range(n) if side[v] == s])
        halves.append(H)
        maps.append(ids)
        achieved.append(
            {
                "degrees": {f"{j},{l}": d for (j, l), d in degree_table(H).items()},
                "delta_H": {P.label(): delta_H(H, P)[0] for P in patterns},
            }
        )
    thresholds = {f"C[{A},{j}]": thr for A, j, thr, _ in c_events}
    thresholds.update({f"B[{u},{label}]": thr for u, label, thr, _ in b_events})
    return HalvingResult(tuple(halves), tuple(maps), side, thresholds, achieved, mt.resamples, report.ok, mt.seed)


# -- the recursion ----------------------------------------------------------------------------


def halving_steps(d0: float, f: float, N: int, k: int) -> int:
    """T = ceil((1/(k-1)) log2(2 d0 / f^(4Nk))), computed in log space."""
    value = (math.log2(2 * d0) - 4 * N * k * math.log2(f)) / (k - 1)
    return math.ceil(value - 1e-12)


def seq_threshold(a: float, b: float, m: float) -> float:
    """(2^(y + a) / (2^(b/m) - 1))^(2m), y = a/b - 1/m: beyond it the s-recurrence bound holds."""
    y = a / b - 1 / m
    return (2 ** (y + a) / (2 ** (b / m) - 1)) ** (2 * m)


def d_threshold(b: float, m: float) -> float:
    """Beyond this value d_t <= 2 d0 2^(-bt) follows from d_t <= (c + (d0 2^(-bt))^(1/m))^m,
    c = 2^b / (m (2^(b/m) - 1))."""
    c = 2**b / (m * (2 ** (b / m) - 1))
    q = 2 ** (1 / m)
    return (c * q / (q - 1)) ** m


def seq_guard(a: float, b: float, m: float) -> float:
    """Smallest d_t at which both recurrence conclusions are asserted."""
    return max(d_threshold(b, m), seq_threshold(a, b, m))


@dataclass
class RecursionState:
    t: int
    d: float
    r: dict[str, float]  # "j,l" -> r_{j,l,t}
    s: dict[str, float]  # pattern -> s_{H,t}
    leaves: int = 1
    sparse_ok: bool | None = None
    checked: bool = False


def recursion_trace(d0: float, omega: Mapping[int, float], patterns: Sequence[Pattern], f: float, k: int, T: int) -> list[RecursionState]:
    """Iterate d_t, r_{j,l,t}, s_{H,t} for t = 0..T."""
    m = 2 * k
    d = float(d0)
    r = {(j, l): d ** ((j - l) / (k - 1)) * omega[j] for j in range(2, k + 1) for l in range(1, j)}
    s = {P.label(): (d ** ((P.v - 1) / (k - 1))) / f**P.v for P in patterns}
    out = [RecursionState(0, d, {f"{j},{l}": v for (j, l), v in r.items()}, dict(s))]
    vs = {P.label(): P.v for P in patterns}
    for t in range(T):
        r = {(j, l): v / 2 ** (j - l) + d ** ((j - l) / (k - 1) - 1 / m) for (j, l), v in r.items()}
        s = {name: v / 2 ** (vs[name] - 1) + d ** ((vs[name] - 1) / (k - 1) - 1 / m) for name, v in s.items()}
        d = d / 2 ** (k - 1) + d ** (1 - 1 / m)
        out.append(RecursionState(t + 1, d, {f"{j},{l}": v for (j, l), v in r.items()}, dict(s)))
    return out


def check_recursion(trace: Sequence[RecursionState], d0: float, omega: Mapping[int, float], k: int) -> None:
    """Assert the halving-sequence bounds along the prefix where d_t clears its guard."""
    m = 2 * k
    b = k - 1
    d_guard = d_threshold(b, m)
    active = {key: True for key in trace[0].r} if trace else {}
    d_active = True
    for st in trace:
        d_active = d_active and st.d >= d_guard
        if d_active:
            st.checked = True
            if st.d > 2 * d0 * 2 ** (-b * st.t) * (1 + REL_TOL):
                raise AssertionError(f"d_{st.t} = {st.d} exceeds 2 d0 2^(-(k-1)t)")
        for key, val in st.r.items():
            j, l = map(int, key.split(","))
            a = j - l
            active[key] = active[key] and st.d >= seq_guard(a, b, m)
            if not active[key]:
                continue
            st.checked = True
            limit = st.d ** (a / b) * omega[j] + st.d ** (a / b - 1 / (2 * m))
            if val > limit * (1 + REL_TOL):
                raise AssertionError(f"r_{{{key},{st.t}}} = {val} exceeds {limit}")
            if omega[j] >= st.d ** (-1 / (2 * m)) and val > 2 * st.d ** (a / b) * omega[j] * (1 + REL_TOL):
                raise AssertionError(f"r_{{{key},{st.t}}} = {val} exceeds 2 d_t^(a/b) omega_j")


def partition_full(
    G: Hypergraph,
    patterns: Sequence[Pattern],
    f: float,
    omega: Mapping[int, float] | float | None = None,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    *,
    delta: float | None = None,
    slack: Mapping[str, float] | None = None,
    alpha: Mapping[str, float] | float | None = None,
    c: float | None = None,
    restarts: int = DEFAULT_RESTARTS,
) -> PartitionResult:
    """Halve T times, then epsilon-partition every leaf with eps = 1/(4Nk)."""
    k = G.rank
    if k < 2:
        raise HypergraphError("partition_full needs rank >= 2")
    if f <= 0:
        raise HypothesisError("f must be positive")
    observed = max_degree(G, k)
    big_delta = float(delta) if delta is not None else float(observed)
    d0 = max(big_delta, 1.0)
    om = _resolve_omega(G, omega)
    N = max((P.v for P in patterns), default=2)
    eps = 1 / (4 * N * k)

    report = is_sparse(G, SparsityProfile(big_delta, om))
    if not report.ok:
        raise HypothesisError(f"G is not (delta, omega)-sparse: {report.violations}")
    slack = dict(slack or {})
    for P in patterns:
        val = delta_H(G, P)[0]
        bound = slack.get(P.label(), 1.0) * d0 ** ((P.v - 1) / (k - 1)) / f**P.v
        if val > bound * (1 + REL_TOL):
            raise HypothesisError(f"Delta_{P.label()}(G) = {val} > {bound:.6g} = delta^((v-1)/(k-1)) / f^v")

    T = max(0, halving_steps(d0, f, N, k))
    trace = recursion_trace(d0, om, patterns, f, k, T)
    check_recursion(trace, d0, om, k)

    leaves: list[tuple[Hypergraph, list[int]]] = [(G, list(range(G.vertex_count)))]
    seeds: list[int] = []
    for t in range(T):
        d_t = trace[t].d
        nxt = []
        all_sparse = True
        for i, (leaf, ids) in enumerate(leaves):
            sub_seed = derive_seed(seed, 1, t, i)
            res = random_halving(leaf, patterns, om, sub_seed, cap, delta=d_t, require_sparse=False, restarts=restarts)
            all_sparse &= res.sparse_ok
            seeds.append(res.seed)
            for half, hmap in zip(res.halves, res.vertex_maps):
                nxt.append((half, [ids[v] for v in hmap]))
        leaves = nxt
        trace[t].sparse_ok = all_sparse
        trace[t + 1].leaves = len(leaves)
        if not all_sparse:
            log.info("halving step %d: a leaf was not (d_t, 2 omega)-sparse (expected below the asymptotic range)", t)

    eps_delta = 2**k * f ** (4 * N * k) if T >= 1 else d0
    part_of = [-1] * G.vertex_count
    parts: list[list[int]] = []
    transversals: dict[str, list[int]] = {}
    aux: list[tuple[int, int]] = []
    leaf_meta = []
    for i, (leaf, ids) in enumerate(leaves):
        res = eps_partition(leaf, patterns, eps, om, derive_seed(seed, 2, i), cap, delta=eps_delta, alpha=alpha, c=c, restarts=restarts)
        seeds.extend(res.seeds)
        offset = len(parts)
        for part in res.parts:
            parts.append(sorted(ids[v] for v in part))
        for v, p in enumerate(res.part_of):
            part_of[ids[v]] = offset + p
        for key, K in res.transversals.items():
            u, label = key.split(":", 1)
            transversals[f"{ids[int(u)]}:{label}"] = [ids[w] for w in K]
        aux.extend((ids[a], ids[b]) for a, b in res.aux_graph)
        leaf_meta.append({key: res.meta[key] for key in ("r", "num_parts", "resamples", "events", "part_bound")})

    eps_bounds = {j: 2 * max(eps_delta, 1.0) ** ((j - 1) * eps) * om[j] for j in range(2, k + 1)}
    conclusion_bounds = {j: math.ceil(2 ** (2 * k) * f ** (j - 1) * om[j]) for j in range(2, k + 1)}
    bounds = {j: min(eps_bounds[j], conclusion_bounds[j]) for j in range(2, k + 1)}
    certs = certify(G, parts, patterns, bounds)
    meta = {
        "f": f,
        "delta": big_delta,
        "observed_delta": observed,
        "N": N,
        "epsilon": eps,
        "T": T,
        "eps_delta": eps_delta,
        "omega": {str(j): w for j, w in om.items()},
        "degree_bounds": {str(j): b for j, b in bounds.items()},
        "conclusion_bounds": {str(j): b for j, b in conclusion_bounds.items()},
        "num_parts": len(parts),
        "scale": d0 ** (1 / (k - 1)) / f,
        "leaves": leaf_meta,
    }
    return PartitionResult(part_of, parts, certs, transversals, sorted(set(aux)), meta, [asdict(st) for st in trace], seeds)
