"""Algorithmic local lemma: bad-event systems, the asymmetric condition, and resampling."""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, NamedTuple, Sequence

import numpy as np

from . import kernels
from .hypercore import Hypergraph, HypergraphError, ceil_root, max_degree
from .oracles import check_proper
from .rng import derive_seed, make_rng

log = logging.getLogger(__name__)

DEFAULT_CAP = 1_000_000
DEFAULT_RESTARTS = 8

Sampler = Callable[[np.random.Generator], Any]


@dataclass
class BadEvent:
    scope: tuple[int, ...]
    predicate: Callable[[list], bool]
    bound: float | None = None
    name: str = ""


@dataclass
class BadEventSystem:
    """Independent variables plus bad events; two events depend iff their scopes meet."""

    samplers: list[Sampler]
    events: list[BadEvent] = field(default_factory=list)

    @cached_property
    def events_by_variable(self) -> dict[int, list[int]]:
        table: dict[int, list[int]] = defaultdict(list)
        for i, ev in enumerate(self.events):
            for x in ev.scope:
                table[x].append(i)
        return table

    def dependents(self, i: int) -> list[int]:
        """Events other than i sharing a variable with it."""
        out = set()
        for x in self.events[i].scope:
            out.update(self.events_by_variable[x])
        out.discard(i)
        return sorted(out)

    def violated(self, assignment: list) -> list[int]:
        return [i for i, ev in enumerate(self.events) if ev.predicate(assignment)]


class LLLReport(NamedTuple):
    ok: bool
    worst_event: int | None
    worst_bound: float
    worst_neighbor_sum: float

    def __bool__(self) -> bool:
        return self.ok


def asymmetric_lll_check(system: BadEventSystem) -> LLLReport:
    """Every event has Pr <= 1/4 and its dependent events sum to <= 1/4 (supplied bounds)."""
    if any(ev.bound is None for ev in system.events):
        raise ValueError("every event needs a probability bound")
    worst, worst_b, worst_s, worst_excess = None, 0.0, 0.0, -np.inf
    ok = True
    for i, ev in enumerate(system.events):
        s = sum(system.events[j].bound for j in system.dependents(i))
        excess = max(ev.bound, s) - 0.25
        if ev.bound > 0.25 or s > 0.25:
            ok = False
        if excess > worst_excess:
            worst, worst_b, worst_s, worst_excess = i, ev.bound, s, excess
    return LLLReport(ok, worst, worst_b, worst_s)


class ResampleFailure(RuntimeError):
    """Resampling cap exhausted; carries the events still violated."""

    def __init__(self, violations: list[int], assignment: list | None = None, message: str = ""):
        super().__init__(message or f"resampling cap exhausted with {len(violations)} violated events")
        self.violations = violations
        self.assignment = assignment


class MTResult(NamedTuple):
    assignment: list
    resamples: int
    trace: list[int]
    seed: int


def moser_tardos(system: BadEventSystem, seed: int, cap: int = DEFAULT_CAP) -> MTResult:
    """Sample everything, then resample the scope of the lowest-indexed violated event until none holds."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    rng = make_rng(seed)
    x = [draw(rng) for draw in system.samplers]
    events = system.events
    m = len(events)
    viol = [ev.predicate(x) for ev in events]
    by_var = system.events_by_variable
    trace: list[int] = []
    lo = 0
    while True:
        while lo < m and not viol[lo]:
            lo += 1
        if lo == m:
            return MTResult(x, len(trace), trace, seed)
        if len(trace) >= cap:
            raise ResampleFailure([i for i in range(m) if viol[i]], x)
        ev = events[lo]
        for v in ev.scope:
            x[v] = system.samplers[v](rng)
        trace.append(lo)
        touched = {j for v in ev.scope for j in by_var[v]}
        new_lo = lo
        for j in touched:
            viol[j] = events[j].predicate(x)
            if viol[j] and j < new_lo:
                new_lo = j
        lo = new_lo


def solve(system: BadEventSystem, seed: int, cap: int = DEFAULT_CAP, restarts: int = DEFAULT_RESTARTS) -> MTResult:
    """moser_tardos with up to ``restarts`` fresh derived seeds after a cap failure."""
    last: ResampleFailure | None = None
    for attempt in range(restarts + 1):
        s = seed if attempt == 0 else derive_seed(seed, attempt)
        try:
            return moser_tardos(system, s, cap)
        except ResampleFailure as exc:
            log.info("resampling attempt %d failed with %d violations", attempt, len(exc.violations))
            last = exc
    raise last


# -- coloring with r = max_j (4k(k-1) Delta_j)^(1/(j-1)) colors ---------------------------


def rankk_color_count(G: Hypergraph) -> int:
    """Ceiling of max_j (4k(k-1) Delta_j)^(1/(j-1)) over j = 2..k, at least 1."""
    k = G.rank
    r = 1
    for j in range(2, k + 1):
        dj = max_degree(G, j)
        r = max(r, ceil_root(4 * k * (k - 1) * dj, j - 1))
    return r


def monochromatic_system(G: Hypergraph, r: int) -> BadEventSystem:
    """One variable per vertex (uniform on r colors), one event per edge: 'edge is monochromatic'."""

    def sampler(rng: np.random.Generator) -> int:
        return int(rng.integers(r))

    events = []
    for e in G.edges:
        def mono(x, e=e):
            c = x[e[0]]
            return all(x[v] == c for v in e[1:])

        events.append(BadEvent(e, mono, float(r) ** (1 - len(e)), name=f"B{e}"))
    return BadEventSystem([sampler] * G.vertex_count, events)


class RankkColoring(NamedTuple):
    coloring: list[int]
    r: int
    resamples: int
    seed: int


def _mono_resample_run(G: Hypergraph, r: int, seed: int, cap: int) -> tuple[np.ndarray | None, int, list[int]]:
    rng = make_rng(seed)
    edge_ptr, edge_verts, inc_ptr, inc_edges = G.csr()
    colors = rng.integers(r, size=G.vertex_count).astype(np.int64)
    violated = kernels.mono_flags(edge_ptr, edge_verts, colors)
    chunk = max(4096, 8 * G.vertex_count)
    pos, lo, resamples = 0, 0, 0
    tape = np.empty(0, dtype=np.int64)
    while True:
        status, pos, lo, resamples = kernels.mono_resample(
            edge_ptr, edge_verts, inc_ptr, inc_edges, colors, violated, tape, pos, lo, resamples, cap
        )
        if status == kernels.DONE:
            return colors, resamples, []
        if status == kernels.CAP_REACHED:
            return None, resamples, [int(i) for i in np.flatnonzero(violated)]
        tape = rng.integers(r, size=chunk).astype(np.int64)
        pos = 0


def rankk_color(G: Hypergraph, seed: int, cap: int = DEFAULT_CAP, restarts: int = DEFAULT_RESTARTS) -> RankkColoring:
    """Proper coloring with the local-lemma color count, found by resampling monochromatic edges."""
    if any(len(e) < 2 for e in G.edges):
        raise HypergraphError("singleton edges cannot be properly colored")
    r = rankk_color_count(G)
    violations: list[int] = []
    for attempt in range(restarts + 1):
        s = seed if attempt == 0 else derive_seed(seed, attempt)
        colors, resamples, violations = _mono_resample_run(G, r, s, cap)
        if colors is not None:
            coloring = [int(c) for c in colors]
            assert check_proper(G, coloring).ok
            return RankkColoring(coloring, r, resamples, s)
        log.info("rankk_color attempt %d hit the cap of %d resamples", attempt, cap)
    raise ResampleFailure(violations, message=f"rankk_color failed after {restarts + 1} attempts")


def dependency_sum_bound(edge_size: int, degrees: Sequence[int], r: int) -> float:
    """sum_j |e| Delta_j r^(1-j) for degrees = [Delta_2, ..., Delta_k]."""
    return sum(edge_size * d * float(r) ** (1 - j) for j, d in enumerate(degrees, start=2))
