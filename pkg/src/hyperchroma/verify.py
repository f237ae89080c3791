"""Numerical checks of the deterministic inequalities and Monte Carlo checks of the
random ones.

Every report carries a verdict from {pass, trivial-pass, fail, out-of-hypothesis}.
"trivial-pass" marks a bound that is at least 1 (a probability bound that says
nothing) or a check with nothing to test.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .census import CopySet, Pattern, all_copy_sets, rooted
from .hypercore import REL_TOL, Hypergraph, HypergraphError, max_degree, max_jl_degree
from .oracles import minimum_hitting_set
from .pipeline.partition import color_count, d_threshold, seq_guard, seq_threshold
from .pipeline.transversal import extract_transversal, heavy_hierarchy, hypothesis_value
from .rng import make_rng

PASS, TRIVIAL, FAIL, OUT = "pass", "trivial-pass", "fail", "out-of-hypothesis"
CSV_FIELDS = ("name", "parameters", "empirical", "bound", "verdict")


@dataclass
class Row:
    name: str
    parameters: str
    empirical: float
    bound: float
    verdict: str


@dataclass
class Report:
    name: str
    verdict: str
    rows: list[Row] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict != FAIL

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in self.rows:
            w.writerow([r.name, r.parameters, repr(float(r.empirical)), repr(float(r.bound)), r.verdict])
        return buf.getvalue()

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())


def read_report_csv(text: str) -> list[Row]:
    return [
        Row(r["name"], r["parameters"], float(r["empirical"]), float(r["bound"]), r["verdict"])
        for r in csv.DictReader(io.StringIO(text))
    ]


def _combine(verdicts: Iterable[str]) -> str:
    vs = set(verdicts)
    for v in (FAIL, OUT, PASS):
        if v in vs:
            return v
    return TRIVIAL


def _params(**kw) -> str:
    return ";".join(f"{k}={v}" for k, v in kw.items())


# -- transversal tail ------------------------------------------------------------------------


def mc_transversal_tail(F: Hypergraph, p: float, alpha: float, c: float, trials: int, seed: int) -> Report:
    """Empirical Pr[tau(F') > s^2 (c/alpha)^(s+1)] against s^2 |V(F)|^(s-1) p^c.

    Every trial also extracts K from the heavy-set hierarchy and asserts it hits
    every surviving edge. The per-level counts |Z_k| are compared against
    k |V(F)|^(k-1) p^c.
    """
    s = F.uniformity() or F.rank
    n = F.vertex_count
    in_hyp = hypothesis_value(F, p, alpha) < 1 and c >= math.e * 2**s * s * alpha
    threshold = s**2 * (c / alpha) ** (s + 1)
    bound = s**2 * n ** (s - 1) * p**c
    rng = make_rng(seed)
    alive = rng.random((trials, n)) < p
    exceed = 0
    level_exceed = Counter()
    taus = []
    for t in range(trials):
        survivors = np.flatnonzero(alive[t]).tolist()
        res = extract_transversal(F, survivors, p, alpha, c, strict=False)
        if not res.certificate.is_valid():
            raise AssertionError(f"trial {t}: K misses surviving edges {res.certificate.missed()[:3]}")
        tau = len(minimum_hitting_set(res.surviving_edges))
        taus.append(tau)
        exceed += tau > threshold
        for k, level in res.hierarchy.surviving.items():
            level_exceed[k] += len(level) > (c / alpha) ** k
    rows = []

    def verdict_for(freq: float, b: float) -> str:
        if not in_hyp:
            return OUT
        if b >= 1:
            return TRIVIAL
        slack = 3 * math.sqrt(max(b * (1 - b), 1 / trials) / trials)
        return PASS if freq <= b + slack else FAIL

    freq = exceed / trials
    rows.append(Row("tau_tail", _params(p=p, alpha=alpha, c=c, trials=trials, threshold=threshold), freq, bound, verdict_for(freq, bound)))
    for k in range(1, s + 1):
        b = k * n ** (k - 1) * p**c
        fk = level_exceed[k] / trials
        rows.append(Row(f"Z_{k}_tail", _params(k=k, threshold=(c / alpha) ** k), fk, b, verdict_for(fk, b)))
    return Report(
        "transversal_tail",
        _combine(r.verdict for r in rows),
        rows,
        {"in_hypothesis": in_hyp, "mean_tau": float(np.mean(taus)) if taus else 0.0, "max_tau": max(taus, default=0)},
    )


# -- heavy-set inequality ---------------------------------------------------------------------


def check_heavybound(F: Hypergraph, p: float, alpha: float) -> Report:
    """Exhaustively check, for each level k and each b-set B (b < k) below a member of H_k,
    tau_k |{A in H_k : B subset A}| <= C(s,k) d(B) and, for b >= 1, C(s,k) d(B) < 2^s tau_b.
    Also re-checks minimality of every heavy set."""
    H = heavy_hierarchy(F, p, alpha)
    s, tau, d = H.s, H.thresholds, H.degrees
    d_empty = len(F)
    witnesses = []
    checked = 0
    for k, level in H.heavy_sets.items():
        for A in level:
            if not d[A] > tau[k]:
                witnesses.append(("not-heavy", A))
            for b in range(1, k):
                for B in itertools.combinations(A, b):
                    if d[B] > tau[b]:
                        witnesses.append(("not-minimal", A))
        for b in range(0, k):
            counts: Counter = Counter()
            for A in level:
                counts.update(itertools.combinations(A, b))
            for B, cnt in counts.items():
                checked += 1
                dB = d_empty if b == 0 else d[B]
                if tau[k] * cnt > comb(s, k) * dB * (1 + REL_TOL):
                    witnesses.append(("count", k, B, cnt))
                if b >= 1 and not comb(s, k) * dB < 2**s * tau[b]:
                    witnesses.append(("light", k, B, dB))
    verdict = FAIL if witnesses else PASS  # a vacuous check is still a pass of the inequality
    row = Row("heavybound", _params(p=p, alpha=alpha, edges=len(F)), float(len(witnesses)), 0.0, verdict)
    return Report("heavybound", verdict, [row], {"checked": checked, "witnesses": witnesses[:20]})


# -- connected sub-hypergraph count ------------------------------------------------------------


def connected_subgraph_count(G: Hypergraph, A: Sequence[int], h: int) -> int:
    """Connected edge subsets spanning exactly h vertices, all of A among them."""
    A = frozenset(A)
    edge_sets = [frozenset(e) for e in G.edges]
    seen: set[frozenset[int]] = set()
    stack = [frozenset([i]) for i, e in enumerate(edge_sets) if len(e) <= h]
    seen.update(stack)
    count = 0
    while stack:
        chosen = stack.pop()
        verts = frozenset().union(*(edge_sets[i] for i in chosen))
        if len(verts) == h and A <= verts:
            count += 1
        for v in verts:
            for j in G.incidence[v]:
                if j in chosen or len(verts | edge_sets[j]) > h:
                    continue
                grown = chosen | {j}
                if grown not in seen:
                    seen.add(grown)
                    stack.append(grown)
    return count


def check_ctlemma(G: Hypergraph, A: Sequence[int], h: int, omega: float) -> Report:
    """Brute-force count vs 2^((h+1)T) omega^T Delta^((h-|A|)/(k-1)), T = 2^h, compared in log space."""
    if G.vertex_count > 15 or h > 6:
        raise HypergraphError("instance too large for exhaustive enumeration (needs v(G) <= 15, h <= 6)")
    k = G.rank
    big = max(max_degree(G, k), 1)
    T = 2**h
    count = connected_subgraph_count(G, A, h)
    log2_bound = (h + 1) * T + T * math.log2(omega) + (h - len(A)) / (k - 1) * math.log2(big)
    ok = count == 0 or math.log2(count) <= log2_bound
    bound = 2.0**log2_bound if log2_bound < 1000 else math.inf
    verdict = PASS if ok else FAIL
    row = Row("ctlemma", _params(A=sorted(A), h=h, omega=omega), float(count), bound, verdict)
    return Report("ctlemma", verdict, [row], {"count": count, "log2_bound": log2_bound})


# -- recurrence ---------------------------------------------------------------------------------


@dataclass
class SeqStep:
    t: int
    d: float
    s: float
    d_bound: float
    s_bound: float
    active: bool

    @property
    def d_holds(self) -> bool:
        return self.d <= self.d_bound * (1 + REL_TOL)

    @property
    def s_holds(self) -> bool:
        return self.s <= self.s_bound * (1 + REL_TOL)

    @property
    def holds(self) -> bool:
        return self.d_holds and self.s_holds


def check_seqclaim(a: float, b: float, m: float, g: float, d0: float, steps: int) -> Report:
    """Iterate d_{t+1} = d_t/2^b + d_t^(1-1/m), s_{t+1} = s_t/2^a + d_t^(a/b-1/m) from s0 = d0^(a/b) g.

    Both conclusions are asserted along the prefix of steps where d_t stays at or
    above the guard D; later steps are reported but not asserted.
    """
    if min(a, b, m) < 1 or g <= 0 or d0 <= 0:
        raise ValueError("need a, b, m >= 1, g > 0, d0 > 0")
    D = seq_guard(a, b, m)
    d, s = float(d0), float(d0) ** (a / b) * g
    trace: list[SeqStep] = []
    active = True
    for t in range(steps + 1):
        active = active and d >= D
        trace.append(
            SeqStep(t, d, s, 2 * d0 * 2.0 ** (-b * t), d ** (a / b) * g + d ** (a / b - 1 / (2 * m)), active)
        )
        s_next = math.fsum((s / 2**a, d ** (a / b - 1 / m)))
        d = math.fsum((d / 2**b, d ** (1 - 1 / m)))
        s = s_next
    checked = [st for st in trace if st.active]
    failed = [st for st in checked if not st.holds]
    verdict = FAIL if failed else PASS
    rows = [
        Row("seq_d", _params(t=st.t, a=a, b=b, m=m, g=g, d0=d0), st.d, st.d_bound, (PASS if st.d_holds else FAIL) if st.active else TRIVIAL)
        for st in trace
    ]
    rows += [
        Row("seq_s", _params(t=st.t, a=a, b=b, m=m, g=g, d0=d0), st.s, st.s_bound, (PASS if st.s_holds else FAIL) if st.active else TRIVIAL)
        for st in trace
    ]
    return Report(
        "seqclaim",
        verdict,
        rows,
        {
            "D": D,
            "D_second": seq_threshold(a, b, m),
            "D_first": d_threshold(b, m),
            "active_checks": len(checked),
            "first_failure": failed[0].t if failed else None,
            "trace": trace,
        },
    )


# -- polynomial moments -------------------------------------------------------------------------


@dataclass
class PolynomialMoments:
    levels: tuple[float, ...]  # M_j = max over |A| = j of E[Z_A]
    cumulative: tuple[float, ...]  # max over |A| >= j of E[Z_A]
    by_set: dict[tuple[int, ...], float]

    @property
    def mean(self) -> float:
        return self.levels[0]


def compute_polynomial_moments(C: Hypergraph | CopySet, p: float) -> PolynomialMoments:
    """E[Z_A] = sum over edges f containing A of p^|f - A|, for every A inside some edge."""
    F = C.copies if isinstance(C, CopySet) else C
    s = F.uniformity() or F.rank
    if F.edges and not F.is_uniform(s):
        raise HypergraphError("polynomial moments need a uniform hypergraph")
    by_set: dict[tuple[int, ...], float] = {(): 0.0}
    for e in F.edges:
        for size in range(len(e) + 1):
            for A in itertools.combinations(e, size):
                by_set[A] = by_set.get(A, 0.0) + p ** (len(e) - size)
    levels = [0.0] * (s + 1)
    for A, val in by_set.items():
        levels[len(A)] = max(levels[len(A)], val)
    cumulative = [max(levels[j:]) for j in range(s + 1)]
    return PolynomialMoments(tuple(levels), tuple(cumulative), by_set)


# -- event frequencies ----------------------------------------------------------------------------


@dataclass
class MeanCheck:
    name: str
    empirical: float
    analytic: float
    stderr: float

    @property
    def agrees(self) -> bool:
        gap = abs(self.empirical - self.analytic)
        if self.stderr == 0:
            return gap <= 1e-9 * max(1.0, abs(self.analytic))
        return gap <= 3 * self.stderr


def _mono(colors: np.ndarray, sets: Sequence[Sequence[int]]) -> np.ndarray:
    """(trials, len(sets)) boolean: every vertex of the set shares one color."""
    out = np.ones((colors.shape[0], len(sets)), dtype=bool)
    for i, S in enumerate(sets):
        first = colors[:, S[0]]
        for v in S[1:]:
            out[:, i] &= colors[:, v] == first
    return out


def _mean_check(name: str, samples: np.ndarray, analytic: float) -> MeanCheck:
    n = samples.size
    se = float(samples.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return MeanCheck(name, float(samples.mean()) if n else 0.0, float(analytic), se)


def mc_event_frequencies(
    G: Hypergraph,
    patterns: Sequence[Pattern] = (),
    *,
    mode: str = "eps",
    epsilon: float | None = None,
    omega: Mapping[int, float] | float = 1.0,
    trials: int = 10_000,
    seed: int = 0,
    delta: float | None = None,
    conditional: Sequence[Sequence[int]] = (),
) -> Report:
    """Sample uniform colorings (r colors in eps mode, 2 in halving mode) and compare
    the empirical means of the event statistics with their exact expectations.

    Mean checks are aggregated per statistic class (summed over all vertices or
    sets of that class) so the number of 3-sigma tests stays small. Sets listed
    in ``conditional`` additionally get a check of d'_j(A) conditioned on A being
    monochromatic, whose mean is d_j(A) / 2^(j - |A|).
    """
    k = G.rank
    n = G.vertex_count
    big = float(delta) if delta is not None else float(max_degree(G, k))
    eff = max(big, 1.0)
    if isinstance(omega, (int, float)):
        omega = {j: float(omega) for j in range(2, k + 1)}
    if mode == "eps":
        if epsilon is None:
            raise ValueError("eps mode needs epsilon")
        r = color_count(eff, k, epsilon)
    elif mode == "halving":
        r = 2
    else:
        raise ValueError("mode must be 'eps' or 'halving'")
    rng = make_rng(seed)
    colors = rng.integers(r, size=(trials, n)) if n else np.zeros((trials, 0), dtype=np.int64)
    edges = list(G.edges)
    mono = _mono(colors, edges) if edges else np.zeros((trials, 0), dtype=bool)
    checks: list[MeanCheck] = []
    freqs: dict[str, float] = {}
    stats: dict[str, dict] = {}

    for j in range(2, k + 1):
        idx = [i for i, e in enumerate(edges) if len(e) == j]
        if mode == "eps":
            # Z_{u,j} summed over u is sum_e |e| 1[e mono]
            agg = mono[:, idx].sum(axis=1) * j if idx else np.zeros(trials)
            checks.append(_mean_check(f"Z[j={j}]", agg, j * len(idx) / r ** (j - 1)))
            limit = 2 * eff ** ((j - 1) * epsilon) * omega[j]
            per_u = np.zeros((trials, n))
            for i in idx:
                for v in edges[i]:
                    per_u[:, v] += mono[:, i]
            freqs[f"A[j={j}]"] = float((per_u >= limit).any(axis=1).mean()) if n else 0.0
            stats[f"Z[j={j}]"] = {"max_mean": float(per_u.mean(axis=0).max()) if n else 0.0}
        else:
            for a in range(1, j):
                counter: dict[tuple, list[int]] = {}
                for i in idx:
                    for A in itertools.combinations(edges[i], a):
                        counter.setdefault(A, []).append(i)
                if not counter:
                    continue
                total = np.zeros(trials)
                for members in counter.values():
                    total += mono[:, members].sum(axis=1)
                analytic = sum(len(mm) for mm in counter.values()) / 2 ** (j - 1)
                checks.append(_mean_check(f"dprime[j={j},|A|={a}]", total, analytic))
                thr_base = max_jl_degree(G, j, a) / 2 ** (j - a) + eff ** ((j - a) / (k - 1) - 1 / (2 * k))
                worst = np.zeros(trials, dtype=bool)
                for A, members in counter.items():
                    Amono = _mono(colors, [A])[:, 0]
                    worst |= Amono & (mono[:, members].sum(axis=1) > thr_base)
                freqs[f"C[j={j},|A|={a}]"] = float(worst.mean())
    for A in conditional:
        A = tuple(sorted(A))
        for j in range(len(A) + 1, k + 1):
            members = [i for i, e in enumerate(edges) if len(e) == j and set(A) <= set(e)]
            if not members:
                continue
            Amono = _mono(colors, [A])[:, 0] if len(A) > 1 else np.ones(trials, dtype=bool)
            samples = mono[Amono][:, members].sum(axis=1).astype(float)
            checks.append(_mean_check(f"dprime|mono[A={A},j={j}]", samples, len(members) / r ** (j - len(A))))
    for P in patterns:
        P = rooted(G, P)
        T = all_copy_sets(G, P)
        sets = [(u, *R) for u in range(n) for R in T[u].edges]
        if not sets:
            continue
        tm = _mono(colors, [sorted(S) for S in sets])
        total = tm.sum(axis=1)
        checks.append(_mean_check(f"T'[{P.label()}]", total, len(sets) / r ** (P.v - 1)))
        stats[f"T'[{P.label()}]"] = {"copies": len(sets)}
    rows = [
        Row(c.name, _params(mode=mode, r=r, trials=trials, stderr=c.stderr), c.empirical, c.analytic, PASS if c.agrees else FAIL)
        for c in checks
    ]
    rows += [Row(f"freq:{name}", _params(mode=mode, r=r), f, math.nan, TRIVIAL) for name, f in freqs.items()]
    verdict = FAIL if any(not c.agrees for c in checks) else (PASS if checks else TRIVIAL)
    return Report("event_frequencies", verdict, rows, {"r": r, "checks": checks, "frequencies": freqs, "stats": stats})


def perturbation_check(G: Hypergraph, colors: int = 2, max_vertices: int = 16) -> Report:
    """For every coloring, every A, every j and every vertex v outside A, recoloring v
    changes d'_j(A) by at most d_j(A + v) <= Delta_{j,|A|+1}.

    Here d'_j(A) counts j-edges containing A that are monochromatic in A's color.
    """
    n = G.vertex_count
    if n > max_vertices:
        raise HypergraphError(f"exhaustive perturbation needs at most {max_vertices} vertices")
    k = G.rank
    edges = [frozenset(e) for e in G.edges]
    targets = []
    for j in range(2, k + 1):
        for a in range(1, j):
            sets = {A for e in G.edges if len(e) == j for A in itertools.combinations(e, a)}
            bound = max_jl_degree(G, j, a + 1)
            for A in sorted(sets):
                members = [e for e in edges if len(e) == j and e.issuperset(A)]
                targets.append((j, A, members, bound))
    worst = 0
    worst_bound = math.inf
    violations = []
    checked = 0
    for col in itertools.product(range(colors), repeat=n):
        for j, A, members, bound in targets:
            c0 = col[A[0]]
            base = sum(all(col[w] == c0 for w in e) for e in members)
            for v in range(n):
                if v in A:
                    continue
                for c in range(colors):
                    if c == col[v]:
                        continue
                    alt = list(col)
                    alt[v] = c
                    moved = sum(all(alt[w] == c0 for w in e) for e in members)
                    diff = abs(moved - base)
                    checked += 1
                    if diff > worst or (diff == worst and bound < worst_bound):
                        worst, worst_bound = diff, bound
                    if diff > bound:
                        violations.append((col, j, A, v, diff, bound))
    verdict = FAIL if violations else (PASS if checked else TRIVIAL)
    row = Row("perturbation", _params(colors=colors, checked=checked), float(worst), float(worst_bound), verdict)
    return Report("perturbation", verdict, [row], {"checked": checked, "violations": violations[:10]})
