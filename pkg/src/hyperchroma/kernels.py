"""Inner loops of the independent-set process and the monochromatic-edge resampler.

Hypergraphs arrive as CSR arrays (see ``Hypergraph.csr``). Randomness arrives
as pre-drawn arrays, which keeps the compiled and interpreted paths bit-identical.
"""
from __future__ import annotations

import numpy as np

from ._accel import kernel

DONE = 0
NEED_TAPE = 1
CAP_REACHED = 2


@kernel
def greedy_is(n, edge_ptr, edge_verts, inc_ptr, inc_edges, order):
    """Random greedy independent set driven by a vertex permutation.

    Scanning a uniform permutation and taking every still-addable vertex picks,
    at each step, a uniform vertex among the addable ones. Returns the chosen
    vertices, the addable count before each choice, and the number chosen.
    """
    m = edge_ptr.size - 1
    in_set = np.zeros(n, dtype=np.bool_)
    blocked = np.zeros(n, dtype=np.bool_)
    hits = np.zeros(m, dtype=np.int64)
    chosen = np.empty(n, dtype=np.int64)
    eligible_before = np.empty(n, dtype=np.int64)
    eligible = n
    for e in range(m):
        if edge_ptr[e + 1] - edge_ptr[e] == 1:
            v = edge_verts[edge_ptr[e]]
            if not blocked[v]:
                blocked[v] = True
                eligible -= 1
    count = 0
    for idx in range(order.size):
        v = order[idx]
        if in_set[v] or blocked[v]:
            continue
        chosen[count] = v
        eligible_before[count] = eligible
        count += 1
        in_set[v] = True
        eligible -= 1
        for q in range(inc_ptr[v], inc_ptr[v + 1]):
            e = inc_edges[q]
            hits[e] += 1
            size = edge_ptr[e + 1] - edge_ptr[e]
            if hits[e] == size - 1:
                for s in range(edge_ptr[e], edge_ptr[e + 1]):
                    w = edge_verts[s]
                    if not in_set[w] and not blocked[w]:
                        blocked[w] = True
                        eligible -= 1
    return chosen[:count], eligible_before[:count], count


@kernel
def mono_flags(edge_ptr, edge_verts, colors):
    m = edge_ptr.size - 1
    out = np.zeros(m, dtype=np.bool_)
    for e in range(m):
        c0 = colors[edge_verts[edge_ptr[e]]]
        mono = True
        for s in range(edge_ptr[e] + 1, edge_ptr[e + 1]):
            if colors[edge_verts[s]] != c0:
                mono = False
                break
        out[e] = mono
    return out


@kernel
def mono_resample(edge_ptr, edge_verts, inc_ptr, inc_edges, colors, violated, tape, pos, lo, resamples, cap):
    """Moser-Tardos over monochromatic-edge events, lowest violated edge first.

    Mutates ``colors`` and ``violated`` in place. Every edge below ``lo`` is
    known to be proper. Returns (status, pos, lo, resamples).
    """
    m = edge_ptr.size - 1
    while True:
        while lo < m and not violated[lo]:
            lo += 1
        if lo == m:
            return DONE, pos, lo, resamples
        if resamples >= cap:
            return CAP_REACHED, pos, lo, resamples
        a = edge_ptr[lo]
        b = edge_ptr[lo + 1]
        if pos + (b - a) > tape.size:
            return NEED_TAPE, pos, lo, resamples
        for t in range(a, b):
            colors[edge_verts[t]] = tape[pos]
            pos += 1
        resamples += 1
        new_lo = lo
        for t in range(a, b):
            v = edge_verts[t]
            for q in range(inc_ptr[v], inc_ptr[v + 1]):
                e = inc_edges[q]
                c0 = colors[edge_verts[edge_ptr[e]]]
                mono = True
                for s in range(edge_ptr[e] + 1, edge_ptr[e + 1]):
                    if colors[edge_verts[s]] != c0:
                        mono = False
                        break
                violated[e] = mono
                if mono and e < new_lo:
                    new_lo = e
        lo = new_lo
