"""Brute-force frustration index for small graphs.

Walks all 2^(n-1) colourings in Gray-code order with node 0 held fixed, so
each step flips one node and the count is updated from that node's edges
alone. No pruning of any kind: this is the ground truth the solver is
checked against.
"""

from __future__ import annotations

import time

import numpy as np
from numba import njit

from .sgraph import Colouring, FrustrationResult, SignedGraph, frustrated_edges, frustration_count

MAX_ORACLE_NODES = 28


class OracleTooLarge(ValueError):
    pass


def _csr(G: SignedGraph):
    indptr = np.zeros(G.n + 1, dtype=np.int64)
    np.cumsum(G.degrees, out=indptr[1:])
    nbr = np.empty(2 * G.m, dtype=np.int64)
    sgn = np.empty(2 * G.m, dtype=np.int64)
    fill = indptr[:-1].copy()
    for i, j, s in G.edges:
        nbr[fill[i]], sgn[fill[i]] = j, s
        fill[i] += 1
        nbr[fill[j]], sgn[fill[j]] = i, s
        fill[j] += 1
    return indptr, nbr, sgn


@njit(cache=True)
def _recount(u, v, s, x):
    c = 0
    for e in range(u.size):
        same = x[u[e]] == x[v[e]]
        if (s[e] > 0 and not same) or (s[e] < 0 and same):
            c += 1
    return c


@njit(cache=True)
def _gray_walk(n, indptr, nbr, sgn, u, v, s, first, check_every):
    x = np.zeros(n, dtype=np.int64)
    x[0] = first
    count = _recount(u, v, s, x)
    best = count
    best_step = 0
    mismatches = 0
    steps = 1 << (n - 1) if n > 0 else 1
    for k in range(1, steps):
        # the bit that changes between gray(k-1) and gray(k) is the lowest set bit of k
        b = 0
        t = k
        while (t & 1) == 0:
            t >>= 1
            b += 1
        node = b + 1
        delta = 0
        for p in range(indptr[node], indptr[node + 1]):
            same = x[node] == x[nbr[p]]
            frustrated = (sgn[p] > 0 and not same) or (sgn[p] < 0 and same)
            delta += -1 if frustrated else 1
        x[node] = 1 - x[node]
        count += delta
        if count < best:
            best = count
            best_step = k
        if check_every > 0 and k % check_every == 0:
            if _recount(u, v, s, x) != count:
                mismatches += 1
    return best, best_step, mismatches


def _gray_colouring(n: int, step: int, first: int) -> Colouring:
    g = step ^ (step >> 1)
    bits = [first] + [(g >> b) & 1 for b in range(n - 1)]
    return Colouring(tuple(bits[:n]))


def brute_force(G: SignedGraph, *, fix_black: bool = False, check_every: int = 0) -> FrustrationResult:
    """Exact minimum frustration count by exhaustive enumeration.

    Node 0 is fixed white (black with ``fix_black``); by complement symmetry
    either choice sees every frustration count. ``check_every`` > 0 recounts
    from scratch every that many steps and reports disagreements with the
    incremental count in ``stats["mismatches"]``.
    """
    if G.n > MAX_ORACLE_NODES:
        raise OracleTooLarge(f"brute force limited to n <= {MAX_ORACLE_NODES}, got n={G.n}")
    t0 = time.perf_counter()
    first = 1 if fix_black else 0
    if G.n == 0:
        X = Colouring(())
        return FrustrationResult(0, X, (), True, 0, 0, {"evaluated": 1, "mismatches": 0})
    indptr, nbr, sgn = _csr(G)
    u, v, s = G.arrays
    best, step, mismatches = _gray_walk(G.n, indptr, nbr, sgn, u, v, s, first, check_every)
    X = _gray_colouring(G.n, int(step), first)
    assert frustration_count(G, X) == best
    stats = {
        "evaluated": 1 << (G.n - 1),
        "mismatches": int(mismatches),
        "wall_time": time.perf_counter() - t0,
    }
    return FrustrationResult(int(best), X, tuple(frustrated_edges(G, X)), True, int(best), int(best), stats)
