"""Compiled depth-first search over node colourings.

Nodes are addressed by their position in a fixed branching order. A
subproblem is the subgraph induced by positions ``s..n-1``; the search
colours those positions in order. Per-search state lives in caller-owned
arrays so a search can be paused after a node budget and resumed, which is
how the Python side enforces wall-clock limits.

State vector ``st``: [depth, frustrated-so-far, sum of per-node minima,
best value, nodes expanded, stop target].
"""

import numpy as np
from numba import njit

DEPTH, CUR, SUMMIN, BEST, NODES, TARGET = range(6)


@njit(cache=True, nogil=True)
def assign(p, c, indptr, nbr, sgn, col, cost0, cost1, st):
    if c == 0:
        st[CUR] += cost0[p]
    else:
        st[CUR] += cost1[p]
    st[SUMMIN] -= min(cost0[p], cost1[p])
    col[p] = c
    for k in range(indptr[p], indptr[p + 1]):
        q = nbr[k]
        if q <= p:
            continue
        old = min(cost0[q], cost1[q])
        # colour of q that would frustrate this edge
        bad = c if sgn[k] < 0 else 1 - c
        if bad == 0:
            cost0[q] += 1
        else:
            cost1[q] += 1
        st[SUMMIN] += min(cost0[q], cost1[q]) - old


@njit(cache=True, nogil=True)
def unassign(p, indptr, nbr, sgn, col, cost0, cost1, st):
    c = col[p]
    for k in range(indptr[p], indptr[p + 1]):
        q = nbr[k]
        if q <= p:
            continue
        old = min(cost0[q], cost1[q])
        bad = c if sgn[k] < 0 else 1 - c
        if bad == 0:
            cost0[q] -= 1
        else:
            cost1[q] -= 1
        st[SUMMIN] += min(cost0[q], cost1[q]) - old
    st[SUMMIN] += min(cost0[p], cost1[p])
    if c == 0:
        st[CUR] -= cost0[p]
    else:
        st[CUR] -= cost1[p]
    col[p] = -1


@njit(cache=True, nogil=True)
def improvable(q, s, indptr, nbr, sgn, col):
    """True when flipping q alone strictly lowers the count on its (decided) edges."""
    f = 0
    d = 0
    for k in range(indptr[q], indptr[q + 1]):
        r = nbr[k]
        if r < s:
            continue
        d += 1
        same = col[q] == col[r]
        if (sgn[k] > 0 and not same) or (sgn[k] < 0 and same):
            f += 1
    return 2 * f > d


@njit(cache=True, nogil=True)
def search(indptr, nbr, sgn, close_ptr, close_nodes, suffix_lb, s, base, fix_first, use_dominance,
           col, cost0, cost1, tried, first, st, best_col, shared, budget):
    """Run (or resume) the search below ``base``; returns 0 when done, 1 when paused.

    Only colourings strictly better than ``min(st[BEST], shared[0])`` are
    accepted. The search stops early once the best value reaches st[TARGET].
    """
    n = col.size
    p = st[DEPTH]
    spent = 0
    while True:
        if st[BEST] <= st[TARGET] or shared[0] <= st[TARGET]:
            return 0
        if spent >= budget:
            st[DEPTH] = p
            return 1
        if p == n:
            if st[CUR] < st[BEST]:
                st[BEST] = st[CUR]
                best_col[:] = col
                if st[CUR] < shared[0]:
                    shared[0] = st[CUR]
            if p == base:
                st[DEPTH] = p
                return 0
            p -= 1
            unassign(p, indptr, nbr, sgn, col, cost0, cost1, st)
            continue
        limit = 1 if (p == s and fix_first) else 2
        if tried[p] >= limit:
            tried[p] = 0
            if p == base:
                st[DEPTH] = p
                return 0
            p -= 1
            unassign(p, indptr, nbr, sgn, col, cost0, cost1, st)
            continue
        if p == s and fix_first:
            c = 1
        elif tried[p] == 0:
            c = 0 if cost0[p] <= cost1[p] else 1
            first[p] = c
        else:
            c = 1 - first[p]
        tried[p] += 1
        assign(p, c, indptr, nbr, sgn, col, cost0, cost1, st)
        spent += 1
        st[NODES] += 1
        bound = st[CUR] + st[SUMMIN] + suffix_lb[p + 1]
        cutoff = min(st[BEST], shared[0])
        prune = bound >= cutoff
        if not prune and use_dominance:
            for k in range(close_ptr[p], close_ptr[p + 1]):
                q = close_nodes[k]
                if q >= s and improvable(q, s, indptr, nbr, sgn, col):
                    prune = True
                    break
        if prune:
            unassign(p, indptr, nbr, sgn, col, cost0, cost1, st)
            continue
        p += 1


@njit(cache=True)
def local_search(indptr, nbr, sgn, x, order):
    """First-improvement single-node flips in the given scan order until none improves."""
    n = x.size
    gain = np.zeros(n, dtype=np.int64)
    for i in range(n):
        f = 0
        d = 0
        for k in range(indptr[i], indptr[i + 1]):
            d += 1
            same = x[i] == x[nbr[k]]
            if (sgn[k] > 0 and not same) or (sgn[k] < 0 and same):
                f += 1
        gain[i] = 2 * f - d
    improved = True
    while improved:
        improved = False
        for t in range(n):
            i = order[t]
            if gain[i] > 0:
                x[i] = 1 - x[i]
                gain[i] = -gain[i]
                for k in range(indptr[i], indptr[i + 1]):
                    j = nbr[k]
                    same = x[i] == x[j]
                    frustrated = (sgn[k] > 0 and not same) or (sgn[k] < 0 and same)
                    # edge (i, j) just toggled; j's gain moves by 2 in the matching direction
                    gain[j] += 2 if frustrated else -2
                improved = True
    return x
