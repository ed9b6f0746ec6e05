"""Exact frustration index by branch-and-bound over node colourings.

The search colours nodes in a fixed order: start from the node of highest
unsigned degree (fixed black, which loses nothing by complement symmetry),
then repeatedly take the undecided node with the most decided neighbours,
ties by unsigned degree and then id. Because that rule looks only at which
nodes are decided, the order is the same on every branch, so the nodes
still undecided at depth p are always the same suffix of the order. The
solver first computes the exact frustration index of every such suffix
subgraph, shortest first, and uses it as the bound for the part of the
graph not yet coloured:

    bound = frustrated decided edges
          + sum over undecided u of min(edges to decided nodes frustrated if u white, ... if black)
          + L(subgraph induced by the undecided nodes)

The three parts cover disjoint edge sets, so the bound never exceeds the
best completion. A node whose neighbours are all decided and which has more
frustrated than unfrustrated incident edges is pruned too: flipping it
would give a strictly better colouring elsewhere in the tree.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from . import _kernel
from .sgraph import (
    Colouring,
    FrustrationResult,
    SignedGraph,
    circuit_rank,
    connected_components,
    frustrated_edges,
    frustration_count,
    is_balanced,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverOptions:
    use_net_degree_pruning: bool = True
    use_fixing: bool = True
    heuristic_restarts: int = 5
    time_limit: float = math.inf
    threads: int = 1
    seed: int = 0
    node_budget: int = 200_000

    def __post_init__(self):
        if not self.time_limit > 0:
            raise ValueError(f"time limit must be positive, got {self.time_limit}")
        if self.threads < 1:
            raise ValueError(f"threads must be at least 1, got {self.threads}")
        if self.heuristic_restarts < 0:
            raise ValueError("heuristic_restarts must be non-negative")


def _csr(n: int, edges) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    deg = np.zeros(n, dtype=np.int64)
    for i, j, _ in edges:
        deg[i] += 1
        deg[j] += 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    nbr = np.empty(indptr[-1], dtype=np.int64)
    sgn = np.empty(indptr[-1], dtype=np.int64)
    fill = indptr[:-1].copy()
    for i, j, s in edges:
        nbr[fill[i]], sgn[fill[i]] = j, s
        fill[i] += 1
        nbr[fill[j]], sgn[fill[j]] = i, s
        fill[j] += 1
    return indptr, nbr, sgn


def branching_order(G: SignedGraph) -> list[int]:
    """Node order used by the search (see module docstring)."""
    n = G.n
    if n == 0:
        return []
    deg = G.degrees
    decided = np.zeros(n, dtype=bool)
    touched = np.zeros(n, dtype=np.int64)
    ids = np.arange(n)
    order = []
    for _ in range(n):
        key = np.lexsort((ids, -deg, -touched))  # most decided neighbours, then degree, then id
        key = key[~decided[key]]
        v = int(key[0])
        order.append(v)
        decided[v] = True
        for w, _ in G.adjacency[v]:
            touched[w] += 1
    return order


class SearchNode:
    """A partial colouring in branching-order positions with incremental counts.

    ``frustrated`` counts frustrated edges with both ends decided;
    ``lower_bound()`` adds the per-node minima over undecided nodes and the
    exact value of the undecided suffix (when known).
    """

    def __init__(self, indptr, nbr, sgn, suffix_lb=None, start: int = 0):
        self.indptr, self.nbr, self.sgn = indptr, nbr, sgn
        n = indptr.size - 1
        self.start = start
        self.col = np.full(n, -1, dtype=np.int64)
        self.cost0 = np.zeros(n, dtype=np.int64)
        self.cost1 = np.zeros(n, dtype=np.int64)
        self.st = np.zeros(6, dtype=np.int64)
        self.st[_kernel.DEPTH] = start
        self.suffix_lb = np.zeros(n + 1, dtype=np.int64) if suffix_lb is None else suffix_lb

    @property
    def depth(self) -> int:
        return int(self.st[_kernel.DEPTH])

    @property
    def frustrated(self) -> int:
        return int(self.st[_kernel.CUR])

    def push(self, colour: int) -> None:
        p = self.depth
        _kernel.assign(p, colour, self.indptr, self.nbr, self.sgn, self.col, self.cost0, self.cost1, self.st)
        self.st[_kernel.DEPTH] = p + 1

    def pop(self) -> None:
        p = self.depth - 1
        _kernel.unassign(p, self.indptr, self.nbr, self.sgn, self.col, self.cost0, self.cost1, self.st)
        self.st[_kernel.DEPTH] = p

    def lower_bound(self) -> int:
        return int(self.st[_kernel.CUR] + self.st[_kernel.SUMMIN] + self.suffix_lb[self.depth])


class _Component:
    """One connected piece of the graph, relabelled to branching-order positions."""

    def __init__(self, H: SignedGraph):
        self.H = H
        self.order = branching_order(H)
        pos = np.empty(H.n, dtype=np.int64)
        pos[self.order] = np.arange(H.n)
        self.pos = pos
        edges = [(int(pos[i]), int(pos[j]), s) for i, j, s in H.edges]
        self.indptr, self.nbr, self.sgn = _csr(H.n, edges)
        n = H.n
        last = np.arange(n)
        for i, j, _ in edges:
            last[i] = max(last[i], j)
            last[j] = max(last[j], i)
        counts = np.bincount(last, minlength=n)
        self.close_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=self.close_ptr[1:])
        self.close_nodes = np.argsort(last, kind="stable").astype(np.int64)
        self.suffix_lb = np.zeros(n + 1, dtype=np.int64)

    def to_positions(self, X) -> np.ndarray:
        x = np.asarray(X, dtype=np.int64)
        return x[self.order]

    def from_positions(self, col: np.ndarray) -> np.ndarray:
        x = np.empty(self.H.n, dtype=np.int64)
        x[self.order] = col
        return x

    def count(self, col: np.ndarray, s: int = 0) -> int:
        c = 0
        for p in range(s, self.H.n):
            for k in range(self.indptr[p], self.indptr[p + 1]):
                q = self.nbr[k]
                if q > p and ((col[p] == col[q]) != (self.sgn[k] > 0)):
                    c += 1
        return c

    def extend(self, col: np.ndarray, s: int) -> tuple[int, int]:
        """Frustrated-edge counts from position s into the coloured suffix for s white / black."""
        c0 = c1 = 0
        for k in range(self.indptr[s], self.indptr[s + 1]):
            q = self.nbr[k]
            if q <= s:
                continue
            if self.sgn[k] > 0:
                c0 += col[q] == 1
                c1 += col[q] == 0
            else:
                c0 += col[q] == 0
                c1 += col[q] == 1
        return int(c0), int(c1)


class _Timeout(Exception):
    pass


def _run_task(comp: _Component, s, base, prefix_col, st_init, fix_first, opts, shared, deadline):
    n = comp.H.n
    node = SearchNode(comp.indptr, comp.nbr, comp.sgn, comp.suffix_lb, start=s)
    node.st[_kernel.BEST] = st_init[0]
    node.st[_kernel.TARGET] = st_init[1]
    for c in prefix_col:
        node.push(c)
    best_col = np.full(n, -1, dtype=np.int64)
    if node.lower_bound() >= min(node.st[_kernel.BEST], shared[0]):
        return int(node.st[_kernel.BEST]), None, True, 0
    tried = np.zeros(n, dtype=np.int64)
    first = np.zeros(n, dtype=np.int64)
    start_best = int(node.st[_kernel.BEST])
    finished = False
    while True:
        status = _kernel.search(
            comp.indptr, comp.nbr, comp.sgn, comp.close_ptr, comp.close_nodes, comp.suffix_lb,
            s, base, fix_first, opts.use_net_degree_pruning,
            node.col, node.cost0, node.cost1, tried, first, node.st, best_col, shared, opts.node_budget,
        )
        if status == 0:
            finished = True
            break
        if time.monotonic() > deadline:
            break
    best = int(node.st[_kernel.BEST])
    found = best_col.copy() if best < start_best else None
    return best, found, finished, int(node.st[_kernel.NODES])


def _solve_suffix(comp: _Component, s: int, ub: int, target: int, opts: SolverOptions, deadline: float):
    """Search subproblem s for a colouring cheaper than ub; stop early at target."""
    n = comp.H.n
    shared = np.array([ub], dtype=np.int64)
    fix_first = opts.use_fixing
    width = n - s
    split = 0
    if opts.threads > 1 and width >= 16:
        split = min(width - 1, int(math.ceil(math.log2(4 * opts.threads))) + 1)
    if split == 0:
        results = [_run_task(comp, s, s, (), (ub, target), fix_first, opts, shared, deadline)]
    else:
        heads = [(1,)] if fix_first else [(0,), (1,)]
        prefixes = [h + tail for h in heads for tail in product((0, 1), repeat=split - 1)]
        with ThreadPoolExecutor(max_workers=opts.threads) as pool:
            futures = [
                pool.submit(_run_task, comp, s, s + len(pre), pre, (ub, target), fix_first, opts, shared, deadline)
                for pre in prefixes
            ]
            results = [f.result() for f in futures]
    best, col = ub, None
    finished = all(r[2] for r in results)
    nodes = sum(r[3] for r in results)
    for value, found, _, _ in results:
        if found is not None and value < best:
            best, col = value, found
    # an early stop at target is a proof too
    if best <= target:
        finished = True
    return best, col, finished, nodes


def _heuristic(comp: _Component, opts: SolverOptions) -> np.ndarray:
    """Best colouring (in positions) among local search restarts and the trivial-bound colourings."""
    H = comp.H
    cands = [np.zeros(H.n, dtype=np.int64)]  # all white: frustrates exactly the negative edges
    cert_col = _tree_colouring(H)
    cands.append(cert_col)  # only non-tree edges can be frustrated: at most the circuit rank
    rng = np.random.default_rng(opts.seed)
    starts = [cert_col] + [rng.integers(0, 2, size=H.n) for _ in range(opts.heuristic_restarts)]
    for k, x0 in enumerate(starts):
        X, _ = local_search(H, x0, seed=opts.seed + k)
        cands.append(X.as_array())
    best = min(cands, key=lambda x: frustration_count(H, x))
    return comp.to_positions(best)


def _tree_colouring(H: SignedGraph) -> np.ndarray:
    colour = np.full(H.n, -1, dtype=np.int64)
    for r in range(H.n):
        if colour[r] >= 0:
            continue
        colour[r] = 0
        stack = [r]
        while stack:
            u = stack.pop()
            for w, sg in H.adjacency[u]:
                if colour[w] < 0:
                    colour[w] = colour[u] if sg > 0 else 1 - colour[u]
                    stack.append(w)
    return colour


def _solve_component(H: SignedGraph, opts: SolverOptions, deadline: float, stats: dict):
    """Returns (colouring in H's labels, lower, upper, optimal)."""
    comp = _Component(H)
    n = H.n
    heur = _heuristic(comp, opts)
    heur_value = comp.count(heur)
    col = np.full(n, -1, dtype=np.int64)
    for s in range(n - 1, -1, -1):
        inner = comp.suffix_lb[s + 1]
        c0, c1 = comp.extend(col, s)
        ext = col.copy()
        ext[s] = 0 if c0 <= c1 else 1
        ub = int(inner + min(c0, c1))
        if s == 0 and heur_value < ub:
            ub, ext = heur_value, heur.copy()
        if ub == inner:
            comp.suffix_lb[s] = ub
            col = ext
            continue
        best, found, finished, nodes = _solve_suffix(comp, s, ub, int(inner), opts, deadline)
        stats["nodes"] += nodes
        stats["subproblems"] += 1
        if found is not None:
            ext = found.copy()
        if not finished:
            # prove nothing more; extend the best partial colouring greedily to a full one
            lower = int(inner)
            full = ext.copy()
            for t in range(s - 1, -1, -1):
                a0, a1 = comp.extend(full, t)
                full[t] = 0 if a0 <= a1 else 1
            if comp.count(heur) < comp.count(full):
                full = heur
            return comp.from_positions(full), lower, comp.count(full), False
        comp.suffix_lb[s] = best
        col = ext
        if time.monotonic() > deadline and s > 0:
            lower = int(comp.suffix_lb[s])
            full = col.copy()
            for t in range(s - 1, -1, -1):
                a0, a1 = comp.extend(full, t)
                full[t] = 0 if a0 <= a1 else 1
            if comp.count(heur) < comp.count(full):
                full = heur
            return comp.from_positions(full), lower, comp.count(full), False
    value = int(comp.suffix_lb[0])
    assert comp.count(col) == value
    return comp.from_positions(col), value, value, True


def _peel(G: SignedGraph):
    """Strip nodes of degree <= 1 repeatedly; returns the peel sequence and remaining nodes."""
    deg = G.degrees.copy()
    alive = np.ones(G.n, dtype=bool)
    stack = [v for v in range(G.n) if deg[v] <= 1]
    peeled = []
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        anchor = None
        for w, s in G.adjacency[v]:
            if alive[w]:
                anchor = (w, s)
                deg[w] -= 1
                if deg[w] <= 1:
                    stack.append(w)
        peeled.append((v, anchor))
    return peeled, [v for v in range(G.n) if alive[v]]


def solve_exact(G: SignedGraph, opts: SolverOptions | None = None, **kwargs) -> FrustrationResult:
    """Frustration index L(G) with a certifying colouring and minimum deletion set.

    Keyword arguments override fields of ``opts``. When the time limit
    expires the result has ``optimal=False`` and carries the proven bound
    pair; ``value`` is then the best colouring found, never claimed optimal.
    """
    if opts is None:
        opts = SolverOptions(**kwargs)
    elif kwargs:
        opts = SolverOptions(**{**opts.__dict__, **kwargs})
    t0 = time.monotonic()
    deadline = t0 + opts.time_limit
    stats = {"nodes": 0, "subproblems": 0, "components": 0, "peeled": 0, "threads": opts.threads}
    if G.n == 0:
        stats.update(root_bound=0, wall_time=0.0, short_circuit="empty")
        return FrustrationResult(0, Colouring(()), (), True, 0, 0, stats)

    cert = is_balanced(G)
    if cert.balanced:
        stats.update(root_bound=0, wall_time=time.monotonic() - t0, short_circuit="balanced")
        return FrustrationResult(0, cert.colouring, (), True, 0, 0, stats)

    root = lower_bound_root(G)
    stats["root_bound"] = root
    peeled, core = _peel(G)
    stats["peeled"] = len(peeled)
    x = np.zeros(G.n, dtype=np.int64)
    lower = upper = 0
    optimal = True
    core_graph = G.subgraph(core)
    for comp_nodes in connected_components(core_graph):
        if len(comp_nodes) < 3:
            continue
        H = core_graph.subgraph(comp_nodes)
        stats["components"] += 1
        hc = is_balanced(H)
        if hc.balanced:
            local, lo, up, done = hc.colouring.as_array(), 0, 0, True
        else:
            local, lo, up, done = _solve_component(H, opts, deadline, stats)
        for k, v in enumerate(comp_nodes):
            x[core[v]] = local[k]
        lower += lo
        upper += up
        optimal &= done
    for v, anchor in reversed(peeled):
        if anchor is not None:
            w, s = anchor
            x[v] = x[w] if s > 0 else 1 - x[w]

    X = Colouring(tuple(int(b) for b in x))
    value = frustration_count(G, X)
    if value != upper:
        raise AssertionError(f"recount {value} disagrees with search value {upper}")
    lower = max(lower, root) if not optimal else value
    if optimal and root > value:
        raise AssertionError(f"root bound {root} exceeds optimum {value}")
    stats["wall_time"] = time.monotonic() - t0
    return FrustrationResult(value, X, tuple(frustrated_edges(G, X)), optimal, lower, value, stats)


def local_search(G: SignedGraph, start, seed: int = 0) -> tuple[Colouring, int]:
    """Flip single nodes while that strictly lowers the count; scan order is a seeded permutation."""
    x = np.array(start.bits if isinstance(start, Colouring) else start, dtype=np.int64)
    if x.shape != (G.n,):
        raise ValueError(f"start colouring has {x.size} entries, graph has {G.n} nodes")
    if G.n == 0:
        return Colouring(()), 0
    indptr, nbr, sgn = _csr(G.n, G.edges)
    order = np.random.default_rng(seed).permutation(G.n).astype(np.int64)
    x = _kernel.local_search(indptr, nbr, sgn, x, order)
    X = Colouring(tuple(int(b) for b in x))
    return X, frustration_count(G, X)


def upper_bound_trivial(G: SignedGraph) -> int:
    return min(G.m_minus, G.m // 2, circuit_rank(G))


# --- negative cycle packing ------------------------------------------------


def _double_cover(n: int, alive: dict) -> csr_matrix:
    rows, cols = [], []
    for (i, j), s in alive.items():
        for p in (0, 1):
            q = p if s > 0 else 1 - p
            rows.append(2 * i + p)
            cols.append(2 * j + q)
    data = np.ones(len(rows))
    return csr_matrix((data, (rows, cols)), shape=(2 * n, 2 * n))


def _simple_negative_cycle(walk: list[int], alive: dict) -> tuple[int, ...]:
    """Cut a negative closed walk (first == last) down to a simple negative cycle."""

    def sign(a, b):
        return alive[(min(a, b), max(a, b))]

    path = [walk[0]]
    prefix = [1]
    where = {walk[0]: 0}
    for v in walk[1:]:
        s_here = prefix[-1] * sign(path[-1], v)
        if v in where:
            i = where[v]
            if s_here * prefix[i] < 0:
                return tuple(path[i:])
            for u in path[i + 1:]:
                del where[u]
            del path[i + 1:]
            del prefix[i + 1:]
            continue
        where[v] = len(path)
        path.append(v)
        prefix.append(s_here)
    raise ValueError("walk is not a negative closed walk")


def shortest_negative_cycles(n: int, alive: dict) -> list[tuple[int, ...]]:
    """For every node, a shortest negative cycle through it (if any), sorted by length.

    Uses breadth-first search in the signed double cover: a path from (v, 0)
    to (v, 1) is a closed walk at v with an odd number of negative edges.
    """
    if not alive:
        return []
    nodes = sorted({v for e in alive for v in e})
    cover = _double_cover(n, alive)
    src = [2 * v for v in nodes]
    dist, pred = shortest_path(cover, directed=False, unweighted=True, indices=src, return_predecessors=True)
    found = []
    for k, v in enumerate(nodes):
        d = dist[k, 2 * v + 1]
        if not np.isfinite(d):
            continue
        walk = [2 * v + 1]
        while walk[-1] != 2 * v:
            walk.append(int(pred[k, walk[-1]]))
        walk = [w // 2 for w in reversed(walk)]
        cyc = _simple_negative_cycle(walk, alive)
        found.append((len(cyc), cyc))
    found.sort()
    return [c for _, c in found]


def lower_bound_root(G: SignedGraph) -> int:
    """Size of a greedy packing of edge-disjoint negative cycles.

    Each cycle in the packing needs its own deleted edge, so the count never
    exceeds L(G). Every round recomputes shortest negative cycles in the
    remaining graph and takes them in order of length, skipping any that
    touch an edge already used.
    """
    peeled, core = _peel(G)
    core_set = set(core)
    alive = {(i, j): s for i, j, s in G.edges if i in core_set and j in core_set}
    packed = 0
    while alive:
        cycles = shortest_negative_cycles(G.n, alive)
        if not cycles:
            break
        for cyc in cycles:
            k = len(cyc)
            keys = [(min(cyc[a], cyc[(a + 1) % k]), max(cyc[a], cyc[(a + 1) % k])) for a in range(k)]
            if all(key in alive for key in keys):
                for key in keys:
                    del alive[key]
                packed += 1
    return packed
