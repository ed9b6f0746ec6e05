"""Seeded random signed-graph generators and sign reshuffling.

Every generator is a pure function of its arguments: the same seed gives
the same graph. Generators draw the unsigned skeleton first and the sign
permutation second from one stream, so for a fixed seed the negative-edge
sets for increasing ``m_minus`` are nested prefixes of a single random
permutation. Experiment sweeps rely on this to reuse one skeleton across
all negative-edge settings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sgraph import SignedGraph

FAMILIES = ("erdos_renyi", "barabasi_albert", "random_regular", "balanced", "antibalanced_complete")


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int
    m: int | None = None
    d: int | None = None
    k: int | None = None
    m_minus: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.m_minus < 0:
            raise ValueError("m_minus must be non-negative")

    def build(self) -> SignedGraph:
        if self.family == "erdos_renyi":
            return erdos_renyi(self.n, _need(self.m, "m"), self.m_minus, self.seed)
        if self.family == "barabasi_albert":
            k = self.k if self.k is not None else ba_attachment(self.n, _need(self.m, "m"))
            return barabasi_albert(self.n, k, self.m_minus, self.seed, m=self.m)
        if self.family == "random_regular":
            return random_regular(self.n, _need(self.d, "d"), self.m_minus, self.seed)
        if self.family == "balanced":
            return balanced_random(self.n, _need(self.m, "m"), self.seed)
        return antibalanced_complete(self.n)


def _need(value, name):
    if value is None:
        raise ValueError(f"parameter {name} is required for this family")
    return value


def _sign(edges, m_minus: int, rng: np.random.Generator) -> tuple[tuple[int, int, int], ...]:
    m = len(edges)
    if not 0 <= m_minus <= m:
        raise ValueError(f"m_minus={m_minus} must lie in [0, {m}]")
    perm = rng.permutation(m)
    signs = np.ones(m, dtype=np.int64)
    signs[perm[:m_minus]] = -1
    return tuple((int(i), int(j), int(s)) for (i, j), s in zip(edges, signs))


def _canonical(edges) -> list[tuple[int, int]]:
    return sorted((min(i, j), max(i, j)) for i, j in edges)


def _pair(index: np.ndarray, n: int) -> list[tuple[int, int]]:
    """Map indices into the row-major strict upper triangle to node pairs."""
    rows, cols = np.triu_indices(n, 1)
    return list(zip(rows[index].tolist(), cols[index].tolist()))


def erdos_renyi(n: int, m: int, m_minus: int, seed: int) -> SignedGraph:
    """G(n, m): m distinct node pairs chosen uniformly, m_minus of them negative."""
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise ValueError(f"m={m} impossible for n={n} (at most {total})")
    if m_minus > m:
        raise ValueError(f"m_minus={m_minus} exceeds m={m}")
    rng = np.random.default_rng(seed)
    edges = _canonical(_pair(np.sort(rng.choice(total, size=m, replace=False)), n))
    meta = {"family": "erdos_renyi", "seed": seed}
    return SignedGraph(n, _sign(edges, m_minus, rng), meta)


def ba_attachment(n: int, m: int) -> int:
    """Attachment count k whose clique-seeded BA graph has edge count closest to m."""
    best = None
    for k in range(1, n):
        got = k * (k + 1) // 2 + (n - k - 1) * k
        if best is None or abs(got - m) < abs(best[1] - m):
            best = (k, got)
    if best is None:
        raise ValueError(f"no attachment count for n={n}")
    return best[0]


def barabasi_albert(n: int, k: int, m_minus: int, seed: int, m: int | None = None) -> SignedGraph:
    """Preferential attachment grown from a (k+1)-clique.

    Each new node links to k distinct existing nodes drawn with probability
    proportional to their current degree. With ``m`` given, uniformly chosen
    edges are removed (or non-edges added) to land on exactly m edges; the
    number adjusted is recorded in ``meta["adjusted_edges"]``.
    """
    if not 1 <= k < n:
        raise ValueError(f"attachment count k={k} infeasible for n={n}")
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i in range(k + 1) for j in range(i + 1, k + 1)]
    deg = np.zeros(n, dtype=np.float64)
    deg[: k + 1] = k
    for t in range(k + 1, n):
        targets = rng.choice(t, size=k, replace=False, p=deg[:t] / deg[:t].sum())
        for w in targets.tolist():
            edges.append((w, t))
            deg[w] += 1
        deg[t] = k
    edges = _canonical(edges)
    adjusted = 0
    if m is not None and m != len(edges):
        total = n * (n - 1) // 2
        if not 0 <= m <= total:
            raise ValueError(f"m={m} impossible for n={n}")
        if m < len(edges):
            keep = np.sort(rng.choice(len(edges), size=m, replace=False))
            adjusted = len(edges) - m
            edges = [edges[i] for i in keep.tolist()]
        else:
            present = set(edges)
            free = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in present]
            pick = rng.choice(len(free), size=m - len(edges), replace=False)
            adjusted = m - len(edges)
            edges = _canonical(edges + [free[i] for i in pick.tolist()])
    if m_minus > len(edges):
        raise ValueError(f"m_minus={m_minus} exceeds m={len(edges)}")
    meta = {"family": "barabasi_albert", "seed": seed, "k": k, "adjusted_edges": adjusted}
    return SignedGraph(n, _sign(edges, m_minus, rng), meta)


def random_regular(n: int, d: int, m_minus: int, seed: int, max_tries: int = 100_000) -> SignedGraph:
    """d-regular graph from the pairing model, rejecting loops and multi-edges."""
    if n * d % 2:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    if not 0 <= d < max(n, 1):
        raise ValueError(f"degree d={d} infeasible for n={n}")
    rng = np.random.default_rng(seed)
    points = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        rng.shuffle(points)
        pairs = points.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        keys = lo * n + hi
        if np.unique(keys).size != keys.size:
            continue
        edges = _canonical(zip(lo.tolist(), hi.tolist()))
        if m_minus > len(edges):
            raise ValueError(f"m_minus={m_minus} exceeds m={len(edges)}")
        meta = {"family": "random_regular", "seed": seed, "d": d}
        return SignedGraph(n, _sign(edges, m_minus, rng), meta)
    raise RuntimeError(f"pairing model failed {max_tries} times for n={n}, d={d}")


def resign(G: SignedGraph, m_minus: int, seed: int) -> SignedGraph:
    """Same skeleton with exactly m_minus negative edges placed uniformly at random."""
    rng = np.random.default_rng(seed)
    meta = dict(G.meta)
    meta["resign_seed"] = seed
    return SignedGraph(G.n, _sign(G.unsigned(), m_minus, rng), meta)


def reshuffle(G: SignedGraph, seed: int) -> SignedGraph:
    """Redistribute G's negative signs uniformly over its edges."""
    return resign(G, G.m_minus, seed)


def balanced_random(n: int, m: int, seed: int) -> SignedGraph:
    """G(n, m) skeleton signed by a hidden bipartition: + inside parts, - across."""
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise ValueError(f"m={m} impossible for n={n}")
    rng = np.random.default_rng(seed)
    side = rng.integers(0, 2, size=n)
    edges = _canonical(_pair(np.sort(rng.choice(total, size=m, replace=False)), n))
    signed = tuple((i, j, 1 if side[i] == side[j] else -1) for i, j in edges)
    return SignedGraph(n, signed, {"family": "balanced", "seed": seed})


def antibalanced_complete(n: int) -> SignedGraph:
    """Complete graph with every edge negative."""
    edges = tuple((i, j, -1) for i in range(n) for j in range(i + 1, n))
    return SignedGraph(n, edges, {"family": "antibalanced_complete"})
