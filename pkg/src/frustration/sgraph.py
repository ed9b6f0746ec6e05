"""Signed graphs, node colourings and frustration counting.

Nodes are the integers ``0..n-1``. Edges are stored canonically as
``(i, j, s)`` with ``i < j`` and ``s`` in ``{-1, +1}``, sorted
lexicographically, so two graphs with the same edge set compare and hash
equal regardless of input order.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SignedGraph",
    "Colouring",
    "FrustrationResult",
    "BalanceCertificate",
    "EdgeListError",
    "MalformedLineError",
    "BadSignError",
    "DuplicateEdgeError",
    "SelfLoopError",
    "parse_edge_list",
    "format_edge_list",
    "read_edge_list",
    "write_edge_list",
    "frustration_count",
    "frustrated_edges",
    "switch",
    "is_balanced",
    "net_degree",
    "circuit_rank",
    "connected_components",
]


@dataclass(frozen=True, eq=False)
class SignedGraph:
    """Undirected simple graph with +1/-1 edge signs.

    ``meta`` carries free-form provenance (generator family, seed, original
    labels) and takes no part in equality or hashing.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"node count must be non-negative, got {self.n}")
        canon = []
        seen = set()
        for e in self.edges:
            i, j, s = (int(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if s not in (-1, 1):
                raise ValueError(f"edge ({i}, {j}) has sign {s}, expected -1 or +1")
            if i > j:
                i, j = j, i
            if i < 0 or j >= self.n:
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            if (i, j) in seen:
                raise ValueError(f"parallel edge ({i}, {j})")
            seen.add((i, j))
            canon.append((i, j, s))
        canon.sort()
        object.__setattr__(self, "edges", tuple(canon))

    def __eq__(self, other):
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"SignedGraph(n={self.n}, m={self.m}, m_minus={self.m_minus})"

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def m_minus(self) -> int:
        return sum(1 for e in self.edges if e[2] < 0)

    @property
    def m_plus(self) -> int:
        return self.m - self.m_minus

    @property
    def density(self) -> float:
        if self.n < 2:
            return 0.0
        return 2 * self.m / (self.n * (self.n - 1))

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Edge endpoints and signs as three int64 arrays."""
        if not self.edges:
            z = np.zeros(0, dtype=np.int64)
            return z, z.copy(), z.copy()
        a = np.asarray(self.edges, dtype=np.int64)
        return a[:, 0].copy(), a[:, 1].copy(), a[:, 2].copy()

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per-node tuple of ``(neighbour, sign)`` pairs, neighbours ascending."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, j, s in self.edges:
            adj[i].append((j, s))
            adj[j].append((i, s))
        return tuple(tuple(sorted(a)) for a in adj)

    def neighbours(self, i: int) -> tuple[tuple[int, int], ...]:
        self._check_node(i)
        return self.adjacency[i]

    def sign(self, i: int, j: int) -> int:
        """Adjacency entry a_ij: the edge sign, or 0 when i and j are not adjacent."""
        for k, s in self.neighbours(i):
            if k == j:
                return s
        return 0

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        u, v, s = self.arrays
        a[u, v] = s
        a[v, u] = s
        return a

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        u, v, _ = self.arrays
        np.add.at(deg, u, 1)
        np.add.at(deg, v, 1)
        return deg

    @cached_property
    def net_degrees(self) -> np.ndarray:
        """d+(i) - d-(i) for every node; equals the row sums of A."""
        d = np.zeros(self.n, dtype=np.int64)
        u, v, s = self.arrays
        np.add.at(d, u, s)
        np.add.at(d, v, s)
        return d

    def positive_degree(self, i: int) -> int:
        return sum(1 for _, s in self.neighbours(i) if s > 0)

    def negative_degree(self, i: int) -> int:
        return sum(1 for _, s in self.neighbours(i) if s < 0)

    def unsigned(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i, j, _ in self.edges)

    def with_signs(self, signs: Sequence[int]) -> "SignedGraph":
        """Same skeleton, new signs given in canonical edge order."""
        if len(signs) != self.m:
            raise ValueError(f"expected {self.m} signs, got {len(signs)}")
        return SignedGraph(self.n, tuple((i, j, int(s)) for (i, j, _), s in zip(self.edges, signs)), dict(self.meta))

    def subgraph(self, nodes: Sequence[int]) -> "SignedGraph":
        """Induced subgraph, relabelled to ``0..len(nodes)-1`` in the given order."""
        index = {v: k for k, v in enumerate(nodes)}
        sub = []
        for i, j, s in self.edges:
            if i in index and j in index:
                sub.append((index[i], index[j], s))
        return SignedGraph(len(nodes), tuple(sub))

    def digest(self) -> str:
        """Short content hash, stable across runs and platforms."""
        h = hashlib.sha256(format_edge_list(self).encode())
        return h.hexdigest()[:16]

    def _check_node(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise IndexError(f"node {i} out of range for n={self.n}")


@dataclass(frozen=True)
class Colouring:
    """Two-colouring of the nodes: 1 is black (in X), 0 is white."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("colouring entries must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_set(cls, n: int, black: Iterable[int]) -> "Colouring":
        bits = [0] * n
        for i in black:
            bits[i] = 1
        return cls(tuple(bits))

    @classmethod
    def uniform(cls, n: int, colour: int = 0) -> "Colouring":
        return cls((colour,) * n)

    def __len__(self):
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    @property
    def black(self) -> frozenset[int]:
        return frozenset(i for i, b in enumerate(self.bits) if b)

    def complement(self) -> "Colouring":
        return Colouring(tuple(1 - b for b in self.bits))

    def flip(self, i: int) -> "Colouring":
        bits = list(self.bits)
        bits[i] = 1 - bits[i]
        return Colouring(tuple(bits))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.bits, dtype=np.int64)

    def __str__(self):
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class FrustrationResult:
    """Outcome of an exact (or time-limited) frustration index computation.

    When ``optimal`` is False the search was cut short: ``value`` is the best
    known frustration count (an upper bound) and ``lower`` a proven lower bound.
    """

    value: int
    colouring: Colouring
    deletion_set: tuple[tuple[int, int, int], ...]
    optimal: bool = True
    lower: int = 0
    upper: int = 0
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def bounds(self) -> tuple[int, int]:
        return (self.lower, self.upper)


@dataclass(frozen=True)
class BalanceCertificate:
    """Evidence for either outcome of balance detection.

    ``colouring`` is set when the graph is balanced, ``cycle`` (a node
    sequence, closing edge implied from last back to first) otherwise.
    """

    balanced: bool
    colouring: Colouring | None = None
    cycle: tuple[int, ...] | None = None

    def __bool__(self):
        return self.balanced

    def cycle_edges(self, G: SignedGraph) -> list[tuple[int, int, int]]:
        if self.cycle is None:
            return []
        out = []
        k = len(self.cycle)
        for a in range(k):
            i, j = self.cycle[a], self.cycle[(a + 1) % k]
            out.append((min(i, j), max(i, j), G.sign(i, j)))
        return out


# --- edge-list text format -------------------------------------------------


class EdgeListError(ValueError):
    """Edge-list text that cannot be turned into a SignedGraph."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class MalformedLineError(EdgeListError):
    pass


class BadSignError(EdgeListError):
    pass


class DuplicateEdgeError(EdgeListError):
    pass


class SelfLoopError(EdgeListError):
    pass


_SIGNS = {"+1": 1, "1": 1, "+": 1, "-1": -1, "-": -1}


def parse_edge_list(text: str | Iterable[str]) -> SignedGraph:
    """Parse the ``n m`` / ``i j s`` edge-list format.

    Ids already inside ``0..n-1`` are kept as they are. If any id falls
    outside that range the file is taken to use arbitrary integer labels and
    all ids are compacted to ``0..n-1`` in order of first appearance; the
    original labels are kept in ``meta["labels"]``.
    """
    lines = text.splitlines() if isinstance(text, str) else list(text)
    header = None
    raw: list[tuple[int, int, int, int]] = []
    for lineno, line in enumerate(lines, start=1):
        body = line.strip()
        if not body or body.startswith("#"):
            continue
        toks = body.split()
        if header is None:
            if len(toks) != 2:
                raise MalformedLineError(lineno, f"expected header 'n m', got {body!r}")
            try:
                header = (int(toks[0]), int(toks[1]))
            except ValueError:
                raise MalformedLineError(lineno, f"non-integer header {body!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise MalformedLineError(lineno, "negative node or edge count")
            continue
        if len(toks) != 3:
            raise MalformedLineError(lineno, f"expected 'i j s', got {body!r}")
        try:
            i, j = int(toks[0]), int(toks[1])
        except ValueError:
            raise MalformedLineError(lineno, f"non-integer node id in {body!r}") from None
        if toks[2] not in _SIGNS:
            raise BadSignError(lineno, f"sign {toks[2]!r} not in -1, +1, -, +")
        if i == j:
            raise SelfLoopError(lineno, f"self-loop on node {i}")
        raw.append((lineno, i, j, _SIGNS[toks[2]]))
    if header is None:
        raise MalformedLineError(len(lines) + 1, "missing 'n m' header")
    n, m = header
    if len(raw) != m:
        lineno = raw[-1][0] if raw else len(lines)
        raise MalformedLineError(lineno, f"header declares {m} edges, found {len(raw)}")

    meta: dict = {}
    if any(not (0 <= i < n and 0 <= j < n) for _, i, j, _ in raw):
        labels: dict[int, int] = {}
        for _, i, j, _ in raw:
            for v in (i, j):
                labels.setdefault(v, len(labels))
        if len(labels) > n:
            raise MalformedLineError(raw[-1][0], f"{len(labels)} distinct node ids exceed declared n={n}")
        raw = [(ln, labels[i], labels[j], s) for ln, i, j, s in raw]
        meta["labels"] = list(labels)

    seen: dict[tuple[int, int], int] = {}
    edges = []
    for lineno, i, j, s in raw:
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DuplicateEdgeError(lineno, f"edge {key} already given on line {seen[key]}")
        seen[key] = lineno
        edges.append((key[0], key[1], s))
    return SignedGraph(n, tuple(edges), meta)


def format_edge_list(G: SignedGraph, comments: Iterable[str] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out.append(f"{G.n} {G.m}")
    out.extend(f"{i} {j} {'+1' if s > 0 else '-1'}" for i, j, s in G.edges)
    return "\n".join(out) + "\n"


def read_edge_list(path) -> SignedGraph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def write_edge_list(G: SignedGraph, path, comments: Iterable[str] = ()) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(G, comments))


# --- frustration -----------------------------------------------------------


def _bits(G: SignedGraph, X) -> np.ndarray:
    x = np.asarray(X.bits if isinstance(X, Colouring) else X, dtype=np.int64)
    if x.shape != (G.n,):
        raise ValueError(f"colouring has {x.size} entries, graph has {G.n} nodes")
    return x


def _frustrated_mask(G: SignedGraph, X) -> np.ndarray:
    x = _bits(G, X)
    u, v, s = G.arrays
    same = x[u] == x[v]
    return np.where(s > 0, ~same, same)


def frustration_count(G: SignedGraph, X) -> int:
    """Number of edges frustrated under colouring X."""
    return int(_frustrated_mask(G, X).sum())


def frustrated_edges(G: SignedGraph, X) -> list[tuple[int, int, int]]:
    mask = _frustrated_mask(G, X)
    return [e for e, f in zip(G.edges, mask) if f]


def switch(G: SignedGraph, S) -> SignedGraph:
    """Negate every edge with exactly one endpoint in the switching set S.

    S is a node set or a Colouring (its black nodes).
    """
    if isinstance(S, (set, frozenset)):
        for v in S:
            G._check_node(v)
        S = Colouring.from_set(G.n, S)
    x = _bits(G, S)
    out = tuple((i, j, -s if x[i] != x[j] else s) for i, j, s in G.edges)
    return SignedGraph(G.n, out, dict(G.meta))


def net_degree(G: SignedGraph, i: int) -> int:
    G._check_node(i)
    return int(G.net_degrees[i])


def connected_components(G: SignedGraph) -> list[list[int]]:
    """Components as ascending node lists, ordered by smallest member."""
    seen = [False] * G.n
    comps = []
    adj = G.adjacency
    for r in range(G.n):
        if seen[r]:
            continue
        seen[r] = True
        comp = [r]
        queue = deque([r])
        while queue:
            u = queue.popleft()
            for w, _ in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def circuit_rank(G: SignedGraph) -> int:
    return G.m - G.n + len(connected_components(G))


def is_balanced(G: SignedGraph) -> BalanceCertificate:
    """Balance test by sign propagation along a BFS spanning forest.

    Every tree edge is made unfrustrated; the first frustrated non-tree edge
    closes a negative cycle with the two tree paths to the common ancestor.
    """
    n = G.n
    adj = G.adjacency
    colour = [-1] * n
    parent = [-1] * n
    depth = [0] * n
    for r in range(n):
        if colour[r] >= 0:
            continue
        colour[r] = 0
        queue = deque([r])
        while queue:
            u = queue.popleft()
            for w, s in adj[u]:
                if colour[w] < 0:
                    colour[w] = colour[u] if s > 0 else 1 - colour[u]
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    queue.append(w)

    for i, j, s in G.edges:
        if (colour[i] == colour[j]) == (s > 0):
            continue
        # walk both endpoints up to their lowest common ancestor
        left, right = [i], [j]
        a, b = i, j
        while depth[a] > depth[b]:
            a = parent[a]
            left.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            right.append(b)
        while a != b:
            a, b = parent[a], parent[b]
            left.append(a)
            right.append(b)
        cycle = left + right[-2::-1]
        return BalanceCertificate(False, cycle=tuple(cycle))
    return BalanceCertificate(True, colouring=Colouring(tuple(colour)))
