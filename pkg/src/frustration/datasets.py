"""Named real-network fixtures (G1-G9) and their published reference values.

Fixture files use the edge-list format of :mod:`frustration.sgraph` and are
looked up, in order, in ``$FRUSTRATION_DATA``, the package ``data``
directory and ``data/`` at the repository root. ``scripts/fetch_datasets.py``
downloads and converts them.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from pathlib import Path

from .sgraph import SignedGraph, parse_edge_list, read_edge_list


@dataclass(frozen=True)
class Reference:
    name: str
    description: str
    n: int
    m: int
    m_minus: int
    L: int
    reshuffled_mean: float
    reshuffled_sd: float
    z: float


REFERENCE = {
    r.name: r
    for r in [
        Reference("G1", "Highland tribes", 16, 58, 29, 7, 14.65, 1.38, -5.54),
        Reference("G2", "Monastery interactions", 18, 49, 12, 5, 9.71, 1.17, -4.03),
        Reference("G3", "Fraternity preferences", 17, 40, 17, 4, 7.53, 1.24, -2.85),
        Reference("G4", "College preferences", 17, 36, 16, 6, 6.48, 1.08, -0.45),
        Reference("G5", "Senate bill co-sponsorship", 100, 2461, 1047, 331, 965.6, 9.08, -69.89),
        Reference("G6", "S. cerevisiae gene regulation", 690, 1080, 220, 41, 124.3, 4.97, -16.75),
        Reference("G7", "E. coli gene regulation", 1461, 3215, 1336, 371, 653.4, 7.71, -36.64),
        Reference("G8", "EGFR pathway", 329, 779, 264, 193, 148.96, 5.33, 8.26),
        Reference("G9", "Macrophage molecular interactions", 678, 1425, 478, 332, 255.65, 8.51, 8.98),
    ]
}

_REPO_DATA = Path(__file__).resolve().parents[2] / "data"
_PKG_DATA = Path(__file__).resolve().parent / "data"


def search_dirs() -> list[Path]:
    dirs = []
    if os.environ.get("FRUSTRATION_DATA"):
        dirs.append(Path(os.environ["FRUSTRATION_DATA"]))
    dirs += [_PKG_DATA, _REPO_DATA]
    return dirs


def locate(name: str) -> Path | None:
    for d in search_dirs():
        p = d / f"{name}.txt"
        if p.is_file():
            return p
    return None


def load(name: str) -> SignedGraph:
    """Load fixture ``name`` (e.g. "G1"); FileNotFoundError when it is not installed."""
    path = locate(name)
    if path is None:
        where = ", ".join(str(d) for d in search_dirs())
        raise FileNotFoundError(f"fixture {name} not found in {where}; run scripts/fetch_datasets.py")
    G = read_edge_list(path)
    ref = REFERENCE.get(name)
    if ref is not None and (G.n, G.m, G.m_minus) != (ref.n, ref.m, ref.m_minus):
        raise ValueError(f"{path}: n, m, m- = {(G.n, G.m, G.m_minus)}, expected {(ref.n, ref.m, ref.m_minus)}")
    return G


def resolve(spec: str) -> SignedGraph:
    """A path to an edge-list file, or a fixture name."""
    if spec in REFERENCE and not Path(spec).exists():
        return load(spec)
    return read_edge_list(spec)


def convert(text: str) -> SignedGraph:
    """Best-effort conversion of third-party signed-network text to a SignedGraph.

    Accepts our own edge-list format, delimited ``source target sign`` rows
    (any labels, header rows skipped, zero-sign rows dropped) or a square
    matrix of -1/0/+1 entries.
    """
    try:
        return parse_edge_list(text)
    except ValueError:
        pass
    dialect = "excel" if text.count(",") > text.count("\t") else "excel-tab"
    rows = [r for r in csv.reader(io.StringIO(text), dialect) if any(c.strip() for c in r)]
    if dialect == "excel-tab" and all(len(r) == 1 for r in rows):
        rows = [r[0].split() for r in rows]
    rows = [[c.strip() for c in r if c.strip()] for r in rows]

    def num(c):
        try:
            return int(float(c))
        except ValueError:
            return None

    numeric = [r for r in rows if all(num(c) is not None for c in r)]
    if numeric and len(numeric) == len(numeric[0]) and all(len(r) == len(numeric) for r in numeric):
        k = len(numeric)
        edges = []
        for i in range(k):
            for j in range(i + 1, k):
                a, b = num(numeric[i][j]), num(numeric[j][i])
                s = a or b
                if a and b and a != b:
                    raise ValueError(f"asymmetric signs at ({i}, {j})")
                if s:
                    edges.append((i, j, 1 if s > 0 else -1))
        return SignedGraph(k, tuple(edges))

    labels: dict[str, int] = {}
    signs: dict[tuple[int, int], int] = {}
    for r in rows:
        if len(r) < 3 or num(r[-1]) is None:
            continue
        s = num(r[-1])
        if s == 0:
            continue
        a, b = r[0], r[1]
        if a == b:
            continue
        i, j = labels.setdefault(a, len(labels)), labels.setdefault(b, len(labels))
        key = (min(i, j), max(i, j))
        sign = 1 if s > 0 else -1
        if key in signs and signs[key] != sign:
            raise ValueError(f"conflicting signs for {a} - {b}")
        signs[key] = sign
    if not signs:
        raise ValueError("no signed edges recognised")
    G = SignedGraph(len(labels), tuple((i, j, s) for (i, j), s in signs.items()))
    G.meta["labels"] = list(labels)
    return G
