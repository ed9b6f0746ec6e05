"""Experiment drivers and their reports: reshuffling Z scores and generator sweeps.

Runs are independent given their seeds and may execute in a process pool;
results are always collected in submission order so reports do not depend
on the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import gen
from .sgraph import Colouring, SignedGraph, frustrated_edges, frustration_count
from .solver import SolverOptions, solve_exact

RECORD_FIELDS = [
    ("setting", float), ("run", int), ("seed", int), ("n", int), ("m", int), ("m_minus", int),
    ("L", int), ("lower", int), ("upper", int), ("optimal", lambda s: s in ("True", "true", "1")),
    ("wall_time", float), ("nodes", int),
]
AGG_FIELDS = [("setting", float), ("runs", int), ("mean", float), ("sd", float), ("min", int), ("max", int),
              ("mean_m", float)]


@dataclass
class ExperimentReport:
    kind: str
    params: dict
    records: list[dict] = field(default_factory=list)
    aggregates: list[dict] = field(default_factory=list)
    observed: int | None = None
    z: float | None = None

    def without_timing(self) -> "ExperimentReport":
        """Copy with wall times zeroed; what repeated runs with one seed agree on."""
        records = [dict(r, wall_time=0.0) for r in self.records]
        return ExperimentReport(self.kind, self.params, records, self.aggregates, self.observed, self.z)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        return cls(**json.loads(text))

    def records_csv(self) -> str:
        return _to_csv(self.records, RECORD_FIELDS)

    def aggregates_csv(self) -> str:
        return _to_csv(self.aggregates, AGG_FIELDS)

    @staticmethod
    def parse_records_csv(text: str) -> list[dict]:
        return _from_csv(text, RECORD_FIELDS)

    @staticmethod
    def parse_aggregates_csv(text: str) -> list[dict]:
        return _from_csv(text, AGG_FIELDS)

    def gnuplot(self) -> str:
        lines = [f"# {self.kind} {json.dumps(self.params, sort_keys=True)}", "# x mean sd min max"]
        for a in self.aggregates:
            lines.append(f"{a['setting']:g} {a['mean']:.6f} {a['sd']:.6f} {a['min']} {a['max']}")
        return "\n".join(lines) + "\n"


def _to_csv(rows, fields) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f for f, _ in fields])
    for r in rows:
        w.writerow([repr(r[f]) if isinstance(r[f], float) else r[f] for f, _ in fields])
    return buf.getvalue()


def _from_csv(text, fields) -> list[dict]:
    rows = list(csv.reader(io.StringIO(text)))
    header = rows[0]
    conv = dict(fields)
    return [{h: conv[h](v) for h, v in zip(header, r)} for r in rows[1:]]


def _aggregate(values, setting, mean_m=0.0) -> dict:
    arr = np.asarray(values, dtype=float)
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return {"setting": float(setting), "runs": int(arr.size), "mean": float(arr.mean()), "sd": sd,
            "min": int(arr.min()), "max": int(arr.max()), "mean_m": float(mean_m)}


def checked_solve(G: SignedGraph, opts: SolverOptions):
    """Solve and recount independently; refuses to report a value its colouring contradicts."""
    res = solve_exact(G, opts)
    recount = frustration_count(G, res.colouring)
    if recount != res.value or len(frustrated_edges(G, res.colouring)) != res.value:
        raise AssertionError(f"solver reported {res.value}, colouring recounts to {recount}")
    return res


def _record(G, opts, setting, run, seed) -> dict:
    res = checked_solve(G, opts)
    return {"setting": float(setting), "run": run, "seed": int(seed), "n": G.n, "m": G.m, "m_minus": G.m_minus,
            "L": res.value, "lower": res.lower, "upper": res.upper, "optimal": res.optimal,
            "wall_time": float(res.stats.get("wall_time", 0.0)), "nodes": int(res.stats.get("nodes", 0))}


def _run_seeds(n_runs: int, seed: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(max(n_runs, 1), dtype=np.uint32)[:n_runs]]


def _map(fn, jobs, workers):
    if workers <= 1:
        return [fn(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *j) for j in jobs]
        return [f.result() for f in futures]


def _zjob(G, opts, run, seed):
    return _record(gen.reshuffle(G, seed), opts, 0, run, seed)


def zscore(G: SignedGraph, reps: int, seed: int = 0, opts: SolverOptions | None = None,
           workers: int = 1) -> ExperimentReport:
    """Frustration of G against ``reps`` sign-reshuffled copies of it.

    Z = (L(G) - mean) / SD with the sample SD; left undefined (None) when
    the SD is zero.
    """
    if reps < 1:
        raise ValueError("reps must be at least 1")
    opts = opts or SolverOptions()
    base = _record(G, opts, 0, -1, seed)
    records = _map(_zjob, [(G, opts, r, s) for r, s in enumerate(_run_seeds(reps, seed))], workers)
    agg = _aggregate([r["L"] for r in records], 0, G.m)
    z = (base["L"] - agg["mean"]) / agg["sd"] if agg["sd"] > 0 else None
    params = {"reps": reps, "seed": seed, "n": G.n, "m": G.m, "m_minus": G.m_minus, "graph": G.digest()}
    return ExperimentReport("zscore", params, records, [agg], base["L"], z)


def _sweep_job(family, n, m, k, d, m_minus, setting, opts, run, seed):
    spec = gen.GenSpec(family, n, m=m, d=d, k=k, m_minus=m_minus, seed=seed)
    return _record(spec.build(), opts, setting, run, seed)


def sweep_negatives(family: str, n: int, m: int, grid, runs: int, seed: int = 0, k: int | None = None,
                    opts: SolverOptions | None = None, workers: int = 1) -> ExperimentReport:
    """Mean and SD of L over ``runs`` graphs for each negative-edge count in ``grid``.

    Run r uses the same seed for every grid value, so each run keeps one
    skeleton and its negative sets are nested as m- grows.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    opts = opts or SolverOptions()
    seeds = _run_seeds(runs, seed)
    jobs = [(family, n, m, k, None, int(mm), mm, opts, r, s) for mm in grid for r, s in enumerate(seeds)]
    records = _map(_sweep_job, jobs, workers)
    aggs = []
    for mm in grid:
        vals = [r for r in records if r["setting"] == float(mm)]
        aggs.append(_aggregate([r["L"] for r in vals], mm, np.mean([r["m"] for r in vals])))
    params = {"family": family, "n": n, "m": m, "k": k, "grid": [int(g) for g in grid], "runs": runs, "seed": seed}
    return ExperimentReport("sweep-negatives", params, records, aggs)


def sweep_sizes(n_grid, d: int, fraction: float, runs: int, seed: int = 0,
                opts: SolverOptions | None = None, workers: int = 1) -> ExperimentReport:
    """Random d-regular graphs of each order in ``n_grid`` with floor(fraction * m) negative edges."""
    if runs < 1:
        raise ValueError("runs must be at least 1")
    opts = opts or SolverOptions()
    seeds = _run_seeds(runs, seed)
    jobs = []
    for n in n_grid:
        m = n * d // 2
        mm = int(math.floor(fraction * m))
        jobs += [("random_regular", int(n), None, None, d, mm, n, opts, r, s) for r, s in enumerate(seeds)]
    records = _map(_sweep_job, jobs, workers)
    aggs = []
    for n in n_grid:
        vals = [r for r in records if r["setting"] == float(n)]
        aggs.append(_aggregate([r["L"] for r in vals], n, np.mean([r["m"] for r in vals])))
    params = {"family": "random_regular", "d": d, "fraction": fraction, "grid": [int(g) for g in n_grid],
              "runs": runs, "seed": seed}
    return ExperimentReport("sweep-sizes", params, records, aggs)


def to_dot(G: SignedGraph, X: Colouring | None = None, name: str = "G") -> str:
    """Graphviz DOT: negative edges dashed, positive solid; with a colouring,
    nodes are filled by colour and frustrated edges drawn red and bold."""
    labels = G.meta.get("labels")
    frustrated = set()
    if X is not None:
        frustrated = {(i, j) for i, j, _ in frustrated_edges(G, X)}
    lines = [f"graph {name} {{", "  node [shape=circle, style=filled, fillcolor=white, fontcolor=black];"]
    for v in range(G.n):
        attrs = [f'label="{labels[v] if labels else v}"']
        if X is not None and X[v]:
            attrs += ["fillcolor=black", "fontcolor=white"]
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for i, j, s in G.edges:
        attrs = ["style=dashed" if s < 0 else "style=solid", f'sign="{s:+d}"']
        if (i, j) in frustrated:
            attrs += ["color=red", "penwidth=2.5", 'class="frustrated"']
        lines.append(f"  {i} -- {j} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
