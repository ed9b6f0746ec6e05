"""Command-line entry point: ``frustration <command> ...``.

Exit codes: 0 proven optimum (or success), 1 usage or parse error,
2 time limit hit (bounds reported), 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import datasets, gen, models
from .report import ExperimentReport, checked_solve, sweep_negatives, sweep_sizes, to_dot, zscore
from .sgraph import Colouring, FrustrationResult, SignedGraph, format_edge_list, frustrated_edges, frustration_count
from .solver import SolverOptions

EXIT_OK, EXIT_USAGE, EXIT_TIMEOUT, EXIT_MISMATCH = 0, 1, 2, 3


def _opts(args) -> SolverOptions:
    return SolverOptions(
        use_net_degree_pruning=not getattr(args, "no_net_degree", False),
        use_fixing=not getattr(args, "no_fixing", False),
        time_limit=getattr(args, "time_limit", None) or math.inf,
        threads=getattr(args, "threads", 1),
        seed=getattr(args, "seed", 0) or 0,
    )


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def solve_report(G: SignedGraph, res) -> dict:
    value = frustration_count(G, res.colouring)
    if value != res.value:
        raise AssertionError(f"solver value {res.value} disagrees with recount {value}")
    return {
        "n": G.n, "m": G.m, "m_minus": G.m_minus,
        "value": value, "optimal": res.optimal, "lower": res.lower, "upper": res.upper,
        "colouring": list(res.colouring.bits),
        "deletion_set": [list(e) for e in frustrated_edges(G, res.colouring)],
        "stats": {k: v for k, v in res.stats.items()},
    }


def cmd_solve(args) -> int:
    G = datasets.resolve(args.input)
    model = None
    if args.lp or args.method == "ilp":
        model = models.build_ilp(G, args.net_degree, args.triangles, args.fix_max_degree)
    if args.lp:
        Path(args.lp).write_text(models.export_lp(model))
    if args.method == "ilp":
        res = _solve_milp(G, model, args.time_limit)
        if res is None:
            print("error: MILP solver stopped without a proven optimum", file=sys.stderr)
            return EXIT_TIMEOUT
    else:
        res = checked_solve(G, _opts(args))
    rep = solve_report(G, res)
    if args.json:
        _write(json.dumps(rep, indent=2) + "\n", args.out)
    else:
        status = "optimal" if rep["optimal"] else f"time limit, bounds [{rep['lower']}, {rep['upper']}]"
        lines = [
            f"graph: n={G.n} m={G.m} m_minus={G.m_minus}",
            f"L(G) = {rep['value']} ({status})",
            f"colouring: {''.join(map(str, rep['colouring']))}",
            f"deletion set ({len(rep['deletion_set'])}):",
        ]
        lines += [f"  {i} {j} {s:+d}" for i, j, s in rep["deletion_set"]]
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK if rep["optimal"] else EXIT_TIMEOUT


def _solve_milp(G: SignedGraph, model, time_limit):
    """The ILP route: solve the 0/1 model (with the chosen inequalities) by MILP."""
    try:
        value, values = models.solve_ilp(model, time_limit)
    except RuntimeError:
        return None
    X = Colouring(tuple(values[models.x(i)] for i in range(G.n)))
    if frustration_count(G, X) != value:
        raise AssertionError("MILP objective disagrees with the recount of its colouring")
    return FrustrationResult(value, X, tuple(frustrated_edges(G, X)), True, value, value,
                             {"method": "ilp", "variables": len(model.variables),
                              "constraints": len(model.constraints)})


def _emit_report(rep: ExperimentReport, args) -> None:
    if args.csv:
        Path(args.csv).write_text(rep.records_csv())
    if args.json_out:
        Path(args.json_out).write_text(rep.to_json())
    if getattr(args, "dat", None):
        Path(args.dat).write_text(rep.gnuplot())


def cmd_zscore(args) -> int:
    if args.reps < 1:
        print("error: --reps must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    G = datasets.resolve(args.input)
    rep = zscore(G, args.reps, args.seed, _opts(args), workers=args.workers)
    _emit_report(rep, args)
    agg = rep.aggregates[0]
    z = "undefined (SD = 0)" if rep.z is None else f"{rep.z:.2f}"
    print(f"L(G) = {rep.observed}; reshuffled mean {agg['mean']:.2f} +- {agg['sd']:.2f} over {agg['runs']}; Z = {z}")
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = gen.GenSpec(args.family, args.n, m=args.m, d=args.d, k=args.k, m_minus=args.neg, seed=args.seed)
    G = spec.build()
    comments = [f"generated by frustration gen {args.family}"]
    comments += [f"{k}={v}" for k, v in sorted(G.meta.items())]
    comments.append(f"n={G.n} m={G.m} m_minus={G.m_minus}")
    _write(format_edge_list(G, comments), args.out)
    return EXIT_OK


def _grid(text: str) -> list[int]:
    """``0:50:5`` (inclusive range) or ``0,5,10``."""
    if ":" in text:
        lo, hi, step = (int(t) for t in text.split(":"))
        return list(range(lo, hi + 1, step))
    return [int(t) for t in text.split(",")]


def cmd_sweep(args) -> int:
    opts = _opts(args)
    if args.family == "random_regular":
        rep = sweep_sizes(_grid(args.n_grid), args.d, args.fraction, args.runs, args.seed, opts, args.workers)
    else:
        rep = sweep_negatives(args.family, args.n, args.m, _grid(args.neg_grid), args.runs, args.seed,
                              k=args.k, opts=opts, workers=args.workers)
    _emit_report(rep, args)
    sys.stdout.write(rep.aggregates_csv())
    return EXIT_OK


def _read_colouring(path: str, n: int) -> tuple[Colouring, int | None]:
    text = Path(path).read_text()
    claimed = None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, dict):
        bits = data["colouring"]
        claimed = data.get("value")
    elif isinstance(data, list):
        bits = data
    else:
        body = [ln.split("#")[0].strip() for ln in text.splitlines()]
        body = [b for b in body if b]
        pairs = [b.split() for b in body]
        if pairs and all(len(p) == 2 for p in pairs):
            bits = [0] * n
            for node, c in pairs:
                bits[int(node)] = int(c)
        else:
            joined = "".join(body).replace(" ", "")
            bits = [int(c) for c in joined]
    if len(bits) != n:
        raise ValueError(f"colouring has {len(bits)} entries, graph has {n} nodes")
    return Colouring(tuple(bits)), claimed


def cmd_verify(args) -> int:
    G = datasets.resolve(args.input)
    X, claimed = _read_colouring(args.colouring, G.n)
    if args.claimed is not None:
        claimed = args.claimed
    count = frustration_count(G, X)
    rep = {"recount": count, "claimed": claimed, "frustrated": [list(e) for e in frustrated_edges(G, X)],
           "match": claimed is None or claimed == count}
    if args.json:
        print(json.dumps(rep))
    else:
        verdict = "no claim" if claimed is None else ("confirmed" if rep["match"] else f"MISMATCH (claimed {claimed})")
        print(f"frustration count {count}: {verdict}")
    return EXIT_OK if rep["match"] else EXIT_MISMATCH


def cmd_export(args) -> int:
    G = datasets.resolve(args.input)
    if args.format == "lp":
        text = models.export_lp(models.build_ilp(G, args.net_degree, args.triangles, args.fix_max_degree))
    elif args.format == "qubo":
        text = models.export_qubo(models.build_ubqp(G))
    elif args.format == "dot":
        X = None
        if args.colouring:
            X, _ = _read_colouring(args.colouring, G.n)
        elif not args.no_solve:
            X = checked_solve(G, _opts(args)).colouring
        text = to_dot(G, X)
    else:
        print(f"error: unknown format {args.format!r}", file=sys.stderr)
        return EXIT_USAGE
    _write(text, args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="frustration", description="Exact frustration index of signed graphs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def solver_flags(sp):
        sp.add_argument("--time-limit", type=float, default=None, help="seconds; bounds are reported on expiry")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--no-net-degree", action="store_true", help="disable the net-degree dominance prune")
        sp.add_argument("--no-fixing", action="store_true", help="do not fix the max-degree node")

    def model_flags(sp):
        sp.add_argument("--net-degree", action="store_true", help="add per-node net-degree inequalities")
        sp.add_argument("--triangles", action="store_true", help="add four inequalities per triangle")
        sp.add_argument("--fix-max-degree", action="store_true", help="fix the max-degree node black")

    sp = sub.add_parser("solve", help="compute L(G), a colouring and a minimum deletion set")
    sp.add_argument("--input", required=True, help="edge-list file or fixture name (G1..G9)")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.add_argument("--lp", help="also write the ILP model with the chosen inequalities here")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--method", choices=("bb", "ilp"), default="bb",
                    help="bb: combinatorial branch and bound; ilp: 0/1 model via MILP (uses the model flags)")
    solver_flags(sp)
    model_flags(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("zscore", help="compare L(G) with sign-reshuffled copies")
    sp.add_argument("--input", required=True)
    sp.add_argument("--reps", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--csv")
    sp.add_argument("--json-out")
    solver_flags(sp)
    sp.set_defaults(func=cmd_zscore)

    sp = sub.add_parser("gen", help="write a random signed graph")
    sp.add_argument("family", choices=gen.FAMILIES)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--k", type=int, help="attachment count (barabasi_albert)")
    sp.add_argument("--neg", type=int, default=0, help="number of negative edges")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("sweep", help="mean and SD of L across generated graphs")
    sp.add_argument("family", choices=("erdos_renyi", "barabasi_albert", "random_regular"))
    sp.add_argument("--n", type=int, default=15)
    sp.add_argument("--m", type=int, default=50)
    sp.add_argument("--k", type=int)
    sp.add_argument("--neg-grid", default="0:50:5", help="m- values, lo:hi:step or comma list")
    sp.add_argument("--n-grid", default="10:60:10", help="orders for random_regular")
    sp.add_argument("--d", type=int, default=4)
    sp.add_argument("--fraction", type=float, default=0.5, help="negative fraction for random_regular")
    sp.add_argument("--runs", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--csv")
    sp.add_argument("--json-out")
    sp.add_argument("--dat", help="gnuplot data file: x mean sd min max")
    solver_flags(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("export", help="write LP, QUBO or DOT")
    sp.add_argument("--input", required=True)
    sp.add_argument("--format", required=True, help="lp, qubo or dot")
    sp.add_argument("--out")
    sp.add_argument("--colouring", help="colouring file for dot (otherwise solved)")
    sp.add_argument("--no-solve", action="store_true", help="dot without frustrated-edge marking")
    sp.add_argument("--seed", type=int, default=0)
    solver_flags(sp)
    model_flags(sp)
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("verify", help="recount the frustration of a claimed colouring")
    sp.add_argument("--input", required=True)
    sp.add_argument("--colouring", required=True, help="JSON from solve --json, bit string, or 'node colour' lines")
    sp.add_argument("--claimed", type=int, help="claimed L (overrides the value in a JSON file)")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
