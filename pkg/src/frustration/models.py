"""The three optimisation formulations of the frustration index.

* QCQP: maximise sum_ij a_ij y_i y_j subject to y_i^2 = 1. The optimum Z1
  relates to the index by L = (2m - Z1) / 4.
* UBQP: minimise sum_ij (a_ij x_i - a_ij x_i x_j) + m- over binary x. The
  optimum is L itself.
* ILP: the UBQP linearised with one binary x_ij per edge, plus optional
  valid inequalities (per-node net degree, four per triangle, and fixing
  the highest-degree node black).

Models are plain data with exact integer coefficients. Constraints with a
fractional right-hand side in their textbook form are scaled to integers
(x_ij <= (x_i + x_j)/2 is stored as 2 x_ij - x_i - x_j <= 0).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .sgraph import Colouring, SignedGraph

KINDS = ("QCQP", "UBQP", "ILP")
GROUPS = ("core", "net-degree", "triangle", "fixing")


@dataclass(frozen=True)
class Constraint:
    name: str
    linear: Mapping[str, int]
    sense: str  # "<=", ">=" or "=="
    rhs: int
    group: str = "core"
    quadratic: Mapping[tuple[str, str], int] = field(default_factory=dict)

    def lhs(self, values: Mapping[str, int]) -> int:
        total = sum(c * values[v] for v, c in self.linear.items())
        total += sum(c * values[a] * values[b] for (a, b), c in self.quadratic.items())
        return total

    def holds(self, values: Mapping[str, int]) -> bool:
        lhs = self.lhs(values)
        if self.sense == "<=":
            return lhs <= self.rhs
        if self.sense == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class ModelInstance:
    kind: str
    sense: str  # "max" or "min"
    variables: tuple[str, ...]
    domain: str  # "pm1" for QCQP, "binary" otherwise
    constant: int
    linear: Mapping[str, int]
    quadratic: Mapping[tuple[str, str], int]
    constraints: tuple[Constraint, ...] = ()
    info: dict = field(default_factory=dict, compare=False)

    def count(self, group: str | None = None) -> int:
        if group is None:
            return len(self.constraints)
        return sum(1 for c in self.constraints if c.group == group)


class AssignmentError(ValueError):
    pass


def x(i: int) -> str:
    return f"x_{i}"


def xe(i: int, j: int) -> str:
    return f"x_{min(i, j)}_{max(i, j)}"


def y(i: int) -> str:
    return f"y_{i}"


def _info(G: SignedGraph, **flags) -> dict:
    return {"n": G.n, "m": G.m, "m_minus": G.m_minus, "graph": G.digest(), **flags}


def build_qcqp(G: SignedGraph) -> ModelInstance:
    quad = {(y(i), y(j)): 2 * s for i, j, s in G.edges}
    cons = tuple(Constraint(f"sq_{i}", {}, "==", 1, "core", {(y(i), y(i)): 1}) for i in range(G.n))
    return ModelInstance("QCQP", "max", tuple(y(i) for i in range(G.n)), "pm1", 0, {}, quad, cons, _info(G))


def build_ubqp(G: SignedGraph) -> ModelInstance:
    d = G.net_degrees
    lin = {x(i): int(d[i]) for i in range(G.n) if d[i] != 0}
    quad = {(x(i), x(j)): -2 * s for i, j, s in G.edges}
    return ModelInstance("UBQP", "min", tuple(x(i) for i in range(G.n)), "binary", G.m_minus, lin, quad, (), _info(G))


def enumerate_triangles(G: SignedGraph) -> list[tuple[int, int, int]]:
    nb = [set(w for w, _ in G.adjacency[v]) for v in range(G.n)]
    out = []
    for i, j, _ in G.edges:
        for k in sorted(nb[i] & nb[j]):
            if k > j:
                out.append((i, j, k))
    out.sort()
    return out


def max_degree_node(G: SignedGraph) -> int:
    """Node of highest unsigned degree, smallest id on ties."""
    return int(np.argmax(G.degrees))


def build_ilp(G: SignedGraph, net_degree: bool = False, triangles: bool = False,
              fix_max_degree: bool = False) -> ModelInstance:
    d = G.net_degrees
    names = [x(i) for i in range(G.n)] + [xe(i, j) for i, j, _ in G.edges]
    lin: dict[str, int] = {x(i): int(d[i]) for i in range(G.n) if d[i] != 0}
    for i, j, s in G.edges:
        lin[xe(i, j)] = -2 * s
    cons: list[Constraint] = []
    for i, j, s in G.edges:
        if s > 0:
            cons.append(Constraint(f"pos_{i}_{j}", {xe(i, j): 2, x(i): -1, x(j): -1}, "<=", 0, "core"))
        else:
            cons.append(Constraint(f"neg_{i}_{j}", {xe(i, j): 1, x(i): -1, x(j): -1}, ">=", -1, "core"))
    if net_degree:
        for i in range(G.n):
            terms: dict[str, int] = {x(i): -2 * int(d[i])}
            for j, s in G.adjacency[i]:
                terms[x(j)] = terms.get(x(j), 0) - 2 * s
                terms[xe(i, j)] = 4 * s
            cons.append(Constraint(f"nd_{i}", terms, ">=", -int(d[i]), "net-degree"))
    tris = enumerate_triangles(G) if triangles else []
    for i, j, k in tris:
        ij, ik, jk = xe(i, j), xe(i, k), xe(j, k)
        tag = f"{i}_{j}_{k}"
        cons.append(Constraint(f"tri1_{tag}", {x(i): 1, jk: 1, ij: -1, ik: -1}, ">=", 0, "triangle"))
        cons.append(Constraint(f"tri2_{tag}", {x(j): 1, ik: 1, ij: -1, jk: -1}, ">=", 0, "triangle"))
        cons.append(Constraint(f"tri3_{tag}", {x(k): 1, ij: 1, ik: -1, jk: -1}, ">=", 0, "triangle"))
        cons.append(Constraint(f"tri4_{tag}", {ij: 1, ik: 1, jk: 1, x(i): -1, x(j): -1, x(k): -1}, ">=", -1, "triangle"))
    if fix_max_degree and G.n > 0:
        k = max_degree_node(G)
        cons.append(Constraint(f"fix_{k}", {x(k): 1}, "==", 1, "fixing"))
    info = _info(G, net_degree=net_degree, triangles=triangles, fix_max_degree=fix_max_degree, n_triangles=len(tris))
    return ModelInstance("ILP", "min", tuple(names), "binary", G.m_minus, lin, {}, tuple(cons), info)


def assignment_for(model: ModelInstance, G: SignedGraph, X) -> dict[str, int]:
    """Model variables induced by a colouring (y = 2x - 1, x_ij = x_i x_j)."""
    bits = list(X.bits if isinstance(X, Colouring) else X)
    if len(bits) != G.n:
        raise AssignmentError(f"colouring has {len(bits)} entries, graph has {G.n} nodes")
    if model.kind == "QCQP":
        return {y(i): 2 * int(b) - 1 for i, b in enumerate(bits)}
    out = {x(i): int(b) for i, b in enumerate(bits)}
    if model.kind == "ILP":
        for i, j, _ in G.edges:
            out[xe(i, j)] = int(bits[i]) * int(bits[j])
    return out


def _check(model: ModelInstance, values: Mapping[str, int]) -> None:
    missing = [v for v in model.variables if v not in values]
    if missing:
        raise AssignmentError(f"assignment misses {len(missing)} variables, e.g. {missing[0]}")
    allowed = (-1, 1) if model.domain == "pm1" else (0, 1)
    for v in model.variables:
        if values[v] not in allowed:
            raise AssignmentError(f"{v}={values[v]} outside domain {allowed}")


def evaluate(model: ModelInstance, values: Mapping[str, int]) -> int:
    _check(model, values)
    total = model.constant
    total += sum(c * values[v] for v, c in model.linear.items())
    total += sum(c * values[a] * values[b] for (a, b), c in model.quadratic.items())
    return int(total)


def feasible(model: ModelInstance, values: Mapping[str, int]) -> bool:
    _check(model, values)
    return all(c.holds(values) for c in model.constraints)


def violated(model: ModelInstance, values: Mapping[str, int]) -> list[Constraint]:
    _check(model, values)
    return [c for c in model.constraints if not c.holds(values)]


def solve_ilp(model: ModelInstance, time_limit: float | None = None) -> tuple[int, dict[str, int]]:
    """Optimal value and assignment of an ILP model via scipy's HiGHS MILP solver."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    if model.kind != "ILP":
        raise ValueError(f"solve_ilp handles ILP models, got {model.kind}")
    index = {v: k for k, v in enumerate(model.variables)}
    nv = len(index)
    cvec = np.zeros(nv)
    for v, c in model.linear.items():
        cvec[index[v]] = c
    constraints = []
    if model.constraints:
        A = np.zeros((len(model.constraints), nv))
        lo = np.full(len(model.constraints), -np.inf)
        hi = np.full(len(model.constraints), np.inf)
        for r, con in enumerate(model.constraints):
            for v, c in con.linear.items():
                A[r, index[v]] = c
            if con.sense in ("<=", "=="):
                hi[r] = con.rhs
            if con.sense in (">=", "=="):
                lo[r] = con.rhs
        constraints.append(LinearConstraint(A, lo, hi))
    options = {} if time_limit is None else {"time_limit": time_limit}
    res = milp(cvec, integrality=np.ones(nv), bounds=Bounds(0, 1), constraints=constraints, options=options)
    if res.status != 0:
        raise RuntimeError(f"MILP solve failed: {res.message}")
    values = {v: int(round(res.x[k])) for v, k in index.items()}
    return evaluate(model, values), values


# --- text exports ----------------------------------------------------------


def _terms(coefs: Mapping[str, int]) -> list[str]:
    out = []
    for v, c in coefs.items():
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        out.append(f"{sign} {v}" if mag == 1 else f"{sign} {mag} {v}")
    if not out and coefs:
        out.append(f"0 {next(iter(coefs))}")
    if out and out[0].startswith("+ "):
        out[0] = out[0][2:]
    return out


def _wrap(head: str, terms: list[str], tail: str = "", width: int = 8) -> list[str]:
    lines = []
    chunk = []
    for t in terms:
        chunk.append(t)
        if len(chunk) == width:
            lines.append(" ".join(chunk))
            chunk = []
    if chunk or not lines:
        lines.append(" ".join(chunk))
    lines[0] = head + lines[0]
    lines[-1] = lines[-1] + tail
    return [lines[0]] + ["   " + ln for ln in lines[1:]]


def _header(model: ModelInstance, prefix: str) -> list[str]:
    info = model.info
    flags = ",".join(f"{k}={int(info[k])}" for k in ("net_degree", "triangles", "fix_max_degree") if k in info)
    out = [
        f"{prefix} frustration index model: {model.kind}",
        f"{prefix} graph {info.get('graph', '?')} n={info.get('n')} m={info.get('m')} m_minus={info.get('m_minus')}",
    ]
    if flags:
        out.append(f"{prefix} options {flags}")
    return out


def export_lp(model: ModelInstance) -> str:
    """CPLEX LP text for an ILP model.

    The objective constant (m-) is not part of the LP objective; it is
    recorded in the header and L(G) = optimal LP objective + constant.
    """
    if model.kind != "ILP":
        raise ValueError(f"LP export needs a linear model; {model.kind} has a quadratic objective, use export_qubo")
    lines = _header(model, "\\")
    lines.append(f"\\ constant {model.constant}")
    lines.append(f"\\ L(G) = optimal objective + {model.constant}")
    lines.append("Minimize")
    lines += _wrap(" obj: ", _terms(model.linear))
    lines.append("Subject To")
    for con in model.constraints:
        op = {"<=": "<=", ">=": ">=", "==": "="}[con.sense]
        lines += _wrap(f" {con.name}: ", _terms(con.linear), f" {op} {con.rhs}")
    lines.append("Bounds")
    lines += [f" 0 <= {v} <= 1" for v in model.variables]
    lines.append("Binaries")
    lines += _wrap(" ", list(model.variables), width=10)
    lines.append("End")
    return "\n".join(lines) + "\n"


_TERM = re.compile(r"([+-]?)\s*(\d+)?\s*([A-Za-z_][A-Za-z0-9_]*)")


def _parse_terms(expr: str) -> dict[str, int]:
    out: dict[str, int] = {}
    expr = expr.strip()
    pos = 0
    while pos < len(expr):
        mt = _TERM.match(expr, pos)
        if mt is None:
            if expr[pos].isspace():
                pos += 1
                continue
            raise ValueError(f"cannot parse LP expression near {expr[pos:pos + 20]!r}")
        sign = -1 if mt.group(1) == "-" else 1
        coef = int(mt.group(2)) if mt.group(2) else 1
        out[mt.group(3)] = out.get(mt.group(3), 0) + sign * coef
        pos = mt.end()
        while pos < len(expr) and expr[pos].isspace():
            pos += 1
    return out


def read_lp(text: str) -> ModelInstance:
    """Read back the LP subset written by export_lp."""
    constant = 0
    section = None
    buf: list[str] = []
    objective: dict[str, int] = {}
    cons: list[Constraint] = []
    variables: list[str] = []

    def flush():
        nonlocal objective
        if not buf:
            return
        body = " ".join(buf)
        buf.clear()
        name, _, rest = body.partition(":")
        if section == "obj":
            objective = _parse_terms(rest)
            return
        mt = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+)\s*$", rest)
        if mt is None:
            raise ValueError(f"malformed constraint {body!r}")
        sense = {"<=": "<=", ">=": ">=", "=": "=="}[mt.group(2)]
        cname = name.strip()
        group = "core"
        if cname.startswith("nd_"):
            group = "net-degree"
        elif cname.startswith("tri"):
            group = "triangle"
        elif cname.startswith("fix_"):
            group = "fixing"
        cons.append(Constraint(cname, _parse_terms(mt.group(1)), sense, int(mt.group(3)), group))

    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("\\"):
            mt = re.match(r"\\\s*constant\s+(-?\d+)", line)
            if mt:
                constant = int(mt.group(1))
            continue
        low = line.lower()
        if low in ("minimize", "subject to", "bounds", "binaries", "binary", "end"):
            flush()
            section = {"minimize": "obj", "subject to": "st", "bounds": "bounds",
                       "binaries": "bin", "binary": "bin", "end": None}[low]
            continue
        if section in ("obj", "st"):
            if ":" in line and buf:
                flush()
            buf.append(line)
        elif section == "bin":
            variables += line.split()
    flush()
    return ModelInstance("ILP", "min", tuple(variables), "binary", constant, objective, {}, tuple(cons))


def export_qubo(model: ModelInstance) -> str:
    """Sparse coefficient listing of a UBQP model.

    Format, after ``#`` comment lines: one ``constant c`` line, then
    ``linear i c`` and ``quadratic i j c`` lines (i < j) over variable
    indices. The energy of x in {0,1}^n is the constant plus every listed
    term evaluated at x; its minimum is L(G).
    """
    if model.kind != "UBQP":
        raise ValueError(f"QUBO export needs a UBQP model, got {model.kind}")
    index = {v: k for k, v in enumerate(model.variables)}
    lines = _header(model, "#")
    lines.append(f"# variables {len(model.variables)}; L(G) = min energy")
    lines.append(f"constant {model.constant}")
    for v, c in sorted(model.linear.items(), key=lambda t: index[t[0]]):
        if c:
            lines.append(f"linear {index[v]} {c}")
    quad = sorted(((min(index[a], index[b]), max(index[a], index[b])), c) for (a, b), c in model.quadratic.items())
    for (i, j), c in quad:
        if c:
            lines.append(f"quadratic {i} {j} {c}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Qubo:
    n: int
    constant: int
    linear: dict[int, int]
    quadratic: dict[tuple[int, int], int]

    def energy(self, bits) -> int:
        e = self.constant
        e += sum(c * bits[i] for i, c in self.linear.items())
        e += sum(c * bits[i] * bits[j] for (i, j), c in self.quadratic.items())
        return int(e)


def read_qubo(text: str) -> Qubo:
    constant, lin, quad, n = 0, {}, {}, 0
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            mt = re.match(r"#\s*variables\s+(\d+)", line)
            if mt:
                n = int(mt.group(1))
            continue
        if not line:
            continue
        toks = line.split()
        if toks[0] == "constant":
            constant = int(toks[1])
        elif toks[0] == "linear":
            lin[int(toks[1])] = int(toks[2])
        elif toks[0] == "quadratic":
            quad[(int(toks[1]), int(toks[2]))] = int(toks[3])
        else:
            raise ValueError(f"unknown QUBO line {line!r}")
    return Qubo(n, constant, lin, quad)
