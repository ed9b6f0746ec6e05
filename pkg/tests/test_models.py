import itertools
from pathlib import Path

import numpy as np
import pytest

from frustration import gen, models
from frustration.oracle import brute_force
from frustration.sgraph import Colouring, SignedGraph, frustration_count

from conftest import random_signed

DATA = Path(__file__).parent / "data"


def random_colouring(rng, n):
    return Colouring(tuple(int(b) for b in rng.integers(0, 2, n)))


def test_qcqp_single_edges():
    pos = SignedGraph(2, ((0, 1, 1),))
    neg = SignedGraph(2, ((0, 1, -1),))
    assert models.evaluate(models.build_qcqp(pos), {"y_0": 1, "y_1": 1}) == 2
    assert models.evaluate(models.build_qcqp(neg), {"y_0": 1, "y_1": -1}) == 2


def test_ubqp_single_edges():
    allpos = gen.erdos_renyi(6, 9, 0, seed=0)
    assert models.evaluate(models.build_ubqp(allpos), {f"x_{i}": 0 for i in range(6)}) == 0
    ub = models.build_ubqp(SignedGraph(2, ((0, 1, -1),)))
    assert models.evaluate(ub, {"x_0": 1, "x_1": 0}) == 0
    assert models.evaluate(ub, {"x_0": 0, "x_1": 0}) == 1


def test_domains_enforced(k3):
    with pytest.raises(models.AssignmentError):
        models.evaluate(models.build_qcqp(k3), {"y_0": 0, "y_1": 1, "y_2": 1})
    with pytest.raises(models.AssignmentError):
        models.evaluate(models.build_ubqp(k3), {"x_0": 1})


def test_formulations_agree_with_count():
    rng = np.random.default_rng(11)
    for _ in range(50):
        G = random_signed(rng)
        X = random_colouring(rng, G.n)
        f = frustration_count(G, X)
        q, u, ilp = models.build_qcqp(G), models.build_ubqp(G), models.build_ilp(G, True, True, True)
        z1 = models.evaluate(q, models.assignment_for(q, G, X))
        z2 = models.evaluate(u, models.assignment_for(u, G, X))
        assert z2 == f and z1 == 2 * G.m - 4 * z2
        values = models.assignment_for(ilp, G, X)
        assert models.evaluate(ilp, values) == f
        core = models.build_ilp(G)
        assert models.feasible(core, models.assignment_for(core, G, X))


def test_ilp_counts(k3):
    core = models.build_ilp(k3)
    assert len(core.variables) == 6 and core.count() == 3
    full = models.build_ilp(k3, True, True, True)
    assert full.count() - core.count() == 8
    assert (full.count("net-degree"), full.count("triangle"), full.count("fixing")) == (3, 4, 1)


def test_triangles():
    K4 = gen.antibalanced_complete(4)
    assert len(models.enumerate_triangles(K4)) == 4
    tree = SignedGraph(4, ((0, 1, 1), (1, 2, -1), (1, 3, 1)))
    assert models.enumerate_triangles(tree) == []
    G = gen.erdos_renyi(20, 60, 0, seed=3)
    A = np.abs(G.adjacency_matrix())
    assert len(models.enumerate_triangles(G)) == round(np.trace(A @ A @ A) / 6)


def test_max_degree_node_ties_smallest():
    star = SignedGraph(5, ((0, 1, 1), (1, 2, 1), (1, 3, 1), (3, 4, -1), (0, 3, 1)))
    assert models.max_degree_node(star) == 1
    assert models.max_degree_node(gen.antibalanced_complete(5)) == 0


def test_ubqp_optimum_is_index():
    rng = np.random.default_rng(2)
    for _ in range(10):
        G = random_signed(rng, 3, 9)
        u = models.build_ubqp(G)
        best = min(models.evaluate(u, dict(zip(u.variables, b))) for b in itertools.product((0, 1), repeat=G.n))
        assert best == brute_force(G).value


def test_valid_inequalities_hold_at_optima():
    rng = np.random.default_rng(6)
    for _ in range(15):
        G = random_signed(rng, 4, 10)
        model = models.build_ilp(G, net_degree=True, triangles=True)
        value, values = models.solve_ilp(model)
        assert value == brute_force(G).value
        assert not models.violated(model, values)


def test_ilp_optimum_with_fixing():
    G = gen.erdos_renyi(10, 25, 12, seed=8)
    value, values = models.solve_ilp(models.build_ilp(G, fix_max_degree=True))
    assert value == brute_force(G).value
    assert values[models.x(models.max_degree_node(G))] == 1


def test_lp_golden(k3):
    assert models.export_lp(models.build_ilp(k3)) == (DATA / "k3_core.lp").read_text()
    assert models.export_lp(models.build_ilp(k3, True, True, True)) == (DATA / "k3_all.lp").read_text()


def test_lp_round_trip():
    rng = np.random.default_rng(9)
    for _ in range(10):
        G = random_signed(rng, 4, 14)
        model = models.build_ilp(G, True, True, True)
        back = models.read_lp(models.export_lp(model))
        assert back.constant == model.constant and set(back.variables) == set(model.variables)
        assert back.count() == model.count()
        X = random_colouring(rng, G.n)
        values = models.assignment_for(model, G, X)
        assert models.evaluate(back, values) == models.evaluate(model, values)
        assert [c.holds(values) for c in back.constraints] == [c.holds(values) for c in model.constraints]


def test_lp_rejects_quadratic(k3):
    with pytest.raises(ValueError):
        models.export_lp(models.build_ubqp(k3))
    with pytest.raises(ValueError):
        models.export_qubo(models.build_ilp(k3))


def test_qubo_single_negative_edge():
    text = models.export_qubo(models.build_ubqp(SignedGraph(2, ((0, 1, -1),))))
    q = models.read_qubo(text)
    assert q.constant == 1 and q.linear == {0: -1, 1: -1} and q.quadratic == {(0, 1): 2}
    assert [q.energy(b) for b in itertools.product((0, 1), repeat=2)] == [1, 0, 0, 1]
    pos = models.read_qubo(models.export_qubo(models.build_ubqp(SignedGraph(2, ((0, 1, 1),)))))
    assert pos.constant == 0


def test_qubo_reproduces_counts():
    rng = np.random.default_rng(10)
    G = gen.erdos_renyi(25, 80, 37, seed=1)
    q = models.read_qubo(models.export_qubo(models.build_ubqp(G)))
    assert q.n == G.n
    for _ in range(50):
        X = random_colouring(rng, G.n)
        assert q.energy(X.bits) == frustration_count(G, X)
