import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from frustration import gen
from frustration.oracle import brute_force
from frustration.sgraph import (
    BadSignError,
    Colouring,
    DuplicateEdgeError,
    MalformedLineError,
    SelfLoopError,
    SignedGraph,
    circuit_rank,
    format_edge_list,
    frustrated_edges,
    frustration_count,
    is_balanced,
    net_degree,
    parse_edge_list,
    switch,
)

from conftest import random_signed


@st.composite
def signed_graphs(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    signs = draw(st.lists(st.sampled_from([-1, 1]), min_size=len(chosen), max_size=len(chosen)))
    return SignedGraph(n, tuple((i, j, s) for (i, j), s in zip(chosen, signs)))


def colourings(n):
    return st.lists(st.integers(0, 1), min_size=n, max_size=n).map(lambda b: Colouring(tuple(b)))


def test_parse_k3():
    G = parse_edge_list("3 3\n0 1 +1\n0 2 +1\n1 2 -1\n")
    assert (G.n, G.m, G.m_minus, G.m_plus) == (3, 3, 1, 2)
    assert G.sign(2, 1) == -1 and G.sign(0, 1) == 1
    assert G.density == pytest.approx(1.0)


def test_parse_sign_aliases_and_comments():
    G = parse_edge_list("# a comment\n\n4 3\n0 1 +\n1 2 -\n2 3 1\n")
    assert [s for _, _, s in G.edges] == [1, -1, 1]


def test_self_loop_names_line():
    with pytest.raises(SelfLoopError) as e:
        parse_edge_list("2 1\n0 0 +1\n")
    assert e.value.lineno == 2


@pytest.mark.parametrize("text, err, line", [
    ("3 1\n0 1 2\n", BadSignError, 2),
    ("3 2\n0 1 +1\n1 0 -1\n", DuplicateEdgeError, 3),
    ("3 1\n0 1\n", MalformedLineError, 2),
    ("3\n", MalformedLineError, 1),
    ("3 2\n0 1 +1\n", MalformedLineError, 2),
    ("3 1\na b +1\n", MalformedLineError, 2),
])
def test_parse_errors_are_distinct(text, err, line):
    with pytest.raises(err) as e:
        parse_edge_list(text)
    assert e.value.lineno == line
    assert f"line {line}" in str(e.value)


def test_parse_compacts_labels_by_first_appearance():
    G = parse_edge_list("3 2\n17 5 +1\n5 99 -1\n")
    assert G.meta["labels"] == [17, 5, 99]
    assert G.edges == ((0, 1, 1), (1, 2, -1))


def test_graph_invariants_rejected():
    with pytest.raises(ValueError):
        SignedGraph(3, ((1, 1, 1),))
    with pytest.raises(ValueError):
        SignedGraph(3, ((0, 1, 1), (1, 0, -1)))
    with pytest.raises(ValueError):
        SignedGraph(3, ((0, 1, 0),))


def test_round_trip_random():
    rng = np.random.default_rng(0)
    for _ in range(20):
        G = random_signed(rng)
        H = parse_edge_list(format_edge_list(G, ["x"]))
        assert H == G and H.digest() == G.digest()


def test_adjacency_matrix_matches_signs():
    G = gen.erdos_renyi(12, 30, 10, seed=2)
    A = G.adjacency_matrix()
    assert (A == A.T).all()
    for i, j, s in G.edges:
        assert A[i, j] == s
    assert np.abs(A).sum() == 2 * G.m
    assert (A.sum(axis=1) == G.net_degrees).all()


def test_frustration_examples(k3):
    allpos = SignedGraph(3, ((0, 1, 1), (0, 2, 1), (1, 2, 1)))
    assert frustration_count(allpos, Colouring.uniform(3, 0)) == 0
    assert frustration_count(allpos, Colouring.uniform(3, 1)) == 0
    assert frustration_count(k3, Colouring.uniform(3, 1)) == 1
    assert frustrated_edges(k3, Colouring.uniform(3, 0)) == [(1, 2, -1)]


def test_frustration_matches_oracle_minimum():
    G = gen.erdos_renyi(10, 20, 10, seed=7)
    res = brute_force(G)
    assert frustration_count(G, res.colouring) == res.value
    for bits in range(2 ** 9):
        X = Colouring(tuple((bits >> k) & 1 for k in range(9)) + (0,))
        assert frustration_count(G, X) >= res.value


def test_colouring_length_checked(k3):
    with pytest.raises(ValueError):
        frustration_count(k3, Colouring((0, 1)))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_complement_symmetry(data):
    G = data.draw(signed_graphs())
    X = data.draw(colourings(G.n))
    assert frustration_count(G, X) == frustration_count(G, X.complement())


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_switching_identity(data):
    """f_{G^S}(X) = f_G(X xor S): switching relabels colourings."""
    G = data.draw(signed_graphs())
    S = data.draw(colourings(G.n))
    X = data.draw(colourings(G.n))
    H = switch(G, S.black)
    XS = Colouring(tuple(a ^ b for a, b in zip(X.bits, S.bits)))
    assert frustration_count(H, X) == frustration_count(G, XS)
    assert H.unsigned() == G.unsigned()


def test_switch_trivial_sets():
    G = gen.erdos_renyi(9, 20, 7, seed=4)
    assert switch(G, set()) == G
    assert switch(G, set(range(G.n))) == G


def test_balance_examples():
    allpos = gen.erdos_renyi(10, 25, 0, seed=1)
    cert = is_balanced(allpos)
    assert cert and len(set(cert.colouring.bits)) == 1
    c4 = SignedGraph(4, ((0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, -1)))
    cert = is_balanced(c4)
    assert not cert and len(cert.cycle) == 4
    assert sum(s < 0 for *_, s in cert.cycle_edges(c4)) % 2 == 1
    big = gen.balanced_random(1000, 5000, seed=3)
    cert = is_balanced(big)
    assert cert and frustration_count(big, cert.colouring) == 0


def test_balance_certificates_agree_with_oracle():
    rng = np.random.default_rng(5)
    for _ in range(80):
        G = random_signed(rng, 3, 12)
        cert = is_balanced(G)
        assert bool(cert) == (brute_force(G).value == 0)
        if cert:
            assert frustration_count(G, cert.colouring) == 0
        else:
            edges = cert.cycle_edges(G)
            assert len(edges) == len(cert.cycle) >= 3
            assert len(set(cert.cycle)) == len(cert.cycle)
            assert all(G.sign(i, j) == s for i, j, s in edges)
            assert np.prod([s for *_, s in edges]) == -1


def test_structural_queries():
    tree = SignedGraph(5, ((0, 1, -1), (1, 2, 1), (1, 3, -1), (3, 4, -1)))
    assert circuit_rank(tree) == 0
    assert circuit_rank(gen.antibalanced_complete(3)) == 1
    star = SignedGraph(5, ((0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, -1)))
    assert net_degree(star, 0) == 2
    assert star.positive_degree(0) == 3 and star.negative_degree(0) == 1
    two = SignedGraph(6, ((0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, -1)))
    assert circuit_rank(two) == 2


def test_node_index_checked():
    G = gen.antibalanced_complete(4)
    with pytest.raises(IndexError):
        G.neighbours(4)
