import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliqster import (
    DecompositionError,
    Graph,
    assemble_system,
    build_basis,
    decompose,
    feature_vector,
    reconstruct_Z,
    sample_network,
    solve_coefficients,
)
from cliqster.core import GeneratorMatrix, RESIDUAL_TOL

from conftest import TEN_PEOPLE_CLIQUES, TEN_PEOPLE_MU, complete, gnp, graphs, tokens


def mu_by_clique(g, coeffs):
    return {tokens(g, c): m for c, m in zip(coeffs.cliques, coeffs.mu)}


def dense_lstsq_mu(g, cliques):
    """Minimiser of the squared error over every vertex pair, one design row per pair."""
    members = [set(c.vertices) for c in cliques]
    rows, target = [], []
    for s, r in itertools.combinations(range(g.n), 2):
        rows.append([1.0 if r in c and s in c else 0.0 for c in members])
        target.append(1.0 if g.has_edge(r, s) else 0.0)
    mu, *_ = np.linalg.lstsq(np.array(rows), np.array(target), rcond=None)
    return mu


def oracle_graphs(count=50, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        g = gnp(int(rng.integers(3, 11)), float(rng.choice([0.3, 0.5, 0.7])), rng)
        if g.m and build_basis(g).K <= 8:
            out.append(g)
    return out


def check_structure(coeffs):
    system = coeffs.system
    A = system.dense()
    sizes = coeffs.basis.sizes
    np.testing.assert_array_equal(np.diag(A), [comb(int(s), 2) for s in sizes])
    np.testing.assert_array_equal(system.d, np.diag(A))
    tol = RESIDUAL_TOL * max(1.0, np.abs(system.d).max())
    assert coeffs.residual() <= tol


def test_ten_people_coefficients(ten_people):
    coeffs = decompose(ten_people)
    got = mu_by_clique(ten_people, coeffs)
    assert set(got) == set(TEN_PEOPLE_CLIQUES)
    for clique, expect in zip(TEN_PEOPLE_CLIQUES, TEN_PEOPLE_MU):
        assert got[clique] == pytest.approx(expect, abs=1e-9)
    assert coeffs.ridge == 0.0
    check_structure(coeffs)


def test_ten_people_gram(ten_people):
    basis = build_basis(ten_people)
    order = [[tokens(ten_people, c) for c in basis.cliques].index(c) for c in TEN_PEOPLE_CLIQUES]
    system = assemble_system(basis)
    A = system.dense()[np.ix_(order, order)]
    expect = np.diag([3, 3, 3, 3, 1, 1, 1]).astype(float)
    expect[1, 2] = expect[2, 1] = 1
    np.testing.assert_array_equal(A, expect)
    np.testing.assert_array_equal(system.d[order], [3, 3, 3, 3, 1, 1, 1])


def test_ten_people_membership(ten_people):
    basis = build_basis(ten_people)
    idx = lambda c: [tokens(ten_people, x) for x in basis.cliques].index(c)
    u, v = ten_people.index_of(5), ten_people.index_of(7)
    assert basis.membership(u, v) == tuple(sorted([idx((5, 6, 7)), idx((4, 5, 7))]))
    lists = basis.edge_membership()
    assert sum(len(m) == 2 for m in lists) == 1
    assert all(len(m) >= 1 for m in lists)


def test_ten_people_reconstruction(ten_people):
    z = reconstruct_Z(decompose(ten_people))
    ix = ten_people.index_of
    assert z[ix(5), ix(7)] == pytest.approx(1.5)
    assert z[ix(7), ix(5)] == pytest.approx(1.5)
    assert z[ix(1), ix(2)] == pytest.approx(1.0)
    assert z[ix(1), ix(10)] == 0.0
    assert all(r > s for r, s in z.pairs.tolist())


def test_small_systems():
    basis = build_basis(complete(3))
    assert basis.K == 1 and basis.edge_membership() == [(0,), (0,), (0,)]
    single = assemble_system(build_basis(Graph(2, [(0, 1)])))
    np.testing.assert_array_equal(single.dense(), [[1]])
    np.testing.assert_array_equal(single.d, [1])
    shared = Graph(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
    system = assemble_system(build_basis(shared))
    np.testing.assert_array_equal(system.dense(), [[3, 1], [1, 3]])
    np.testing.assert_array_equal(system.d, [3, 3])
    np.testing.assert_allclose(solve_coefficients(system).mu, [0.75, 0.75], atol=1e-12)
    two = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    lists = build_basis(two).edge_membership()
    assert {m for m in lists} == {(0,), (1,)}


def test_isolated_clique_is_one():
    for n in (2, 3, 7):
        np.testing.assert_allclose(decompose(complete(n)).mu, [1.0], atol=1e-12)


def test_edgeless_graph_has_no_basis():
    with pytest.raises(DecompositionError):
        build_basis(Graph(5))


@pytest.mark.parametrize("g", oracle_graphs(), ids=lambda g: f"n{g.n}m{g.m}")
def test_matches_dense_least_squares(g):
    coeffs = decompose(g)
    np.testing.assert_allclose(coeffs.mu, dense_lstsq_mu(g, coeffs.cliques), atol=1e-6)
    check_structure(coeffs)


def test_singular_gram_uses_ridge():
    # octahedron: eight triangles whose edge indicators are linearly dependent
    octa = Graph(6, [(u, v) for u, v in itertools.combinations(range(6), 2) if v - u != 3])
    coeffs = decompose(octa)
    assert coeffs.basis.K == 8 and coeffs.ridge > 0
    np.testing.assert_allclose(coeffs.mu, dense_lstsq_mu(octa, coeffs.cliques), atol=1e-6)
    check_structure(coeffs)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=12, min_n=2))
def test_structural_identities(g):
    if g.m == 0:
        return
    coeffs = decompose(g)
    check_structure(coeffs)
    assert np.all(np.linalg.eigvalsh(coeffs.system.dense()) >= -1e-9)
    # objective at the solution never exceeds the all-ones objective
    assert coeffs.objective() <= coeffs.objective(np.ones(coeffs.basis.K)) + 1e-9


@st.composite
def edge_disjoint_cliques(draw):
    sizes = draw(st.lists(st.integers(2, 6), min_size=1, max_size=6))
    n = sum(sizes)
    perm = draw(st.permutations(range(n)))
    edges, start = [], 0
    for s in sizes:
        block = perm[start:start + s]
        edges += list(itertools.combinations(block, 2))
        start += s
    return Graph(n, edges)


@given(edge_disjoint_cliques())
def test_edge_disjoint_cliques_all_one(g):
    coeffs = decompose(g)
    A = coeffs.system.dense()
    assert np.count_nonzero(A - np.diag(np.diag(A))) == 0
    np.testing.assert_allclose(coeffs.mu, 1.0, rtol=0, atol=1e-12)


def test_vertex_sharing_cliques_still_decouple():
    # two triangles meeting at one vertex share no edge
    bowtie = Graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
    np.testing.assert_allclose(decompose(bowtie).mu, [1, 1], atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(graphs(max_n=10, min_n=2), st.randoms(use_true_random=False))
def test_relabel_invariance(g, rnd):
    if g.m == 0:
        return
    perm = list(range(g.n))
    rnd.shuffle(perm)
    first, second = decompose(g), decompose(g.relabel(perm))
    # a ridge solve on a rank-deficient A has condition number near 1e9
    tol = 1e-6 if first.ridge else 1e-9
    np.testing.assert_allclose(np.sort(first.mu), np.sort(second.mu), atol=tol)


def test_sample_network_extremes(ten_people):
    z = reconstruct_Z(decompose(complete(6)))
    assert sample_network(z, 0) == complete(6)
    zero = GeneratorMatrix(z.n, z.pairs, np.zeros(len(z)))
    assert sample_network(zero, 0).m == 0
    zr = reconstruct_Z(decompose(ten_people))
    assert sample_network(zr, 4) == sample_network(zr, 4)
    assert sample_network(zr, 4).labels == ten_people.labels


def test_sample_network_binomial():
    n = 200
    iu, iv = np.triu_indices(n, 1)
    pairs = np.column_stack([iv, iu])[:10_000]
    z = GeneratorMatrix(n, pairs, np.full(10_000, 0.5))
    count = sample_network(z, 12).m
    assert abs(count - 5000) <= 4 * np.sqrt(10_000 * 0.25)


def test_feature_vector_examples(ten_people):
    np.testing.assert_allclose(feature_vector(decompose(ten_people), 7), [1, 1, 1, 1, 1, 0.75, 0.75])
    np.testing.assert_allclose(feature_vector(decompose(complete(3)), 5), [1, 0, 0, 0, 0])
    shared = Graph(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
    np.testing.assert_allclose(feature_vector(decompose(shared), 2), [0.75, 0.75])
    with pytest.raises(ValueError):
        feature_vector(decompose(shared), 0)
