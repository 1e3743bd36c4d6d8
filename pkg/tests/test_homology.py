import itertools

import pytest

from treebdy import corpus
from treebdy.coefficients import CoefficientGroup, Z, Zmod
from treebdy.graph import euler_characteristic
from treebdy.homology import (
    Chain,
    POS,
    boundary,
    boundary_matrix,
    h1_basis_Z,
    h1_basis_vectors,
    h1_elements,
    h1_generators,
    h1_rank,
    h1_structure,
    is_cycle,
    parse_chain,
)
from treebdy.linalg import kernel_mod, mod_span, same_lattice

GROUPS = ["Z/2", "Z/3", "Z/4", "Z/2+Z/2"]


def test_boundary_of_theta_cycle(theta):
    alpha = parse_chain(theta, Z, "a+2b-3c")
    assert is_cycle(theta, Z, alpha)
    assert boundary(theta, alpha) == [(0,), (0,)]


def test_boundary_of_single_edge(theta):
    alpha = parse_chain(theta, Z, "a")
    assert not is_cycle(theta, Z, alpha)
    assert boundary(theta, alpha) == [(-1,), (1,)]


def test_reversal_negates(theta):
    assert parse_chain(theta, Z, "a~") == -parse_chain(theta, Z, "a")


def test_parse_chain_tuple_coefficients(theta):
    M = CoefficientGroup.parse("Z+Z/4")
    alpha = parse_chain(theta, M, "(1,3)a")
    assert alpha.coeffs[0] == (1, 3)


def test_theta_basis(theta):
    basis = h1_basis_Z(theta)
    assert len(basis) == 2
    for b in basis:
        assert is_cycle(theta, Z, b)


def test_loop_and_point():
    assert h1_rank(corpus.single_loop()) == 1
    assert h1_rank(corpus.single_vertex()) == 0
    assert h1_basis_vectors(corpus.path(3)) == []


def test_rank_formula_on_corpus(small_corpus):
    for g in small_corpus + corpus.random_graphs(40, seed=1):
        vecs = h1_basis_vectors(g)
        assert len(vecs) == h1_rank(g) == 1 - euler_characteristic(g)
        d = boundary_matrix(g)
        for v in vecs:
            assert all(sum(r * x for r, x in zip(row, v)) == 0 for row in d)


def brute_cycles(g, M):
    elems = list(M.enumerate_elements())
    out = []
    for coeffs in itertools.product(elems, repeat=g.n_pos):
        alpha = Chain(M, POS, coeffs)
        if is_cycle(g, M, alpha):
            out.append(alpha)
    return sorted(out, key=lambda c: c.coeffs)


@pytest.mark.parametrize("spec", GROUPS)
def test_elements_match_brute_force(small_corpus, spec):
    M = CoefficientGroup.parse(spec)
    for g in small_corpus:
        if M.order ** g.n_pos > 5000:
            continue
        got = h1_elements(g, M)
        assert got == brute_cycles(g, M)
        assert len(got) == M.order ** h1_rank(g)


def test_elements_closed_under_group_ops(theta):
    M = Zmod(4)
    cycles = h1_elements(theta, M)
    pool = set(cycles)
    for a in cycles[:8]:
        assert -a in pool
        for b in cycles[:8]:
            assert a + b in pool


def test_basis_mod_n_lies_in_kernel_mod(small_corpus):
    for g in small_corpus:
        for n in (2, 3):
            span = set(mod_span(kernel_mod(boundary_matrix(g), n, g.n_pos), n, g.n_pos))
            for v in h1_basis_vectors(g):
                assert tuple(x % n for x in v) in span


@pytest.mark.parametrize("spec", ["Z", "Z/3", "Z^2+Z/4", "Z/2+Z/6"])
def test_generators_are_cycles(spec):
    M = CoefficientGroup.parse(spec)
    for g in [corpus.theta(), corpus.complete(4), corpus.bouquet(2), corpus.path(3)]:
        gens = h1_generators(g, M)
        assert all(is_cycle(g, M, a) for a in gens)


def test_structure():
    g = corpus.theta()
    assert h1_structure(g, Z).rank == 2
    assert h1_structure(g, Zmod(4)).torsion == (4, 4)
    assert str(h1_structure(g, CoefficientGroup.parse("Z+Z/2"))) == str(CoefficientGroup(2, (2, 2)))


def test_free_generators_span_integer_kernel():
    g = corpus.complete(4)
    gens = h1_generators(g, Z)
    assert same_lattice([[c[0] for c in a.coeffs] for a in gens], h1_basis_vectors(g), g.n_pos)


def test_finite_enumeration_requires_finite_group(theta):
    with pytest.raises(ValueError):
        h1_elements(theta, Z)
