import itertools
import logging

import pytest

from treebdy import corpus
from treebdy.coefficients import CoefficientGroup, Z, Zmod
from treebdy.distributions import (
    Distribution,
    HypothesisError,
    NotACycleError,
    check_diagram,
    check_prop_L3,
    check_prop_k,
    constant_distribution,
    diagram,
    enumerate_invariant,
    from_cycle,
    invariant_generators,
    iter_labelings,
    ker_T_minus_I,
    labels_from_mapping,
    mass_zero_count,
    to_cycle,
    transfer_matrix,
    validate,
    well_defined,
)
from treebdy.graph import euler_characteristic, min_degree
from treebdy.homology import h1_basis_Z, h1_elements, h1_rank, parse_chain


def test_from_cycle_theta(theta):
    mu = from_cycle(theta, Z, parse_chain(theta, Z, "a+2b-3c"))
    assert [x[0] for x in mu.labels] == [1, 2, -3, -1, -2, 3]
    assert mu.mass_zero
    assert validate(theta, mu).ok


def test_from_cycle_rejects_non_cycle(theta):
    with pytest.raises(NotACycleError):
        from_cycle(theta, Z, parse_chain(theta, Z, "a"))


def test_to_cycle_inverts(theta):
    alpha = parse_chain(theta, Z, "a-b")
    assert to_cycle(theta, from_cycle(theta, Z, alpha)) == alpha


def test_to_cycle_needs_mass_zero():
    g = corpus.complete(6)
    M = Zmod(3)
    with pytest.raises(ValueError):
        to_cycle(g, constant_distribution(g, M, (1,)))


def test_validate_k6_constant_labelling():
    g = corpus.complete(6)
    mu = constant_distribution(g, Zmod(3), (1,))
    assert mu.sigma == (2,)
    assert validate(g, mu).ok


def test_validate_reports_failures(theta):
    mu = Distribution(Z, labels_from_mapping(theta, Z, {"a": 1}), (0,))
    rep = validate(theta, mu)
    assert not rep.ok
    fails = rep.failures(theta)
    assert "vertex sum at v1" in fails and "edge pair at a" in fails


def brute_invariant(g, M, mass_zero_only):
    elems = [tuple(e) for e in M.enumerate_elements()]
    sigmas = [M.zero()] if mass_zero_only else elems
    out = []
    for labels in iter_labelings(g, M):
        for s in sigmas:
            d = Distribution(M, labels, s)
            if validate(g, d).ok:
                out.append(d)
    return sorted(out, key=lambda d: d.labels)


@pytest.mark.parametrize("spec", ["Z/2", "Z/3", "Z/2+Z/2"])
def test_enumeration_matches_unpruned_search(spec):
    M = CoefficientGroup.parse(spec)
    graphs = [g for g in corpus.exhaustive_corpus(3, 3) if M.order ** g.n_edges <= 1500]
    assert len(graphs) > 5
    for g in graphs:
        for mz in (True, False):
            got = enumerate_invariant(g, M, mass_zero_only=mz)
            want = brute_invariant(g, M, mz)
            assert sorted(got, key=lambda d: (d.labels, d.sigma)) == sorted(want, key=lambda d: (d.labels, d.sigma))


def test_mass_zero_count(theta):
    assert mass_zero_count(theta, Zmod(3)) == 9
    assert len(enumerate_invariant(theta, Zmod(3))) == 9


def test_generators_valid():
    for g in [corpus.theta(), corpus.complete(4), corpus.single_loop()]:
        for spec in ["Z", "Z/3", "Z+Z/2"]:
            for d in invariant_generators(g, CoefficientGroup.parse(spec)):
                assert validate(g, d).ok


def test_transfer_loop_is_identity(loop):
    assert transfer_matrix(loop).matrix == [[1, 0], [0, 1]]


def test_transfer_theta_columns(theta):
    t = transfer_matrix(theta).matrix
    for x in range(6):
        col = [t[y][x] for y in range(6)]
        assert sum(col) == 2


def test_transfer_column_sum_is_outdegree_minus_one(small_corpus):
    for g in small_corpus:
        t = transfer_matrix(g).matrix
        for x in range(g.n_edges):
            assert sum(t[y][x] for y in range(g.n_edges)) == len(g.out_edges[g.t(x)]) - 1


def square_oracle(g):
    """Both sides of the square, entry by entry from the definitions."""
    k, m = g.n_edges, g.n_pos
    lhs = [[0] * m for _ in range(k)]
    rhs = [[0] * m for _ in range(k)]
    for x in range(m):
        img = [0] * k
        img[x] += 1
        img[g.bar(x)] -= 1
        # (I - T*) applied to img; T* y = sum of x' with y in T x'
        out = list(img)
        for y in range(k):
            for xp in range(k):
                if g.o(y) == g.t(xp) and y != g.bar(xp):
                    out[xp] -= img[y]
        for r in range(k):
            lhs[r][x] = out[r]
        for y in range(k):
            rhs[y][x] = (g.t(y) == g.t(x)) - (g.t(y) == g.o(x))
    return lhs, rhs


def test_diagram_against_oracle(small_corpus):
    for g in small_corpus + corpus.random_graphs(20, seed=5):
        lhs, rhs = square_oracle(g)
        rep = diagram(g)
        assert rep.lhs == lhs and rep.rhs == rhs
        assert check_diagram(g)


def test_diagram_with_outgoing_star_fails_literally():
    # the outgoing-star version of phi0 only matches after applying bar
    for g in [corpus.theta(), corpus.path(2)]:
        rep = diagram(g)
        assert rep.commutes
        assert not rep.commutes_outgoing
        assert rep.outgoing_up_to_bar


def test_well_defined(small_corpus):
    for g in small_corpus:
        assert all(well_defined(g, a) for a in h1_basis_Z(g))


@pytest.mark.parametrize("g, rank", [(corpus.theta(), 2), (corpus.path(2), 0), (corpus.single_loop(), 2)])
def test_ker_rank(g, rank):
    assert len(ker_T_minus_I(g)) == rank


@pytest.mark.parametrize(
    "g, rank",
    [(corpus.theta(), 2), (corpus.complete(6), 10), (corpus.complete_bipartite(3, 3), 4), (corpus.complete(4), 3)],
)
def test_prop_k(g, rank):
    rep = check_prop_k(g)
    assert rep.hypothesis_holds and rep.isomorphism
    assert rep.kernel_rank == rep.h1_rank == rank == 1 - euler_characteristic(g)


def test_prop_k_hypothesis(caplog):
    g = corpus.single_loop()
    with pytest.raises(HypothesisError):
        check_prop_k(g)
    with caplog.at_level(logging.WARNING):
        rep = check_prop_k(g, force=True)
    assert not rep.hypothesis_holds
    assert "minimum degree" in caplog.text
    # the loop has kernel rank 2 but H_1 rank 1
    assert rep.kernel_rank == 2 and not rep.same_subgroup


def test_l3_torsion_free_cases(theta):
    for spec in ["Z", "Z/2", "Z/4", "Z/5"]:
        M = CoefficientGroup.parse(spec)
        rep = check_prop_L3(theta, M)
        assert not rep.has_torsion and rep.all_mass_zero and rep.consistent


def test_l3_k6_witness():
    g = corpus.complete(6)
    rep = check_prop_L3(g, Zmod(3))
    assert rep.has_torsion and rep.consistent
    assert rep.witness.labels == ((1,),) * 30 and rep.witness.sigma == (2,)


def test_l3_cycle_graph_chi_zero():
    g = corpus.cycle(3)
    rep = check_prop_L3(g, Zmod(2))
    assert euler_characteristic(g) == 0 and rep.has_torsion
    assert rep.witness is not None and not rep.witness.mass_zero


def test_bijection_small(theta):
    M = Zmod(2)
    cycles = h1_elements(theta, M)
    images = {from_cycle(theta, M, a) for a in cycles}
    assert images == set(enumerate_invariant(theta, M))
    assert len(images) == 2 ** h1_rank(theta)
