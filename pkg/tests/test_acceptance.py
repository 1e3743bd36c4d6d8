"""Acceptance criteria, one test each.  Every test prints a single PASS/FAIL line."""

import itertools
import random
import time

import numpy as np
import pytest
from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors

from treebdy import corpus
from treebdy.coefficients import CoefficientGroup, Z, Zmod
from treebdy.cover import check_additivity, expand
from treebdy.distributions import (
    Distribution,
    check_prop_k,
    constant_distribution,
    diagram,
    enumerate_invariant,
    from_cycle,
    validate,
)
from treebdy.graph import euler_characteristic, min_degree
from treebdy.homology import Chain, POS, h1_basis_vectors, h1_rank, parse_chain
from treebdy.linalg import determinant, integer_kernel_basis, kernel_mod, matmul, matvec, mod_span, smith_normal_form
from treebdy.verify import check_bijection

BIJECTION_GROUPS = ["Z/2", "Z/3", "Z/4", "Z/2+Z/2"]


@pytest.fixture(scope="module")
def full_corpus():
    return corpus.exhaustive_corpus(4, 6)


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail, elapsed=None):
        timing = f" [{elapsed:.2f}s]" if elapsed is not None else ""
        with capsys.disabled():
            print(f"\nacceptance {number}: {'PASS' if ok else 'FAIL'}  {detail}{timing}")
        assert ok, detail
    return emit


def test_1_theta_worked_example(verdict):
    start = time.perf_counter()
    g = corpus.theta()
    mu = from_cycle(g, Z, parse_chain(g, Z, "a+2b-3c"))
    labels = [x[0] for x in mu.labels]
    elapsed = time.perf_counter() - start
    ok = labels == [1, 2, -3, -1, -2, 3] and mu.sigma == (0,) and validate(g, mu).ok and elapsed < 1
    verdict(1, ok, f"labels on a,b,c,a~,b~,c~ = {labels}, total mass {mu.sigma[0]}", elapsed)


def test_2_bijection_sweep(full_corpus, verdict):
    start = time.perf_counter()
    failures = []
    pairs = 0
    for g in full_corpus:
        expected_exp = 1 - euler_characteristic(g)
        for spec in BIJECTION_GROUPS:
            M = CoefficientGroup.parse(spec)
            rep = check_bijection(g, M)
            pairs += 1
            if not (rep.ok and rep.cycles == rep.distributions == M.order ** expected_exp):
                failures.append((g.to_text(), spec))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60 and len(full_corpus) > 200
    verdict(2, ok, f"{len(full_corpus)} graphs x {len(BIJECTION_GROUPS)} groups = {pairs} cases, "
                   f"{len(failures)} failures", elapsed)


def test_3_diagram(full_corpus, verdict):
    graphs = full_corpus + corpus.random_graphs(100, seed=2024, max_vertices=6)
    bad = [g for g in graphs if not diagram(g).commutes]
    verdict(3, not bad, f"(I - T*) phi1 = phi0 boundary on {len(graphs)} graphs, {len(bad)} mismatches")


def test_4_total_mass(full_corpus, verdict):
    groups = [CoefficientGroup.parse(s) for s in BIJECTION_GROUPS + ["Z/5"]]
    checked = cases = 0
    bad = []
    for g in full_corpus:
        chi = euler_characteristic(g)
        for M in groups:
            if M.has_k_torsion(chi):
                continue
            cases += 1
            dists = enumerate_invariant(g, M, mass_zero_only=False)
            checked += len(dists)
            if not all(d.mass_zero for d in dists):
                bad.append((g.to_text(), str(M)))
    k6 = corpus.complete(6)
    lam = constant_distribution(k6, Zmod(3), (1,))
    witness = validate(k6, lam).ok and lam.sigma == (2,) and Zmod(3).has_k_torsion(euler_characteristic(k6))
    ok = not bad and witness and cases > 0
    verdict(4, ok, f"(a) {cases} torsion-free cases, {checked} distributions, {len(bad)} with nonzero mass; "
                   f"(b) K6 over Z/3 with lambda = 1 valid, total mass {lam.sigma[0]}")


def test_5_prop_k(full_corpus, verdict):
    start = time.perf_counter()
    graphs = [g for g in full_corpus if min_degree(g) >= 3]
    names = {"K6": corpus.complete(6), "K33": corpus.complete_bipartite(3, 3)}
    graphs += list(names.values())
    shapes = {(g.n_vertices, g.n_pos) for g in graphs}
    assert (2, 3) in shapes and (4, 6) in shapes  # theta and K4 come from the corpus
    bad = []
    for g in graphs:
        rep = check_prop_k(g)
        if not (rep.isomorphism and rep.kernel_rank == 1 - euler_characteristic(g)):
            bad.append(g.to_text())
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    verdict(5, ok, f"{len(graphs)} graphs with min degree >= 3, {len(bad)} failures", elapsed)


def _random_pair(rng):
    while True:
        g = corpus.random_connected_graph(rng, max_vertices=6, max_extra=4)
        basis = h1_basis_vectors(g)
        if not basis or max(len(g.out_edges[v]) for v in range(g.n_vertices)) > 5:
            continue
        vec = [0] * g.n_pos
        for b in basis:
            k = rng.randint(-3, 3)
            vec = [x + k * y for x, y in zip(vec, b)]
        if any(vec):
            return g, Chain(Z, POS, tuple((x,) for x in vec))


def test_6_cover_additivity(verdict):
    start = time.perf_counter()
    rng = random.Random(6)
    passed = detected = nodes = 0
    for _ in range(20):
        g, alpha = _random_pair(rng)
        mu = from_cycle(g, Z, alpha)
        slices = [expand(g, b, 6) for b in range(g.n_vertices)]
        nodes += sum(len(s) for s in slices)
        if all(check_additivity(s, mu).ok for s in slices):
            passed += 1
        x = rng.randrange(g.n_edges)
        labels = list(mu.labels)
        labels[x] = (labels[x][0] + rng.choice([-2, -1, 1, 2]),)
        bad = Distribution(Z, labels, mu.sigma)
        if any(not check_additivity(s, bad).ok for s in slices):
            detected += 1
    elapsed = time.perf_counter() - start
    ok = passed == 20 and detected == 20 and elapsed < 30
    verdict(6, ok, f"depth 6: {passed}/20 valid pairs pass, {detected}/20 mutations detected, {nodes} nodes", elapsed)


def _brute_counts(n, r, c):
    xs = np.array(list(itertools.product(range(n), repeat=c))).T
    mats = np.array(list(itertools.product(range(n), repeat=r * c)), dtype=np.int64).reshape(-1, r, c)
    return mats, ((mats @ xs) % n == 0).all(axis=1).sum(axis=1)


def test_7_linalg_suite(verdict):
    rng = random.Random(7)
    snf_bad = 0
    for _ in range(200):
        n, m = rng.randint(1, 8), rng.randint(1, 8)
        a = [[rng.randint(-20, 20) for _ in range(m)] for _ in range(n)]
        r = smith_normal_form(a)
        diag = r.diagonal
        good = (
            matmul(matmul(r.U, a, m), r.V, m) == r.D
            and abs(determinant(r.U)) == 1
            and abs(determinant(r.V)) == 1
            and all((y % x == 0) if x else y == 0 for x, y in zip(diag, diag[1:]))
            and all(matvec(a, v) == [0] * n for v in integer_kernel_basis(a))
            and [d for d in diag if d] == [abs(int(x)) for x in invariant_factors(Matrix(a)) if x]
        )
        snf_bad += not good

    # kernel mod n depends only on A mod n, so sweeping every residue matrix
    # covers every integer matrix with entries in [-2, 2]
    for _ in range(2000):
        n = rng.choice([2, 3])
        r, c = rng.randint(1, 3), rng.randint(1, 4)
        a = [[rng.randint(-2, 2) for _ in range(c)] for _ in range(r)]
        assert kernel_mod(a, n, c) == kernel_mod([[x % n for x in row] for row in a], n, c)
    mod_bad = swept = 0
    for n in (2, 3):
        for r in range(1, 4):
            for c in range(1, 5):
                mats, counts = _brute_counts(n, r, c)
                for a, count in zip(mats.tolist(), counts.tolist()):
                    gens = kernel_mod(a, n, c)
                    swept += 1
                    annihilated = all(all(sum(x * y for x, y in zip(row, v)) % n == 0 for row in a) for v in gens)
                    if not annihilated or len(mod_span(gens, n, c)) != count:
                        mod_bad += 1
    ok = snf_bad == 0 and mod_bad == 0
    verdict(7, ok, f"200 random SNFs, {snf_bad} failures; kernel_mod on {swept} residue matrices "
                   f"(all shapes <= 3x4, n in 2,3), {mod_bad} disagreements")
