"""End-to-end checks: cycles versus distributions, the commuting square,
total mass, and additivity upstairs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .coefficients import CoefficientGroup
from .cover import DEFAULT_NODE_CAP, AdditivityReport, check_additivity, expand
from .distributions import (
    Distribution,
    L3Report,
    check_prop_L3,
    diagram,
    enumerate_invariant,
    from_cycle,
    relations_matrix,
    to_cycle,
    validate,
    well_defined,
)
from .graph import Graph
from .homology import h1_basis_Z, h1_elements, h1_generators, h1_rank
from .linalg import integer_kernel_basis, kernel_mod, mod_span_size

# largest |H_1| for which cycles and distributions are listed element by element
ENUMERATION_LIMIT = 20_000


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail, **self.data}


@dataclass
class BijectionReport:
    cycles: int
    distributions: int
    expected: int | None
    injective: bool
    into: bool
    onto: bool
    round_trip: bool
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        counts = self.expected is None or self.cycles == self.distributions == self.expected
        return counts and self.injective and self.into and self.onto and self.round_trip


def check_bijection(g: Graph, M: CoefficientGroup) -> BijectionReport:
    """Cycles versus mass-zero distributions over a finite M.

    The distributions come from an exhaustive search over labellings that
    knows nothing about homology; the map is checked to be injective, to land
    in that set, to cover it, and to invert through ``to_cycle``.
    """
    cycles = h1_elements(g, M)
    targets = enumerate_invariant(g, M, mass_zero_only=True)
    target_set = set(targets)
    images = []
    bad = None
    for alpha in cycles:
        mu = from_cycle(g, M, alpha)
        images.append(mu)
        if mu not in target_set and bad is None:
            bad = f"image of {alpha.format(g)} is not a valid mass-zero distribution"
    image_set = set(images)
    injective = len(image_set) == len(images)
    into = image_set <= target_set
    onto = True
    round_trip = True
    for mu in targets:
        alpha = to_cycle(g, mu)
        if from_cycle(g, M, alpha) != mu:
            round_trip = False
            bad = bad or f"round trip fails at {mu.format(g)}"
        if mu not in image_set:
            onto = False
            bad = bad or f"{mu.format(g)} is not hit"
    for alpha, mu in zip(cycles, images):
        if mu in target_set and to_cycle(g, mu) != alpha:
            round_trip = False
            bad = bad or f"round trip fails at {alpha.format(g)}"
    expected = M.order ** h1_rank(g)
    return BijectionReport(len(cycles), len(targets), expected, injective, into, onto, round_trip, bad)


def check_bijection_generators(g: Graph, M: CoefficientGroup) -> BijectionReport:
    """Compare generating sets instead of element lists (infinite or large M).

    Generators of H_1 must map to valid mass-zero distributions and round-trip.
    Onto-ness is a size comparison, summand by summand: the rank of the integer
    solutions of the flow relations for each Z, and the order of the solution
    group mod d for each Z/d, against the corresponding piece of H_1.
    """
    gens = h1_generators(g, M)
    images = [from_cycle(g, M, a) for a in gens]
    into = all(validate(g, mu).ok and mu.mass_zero for mu in images)
    round_trip = all(to_cycle(g, mu) == a for a, mu in zip(gens, images))
    # mass-zero solutions: drop the sigma column from the relations
    rel = [row[:-1] for row in relations_matrix(g)]
    k = g.n_edges
    r = h1_rank(g)
    onto = True
    if M.free_rank:
        onto = len(integer_kernel_basis(rel, k)) == r
    size = 1
    for d in M.torsion:
        piece = mod_span_size(kernel_mod(rel, d, k), d, k)
        onto = onto and piece == d**r
        size *= piece
    expected = M.order**r if M.is_finite else None
    count = size if M.is_finite else len(gens)
    return BijectionReport(count if M.is_finite else len(gens), count, expected, True, into, onto, round_trip)


def verify_graph(
    g: Graph,
    M: CoefficientGroup,
    depth: int = 4,
    base: int = 0,
    cap: int = DEFAULT_NODE_CAP,
    enumerate_limit: int = ENUMERATION_LIMIT,
) -> list[Check]:
    checks: list[Check] = []

    if M.is_finite and M.order ** h1_rank(g) <= enumerate_limit:
        b = check_bijection(g, M)
        method = "enumeration"
        detail = f"{b.cycles} cycles, {b.distributions} mass-zero distributions, expected {b.expected}"
    else:
        b = check_bijection_generators(g, M)
        method = "generators"
        if M.is_finite:
            detail = f"|H_1| = {b.expected}, mass-zero solution group of order {b.distributions}"
        else:
            detail = f"{b.cycles} generating cycles, H_1 rank {h1_rank(g)} per free summand"
    if b.counterexample:
        detail += f"; {b.counterexample}"
    checks.append(Check("bijection", b.ok, detail, {
        "method": method, "cycles": b.cycles, "distributions": b.distributions, "expected": b.expected,
        "injective": b.injective, "into": b.into, "onto": b.onto, "round_trip": b.round_trip,
    }))

    sq = diagram(g)
    mism = sq.mismatches(g)
    checks.append(Check("diagram", sq.commutes, mism[0] if mism else "(I - T*) phi1 = phi0 boundary", {
        "outgoing_star_commutes": sq.commutes_outgoing,
        "outgoing_star_commutes_after_bar": sq.outgoing_up_to_bar,
    }))

    basis = h1_basis_Z(g)
    wd = [a for a in basis if not well_defined(g, a)]
    checks.append(Check("well_defined", not wd,
                        f"first failure {wd[0].format(g)}" if wd else f"{len(basis)} basis cycles"))

    l3: L3Report = check_prop_L3(g, M)
    if l3.witness is not None:
        detail = f"witness with total mass {M.format(l3.witness.sigma)}"
    else:
        detail = "every invariant distribution has total mass 0" if l3.all_mass_zero else "nonzero masses exist"
    checks.append(Check("total_mass", l3.consistent, detail, l3.to_json(g)))

    if depth >= 2:
        sl = expand(g, base, depth, cap)
        dists: list[tuple[str, Distribution]] = [
            (a.format(g), from_cycle(g, M, a)) for a in h1_generators(g, M)
        ]
        if l3.witness is not None:
            dists.append(("witness", l3.witness))
        failures = []
        for label, mu in dists:
            rep: AdditivityReport = check_additivity(sl, mu)
            if not rep.ok:
                failures.append(label)
        checks.append(Check(
            "additivity", not failures,
            f"first failure {failures[0]}" if failures else f"{len(dists)} distributions, {len(sl)} nodes",
            {"depth": depth, "nodes": len(sl), "distributions": len(dists)},
        ))
    return checks
