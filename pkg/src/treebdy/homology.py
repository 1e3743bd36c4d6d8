"""First homology of a graph: ``H_1(G, M) = ker(boundary: M E+ -> M V)``."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .coefficients import CoefficientGroup, GroupElement, GroupError, Z
from .graph import Graph, GraphError
from .linalg import (
    IntMatrix,
    hermite_rows,
    integer_kernel_basis,
    kernel_mod,
    kernel_mod_orders,
    mod_span,
    smith_normal_form,
)

POS = "E+"
ALL = "E"


@dataclass(frozen=True)
class Chain:
    """An M-linear combination of directed edges.

    ``support`` is ``"E+"`` (coefficients indexed by positive edges) or
    ``"E"`` (indexed by all directed edges, positive ones first).
    """

    group: CoefficientGroup
    support: str
    coeffs: tuple[GroupElement, ...]

    def __post_init__(self) -> None:
        if self.support not in (POS, ALL):
            raise ValueError(f"unknown support {self.support!r}")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        for c in self.coeffs:
            self.group.check(c)

    def is_zero(self) -> bool:
        zero = self.group.zero()
        return all(c == zero for c in self.coeffs)

    def __add__(self, other: "Chain") -> "Chain":
        self._compatible(other)
        return Chain(self.group, self.support, tuple(self.group.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Chain":
        return Chain(self.group, self.support, tuple(self.group.neg(a) for a in self.coeffs))

    def _compatible(self, other: "Chain") -> None:
        if self.group != other.group or self.support != other.support or len(self.coeffs) != len(other.coeffs):
            raise ValueError("chains live in different modules")

    def format(self, g: Graph) -> str:
        names = g.edge_names if self.support == POS else g.all_edge_names
        return format_combination(self.group, names, self.coeffs)

    def to_json(self, g: Graph) -> dict:
        names = g.edge_names if self.support == POS else g.all_edge_names
        zero = self.group.zero()
        return {n: self.group.to_json_element(c) for n, c in zip(names, self.coeffs) if c != zero}


def format_combination(group: CoefficientGroup, names, coeffs) -> str:
    zero = group.zero()
    terms = []
    for name, c in zip(names, coeffs):
        if c == zero:
            continue
        if len(c) == 1:
            k = c[0]
            sign = "-" if k < 0 else "+"
            mag = "" if abs(k) == 1 else str(abs(k))
            terms.append(f"{sign}{mag}{name}")
        else:
            terms.append(f"+{group.format(c)}{name}")
    if not terms:
        return "0"
    s = "".join(terms)
    return s[1:] if s[0] == "+" else s


_TERM = re.compile(r"([+-]?)\s*(\(\s*-?\d+(?:\s*,\s*-?\d+)*\s*\)|\d+)?\s*\*?\s*([^\s+*()\-]+)")


def parse_chain(g: Graph, group: CoefficientGroup, text: str) -> Chain:
    """Parse ``a+2b-3c`` or ``(1,3)a + (0,2)b`` into a chain on E+.

    Repeated edges accumulate.  Reversals ``a~`` count as ``-a``.
    """
    coeffs = [group.zero()] * g.n_pos
    pos = 0
    s = text.strip()
    if s == "0":
        return Chain(group, POS, tuple(coeffs))
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise GraphError(f"cannot parse chain {text!r} at position {pos + 1}")
        sign, mag, name = m.groups()
        if pos > 0 and not sign:
            raise GraphError(f"missing '+' or '-' before {name!r} in {text!r}")
        if mag is None:
            if group.ncoords != 1:
                raise GroupError(f"edge {name!r} needs an explicit coefficient in {group}")
            coord: tuple[int, ...] = (1,)
        elif mag.startswith("("):
            coord = tuple(int(x) for x in mag.strip("() ").split(","))
        else:
            coord = (int(mag),)
        c = group.element(coord)
        if sign == "-":
            c = group.neg(c)
        x = g.edge_index(name)
        if not g.is_positive(x):
            c = group.neg(c)
            x = g.bar(x)
        coeffs[x] = group.add(coeffs[x], c)
        pos = m.end()
    return Chain(group, POS, tuple(coeffs))


def boundary_matrix(g: Graph) -> IntMatrix:
    """``|V| x |E+|`` matrix of ``x -> t(x) - o(x)``; loop columns vanish."""
    d = [[0] * g.n_pos for _ in range(g.n_vertices)]
    for x in range(g.n_pos):
        d[g.t(x)][x] += 1
        d[g.o(x)][x] -= 1
    return d


def boundary(g: Graph, alpha: Chain) -> list[GroupElement]:
    """``sum n_x (t(x) - o(x))`` computed in ``M V``."""
    if alpha.support != POS or len(alpha.coeffs) != g.n_pos:
        raise ValueError("boundary needs a chain on E+")
    M = alpha.group
    k = M.ncoords
    acc = [[0] * k for _ in range(g.n_vertices)]
    for x, c in enumerate(alpha.coeffs):
        head, tail = acc[g.heads[x]], acc[g.tails[x]]
        for i in range(k):
            head[i] += c[i]
            tail[i] -= c[i]
    return [M.element(v) for v in acc]


def is_cycle(g: Graph, M: CoefficientGroup, alpha: Chain) -> bool:
    if alpha.group != M:
        raise GroupError("chain has a different coefficient group")
    if alpha.support != POS or len(alpha.coeffs) != g.n_pos:
        raise ValueError("support mismatch: cycles are chains on E+")
    zero = M.zero()
    return all(c == zero for c in boundary(g, alpha))


def h1_rank(g: Graph) -> int:
    return g.n_pos - g.n_vertices + 1


def h1_basis_vectors(g: Graph) -> list[list[int]]:
    """Canonical integer basis of ker(boundary): Hermite form of the kernel."""
    kernel = integer_kernel_basis(boundary_matrix(g), g.n_pos)
    return hermite_rows(kernel, g.n_pos)


def h1_basis_Z(g: Graph) -> list[Chain]:
    return [Chain(Z, POS, tuple((c,) for c in v)) for v in h1_basis_vectors(g)]


@dataclass(frozen=True)
class HomologyGroup:
    """Structure of ``H_1(G, M)`` as ``Z^rank + Z/t_1 + ...``."""

    rank: int
    torsion: tuple[int, ...]

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        return str(CoefficientGroup(self.rank, self.torsion))


def h1_structure(g: Graph, M: CoefficientGroup) -> HomologyGroup:
    """Structure of ``ker boundary`` over M, solved summand by summand.

    The free part comes from the integer kernel, each ``Z/d`` summand from the
    kernel mod ``d``; the pieces are then put into invariant-factor form.
    """
    d = boundary_matrix(g)
    free_rank = M.free_rank * len(integer_kernel_basis(d, g.n_pos))
    orders: list[int] = []
    for n in M.torsion:
        orders.extend(kernel_mod_orders(d, n, g.n_pos))
    if orders:
        diag = [[orders[i] if i == j else 0 for j in range(len(orders))] for i in range(len(orders))]
        torsion = tuple(smith_normal_form(diag).invariant_factors)
    else:
        torsion = ()
    return HomologyGroup(free_rank, torsion)


def _component_solutions(g: Graph, M: CoefficientGroup) -> list[list[tuple[int, ...]]]:
    d = boundary_matrix(g)
    return [mod_span(kernel_mod(d, n, g.n_pos), n, g.n_pos) for n in M.torsion]


def h1_generators(g: Graph, M: CoefficientGroup) -> list[Chain]:
    """Generating cycles of ``H_1(G, M)``, one family per summand of M."""
    out = []
    k = M.ncoords
    basis = h1_basis_vectors(g)
    d = boundary_matrix(g)
    for slot in range(k):
        if slot < M.free_rank:
            vectors = basis
        else:
            n = M.torsion[slot - M.free_rank]
            # lift to Z, add n Z^E+, take the Hermite form, reduce back mod n
            lifted = kernel_mod(d, n, g.n_pos) + [[n * (i == j) for i in range(g.n_pos)] for j in range(g.n_pos)]
            vectors = hermite_rows(lifted, g.n_pos)
            vectors = [[x % n for x in v] for v in vectors if any(x % n for x in v)]
        for v in vectors:
            coeffs = []
            for x in v:
                c = [0] * k
                c[slot] = x
                coeffs.append(M.element(c))
            out.append(Chain(M, POS, tuple(coeffs)))
    return out


def h1_elements(g: Graph, M: CoefficientGroup) -> list[Chain]:
    """Every cycle over a finite M, in lexicographic order of coefficients."""
    if not M.is_finite:
        raise GroupError(f"cannot enumerate cycles over infinite group {M}")
    per_component = _component_solutions(g, M)
    chains = []
    for combo in itertools.product(*per_component):
        coeffs = tuple(tuple(vec[x] for vec in combo) for x in range(g.n_pos))
        chains.append(Chain(M, POS, coeffs))
    chains.sort(key=lambda c: c.coeffs)
    return chains
