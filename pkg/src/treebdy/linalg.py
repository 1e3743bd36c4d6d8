"""Exact integer linear algebra: Smith normal form, kernels, lattice comparison.

Matrices are plain lists of lists of Python ints, so entries never overflow.
Every routine here is deterministic: the same input produces the same output.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

IntMatrix = list[list[int]]
IntVector = list[int]


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> IntMatrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def shape(a: Sequence[Sequence[int]], cols: int | None = None) -> tuple[int, int]:
    """Return (rows, cols).  ``cols`` must be given for matrices with no rows."""
    rows = len(a)
    if rows == 0:
        return 0, cols or 0
    return rows, len(a[0])


def as_matrix(a: Sequence[Sequence[int]]) -> IntMatrix:
    rows = [list(r) for r in a]
    if rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
        for r in rows:
            for v in r:
                if not isinstance(v, int):
                    raise TypeError(f"non-integer entry {v!r}")
    return rows


def matmul(a: IntMatrix, b: IntMatrix, cols: int | None = None) -> IntMatrix:
    """Product ``a @ b``; ``cols`` gives the width of ``b`` when it has no rows."""
    k = len(b)
    p = len(b[0]) if b else (cols or 0)
    if any(len(row) != k for row in a):
        raise ValueError(f"shape mismatch: inner dimension {k}")
    return [[sum(row[i] * b[i][j] for i in range(k)) for j in range(p)] for row in a]


def matvec(a: IntMatrix, x: Sequence[int]) -> IntVector:
    return [sum(v * w for v, w in zip(row, x)) for row in a]


def transpose(a: IntMatrix, cols: int | None = None) -> IntMatrix:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(c) for c in zip(*a)]


def determinant(a: IntMatrix) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SnfResult:
    """``U @ A @ V == D`` with ``U`` and ``V`` unimodular."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    rows: int
    cols: int

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(self.rows, self.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> list[int]:
        """Nonzero diagonal entries other than 1."""
        return [d for d in self.diagonal if d > 1]


def smith_normal_form(a: Sequence[Sequence[int]], cols: int | None = None) -> SnfResult:
    """Smith normal form with unimodular transforms.

    Pivot choice: the nonzero entry of smallest absolute value in the active
    submatrix, ties broken by lowest (row, col).  ``cols`` is needed only
    when ``a`` has zero rows.
    """
    d = as_matrix(a)
    n, m = shape(d, cols)
    u = identity(n)
    v = identity(m)

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in d:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(src: int, dst: int, k: int) -> None:
        # row[dst] += k * row[src]
        if k:
            d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
            u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src: int, dst: int, k: int) -> None:
        if k:
            for row in d:
                row[dst] += k * row[src]
            for row in v:
                row[dst] += k * row[src]

    for t in range(min(n, m)):
        while True:
            pivot = None
            for i in range(t, n):
                for j in range(t, m):
                    x = d[i][j]
                    if x and (pivot is None or abs(x) < pivot[0]):
                        pivot = (abs(x), i, j)
            if pivot is None:
                break
            _, pi, pj = pivot
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, n):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, m):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, m) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if pivot is None:
            break
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    return SnfResult(U=u, D=d, V=v, rows=n, cols=m)


def integer_kernel_basis(a: Sequence[Sequence[int]], cols: int | None = None) -> list[IntVector]:
    """Basis of the free abelian group ``{x : A x = 0}``.

    The vectors are the columns of ``V`` that sit opposite zero diagonal
    entries of the Smith form.
    """
    snf = smith_normal_form(a, cols)
    r = snf.rank
    return [[snf.V[i][j] for i in range(snf.cols)] for j in range(r, snf.cols)]


def kernel_mod(a: Sequence[Sequence[int]], n: int, cols: int | None = None) -> list[IntVector]:
    """Generators of ``{x in (Z/n)^cols : A x = 0 mod n}``.

    With ``U A V = D`` and ``x = V y`` the condition becomes ``d_i y_i = 0
    mod n`` independently per coordinate, so ``y_i`` runs over multiples of
    ``n / gcd(d_i, n)``.  Zero-order generators are dropped.
    """
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    # the solution set depends only on A mod n; reducing first keeps the
    # answer a function of the residues and the Smith entries small
    snf = smith_normal_form([[x % n for x in row] for row in a], cols)
    diag = snf.diagonal
    gens: list[IntVector] = []
    for j in range(snf.cols):
        dj = diag[j] if j < len(diag) else 0
        step = n // gcd(dj, n)
        if step == n:
            continue
        vec = [(snf.V[i][j] * step) % n for i in range(snf.cols)]
        if any(vec):
            gens.append(vec)
    return gens


def kernel_mod_orders(a: Sequence[Sequence[int]], n: int, cols: int | None = None) -> list[int]:
    """Cyclic orders of the direct summands of the mod-``n`` kernel."""
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    snf = smith_normal_form([[x % n for x in row] for row in a], cols)
    diag = snf.diagonal
    orders = []
    for j in range(snf.cols):
        dj = diag[j] if j < len(diag) else 0
        g = gcd(dj, n)
        if g > 1:
            orders.append(g)
    return sorted(orders)


def mod_span_size(gens: Sequence[Sequence[int]], n: int, dim: int) -> int:
    """Order of the subgroup of ``(Z/n)^dim`` generated by ``gens``."""
    # preimage lattice: span(gens) + n Z^dim; its index in Z^dim is the product
    # of the Smith diagonal
    cols = [list(g) for g in gens] + [[n if i == j else 0 for i in range(dim)] for j in range(dim)]
    snf = smith_normal_form(transpose(cols, dim), len(cols))
    index = 1
    for x in snf.diagonal:
        index *= x
    return n**dim // index


def mod_span(gens: Sequence[Sequence[int]], n: int, dim: int) -> list[tuple[int, ...]]:
    """All elements of the subgroup generated by ``gens`` mod ``n``, sorted."""
    seen = {tuple([0] * dim)}
    frontier = list(seen)
    gens = [tuple(x % n for x in g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % n for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def hermite_rows(vectors: Sequence[Sequence[int]], dim: int) -> list[IntVector]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Output rows have strictly increasing leading columns, positive leading
    entries, and entries above each leading entry reduced into ``[0, lead)``.
    The result depends only on the lattice, not the generating set.
    """
    rows = [list(v) for v in vectors if any(v)]
    out: list[IntVector] = []
    col = 0
    while rows and col < dim:
        while True:
            nz = [r for r in rows if r[col]]
            if not nz:
                break
            piv = min(nz, key=lambda r: abs(r[col]))
            rest = []
            for r in rows:
                if r is piv:
                    continue
                q = r[col] // piv[col]
                if q:
                    r = [x - q * y for x, y in zip(r, piv)]
                if any(r):
                    rest.append(r)
            if all(r[col] == 0 for r in rest):
                if piv[col] < 0:
                    piv = [-x for x in piv]
                out.append(piv)
                rows = rest
                break
            rows = rest + [piv]
        col += 1
    for k, row in enumerate(out):
        lead = next(i for i, x in enumerate(row) if x)
        for j in range(k):
            q = out[j][lead] // row[lead]
            if q:
                out[j] = [x - q * y for x, y in zip(out[j], row)]
    return out


def lattice_index_invariant(vectors: Sequence[Sequence[int]], dim: int) -> tuple[int, int]:
    """Return (rank, product of nonzero Smith diagonal) of the column lattice."""
    if not vectors:
        return 0, 1
    snf = smith_normal_form(transpose([list(v) for v in vectors], dim), len(vectors))
    prod = 1
    for x in snf.diagonal:
        if x:
            prod *= x
    return snf.rank, prod


def same_lattice(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], dim: int) -> bool:
    """True iff the two generating sets span the same subgroup of Z^dim.

    Both lattices sit inside their sum with equal rank; the index of each in
    the sum is the ratio of products of nonzero Smith invariants.
    """
    joint = list(a) + list(b)
    ra, pa = lattice_index_invariant(a, dim)
    rb, pb = lattice_index_invariant(b, dim)
    rj, pj = lattice_index_invariant(joint, dim)
    return ra == rb == rj and pa == pb == pj
