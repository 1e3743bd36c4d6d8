"""Finitely generated abelian coefficient groups ``Z^r + Z/d_1 + ... + Z/d_k``.

Elements are plain tuples: ``r`` free integer coordinates followed by one
residue per torsion summand, each residue kept in ``[0, d_i)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Iterator, Sequence

from .linalg import smith_normal_form

GroupElement = tuple[int, ...]

_SUMMAND = re.compile(r"^\s*Z\s*(?:\^\s*(\d+)|/\s*(\d+))?\s*$")


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class CoefficientGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise GroupError(f"negative free rank {self.free_rank}")
        object.__setattr__(self, "torsion", tuple(self.torsion))
        for d in self.torsion:
            if d < 2:
                raise GroupError(f"torsion order must be >= 2, got {d}")

    @classmethod
    def parse(cls, spec: str) -> "CoefficientGroup":
        """Parse ``Z``, ``Z^2``, ``Z/4``, ``0`` and ``+``/``⊕`` joins of them."""
        text = spec.strip()
        if text in ("0", "trivial"):
            return cls()
        rank = 0
        torsion: list[int] = []
        for part in re.split(r"[+⊕]", text):
            m = _SUMMAND.match(part)
            if not m:
                raise GroupError(f"bad group summand {part.strip()!r} in {spec!r}")
            power, modulus = m.groups()
            if modulus is not None:
                n = int(modulus)
                if n < 2:
                    raise GroupError(f"Z/{n} is not allowed; use orders >= 2")
                torsion.append(n)
            else:
                rank += int(power) if power is not None else 1
        return cls(rank, tuple(torsion))

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return "+".join(parts) or "0"

    @cached_property
    def ncoords(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise GroupError(f"{self} is infinite")
        return prod(self.torsion)

    def invariant_factors(self) -> list[int]:
        """Torsion in canonical ``d_1 | d_2 | ...`` form."""
        k = len(self.torsion)
        if k == 0:
            return []
        diag = [[self.torsion[i] if i == j else 0 for j in range(k)] for i in range(k)]
        return smith_normal_form(diag).invariant_factors

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    # element arithmetic

    def element(self, coords: int | Sequence[int]) -> GroupElement:
        """Build an element, reducing torsion coordinates."""
        if isinstance(coords, int):
            coords = (coords,)
        if len(coords) != self.ncoords:
            raise GroupError(f"{tuple(coords)} has {len(coords)} coordinates, {self} needs {self.ncoords}")
        r = self.free_rank
        return tuple(coords[:r]) + tuple(c % d for c, d in zip(coords[r:], self.torsion))

    def check(self, a: GroupElement) -> GroupElement:
        if len(a) != self.ncoords:
            raise GroupError(f"element {a} does not belong to {self}")
        if self.torsion:
            for c, d in zip(a[self.free_rank :], self.torsion):
                if not 0 <= c < d:
                    raise GroupError(f"element {a} does not belong to {self}")
        return a

    def zero(self) -> GroupElement:
        return (0,) * self.ncoords

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        self.check(a)
        self.check(b)
        r = self.free_rank
        if not self.torsion:
            return tuple(x + y for x, y in zip(a, b))
        if not r:
            return tuple((x + y) % d for x, y, d in zip(a, b, self.torsion))
        return tuple(x + y for x, y in zip(a[:r], b[:r])) + tuple(
            (x + y) % d for x, y, d in zip(a[r:], b[r:], self.torsion)
        )

    def neg(self, a: GroupElement) -> GroupElement:
        return self.int_scale(-1, a)

    def sub(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return self.add(a, self.neg(b))

    def int_scale(self, k: int, a: GroupElement) -> GroupElement:
        self.check(a)
        r = self.free_rank
        return tuple(k * x for x in a[:r]) + tuple((k * x) % d for x, d in zip(a[r:], self.torsion))

    def sum(self, items: Sequence[GroupElement]) -> GroupElement:
        total = self.zero()
        for a in items:
            total = self.add(total, a)
        return total

    def has_k_torsion(self, k: int) -> bool:
        """Is there a nonzero ``m`` with ``k m = 0``?

        Every element is 0-torsion, so ``k = 0`` asks whether the group is
        nontrivial.
        """
        if k == 0:
            return not self.is_trivial
        return any(gcd(abs(k), d) > 1 for d in self.torsion)

    def enumerate_elements(self) -> Iterator[GroupElement]:
        """All elements in lexicographic order (finite groups only)."""
        if not self.is_finite:
            raise GroupError(f"cannot enumerate infinite group {self}")
        return itertools.product(*(range(d) for d in self.torsion))

    def format(self, a: GroupElement) -> str:
        if len(a) == 1:
            return str(a[0])
        return "(" + ",".join(str(x) for x in a) + ")"

    def to_json_element(self, a: GroupElement) -> int | list[int]:
        return a[0] if len(a) == 1 else list(a)


Z = CoefficientGroup(1)


def Zmod(n: int) -> CoefficientGroup:
    return CoefficientGroup(0, (n,))


class FiniteTable:
    """Index-based arithmetic for a finite group, for tight enumeration loops.

    Element ``i`` is the ``i``-th tuple of ``enumerate_elements``; index 0 is
    the identity.
    """

    def __init__(self, group: CoefficientGroup):
        self.group = group
        self.elements: list[GroupElement] = list(group.enumerate_elements())
        self.index = {a: i for i, a in enumerate(self.elements)}
        n = len(self.elements)
        self.add = [[self.index[group.add(a, b)] for b in self.elements] for a in self.elements]
        self.neg = [self.index[group.neg(a)] for a in self.elements]
        self.size = n

    def sub(self, i: int, j: int) -> int:
        return self.add[i][self.neg[j]]
