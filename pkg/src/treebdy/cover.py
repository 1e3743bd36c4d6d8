"""Bounded-depth slices of the universal covering tree.

A node of the tree is a non-backtracking edge path in G starting at the base
vertex (the empty path is the base node).  The tree edge from node ``p`` to
node ``p + (x,)`` projects to ``x``, so a cone ``Omega_delta`` pointing away
from the base is named by the non-empty path ending in ``delta``.  Masses of
cones come from the quotient labelling by projection.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .coefficients import GroupElement
from .distributions import Distribution
from .graph import Graph

Path = tuple[int, ...]

DEFAULT_NODE_CAP = 1_000_000


class SliceTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class CoverSlice:
    graph: Graph
    base: int
    depth: int
    # breadth-first, children in E order
    nodes: tuple[Path, ...]
    children: dict = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.nodes)

    def endpoint(self, p: Path) -> int:
        return self.graph.t(p[-1]) if p else self.base

    def level(self, d: int) -> list[Path]:
        return [p for p in self.nodes if len(p) == d]

    def base_cones(self) -> list[Path]:
        return list(self.children[()])

    def cones(self) -> Iterator[Path]:
        """Every cone of the slice (every non-base node)."""
        return (p for p in self.nodes if p)

    def child_cones(self, cone: Path) -> list[Path]:
        """Cones partitioning ``cone`` one level down."""
        if len(cone) >= self.depth:
            raise ValueError(f"cone at depth {len(cone)} has no children inside a depth-{self.depth} slice")
        return list(self.children[cone])

    def __contains__(self, p: Path) -> bool:
        return p in self.children

    def projection(self, cone: Path) -> int:
        return cone[-1]

    def to_dot(self, dist: Distribution | None = None) -> str:
        g = self.graph
        lines = ["digraph cover {", "  node [shape=point];"]
        ids = {p: f"n{i}" for i, p in enumerate(self.nodes)}
        lines.append(f'  {ids[()]} [shape=circle, label="{g.vertices[self.base]}"];')
        for p in self.cones():
            label = g.edge_name(p[-1])
            if dist is not None:
                label += "\\n" + dist.group.format(cone_measure(self, dist, p))
            lines.append(f'  {ids[p[:-1]]} -> {ids[p]} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def count_nodes(g: Graph, base: int, depth: int) -> list[int]:
    """Nodes at each depth, by counting non-backtracking walks (no materialization)."""
    counts = [1]
    # number of walks currently ending with each directed edge
    ending = [0] * g.n_edges
    for x in g.out_edges[base]:
        ending[x] += 1
    for d in range(1, depth + 1):
        counts.append(sum(ending))
        nxt = [0] * g.n_edges
        for x, c in enumerate(ending):
            if c:
                for y in g.continuations(x):
                    nxt[y] += c
        ending = nxt
    return counts


def expand(g: Graph, base: int | str = 0, depth: int = 3, cap: int = DEFAULT_NODE_CAP) -> CoverSlice:
    if isinstance(base, str):
        base = g.vertex_index(base)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    total = sum(count_nodes(g, base, depth))
    if total > cap:
        raise SliceTooLarge(f"depth-{depth} slice has {total} nodes, cap is {cap}")
    nodes: list[Path] = [()]
    children: dict[Path, tuple[Path, ...]] = {}
    todo = deque([()])
    while todo:
        p = todo.popleft()
        if len(p) == depth:
            children[p] = ()
            continue
        nxt = g.out_edges[base] if not p else g.continuations(p[-1])
        kids = tuple(p + (y,) for y in nxt)
        children[p] = kids
        nodes.extend(kids)
        todo.extend(kids)
    return CoverSlice(g, base, depth, tuple(nodes), children)


def cone_measure(slice: CoverSlice, dist: Distribution, cone: Path) -> GroupElement:
    """Mass of a cone: the label of the quotient edge it projects to."""
    if not cone or cone not in slice:
        raise KeyError(f"{cone} is not a cone of this slice")
    return dist.labels[cone[-1]]


@dataclass
class AdditivityReport:
    base_sum: GroupElement
    base_ok: bool
    interior_checked: int
    interior_failures: list[Path]
    pair_checked: int
    pair_failures: list[Path]
    leaf_cones: int  # interior cones with no children (degree-1 vertices upstairs)

    @property
    def ok(self) -> bool:
        return self.base_ok and not self.interior_failures and not self.pair_failures

    def to_json(self, slice: CoverSlice, dist: Distribution) -> dict:
        g = slice.graph
        name = lambda p: "/".join(g.edge_name(x) for x in p)  # noqa: E731
        return {
            "ok": self.ok,
            "depth": slice.depth,
            "base": g.vertices[slice.base],
            "nodes": len(slice),
            "base_sum": dist.group.to_json_element(self.base_sum),
            "base_ok": self.base_ok,
            "interior_checked": self.interior_checked,
            "interior_failures": [name(p) for p in self.interior_failures[:20]],
            "pair_checked": self.pair_checked,
            "pair_failures": [name(p) for p in self.pair_failures[:20]],
            "leaf_cones": self.leaf_cones,
        }


def check_additivity(slice: CoverSlice, dist: Distribution) -> AdditivityReport:
    """Check the cone relations upstairs for a labelling lifted from G.

    * each interior cone has the total mass of its children;
    * the base cones add up to ``sigma``;
    * for each base edge, the cone behind its reversal (measured by projection)
      plus the cone itself is ``sigma``, and the reversed cone has the same mass
      as the union of the other base cones.
    """
    if slice.depth < 2:
        raise ValueError("additivity needs a slice of depth >= 2")
    M = dist.group
    lam = dist.labels
    base_cones = slice.base_cones()
    base_sum = M.sum([lam[p[-1]] for p in base_cones])
    base_ok = base_sum == dist.sigma

    failures = []
    checked = 0
    leaves = 0
    for p in slice.cones():
        if len(p) >= slice.depth:
            continue
        kids = slice.children[p]
        if not kids:
            leaves += 1
        checked += 1
        if M.sum([lam[q[-1]] for q in kids]) != lam[p[-1]]:
            failures.append(p)

    pair_failures = []
    g = slice.graph
    for p in base_cones:
        x = p[-1]
        reverse = lam[g.bar(x)]
        others = M.sum([lam[q[-1]] for q in base_cones if q != p])
        if M.add(lam[x], reverse) != dist.sigma or reverse != others:
            pair_failures.append(p)
    return AdditivityReport(base_sum, base_ok, checked, failures, len(base_cones), pair_failures, leaves)


class ClopenSet:
    """A finite family of pairwise disjoint cones of one slice."""

    def __init__(self, slice: CoverSlice, cones: Iterable[Path]):
        cones = sorted(set(tuple(c) for c in cones), key=lambda c: (len(c), c))
        for c in cones:
            if not c or c not in slice:
                raise ValueError(f"{c} is not a cone of the slice")
        members = set(cones)
        for c in cones:
            for k in range(1, len(c)):
                if c[:k] in members:
                    raise ValueError(f"cones {c[:k]} and {c} overlap")
        self.slice = slice
        self.cones: tuple[Path, ...] = tuple(cones)

    def __iter__(self) -> Iterator[Path]:
        return iter(self.cones)

    def __len__(self) -> int:
        return len(self.cones)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ClopenSet) and self.slice is other.slice and self.cones == other.cones

    def __repr__(self) -> str:
        return f"ClopenSet({list(self.cones)})"

    @property
    def max_depth(self) -> int:
        return max((len(c) for c in self.cones), default=0)


def measure_clopen(slice: CoverSlice, dist: Distribution, s: ClopenSet) -> GroupElement:
    return dist.group.sum([cone_measure(slice, dist, c) for c in s])


def refine(s: ClopenSet, depth: int) -> ClopenSet:
    """Split every cone shallower than ``depth`` into its descendants at ``depth``.

    Cones with no children (a dead end upstairs) are kept as they are.
    """
    sl = s.slice
    if depth > sl.depth:
        raise ValueError(f"refinement depth {depth} exceeds slice depth {sl.depth}")
    out = []
    todo = list(s.cones)
    while todo:
        c = todo.pop()
        kids = sl.children[c]
        if len(c) >= depth or not kids:
            out.append(c)
        else:
            todo.extend(kids)
    return ClopenSet(sl, out)


def complement(slice: CoverSlice, s: ClopenSet) -> ClopenSet:
    """The coarsest cone family covering exactly what ``s`` misses."""
    members = set(s.cones)
    ancestors = {c[:k] for c in members for k in range(1, len(c))}
    out = []
    todo = slice.base_cones()
    while todo:
        c = todo.pop()
        if c in members:
            continue
        if c in ancestors:
            todo.extend(slice.children[c])
        else:
            out.append(c)
    return ClopenSet(slice, out)


def whole_boundary(slice: CoverSlice) -> ClopenSet:
    return ClopenSet(slice, slice.base_cones())
