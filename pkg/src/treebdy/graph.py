"""Finite connected Serre graphs with a chosen orientation.

Directed edges are integer indices into ``E``.  For ``m`` positive edges,
index ``i < m`` is the ``i``-th declared edge and ``i + m`` its reversal, so
``bar(i) = (i + m) mod 2m``.  Vertex and edge order follow the input file.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

REVERSE_SUFFIX = "~"

_TOKEN = re.compile(r"^[^\s:~#]+$")
_EDGE_LINE = re.compile(r"^edge\s+(?P<name>\S+?)\s*:\s*(?P<u>\S+)\s*->\s*(?P<v>\S+)\s*$")


class GraphError(ValueError):
    """Invalid graph input.  ``line`` and ``col`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edge_names: tuple[str, ...]
    # origin / terminus vertex indices of the positive edges
    tails: tuple[int, ...]
    heads: tuple[int, ...]
    _vindex: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_vindex", {v: i for i, v in enumerate(self.vertices)})
        if not self.vertices:
            raise GraphError("graph has no vertices")
        if len(self._vindex) != len(self.vertices):
            raise GraphError("duplicate vertex name")
        if len(set(self.edge_names)) != len(self.edge_names):
            raise GraphError("duplicate edge name")
        if not (len(self.edge_names) == len(self.tails) == len(self.heads)):
            raise GraphError("edge arrays have different lengths")
        n = len(self.vertices)
        for u, v in zip(self.tails, self.heads):
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError("edge endpoint out of range")
        if not self._connected():
            raise GraphError("graph is disconnected")

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]) -> "Graph":
        """Build from ``(name, origin, terminus)`` triples."""
        vertices = tuple(vertices)
        index = {v: i for i, v in enumerate(vertices)}
        names, tails, heads = [], [], []
        for name, u, v in edges:
            for end in (u, v):
                if end not in index:
                    raise GraphError(f"edge {name!r} has unknown endpoint {end!r}")
            names.append(name)
            tails.append(index[u])
            heads.append(index[v])
        return cls(vertices, tuple(names), tuple(tails), tuple(heads))

    def _connected(self) -> bool:
        n = len(self.vertices)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in zip(self.tails, self.heads):
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        todo = deque([0])
        while todo:
            for w in adj[todo.popleft()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == n

    # edge structure

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_pos(self) -> int:
        """Number of geometric edges, ``|E+|``."""
        return len(self.edge_names)

    @property
    def n_edges(self) -> int:
        """Number of directed edges, ``|E| = 2 |E+|``."""
        return 2 * len(self.edge_names)

    def bar(self, x: int) -> int:
        m = self.n_pos
        return (x + m) % (2 * m)

    def o(self, x: int) -> int:
        m = self.n_pos
        return self.tails[x] if x < m else self.heads[x - m]

    def t(self, x: int) -> int:
        m = self.n_pos
        return self.heads[x] if x < m else self.tails[x - m]

    def is_positive(self, x: int) -> bool:
        return x < self.n_pos

    def edge_name(self, x: int) -> str:
        m = self.n_pos
        return self.edge_names[x] if x < m else self.edge_names[x - m] + REVERSE_SUFFIX

    @cached_property
    def all_edge_names(self) -> tuple[str, ...]:
        return tuple(self.edge_name(x) for x in range(self.n_edges))

    def edge_index(self, name: str) -> int:
        """Resolve ``a`` or ``a~`` to a directed edge index."""
        reverse = name.endswith(REVERSE_SUFFIX)
        base = name[: -len(REVERSE_SUFFIX)] if reverse else name
        try:
            i = self.edge_names.index(base)
        except ValueError:
            raise GraphError(f"unknown edge {name!r}") from None
        return i + self.n_pos if reverse else i

    def vertex_index(self, name: str) -> int:
        try:
            return self._vindex[name]
        except KeyError:
            raise GraphError(f"unknown vertex {name!r}") from None

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        """``out_edges[v]`` lists every ``x`` in E with ``o(x) = v``, in E order."""
        out: list[list[int]] = [[] for _ in self.vertices]
        for x in range(self.n_edges):
            out[self.o(x)].append(x)
        return tuple(tuple(xs) for xs in out)

    @cached_property
    def in_edges(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in self.vertices]
        for x in range(self.n_edges):
            inc[self.t(x)].append(x)
        return tuple(tuple(xs) for xs in inc)

    def continuations(self, x: int) -> tuple[int, ...]:
        """Edges ``y`` with ``o(y) = t(x)`` and ``y != bar(x)``."""
        rev = self.bar(x)
        return tuple(y for y in self.out_edges[self.t(x)] if y != rev)

    def degree(self, v: int) -> int:
        return len(self.out_edges[v])

    # serialization

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [
                {"name": n, "o": self.vertices[u], "t": self.vertices[v]}
                for n, u, v in zip(self.edge_names, self.tails, self.heads)
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Graph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_edges(data["vertices"], [(e["name"], e["o"], e["t"]) for e in data["edges"]])

    def to_text(self) -> str:
        lines = ["vertices: " + " ".join(self.vertices)]
        for n, u, v in zip(self.edge_names, self.tails, self.heads):
            lines.append(f"edge {n}: {self.vertices[u]} -> {self.vertices[v]}")
        return "\n".join(lines) + "\n"


def euler_characteristic(g: Graph) -> int:
    return g.n_vertices - g.n_pos


def min_degree(g: Graph) -> int:
    """Smallest out-degree in E; a loop counts twice at its vertex."""
    return min(g.degree(v) for v in range(g.n_vertices))


def parse_graph(text: str) -> Graph:
    """Parse the line-oriented graph format.

    ::

        # comment
        vertices: v1 v2
        edge a: v1 -> v2
    """
    vertices: list[str] | None = None
    vindex: dict[str, int] = {}
    names: list[str] = []
    seen_names: set[str] = set()
    tails: list[int] = []
    heads: list[int] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        col = raw.index(line[0]) + 1
        if line.startswith("vertices"):
            head, sep, rest = line.partition(":")
            if not sep or head.strip() != "vertices":
                raise GraphError("expected 'vertices: <id> ...'", lineno, col)
            if vertices is not None:
                raise GraphError("'vertices:' declared twice", lineno, col)
            vertices = rest.split()
            for v in vertices:
                if not _TOKEN.match(v):
                    raise GraphError(f"bad vertex id {v!r}", lineno, raw.index(v) + 1)
                if v in vindex:
                    raise GraphError(f"duplicate vertex {v!r}", lineno, raw.index(v) + 1)
                vindex[v] = len(vindex)
            continue
        m = _EDGE_LINE.match(line)
        if not m:
            raise GraphError(f"cannot parse {line!r}", lineno, col)
        if vertices is None:
            raise GraphError("edge declared before 'vertices:'", lineno, col)
        name = m["name"]
        name_col = raw.index(name, raw.index("edge") + 4) + 1
        if name.endswith(REVERSE_SUFFIX):
            raise GraphError(f"reversal {name!r} is implicit and may not be declared", lineno, name_col)
        if not _TOKEN.match(name):
            raise GraphError(f"bad edge name {name!r}", lineno, name_col)
        if name in seen_names:
            raise GraphError(f"duplicate edge {name!r}", lineno, name_col)
        for end in ("u", "v"):
            if m[end] not in vindex:
                raise GraphError(f"dangling endpoint {m[end]!r}", lineno, m.start(end) + col)
        seen_names.add(name)
        names.append(name)
        tails.append(vindex[m["u"]])
        heads.append(vindex[m["v"]])

    if not vertices:
        raise GraphError("empty vertex set")
    return Graph(tuple(vertices), tuple(names), tuple(tails), tuple(heads))


def load_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())
