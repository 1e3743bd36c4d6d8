"""Small test graphs: named families, an exhaustive corpus, random graphs."""

from __future__ import annotations

import itertools
import random
from collections import deque

from .graph import Graph


def theta() -> Graph:
    return Graph.from_edges(["v1", "v2"], [(n, "v1", "v2") for n in "abc"])


def single_loop() -> Graph:
    return Graph.from_edges(["v"], [("e", "v", "v")])


def single_vertex() -> Graph:
    return Graph.from_edges(["v"], [])


def path(n: int = 2) -> Graph:
    vs = [f"v{i + 1}" for i in range(n)]
    return Graph.from_edges(vs, [(f"e{i + 1}", vs[i], vs[i + 1]) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    vs = [f"v{i + 1}" for i in range(n)]
    return Graph.from_edges(vs, [(f"e{i + 1}", vs[i], vs[(i + 1) % n]) for i in range(n)])


def complete(n: int) -> Graph:
    vs = [f"v{i + 1}" for i in range(n)]
    return Graph.from_edges(vs, [(f"e{i + 1}{j + 1}", vs[i], vs[j]) for i, j in itertools.combinations(range(n), 2)])


def complete_bipartite(p: int, q: int) -> Graph:
    us = [f"u{i + 1}" for i in range(p)]
    ws = [f"w{j + 1}" for j in range(q)]
    return Graph.from_edges(us + ws, [(f"e{i + 1}{j + 1}", u, w) for (i, u), (j, w) in itertools.product(enumerate(us), enumerate(ws))])


def bouquet(k: int) -> Graph:
    """One vertex with ``k`` loops."""
    return Graph.from_edges(["v"], [(f"e{i + 1}", "v", "v") for i in range(k)])


def _connected(n: int, slots) -> bool:
    adj = [set() for _ in range(n)]
    for i, j in slots:
        adj[i].add(j)
        adj[j].add(i)
    seen = {0}
    todo = deque([0])
    while todo:
        for w in adj[todo.popleft()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == n


def _canonical(n: int, slots: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(sorted((min(perm[i], perm[j]), max(perm[i], perm[j])) for i, j in slots))
        if best is None or key < best:
            best = key
    return best


def _build(n: int, slots) -> Graph:
    vs = [f"v{i + 1}" for i in range(n)]
    return Graph.from_edges(vs, [(f"e{k + 1}", vs[i], vs[j]) for k, (i, j) in enumerate(slots)])


def exhaustive_corpus(max_vertices: int = 4, max_edges: int = 6) -> list[Graph]:
    """Connected multigraphs (loops and parallel edges allowed) up to isomorphism.

    Each edge is oriented from the lower to the higher vertex index of the
    canonical labelling.  Order: by vertex count, edge count, canonical key.
    """
    out = []
    for n in range(1, max_vertices + 1):
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
        for m in range(max(n - 1, 0), max_edges + 1):
            seen = set()
            for slots in itertools.combinations_with_replacement(pairs, m):
                if not _connected(n, slots):
                    continue
                key = _canonical(n, slots)
                if key in seen:
                    continue
                seen.add(key)
            for key in sorted(seen):
                out.append(_build(n, key))
    return out


def random_connected_graph(rng: random.Random, max_vertices: int = 6, max_extra: int = 6) -> Graph:
    """Random spanning tree plus random extra edges (loops and repeats allowed),
    with each edge oriented at random."""
    n = rng.randint(1, max_vertices)
    edges = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v))
    for _ in range(rng.randint(0, max_extra)):
        edges.append((rng.randrange(n), rng.randrange(n)))
    rng.shuffle(edges)
    vs = [f"v{i + 1}" for i in range(n)]
    named = []
    for k, (i, j) in enumerate(edges):
        if rng.random() < 0.5:
            i, j = j, i
        named.append((f"e{k + 1}", vs[i], vs[j]))
    return Graph.from_edges(vs, named)


def random_graphs(count: int, seed: int = 0, **kw) -> list[Graph]:
    rng = random.Random(seed)
    return [random_connected_graph(rng, **kw) for _ in range(count)]
