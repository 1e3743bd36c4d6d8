import pytest

from treebdy import corpus
from treebdy.graph import Graph, GraphError, euler_characteristic, load_graph, min_degree, parse_graph

THETA = """# theta
vertices: v1 v2
edge a: v1 -> v2
edge b: v1 -> v2
edge c: v1 -> v2
"""


def test_parse_theta():
    g = parse_graph(THETA)
    assert (g.n_vertices, g.n_pos, g.n_edges) == (2, 3, 6)
    assert g.edge_names == ("a", "b", "c")
    assert g.all_edge_names == ("a", "b", "c", "a~", "b~", "c~")
    assert g.edge_index("b~") == 4


def test_single_vertex_is_valid():
    g = parse_graph("vertices: v\n")
    assert g.n_edges == 0
    assert euler_characteristic(g) == 1


def test_two_isolated_vertices_rejected():
    with pytest.raises(GraphError, match="disconnected"):
        parse_graph("vertices: a b\n")


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("vertices: a\nedge e: a -> b\n", 2, "dangling"),
        ("vertices: a a\n", 1, "duplicate vertex"),
        ("vertices: a\nedge e: a -> a\nedge e: a -> a\n", 3, "duplicate edge"),
        ("vertices: a\nedge e~: a -> a\n", 2, "implicit"),
        ("vertices: a\nedge e a -> a\n", 2, "cannot parse"),
        ("edge e: a -> a\nvertices: a\n", 1, "before"),
        ("vertices: a\nvertices: a\n", 2, "twice"),
    ],
)
def test_parse_errors_have_positions(text, line, fragment):
    with pytest.raises(GraphError, match=fragment) as info:
        parse_graph(text)
    assert info.value.line == line
    assert info.value.col is not None and info.value.col >= 1


def test_empty_vertex_set():
    with pytest.raises(GraphError, match="empty"):
        parse_graph("# nothing here\n")


@pytest.mark.parametrize(
    "g, chi, deg",
    [(corpus.theta(), -1, 3), (corpus.single_loop(), 0, 2), (corpus.complete(6), -9, 5),
     (corpus.single_vertex(), 1, 0), (corpus.path(2), 1, 1)],
)
def test_chi_and_min_degree(g, chi, deg):
    assert euler_characteristic(g) == chi
    assert min_degree(g) == deg


def test_regular_graph_chi_formula():
    # a (q+1)-regular graph on n vertices has chi = n (1 - q) / 2
    for g, q in [(corpus.complete(6), 4), (corpus.complete(4), 2), (corpus.complete_bipartite(3, 3), 2)]:
        assert 2 * euler_characteristic(g) == g.n_vertices * (1 - q)


def test_serre_invariants_on_corpus(small_corpus):
    for g in small_corpus + corpus.random_graphs(30, seed=3):
        for x in range(g.n_edges):
            assert g.o(g.bar(x)) == g.t(x)
            assert g.bar(g.bar(x)) == x != g.bar(x)
        assert sum(len(g.out_edges[v]) for v in range(g.n_vertices)) == g.n_edges == 2 * g.n_pos


def test_round_trip_text_and_json(small_corpus):
    for g in small_corpus:
        assert parse_graph(g.to_text()) == g
        assert Graph.from_json(g.to_json()) == g


def test_loop_out_edges():
    g = corpus.single_loop()
    assert sorted(g.out_edges[0]) == [0, 1]
    assert g.continuations(0) == (0,)


def test_data_files_load(data_dir):
    sizes = {"theta": 2, "loop": 1, "path": 2, "k4": 4, "k6": 6, "k33": 6, "point": 1}
    for name, n in sizes.items():
        assert load_graph(str(data_dir / f"{name}.graph")).n_vertices == n


def test_unknown_names():
    g = corpus.theta()
    with pytest.raises((GraphError, KeyError)):
        g.edge_index("zz")
    with pytest.raises((GraphError, KeyError)):
        g.vertex_index("zz")
