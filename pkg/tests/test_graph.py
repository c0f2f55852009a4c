import pytest
from hypothesis import given, settings

from bpd import Color, ColoredGraph, FormatError, edge_key, format_bpd, instance_stats, parse_bpd
from conftest import brute_bridges, colored_graphs, graph_corpus

B, R = Color.BLUE, Color.RED


def small_path():
    # blue 0-1, red 1-2
    return ColoredGraph(3, [(0, 1, B), (1, 2, R)])


def test_edge_key_orders_endpoints():
    assert edge_key(3, 1) == (1, 3)
    assert edge_key(1, 3) == (1, 3)


def test_basic_accessors():
    g = small_path()
    assert g.n == 3
    assert g.m == 2
    assert g.pairs() == [(0, 1), (1, 2)]
    assert g.has_edge(1, 0)
    assert not g.has_edge(0, 2)
    assert g.color_of(0, 1) is B
    assert g.color_of(1, 0) is B
    assert g.color_of(2, 1) is R
    assert g.color_of(0, 2) is None
    assert g.neighbors(1) == [0, 2]
    assert g.blue_neighbors(1) == (0,)
    assert g.red_neighbors(1) == (2,)
    assert g.degree(1) == 2 and g.blue_degree(1) == 1 and g.red_degree(1) == 1


def test_constructor_rejects_bad_edges():
    with pytest.raises(ValueError):
        ColoredGraph(2, [(0, 0, B)])
    with pytest.raises(ValueError):
        ColoredGraph(2, [(0, 3, B)])
    with pytest.raises(ValueError):
        ColoredGraph(2, [(0, 1, B), (1, 0, R)])


def test_delete_edges_returns_new_graph():
    g = small_path()
    h = g.delete_edges([(0, 1)])
    assert h.m == 1 and g.m == 2
    assert not h.has_edge(0, 1)
    with pytest.raises(ValueError):
        g.delete_edges([(0, 2)])


def test_value_semantics():
    a = ColoredGraph(3, [(0, 1, B), (1, 2, R)])
    b = ColoredGraph(3, [(1, 2, R), (0, 1, B)])
    c = ColoredGraph(3, [(0, 1, R), (1, 2, R)])
    assert a == b and hash(a) == hash(b)
    assert a != c


def test_induced_subgraph_relabels_and_maps_back():
    g = ColoredGraph(5, [(0, 2, B), (2, 4, R), (1, 3, B)])
    sub, back = g.induced_subgraph([4, 0, 2])
    assert back == (0, 2, 4)
    assert sub.n == 3
    assert sub.color_of(0, 1) is B  # 0-2 in the host
    assert sub.color_of(1, 2) is R  # 2-4 in the host
    assert sub.m == 2


def test_connected_components():
    g = ColoredGraph(6, [(0, 1, B), (1, 2, R), (4, 5, B)])
    comps = g.connected_components()
    assert sorted(map(sorted, comps)) == [[0, 1, 2], [3], [4, 5]]


@settings(max_examples=60, deadline=None)
@given(colored_graphs(max_n=6))
def test_bridges_match_component_count_definition(g):
    assert g.bridges() == frozenset(brute_bridges(g))


def test_bridges_on_known_shapes():
    path = ColoredGraph(4, [(0, 1, B), (1, 2, B), (2, 3, R)])
    assert path.bridges() == frozenset(path.pairs())
    cycle = ColoredGraph(4, [(0, 1, B), (1, 2, R), (2, 3, B), (0, 3, R)])
    assert cycle.bridges() == frozenset()


def test_format_parse_round_trip():
    g = ColoredGraph(4, [(0, 1, B), (1, 2, R), (0, 3, B)])
    text = format_bpd(g, comment="round trip")
    assert text.splitlines()[0].startswith("#")
    assert parse_bpd(text) == g


@settings(max_examples=60, deadline=None)
@given(colored_graphs(max_n=7))
def test_round_trip_property(g):
    assert parse_bpd(format_bpd(g)) == g


def test_round_trip_on_random_corpus():
    for g in graph_corpus(seed=11, count=30, max_n=9):
        assert parse_bpd(format_bpd(g)) == g


def test_parse_accepts_comments_and_blank_lines():
    g = parse_bpd("# hello\n\np bpd 3 2\n0 1 b\n# middle\n1 2 r\n")
    assert g == small_path()


@pytest.mark.parametrize(
    "text, line",
    [
        ("0 1 b\n", 1),                        # edge before header
        ("p foo 2 1\n0 1 b\n", 1),             # wrong magic
        ("p bpd x 1\n0 1 b\n", 1),             # non-integer count
        ("p bpd -1 0\n", 1),                   # negative count
        ("p bpd 2 1\n0 1\n", 2),               # missing color field
        ("p bpd 2 1\n0 z b\n", 2),             # non-integer endpoint
        ("p bpd 2 1\n0 1 g\n", 2),             # unknown color
        ("p bpd 2 1\n1 1 b\n", 2),             # self loop
        ("p bpd 2 1\n0 5 b\n", 2),             # endpoint out of range
        ("p bpd 2 2\n0 1 b\n0 1 r\n", 3),      # duplicate edge
    ],
)
def test_parse_rejections_name_the_line(text, line):
    with pytest.raises(FormatError) as err:
        parse_bpd(text)
    assert f"line {line}" in str(err.value)


def test_parse_rejects_wrong_edge_count():
    with pytest.raises(FormatError):
        parse_bpd("p bpd 3 2\n0 1 b\n")
    with pytest.raises(FormatError):
        parse_bpd("")


def test_instance_stats_fields():
    s = instance_stats(small_path(), k=1)
    assert s.n == 3 and s.m == 2
    assert s.m_blue == 1 and s.m_red == 1
    assert s.max_degree == 2
    assert s.max_blue_degree == 1 and s.max_red_degree == 1
    assert s.dual == 1
    assert instance_stats(small_path()).dual is None
