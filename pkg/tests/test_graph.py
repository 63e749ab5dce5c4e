import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlocal.errors import InputError
from qlocal.graph import (
    LabeledGraph,
    complete_graph_minus_edge,
    cycle_graph,
    empty_graph,
    format_graph,
    parse_graph,
    path_graph,
    relabel,
    view,
    views_equal,
)

from oracles import all_pairs_distances, naive_view

C6 = cycle_graph(range(6))


def _pairs(edges):
    return {frozenset((u, v)) for u, _, v, _ in edges}


def test_one_hop_ball_on_cycle():
    b = view(C6, {0}, 1)
    assert b.seen_nodes == {5, 0, 1}
    assert _pairs(b.edges) == {frozenset((5, 0)), frozenset((0, 1))}


def test_zero_round_view_is_own_label():
    b = view(C6, {3}, 0)
    assert b.nodes == {(3, 3)}
    assert b.edges == frozenset()


def test_missing_edge_invisible_at_zero_rounds():
    k4 = LabeledGraph.from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    minus = complete_graph_minus_edge(4, (0, 1))
    assert views_equal(view(minus, {0}, 0), view(k4, {0}, 0))
    assert not views_equal(view(minus, {0}, 1), view(k4, {0}, 1))


def test_antipodal_pair_sees_two_arcs():
    b = view(C6, {0, 3}, 1)
    assert b.seen_nodes == {5, 0, 1, 2, 3, 4}
    # the edges 1-2 and 4-5 join two boundary nodes and stay hidden
    assert _pairs(b.edges) == {frozenset(p) for p in [(5, 0), (0, 1), (2, 3), (3, 4)]}


def test_views_equal_examples():
    a, b = empty_graph([0, 0]), empty_graph([0, 1])
    a2, b2 = path_graph(2, [0, 0]), path_graph(2, [0, 1])
    assert views_equal(view(C6, {0}, 1), view(C6, {0}, 1))
    for g, h in ((a, b), (a2, b2)):
        assert views_equal(view(g, {0}, 0), view(h, {0}, 0))
        assert not views_equal(view(g, {1}, 0), view(h, {1}, 0))


def test_view_rejects_bad_roots():
    with pytest.raises(InputError):
        view(C6, {6}, 1)
    with pytest.raises(InputError):
        view(C6, set(), 1)
    with pytest.raises(InputError):
        view(C6, {0}, -1)


@pytest.mark.parametrize(
    "bad",
    [
        lambda: LabeledGraph.from_edges(2, [(0, 0)]),
        lambda: LabeledGraph.from_edges(2, [(0, 1), (0, 1)]),
        lambda: LabeledGraph.from_port_edges(2, [(0, 2, 1, 1)]),
        lambda: LabeledGraph.from_edges(2, [(0, 1)], [0, -1]),
        lambda: cycle_graph([0, 1, 1]),
    ],
)
def test_invalid_graphs_rejected(bad):
    with pytest.raises(InputError):
        bad()


def test_reversed_cycle_swaps_ports():
    fwd, rev = cycle_graph(range(5)), cycle_graph(list(reversed(range(5))))
    assert _pairs(fwd.edges) == _pairs(rev.edges)
    assert fwd.neighbor(0, 1) == (1, 2)
    assert rev.neighbor(0, 1) == (4, 2)


def test_antipodal_view_below_critical_radius_omits_nodes():
    for n in range(4, 21, 2):
        t = -(-(n - 2) // 4) - 1
        b = view(cycle_graph(range(n)), {0, n // 2}, t)
        assert n - len(b.seen_nodes) >= 2


def test_parse_format_round_trip():
    g = cycle_graph([0, 2, 1, 3], labels=[7, 0, 3, 3])
    assert parse_graph(format_graph(g)) == g
    text = "# triangle\nnodes 3\nlabel 0 1\nlabel 1 2\nlabel 2 3  # last\nedge 0 1 1 1\nedge 1 2 2 1\nedge 0 2 2 2\n"
    h = parse_graph(text)
    assert h.labels == (1, 2, 3) and h.degree(2) == 2


@pytest.mark.parametrize(
    "text",
    [
        "label 0 1\n",
        "nodes 2\nlabel 0 1\n",
        "nodes 1\nlabel 0 x\n",
        "nodes 2\nlabel 0 0\nlabel 1 0\nedge 0 1 1\n",
        "nodes 2\nlabel 0 0\nlabel 1 0\nbogus\n",
    ],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(InputError):
        parse_graph(text)


# properties -----------------------------------------------------------------


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    labels = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    return LabeledGraph.from_edges(n, draw(st.permutations(chosen)), labels)


@st.composite
def graph_and_roots(draw):
    g = draw(graphs())
    roots = draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    return g, roots, draw(st.integers(0, 4))


@settings(max_examples=150, deadline=None)
@given(graph_and_roots())
def test_view_matches_naive_oracle(case):
    g, s, t = case
    b = view(g, s, t)
    _, _, nodes, edges = naive_view(g, s, t)
    assert b.nodes == nodes and b.edges == edges


@settings(max_examples=100, deadline=None)
@given(graph_and_roots())
def test_view_monotone_in_radius(case):
    g, s, t = case
    assert view(g, s, t).seen_nodes <= view(g, s, t + 1).seen_nodes
    assert view(g, s, t).edges <= view(g, s, t + 1).edges


@settings(max_examples=100, deadline=None)
@given(graph_and_roots())
def test_union_law(case):
    g, s, t = case
    union = set().union(*(view(g, {v}, t).seen_nodes for v in s))
    assert view(g, s, t).seen_nodes == union


@settings(max_examples=100, deadline=None)
@given(graph_and_roots())
def test_view_ball_invariants(case):
    g, s, t = case
    b = view(g, s, t)
    d = all_pairs_distances(g)
    assert set(s) <= b.seen_nodes
    assert all(min(d[r][v] for r in s) <= t for v in b.seen_nodes)
    if t == 0:
        assert b.seen_nodes == set(s) and not b.edges


@settings(max_examples=100, deadline=None)
@given(graph_and_roots(), st.data())
def test_changes_outside_ball_are_invisible(case, data):
    g, s, t = case
    dist = g.distances(s)
    outside = [v for v in range(g.n) if dist.get(v, t + 1) > t]
    new = {v: data.draw(st.integers(0, 9)) for v in outside}
    assert views_equal(view(g, s, t), view(relabel(g, new), s, t))
    # edges between nodes beyond distance t-1 may also change freely
    far = [v for v in range(g.n) if dist.get(v, t) >= t]
    kept = [(u, v) for u, _, v, _ in g.edges if min(dist.get(u, t), dist.get(v, t)) <= t - 1]
    extra = [(u, v) for i, u in enumerate(far) for v in far[i + 1 :] if not g.has_edge(u, v)]
    add = data.draw(st.lists(st.sampled_from(extra), unique=True)) if extra else []
    h = LabeledGraph.from_port_edges(
        g.n,
        [e for e in g.edges if (e[0], e[2]) in kept] + _fresh_ports(g, kept, add),
        g.labels,
    )
    assert views_equal(view(g, s, t), view(h, s, t))


def _fresh_ports(g, kept, add):
    used = {v: set() for v in range(g.n)}
    for u, pu, v, pv in g.edges:
        if (u, v) in kept:
            used[u].add(pu)
            used[v].add(pv)
    out = []
    # kept edges may leave gaps in the port numbering; fill far nodes' ports densely
    remaining = [e for e in g.edges if (e[0], e[2]) not in kept]
    for u, v in [(e[0], e[2]) for e in remaining] + list(add):
        pu = min(set(range(1, g.n + 1)) - used[u])
        pv = min(set(range(1, g.n + 1)) - used[v])
        used[u].add(pu)
        used[v].add(pv)
        out.append((u, pu, v, pv))
    return out
