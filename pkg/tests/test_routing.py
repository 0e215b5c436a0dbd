"""Hierarchical forwarding: table construction, delivery, measured stretch.

The ring and grid expectations below were worked out by hand; the torus
numbers are frozen regressions for the induced-subgraph next-hop rule
(global-graph next hops ping-pong between sibling clusters on a torus).
"""

from collections import deque

import pytest

from routestretch import graphs as gr
from routestretch import hierarchy as hi
from routestretch import routing as rt


def bfs_dist(adj, src):
    d = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in d:
                d[w] = d[u] + 1
                queue.append(w)
    return d


def assert_valid_path(graph, path, src, dst):
    assert path[0] == src and path[-1] == dst
    edges = set(graph.edges)
    for a, b in zip(path, path[1:]):
        assert (min(a, b), max(a, b)) in edges


def ring8_setup():
    g = gr.ring_graph(8)
    h = hi.build_balanced(g, levels=2, branching=2)
    return g, h, rt.build_tables(g, h)


def test_ring8_table_shape():
    g, h, tables = ring8_setup()
    assert all(t.length == 5 for t in tables)
    # member 0 of arc {0,1,2,7}: three leaf neighbors plus one sibling entry
    t0 = tables[0]
    assert t0.owner == 0
    assert sorted(t0.node_entries) == [1, 2, 7]
    assert list(t0.cluster_entries) == [(1, 1)]
    # hops are real neighbors on the ring
    assert t0.node_entries[2] == 1
    assert t0.node_entries[7] == 7


def test_ring8_measured_report():
    g, h, _ = ring8_setup()
    rep = rt.measure(g, h)
    assert rep.n_nodes == 8
    assert rep.levels == 2
    assert rep.method == "balanced-b2"
    assert rep.s_p == 1.0625
    assert rep.s_t == 0.625
    assert rep.mean_table_length == 5.0
    assert rep.mean_hier_path == 17.0 / 7.0
    assert rep.mean_shortest_path == 16.0 / 7.0
    assert rep.mean_path_ratio == 22.0 / 21.0
    assert rep.histogram == ((1, 16), (2, 16), (3, 12), (4, 8), (5, 4))
    # both stretch figures are ratios of the reported means
    assert rep.s_p == rep.mean_hier_path / rep.mean_shortest_path
    assert rep.s_t == rep.mean_table_length / rep.n_nodes


def test_ring8_csv_and_text():
    g, h, _ = ring8_setup()
    rep = rt.measure(g, h)
    assert rt.StretchReport.CSV_HEADER == (
        "n,levels,method,s_p,s_t,mean_table,mean_hier,mean_short"
    )
    assert rep.csv_record() == (
        "8,2,balanced-b2,1.0625,0.625,5,2.428571429,2.285714286"
    )
    text = rep.to_text()
    assert "s_p: 1.0625" in text
    assert "mean_path_ratio: 1.047619048" in text
    assert "histogram:" in text
    assert "  5: 4" in text
    assert text.endswith("\n")


def test_grid44_blocks_report():
    g = gr.grid_graph(4, 4)
    h = hi.build_grid_blocks(g, 4, 4, 2, 2)
    rep = rt.measure(g, h)
    assert rep.s_p == 1.0
    assert rep.s_t == 0.4375
    assert rep.mean_table_length == 7.0
    assert rep.mean_hier_path == rep.mean_shortest_path == 8.0 / 3.0
    assert rep.mean_path_ratio == 1.0
    assert rep.histogram == ((1, 48), (2, 68), (3, 64), (4, 40), (5, 16), (6, 4))


def test_flat_hierarchy_routes_shortest():
    g = gr.ring_graph(8)
    rep = rt.measure(g, hi.flat_hierarchy(g))
    assert rep.s_p == 1.0
    assert rep.s_t == 1.0
    assert rep.mean_table_length == 8.0
    assert rep.method == "flat"


def test_method_override():
    g = gr.ring_graph(8)
    rep = rt.measure(g, hi.flat_hierarchy(g), method="baseline")
    assert rep.method == "baseline"


def test_torus_regression_two_level():
    # the configuration that exposed the sibling ping-pong bug
    g = gr.torus_graph(16, 16)
    h = hi.build_balanced(g, levels=2, branching=4)
    tables = rt.build_tables(g, h)
    path = rt.route(tables, g, h, 0, 22)
    assert_valid_path(g, path, 0, 22)
    assert all(t.length == 67 for t in tables)


def test_torus_balanced_b2_frozen_numbers():
    g = gr.torus_graph(16, 16)
    dist = gr.all_pairs_shortest_lengths(g)
    h = hi.build_balanced(g, levels=2, branching=2)
    rep = rt.measure(g, h, dist=dist)
    assert rep.mean_table_length == 129.0
    assert rep.s_t == 129.0 / 256.0
    assert rep.mean_shortest_path == 8.031372549019608
    assert rep.mean_hier_path == 9.42873774509804
    assert rep.s_p == rep.mean_hier_path / rep.mean_shortest_path


def test_delivery_on_random_graphs():
    for seed in range(5):
        g = gr.random_graph(24, 0.25, seed=seed)
        short = [bfs_dist(g.adj, s) for s in range(24)]
        for levels in (1, 2, 3):
            h = hi.build_balanced(g, levels=levels, branching=2)
            tables = rt.build_tables(g, h)
            for src in range(24):
                for dst in range(24):
                    if src == dst:
                        continue
                    path = rt.route(tables, g, h, src, dst)
                    assert_valid_path(g, path, src, dst)
                    hops = len(path) - 1
                    assert hops >= short[src][dst]
                    if levels == 1:
                        assert hops == short[src][dst]


def test_loop_guard_trips_on_corrupted_tables():
    g, h, tables = ring8_setup()
    # nodes 0 and 1 point their sibling-cluster entries at each other
    tables[0].cluster_entries[(1, 1)] = 1
    tables[1].cluster_entries[(1, 1)] = 0
    with pytest.raises(rt.RoutingLoopError) as exc:
        rt.route(tables, g, h, 0, 4)
    cycle = exc.value.cycle
    assert cycle[0] == cycle[-1]
    assert set(cycle) == {0, 1}


def test_missing_entry_raises():
    g, h, tables = ring8_setup()
    del tables[3].node_entries[4]
    with pytest.raises(rt.RoutingError, match="no entry covering destination 4"):
        rt.route(tables, g, h, 3, 4)


def test_route_argument_guards():
    g, h, tables = ring8_setup()
    with pytest.raises(ValueError):
        rt.route(tables, g, h, 0, 0)
    with pytest.raises(ValueError):
        rt.route(tables, g, h, -1, 4)
    with pytest.raises(ValueError):
        rt.route(tables, g, h, 0, 8)


def test_build_tables_rejects_mismatched_sizes():
    g = gr.ring_graph(8)
    with pytest.raises(ValueError, match="hierarchy covers 9"):
        rt.build_tables(g, hi.flat_hierarchy(gr.ring_graph(9)))


def test_measure_needs_two_nodes():
    g = gr.Graph(1, [])
    with pytest.raises(ValueError):
        rt.measure(g, hi.flat_hierarchy(g))
