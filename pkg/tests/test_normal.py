import itertools

import networkx as nx
from hypothesis import given, settings, strategies as st

from combforge import catalog
from combforge.catalog import tops_node
from combforge.graph import GraphOracle, Truncation
from combforge.normal import (DispersedCover, RootedTree, WellOrderedU, build_normal_tree, check_normal,
                              normal_ray_end_check, separation_check, t_path_violation)

from conftest import nx_of


def _normal_by_separation(T: RootedTree, g: nx.Graph) -> bool:
    """Incomparable x, y are separated by their common down-closure."""
    vs = list(T.parent)
    for x, y in itertools.combinations(vs, 2):
        if T.comparable(x, y):
            continue
        X = set(T.down_closure(x)) & set(T.down_closure(y))
        h = g.subgraph([v for v in g if v not in X])
        if nx.has_path(h, x, y):
            return False
    return True


def _singletons(vs):
    return DispersedCover.from_list([[v] for v in vs])


def test_complete_graph_gives_a_path():
    G = catalog.family_oracle("complete-graph")
    T = build_normal_tree(G, _singletons(range(20)), 20, window=20)
    assert [T.height[v] for v in range(20)] == list(range(20))
    assert check_normal(T, G, window=20) is None
    g = nx.complete_graph(20)
    assert _normal_by_separation(T, g)


def test_ray_gives_its_prefix():
    G = catalog.family_oracle("ray")
    T = build_normal_tree(G, _singletons(range(10)), 10)
    assert T.tree_path(0, 9) == list(range(10))


def test_tops_levels_give_t2_prefix():
    spec = catalog.family("binary-tree-with-tops")
    G, U = spec.oracle, spec.preset("t2-vertices")
    T = build_normal_tree(G, U.cover, 127, window=G.default_window, depth=spec.depth)
    for h in range(1, 127):
        assert T.parent[tops_node(h)] == tops_node((h - 1) // 2)
    assert check_normal(T, G, depth=spec.depth) is None
    trunc = G.truncate(radius=spec.depth, root=T.root)
    assert _normal_by_separation(T, nx_of(trunc))


def test_siblings_in_four_cycle_are_caught():
    trunc = Truncation.from_adjacency({0: [1, 2], 1: [0, 3], 2: [0, 3], 3: [1, 2]})
    ok = RootedTree.from_parents({0: None, 1: 0})
    assert t_path_violation(ok, Truncation.from_adjacency({0: [1], 1: [0]})) is None
    T = RootedTree.from_parents({0: None, 1: 0, 2: 0})
    assert t_path_violation(T, trunc) == [1, 3, 2]


def test_separation_on_ladder():
    spec = catalog.family("ladder")
    G = spec.oracle
    T = spec.spanning_trees["bottom-ray-rungs"].snapshot(range(24))
    assert separation_check(T, G, 0, 10, depth=12) is None
    assert separation_check(T, G, 4, 4, depth=12) is None
    # the top vertices 3 and 7 hang off different bottom vertices; the top rail joins them
    assert separation_check(T, G, 3, 7, depth=12) is not None


def test_ray_ends_match_normal_rays():
    G = catalog.family_oracle("ray")
    T = build_normal_tree(G, _singletons(range(12)), 12)
    report = normal_ray_end_check(T, G, G.ends.ends(4), depth=12)
    assert report["ok"] and report["matches"]["ray-end"] == list(range(12))


def test_ladder_end_follows_the_bottom_ray():
    spec = catalog.family("ladder")
    G = spec.oracle
    T = spec.spanning_trees["bottom-ray-rungs"].snapshot(range(30))
    report = normal_ray_end_check(T, G, G.ends.ends(4), depth=30)
    prefix = report["matches"]["ladder-end"]
    assert report["ok"] and prefix[:5] == [0, 2, 4, 6, 8]


def test_tops_ends_get_distinct_t2_rays():
    spec = catalog.family("binary-tree-with-tops")
    G, U = spec.oracle, spec.preset("t2-vertices")
    T = build_normal_tree(G, U.cover, 127, window=G.default_window, depth=spec.depth)
    report = normal_ray_end_check(T, G, G.ends.ends(16), depth=spec.depth)
    assert report["unique"] and report["injective"]


def test_cover_disjointifies_and_orders():
    cover = DispersedCover.from_list([[3, 1], [1, 2], [5]])
    assert cover.pieces_prefix(3) == [(1, 3), (2,), (5,)]
    order = WellOrderedU(cover)
    assert list(order) == [1, 3, 2, 5]
    assert order.initial_segment(2) == [1, 3]


@given(st.integers(4, 14), st.floats(0.15, 0.6), st.integers(0, 10_000))
@settings(max_examples=50, deadline=None)
def test_normal_trees_of_random_graphs_pass_the_separation_oracle(n, p, seed):
    g = nx.gnp_random_graph(n, p, seed=seed)
    comp = sorted(nx.node_connected_component(g, 0))
    h = g.subgraph(comp)
    G = GraphOracle.from_edges("random", comp, h.edges)
    T = build_normal_tree(G, _singletons(comp), len(comp))
    assert set(T.parent) == set(comp)
    assert all(T.comparable(u, v) for u, v in h.edges)
    assert _normal_by_separation(T, h)
