import networkx as nx
import pytest

from combforge import catalog
from combforge.cuts import brute_force_cut, fundamental_cut, theorem39_consistency


def ladder_nx(rungs):
    """Bottom rail b_i = 2i, top rail t_i = 2i + 1."""
    g = nx.Graph()
    for i in range(rungs):
        g.add_edge(2 * i, 2 * i + 1)
        if i + 1 < rungs:
            g.add_edge(2 * i, 2 * i + 2)
            g.add_edge(2 * i + 1, 2 * i + 3)
    return g


def ladder_tree(rungs):
    t = nx.Graph()
    for i in range(rungs):
        t.add_edge(2 * i, 2 * i + 1)
        if i + 1 < rungs:
            t.add_edge(2 * i, 2 * i + 2)
    return t


def nx_cut(g, tree, e):
    t = tree.copy()
    t.remove_edge(*e)
    side = nx.node_connected_component(t, e[1])
    return sum(1 for a, b in g.edges() if (a in side) != (b in side))


LADDER = catalog.family("ladder")
FAN = catalog.family("fan")


@pytest.mark.parametrize("rungs", [30, 60])
def test_ladder_cuts_match_networkx(rungs):
    g, tree = ladder_nx(rungs), ladder_tree(rungs)
    T = LADDER.spanning_trees["bottom-ray-rungs"]
    for i in range(1, rungs // 2):
        rung = (2 * i, 2 * i + 1)
        assert nx_cut(g, tree, rung) == 3
        assert fundamental_cut(LADDER.oracle, T, rung).count == 3
        bottom = (2 * i, 2 * i + 2)
        assert fundamental_cut(LADDER.oracle, T, bottom).count == nx_cut(g, tree, bottom) == 2


def test_ladder_first_rung_is_smaller():
    T = LADDER.spanning_trees["bottom-ray-rungs"]
    assert fundamental_cut(LADDER.oracle, T, (0, 1)).count == nx_cut(ladder_nx(30), ladder_tree(30), (0, 1)) == 2


def test_ladder_brute_force_is_stable():
    T = LADDER.spanning_trees["bottom-ray-rungs"]
    for i in range(1, 14):
        assert brute_force_cut(LADDER.oracle, T, (2 * i, 2 * i + 1), 60) == 3
        assert brute_force_cut(LADDER.oracle, T, (2 * i, 2 * i + 1), 120) == 3


def test_edge_orientation_is_normalised():
    T = LADDER.spanning_trees["bottom-ray-rungs"]
    rep = fundamental_cut(LADDER.oracle, T, (5, 4))
    assert rep.edge == (4, 5) and rep.count == 3


def test_non_tree_edge_is_rejected():
    T = LADDER.spanning_trees["bottom-ray-rungs"]
    with pytest.raises(ValueError):
        fundamental_cut(LADDER.oracle, T, (1, 3))


@pytest.mark.parametrize("budget", [10, 100, 1000, 10_000])
def test_fan_ray_tree_cut_exceeds_every_budget(budget):
    T = FAN.spanning_trees["ray-tree"]
    rep = fundamental_cut(FAN.oracle, T, (1, 0), budget=budget)
    assert rep.verdict == "exceeds-budget"
    assert rep.hub == 0


def test_fan_ray_tree_cut_grows_with_the_truncation():
    T = FAN.spanning_trees["ray-tree"]
    sizes = [brute_force_cut(FAN.oracle, T, (1, 0), n) for n in (30, 60, 120)]
    assert sizes[0] < sizes[1] < sizes[2]


def test_fan_ray_tree_is_attributed_to_the_dominated_ray():
    T = FAN.spanning_trees["ray-tree"]
    rep = theorem39_consistency(FAN.oracle, T, FAN.oracle.ends.ends(8), budget=1000)
    assert not rep["all_finite"]
    assert rep["attributions"]
    assert all(a["dominated_t_ray"] == "fan-end" and a["hub"] == 0 for a in rep["attributions"])
    assert rep["consistent"]


def test_fan_apex_star_cuts_are_finite():
    S = FAN.spanning_trees["apex-star"]
    rep = theorem39_consistency(FAN.oracle, S, FAN.oracle.ends.ends(8))
    assert rep["all_finite"] and rep["consistent"]
    assert rep["t_ends"] == []
    for i in range(2, 20):
        assert fundamental_cut(FAN.oracle, S, (0, i)).count == 3


def test_report_json_uses_labels():
    T = LADDER.spanning_trees["bottom-ray-rungs"]
    doc = fundamental_cut(LADDER.oracle, T, (2, 3)).to_json(LADDER.oracle)
    assert doc["edge"] == [{"index": 2, "label": "b1"}, {"index": 3, "label": "t1"}]
    assert doc["verdict"] == "finite" and doc["count"] == 3
