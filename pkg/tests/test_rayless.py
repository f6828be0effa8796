import json

import networkx as nx
import pytest

from combforge import catalog
from combforge.errors import PreconditionViolation
from combforge.graph import BranchPartition
from combforge.normal import RootedTree, build_normal_tree
from combforge.rayless import (RaylessBuildState, build_domination_contraction, build_rayless_tree, hat_closure,
                               lift_rayless, passed_on_tree, rayless_step, theorem1_driver,
                               verify_minimal_attachments)

from conftest import nx_of


# ---------------------------------------------------------------------------
# independent step simulator
# ---------------------------------------------------------------------------


def complete_nx(n):
    return nx.complete_graph(n)


def fan_nx(n):
    """Apex 0 joined to every ray vertex; ray vertices 1, 2, ... in a path."""
    g = nx.path_graph(range(1, n))
    g.add_edges_from((0, v) for v in range(1, n))
    return g


def simulate(g, order):
    """Grow the tree one vertex at a time with plain networkx calls.

    Each new vertex is joined through its component of g minus the tree to
    the lowest-height tree vertex it can reach (lowest index on ties), along
    the lexicographically least shortest path.
    """
    root = order[0]
    height = {root: 0}
    log = [(0, None, 0)]
    for step, u in enumerate(order[1:], start=1):
        if u in height:
            continue
        rest = g.subgraph(v for v in g if v not in height)
        comp = nx.node_connected_component(rest, u)
        touch = {w for v in comp for w in g[v] if w in height}
        end = min(touch, key=lambda w: (height[w], w))
        sub = g.subgraph(comp | {end})
        path = min(nx.all_shortest_paths(sub, u, end))
        log.append((step, end, height[end]))
        for i, v in enumerate(reversed(path[:-1]), start=1):
            height[v] = height[end] + i
    return log, height


def engine_log(tree):
    return [(e["step"], e["attach"], e["height"]) for e in tree.log]


@pytest.mark.parametrize("family,make,radius", [("complete-graph", complete_nx, 1), ("fan", fan_nx, 2)])
def test_rayless_tree_matches_simulation(family, make, radius):
    spec = catalog.family(family)
    U = spec.preset("all")
    res = build_rayless_tree(spec.oracle, U, U.cover, steps=200, depth=4, window=400)
    log, height = simulate(make(400), list(range(200)))
    assert json.dumps(engine_log(res.tree)) == json.dumps(log)
    assert res.tree.height == height
    assert res.tree.radius() <= radius
    assert res.audit["radius"] == res.tree.radius()
    assert len(res.tree) == 200


def test_complete_graph_gives_a_star():
    spec = catalog.family("complete-graph")
    U = spec.preset("all")
    res = build_rayless_tree(spec.oracle, U, U.cover, steps=200, depth=4, window=400)
    assert res.tree.radius() == 1
    assert set(res.tree.children[0]) == set(range(1, 200))


def test_minimal_attachments_replay_clean():
    for family in ("complete-graph", "fan", "infinite-star"):
        spec = catalog.family(family)
        U = spec.preset("all")
        res = build_rayless_tree(spec.oracle, U, U.cover, steps=60, depth=4, window=400)
        assert verify_minimal_attachments(res.tree, res.state.trunc) == []


def test_replay_catches_a_non_minimal_attachment():
    spec = catalog.family("fan")
    U = spec.preset("all")
    res = build_rayless_tree(spec.oracle, U, U.cover, steps=10, depth=4, window=400)
    tree = RootedTree(0)
    tree.log.append({"step": 0, "path": [0], "attach": None, "height": 0})
    tree.add_path([1, 0], step=1)
    tree.add_path([3, 2, 1], step=2)  # 3 could have attached to the apex directly
    problems = verify_minimal_attachments(tree, res.state.trunc)
    assert problems and problems[0]["step"] == 2


# ---------------------------------------------------------------------------
# single steps
# ---------------------------------------------------------------------------


def _state(family, root, window=200, radius=40):
    G = catalog.family(family).oracle
    return RaylessBuildState(RootedTree(root), G.truncate(window=window, radius=radius, root=root))


@pytest.mark.parametrize("family,u,path", [
    ("complete-graph", 1, [1, 0]),
    ("fan", 8, [8, 0]),
    ("ray", 3, [3, 2, 1, 0]),
])
def test_single_step_paths(family, u, path):
    st = rayless_step(_state(family, 0), u)
    assert st.tree.log[-1]["path"] == path
    assert st.tree.height[u] == len(path) - 1


def test_step_on_tree_vertex_is_a_no_op():
    st = _state("ray", 0)
    rayless_step(st, 2)
    before = dict(st.tree.parent)
    rayless_step(st, 1)
    assert st.tree.parent == before
    assert st.consumed == [2, 1]


def test_step_prefers_lower_attachment():
    st = _state("fan", 0)
    rayless_step(st, 5)  # v4 hangs off the apex
    rayless_step(st, 6)  # v5 touches v4 (height 1) and the apex (height 0)
    assert st.tree.parent[6] == 0


# ---------------------------------------------------------------------------
# preconditions and hat closure
# ---------------------------------------------------------------------------


def test_tops_t2_without_contraction_violates_precondition():
    spec = catalog.family("binary-tree-with-tops")
    U = spec.preset("t2-vertices")
    with pytest.raises(PreconditionViolation):
        build_rayless_tree(spec.oracle, U, U.cover, steps=20, depth=spec.depth)


def test_ray_all_violates_precondition():
    spec = catalog.family("ray")
    U = spec.preset("all")
    with pytest.raises(PreconditionViolation):
        build_rayless_tree(spec.oracle, U, U.cover, steps=20, depth=12)


def test_hat_closure_adds_the_apex():
    spec = catalog.family("fan")
    U = spec.preset("ray-vertices")
    assert not U(0)
    hat = hat_closure(spec.oracle, U)
    assert hat(0)
    assert all(hat(v) == (v == 0 or U(v)) for v in range(60))


def test_hat_closure_of_a_finite_set_is_itself():
    spec = catalog.family("complete-graph")
    U = spec.preset("first-three")
    hat = hat_closure(spec.oracle, U)
    assert all(hat(v) == U(v) for v in range(40))


# ---------------------------------------------------------------------------
# domination contraction and lifting
# ---------------------------------------------------------------------------


def _contraction(family, preset, steps):
    spec = catalog.family(family)
    G, U = spec.oracle, spec.preset(preset)
    T = build_normal_tree(G, U.cover, steps, window=G.default_window, depth=spec.depth)
    return G, T, build_domination_contraction(G, T, G.ends.ends(64), spec.depth)


def test_tops_contraction_is_properly_passed_on():
    G, T, dc = _contraction("binary-tree-with-tops", "t2-vertices", 63)
    assert dc.audit["properly_passed_on"]
    assert dc.audit["stars_meet_T_once"]
    assert dc.audit["contracted_rays"] > 0
    TH = passed_on_tree(dc)
    assert len(TH) == len(T)
    for c in dc.choices:
        if c.path is not None:
            assert c.path[0] == c.dominator and c.path[-1] in set(c.ray)
            assert all(G.adjacent(a, b) for a, b in zip(c.path, c.path[1:]))


def test_fan_contraction_keeps_branch_sets_connected():
    G, T, dc = _contraction("fan", "all", 30)
    for members in dc.stars.values():
        sub = nx.Graph()
        sub.add_nodes_from(members)
        sub.add_edges_from((a, b) for a in members for b in members if a < b and G.adjacent(a, b))
        assert nx.is_connected(sub)


def test_lift_of_a_rayless_tree_is_a_tree():
    G = catalog.family("fan").oracle
    P = BranchPartition([[0, 1, 2]])
    H = P.branch_of
    tH = RootedTree(H(0))
    for v in range(3, 12):
        tH.attach(H(v), H(0))
    lifted = lift_rayless(tH, P, G)
    g = nx.Graph()
    g.add_edges_from((v, p) for v, p in lifted.parent.items() if p is not None)
    assert nx.is_tree(g)
    assert set(lifted.parent) == set(range(12))


def test_driver_contraction_route_lifts_to_a_tree():
    spec = catalog.family("binary-tree-with-tops")
    U = spec.preset("t2-vertices")
    res = theorem1_driver(spec.oracle, U, U.cover, k=8, depth=spec.depth, steps=U.steps or 40)
    assert res.route == "contraction"
    g = nx.Graph()
    g.add_edges_from((v, p) for v, p in res.tree.parent.items() if p is not None)
    assert nx.is_tree(g)
    trunc = spec.oracle.truncate(window=spec.oracle.default_window, radius=spec.depth, root=res.tree.root)
    host = nx_of(trunc)
    assert all(host.has_edge(v, p) for v, p in res.tree.parent.items() if p is not None)


# ---------------------------------------------------------------------------
# driver outcomes
# ---------------------------------------------------------------------------


DRIVER_CASES = [(s.name, p) for s in catalog.list_families() for p in s.presets]


@pytest.mark.parametrize("family,preset", DRIVER_CASES)
def test_driver_outcome_matches_known_answer(family, preset):
    spec = catalog.family(family)
    U = spec.preset(preset)
    res = theorem1_driver(spec.oracle, U, U.cover, k=8, depth=spec.depth, steps=U.steps or 40)
    expected = spec.known_answers[("duality", preset)]
    assert (res.outcome == "comb") == (expected == "comb")
    if res.tree is not None:
        assert res.route in ("direct", "contraction")
