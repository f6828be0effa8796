import networkx as nx
import pytest

from combforge import catalog
from combforge.decomposition import (TreeDecomposition, build_reflecting_tree, closure_domination_transfer_check,
                                     closure_invariance_check, decomposition_soundness, direction_transfer_check,
                                     dominated_subgraph, normally_spanned_transfer_check, restrict_displaying,
                                     separator_flags_check, separator_hat, star_decomposition,
                                     star_decomposition_audit)
from combforge.errors import DualityViolation
from combforge.graph import BranchPartition
from combforge.suites import standard_partitions

from conftest import nx_of

FINITE_PART_FAMILIES = [s.name for s in catalog.list_families()
                        if s.decomposition().part_members(s.decomposition().root) is not None]
COMPLEMENT_CASES = [(s.name, p) for s in catalog.list_families() for p in s.presets
                    if s.known_answers[("duality", p)] == "complement"]
COMB_CASES = [(s.name, p) for s in catalog.list_families() for p in s.presets
              if s.known_answers[("duality", p)] == "comb"]


def _decomposition_tree(dec, nodes):
    t = nx.Graph()
    t.add_nodes_from(nodes)
    t.add_edges_from((n, dec.parent(n)) for n in nodes if dec.parent(n) is not None)
    return t


@pytest.mark.parametrize("family", FINITE_PART_FAMILIES)
def test_axioms_by_brute_force(family):
    """Parts cover vertices and edges; each vertex's nodes span a subtree."""
    spec = catalog.family(family)
    G, dec = spec.oracle, spec.decomposition()
    trunc = G.truncate(window=G.default_window, radius=5, root=G.root)
    g = nx_of(trunc)
    homes = {v: set(dec.nodes_of(v)) for v in g}
    nodes = set().union(*homes.values())
    closed = set()
    for n in nodes:
        closed.update(dec.ancestors(n))
    tree = _decomposition_tree(dec, closed)
    assert nx.is_tree(tree)
    for v, ns in homes.items():
        assert ns
        assert nx.is_connected(tree.subgraph(ns))
        assert all(dec.part_contains(t, v) for t in ns)
    for u, v in g.edges():
        assert homes[u] & homes[v]
    for n in nodes:
        p = dec.parent(n)
        if p is None:
            continue
        inter = {v for v in g if n in homes[v] and p in homes[v]}
        assert inter == {v for v in dec.separator(n) if v in g}


@pytest.mark.parametrize("family", FINITE_PART_FAMILIES)
def test_soundness_report_agrees(family):
    spec = catalog.family(family)
    for d in (5, 10):
        assert decomposition_soundness(spec.oracle, spec.decomposition(), d)["ok"]


def test_soundness_flags_a_broken_decomposition():
    spec = catalog.family("ray")
    dec = spec.decomposition()
    broken = TreeDecomposition(dec.name, dec.root, dec.children, dec.parent, dec.part_contains, dec.part_members,
                               lambda v: [] if v == 3 else dec.nodes_of(v), dec.separator)
    rep = decomposition_soundness(spec.oracle, broken, 6)
    assert not rep["ok"]
    assert any(p.startswith("T1") for p in rep["problems"])


@pytest.mark.parametrize("family", FINITE_PART_FAMILIES)
def test_declared_flags_hold(family):
    spec = catalog.family(family)
    assert separator_flags_check(spec.oracle, spec.decomposition(), 4)["matches_flags"]


# ---------------------------------------------------------------------------
# star-decompositions
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("family,preset", COMPLEMENT_CASES)
def test_star_decomposition_audit(family, preset):
    spec = catalog.family(family)
    U = spec.preset(preset)
    sd = star_decomposition(spec.oracle, U, spec.decomposition(), members=U.members)
    audit = star_decomposition_audit(sd, U, members=U.members)
    assert audit["ok"], audit
    assert [d["depth"] for d in audit["depths"]] == [5, 10, 15]


@pytest.mark.parametrize("family,preset", COMB_CASES)
def test_star_decomposition_refused_when_a_comb_exists(family, preset):
    spec = catalog.family(family)
    U = spec.preset(preset)
    with pytest.raises(DualityViolation):
        star_decomposition(spec.oracle, U, spec.decomposition(), members=U.members)


def test_ray_v0_centre_is_the_first_part():
    spec = catalog.family("ray")
    U = spec.preset("v0")
    sd = star_decomposition(spec.oracle, U, spec.decomposition(), members=U.members)
    assert sd.central(0)
    assert len(sd.leaf_roots) == 1
    assert not sd.central(5)
    end = spec.oracle.ends.ends(1)[0]
    audit = star_decomposition_audit(sd, U, members=U.members)
    assert audit["ends_in_leaves"][end.id] == sd.leaf_roots[0]


def test_binary_tree_root_has_two_leaves():
    spec = catalog.family("binary-tree")
    U = spec.preset("root")
    sd = star_decomposition(spec.oracle, U, spec.decomposition(), members=U.members)
    assert sd.central(spec.oracle.root)
    assert len(sd.leaf_roots) >= 2


def test_fan_apex_centre_is_everything():
    spec = catalog.family("fan")
    U = spec.preset("apex")
    sd = star_decomposition(spec.oracle, U, spec.decomposition(), members=U.members)
    assert all(sd.central(v) for v in range(50))
    assert sd.leaf_roots == []


def test_forced_decomposition_on_a_comb_preset_fails_its_audit():
    spec = catalog.family("ray")
    U = spec.preset("all")
    sd = star_decomposition(spec.oracle, U, spec.decomposition(), members=U.members, force=True)
    audit = star_decomposition_audit(sd, U, members=U.members)
    dom = dominated_subgraph(sd, U, members=U.members)
    assert not (audit["ok"] and dom.audit["ok"])


@pytest.mark.parametrize("family,preset", COMPLEMENT_CASES)
def test_dominated_subgraph(family, preset):
    spec = catalog.family(family)
    U = spec.preset(preset)
    sd = star_decomposition(spec.oracle, U, spec.decomposition(), members=U.members)
    dom = dominated_subgraph(sd, U, members=U.members)
    assert dom.audit["ok"], dom.audit


def test_fan_dominated_subgraph_checks_the_fan_end():
    spec = catalog.family("fan")
    U = spec.preset("ray-vertices")
    sd = star_decomposition(spec.oracle, U, spec.decomposition(), members=U.members)
    dom = dominated_subgraph(sd, U, members=U.members)
    assert dom.audit["ends_inside"] == {"fan-end": True}


# ---------------------------------------------------------------------------
# transfer along contractions
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", list(standard_partitions()))
def test_direction_transfer(name):
    family, branches = standard_partitions()[name]
    G = catalog.family(family).oracle
    rep = direction_transfer_check(G, BranchPartition(branches), depths=range(1, 13))
    assert rep["ok"] and rep["discrepancies"] == 0


@pytest.mark.parametrize("name", list(standard_partitions()))
def test_closure_and_domination_transfer(name):
    family, branches = standard_partitions()[name]
    spec = catalog.family(family)
    presets = {p: spec.preset(p) for p in spec.presets}
    rep = closure_domination_transfer_check(spec.oracle, BranchPartition(branches), presets,
                                            depths=range(1, 13), k=16)
    assert rep["ok"] and rep["discrepancies"] == 0


@pytest.mark.parametrize("name", list(standard_partitions()))
def test_dispersedness_transfer(name):
    family, branches = standard_partitions()[name]
    spec = catalog.family(family)
    cover = spec.preset(next(iter(spec.presets))).cover
    rep = normally_spanned_transfer_check(spec.oracle, BranchPartition(branches), cover, depth=12)
    assert rep["ok"] and rep["discrepancies"] == 0


# ---------------------------------------------------------------------------
# restriction, separator hat and reflecting trees
# ---------------------------------------------------------------------------


def test_restrict_binary_tree_to_left_chain():
    spec = catalog.family("binary-tree")
    U = spec.preset("left-chain")
    res = restrict_displaying(spec.oracle, spec.decomposition(), U, members=None)
    assert res.report["ok"]
    assert res.report["displays_closure_ends"]
    assert all(res.report["displays_closure_ends"].values())


def test_restrict_ray_v0_is_finite():
    spec = catalog.family("ray")
    U = spec.preset("v0")
    res = restrict_displaying(spec.oracle, spec.decomposition(), U, members=U.members)
    assert res.bounded
    assert res.report["covers_U"]


@pytest.mark.parametrize("family", [s.name for s in catalog.list_families()])
def test_separator_hat_keeps_the_closure(family):
    spec = catalog.family(family)
    U = spec.preset(next(iter(spec.presets)))
    hat = separator_hat(spec.decomposition(), U)
    assert all(hat(v) for v in range(30) if U(v))
    assert closure_invariance_check(spec.oracle, U, hat, depths=range(1, 9))["ok"]


def _as_nx(T):
    g = nx.Graph()
    g.add_nodes_from(T.parent)
    g.add_edges_from((v, p) for v, p in T.parent.items() if p is not None)
    return g


@pytest.mark.parametrize("family,preset", [("ray", "v0"), ("ladder", "rung0"), ("binary-tree", "root"),
                                           ("fan", "all")])
def test_reflecting_tree_is_a_tree_containing_U(family, preset):
    spec = catalog.family(family)
    G, U = spec.oracle, spec.preset(preset)
    res = build_reflecting_tree(G, U, U.cover, spec.decomposition(), node_depth=6, members=U.members,
                                steps=U.steps or 40)
    assert nx.is_tree(_as_nx(res.tree))
    assert all(G.adjacent(v, p) for v, p in res.tree.parent.items() if p is not None)
    if U.members is not None:
        assert all(u in res.tree for u in U.members)
    assert res.report["reflects"], res.report
