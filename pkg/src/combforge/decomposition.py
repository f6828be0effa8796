"""Tree-decompositions over lazy graphs and the decomposition engine."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import DualityViolation, InvariantViolation
from .graph import (BranchPartition, GraphOracle, Truncation, VertexPredicate, bounded_component, contract,
                    max_fan)
from .normal import DispersedCover, RootedTree, dispersed_evidence
from .starcomb import closure_ends


def _everything(t: int, v: int) -> bool:
    return True


@dataclass
class TreeDecomposition:
    """A rooted decomposition tree with lazy parts.

    ``separator(t)`` is the adhesion set on the edge between ``parent(t)`` and
    ``t``.  ``part_members(t)`` is the finite part, or None when the part is
    infinite.  ``nodes_of(v)`` lists the nodes whose parts contain ``v``.
    ``tau`` maps end ids to ``("ray", node stream)`` or ``("node", t)``.
    """

    name: str
    root: int
    children: Callable[[int], List[int]]
    parent: Callable[[int], Optional[int]]
    part_contains: Callable[[int, int], bool]
    part_members: Callable[[int], Optional[FrozenSet[int]]]
    nodes_of: Callable[[int], List[int]]
    separator: Callable[[int], FrozenSet[int]]
    flags: Dict[str, bool] = field(default_factory=dict)
    tau: Dict[str, tuple] = field(default_factory=dict)

    @classmethod
    def single_part(cls, name: str, ends: Iterable[str] = ()) -> "TreeDecomposition":
        return cls(
            name=name,
            root=0,
            children=lambda t: [],
            parent=lambda t: None,
            part_contains=_everything,
            part_members=lambda t: None,
            nodes_of=lambda v: [0],
            separator=lambda t: frozenset(),
            flags={"separators-connected": True, "separators-pairwise-disjoint": True, "upwards-disjoint": True},
            tau={e: ("node", 0) for e in ends},
        )

    def depth_of(self, t: int) -> int:
        d = 0
        while (t := self.parent(t)) is not None:  # type: ignore[assignment]
            d += 1
        return d

    def ancestors(self, t: int) -> List[int]:
        out = [t]
        while (p := self.parent(out[-1])) is not None:
            out.append(p)
        return out

    def nodes(self, depth: int) -> List[int]:
        """Nodes of depth at most ``depth``, breadth-first."""
        out = [self.root]
        frontier = [self.root]
        for _ in range(depth):
            frontier = [c for t in frontier for c in self.children(t)]
            if not frontier:
                break
            out.extend(frontier)
        return out

    def tau_nodes(self, end_id: str, n: int) -> List[int]:
        kind, value = self.tau[end_id]
        if kind == "node":
            return [value]
        return list(itertools.islice(value(), n))

    def to_json(self, G: GraphOracle, depth: int = 4, sample: int = 12) -> dict:
        nodes = []
        for t in self.nodes(depth):
            members = self.part_members(t)
            part = sorted(members) if members is not None else list(itertools.islice(G.vertices(), sample))
            nodes.append({
                "node": t,
                "parent": self.parent(t),
                "part_sample": [{"index": v, "label": G.label(v)} for v in part[:sample]],
                "part_finite": members is not None,
                "separator": [] if self.parent(t) is None else
                [{"index": v, "label": G.label(v)} for v in sorted(self.separator(t))],
            })
        return {
            "name": self.name,
            "root": self.root,
            "nodes": nodes,
            "flags": dict(sorted(self.flags.items())),
            "tau": {k: (v[0], v[1] if v[0] == "node" else self.tau_nodes(k, 8)) for k, v in sorted(self.tau.items())},
        }


# ---------------------------------------------------------------------------
# Soundness of a decomposition on truncations
# ---------------------------------------------------------------------------


def _trunc(G: GraphOracle, depth: int, window: Optional[int] = None) -> Truncation:
    return G.truncate(window=window if window is not None else G.default_window, radius=depth, root=G.root)


def decomposition_soundness(G: GraphOracle, dec: TreeDecomposition, depth: int,
                            window: Optional[int] = None) -> dict:
    """(T1)-(T3) and the separator identity on the depth-``depth`` ball."""
    trunc = _trunc(G, depth, window)
    problems: List[str] = []
    nodes_of = {v: dec.nodes_of(v) for v in trunc.vertices}
    for v, ns in nodes_of.items():
        if not ns:
            problems.append(f"T1: {v} lies in no part")
        for t in ns:
            if not dec.part_contains(t, v):
                problems.append(f"{v} listed in node {t} whose part misses it")
        ns_set = set(ns)
        # subtree test: every listed node except one topmost has its parent listed
        tops = [t for t in ns if dec.parent(t) not in ns_set]
        if len(tops) > 1:
            problems.append(f"T3: nodes containing {v} do not form a subtree")
    for u, v in trunc.edges():
        if not set(nodes_of[u]) & set(nodes_of[v]):
            problems.append(f"T2: edge {u}-{v} lies in no part")
    # declared finite parts must agree with nodes_of
    for t in itertools.islice(dec.nodes(depth + 1), 20000):
        members = dec.part_members(t)
        if members is None:
            continue
        for v in members:
            if v in trunc and t not in nodes_of[v]:
                problems.append(f"node {t} holds {v} but nodes_of({v}) omits it")
    for t in {t for ns in nodes_of.values() for t in ns}:
        p = dec.parent(t)
        if p is None:
            continue
        inter = {v for v in trunc.vertices if p in nodes_of[v] and t in nodes_of[v]}
        sep = {v for v in dec.separator(t) if v in trunc}
        if inter != sep:
            problems.append(f"separator of node {t} is not the part intersection")
    return {"depth": depth, "vertices": len(trunc), "ok": not problems, "problems": problems[:20]}


def separator_flags_check(G: GraphOracle, dec: TreeDecomposition, node_depth: int) -> dict:
    from .graph import branch_spanning_tree
    nodes = [t for t in dec.nodes(node_depth) if dec.parent(t) is not None]
    seps = {t: dec.separator(t) for t in nodes}
    connected = all(branch_spanning_tree(G, sorted(s)) is not None for s in seps.values() if s)
    disjoint = all(not (seps[a] & seps[b]) for a, b in itertools.combinations(nodes, 2))
    return {
        "separators-connected": connected,
        "separators-pairwise-disjoint": disjoint,
        "matches_flags": (connected or not dec.flags.get("separators-connected"))
        and (disjoint or not dec.flags.get("separators-pairwise-disjoint")),
    }


# ---------------------------------------------------------------------------
# Transfer along contractions with finite branch sets
# ---------------------------------------------------------------------------


def _tail_outside(end, X: Set[int], d: int) -> int:
    return next(v for i, v in enumerate(end.ray()) if i > d and v not in X)


def direction_transfer_check(G: GraphOracle, P: BranchPartition, depths: Iterable[int] = range(1, 13),
                             end_limit: int = 8, window: Optional[int] = None, budget: int = 4000) -> dict:
    """Compare ``[f(∪X)]`` with the direction's choice ``f_H(X)`` for transferred separators."""
    H = contract(G, P)
    window = window if window is not None else G.default_window
    ends_H = {e.id: e for e in H.ends.ends(end_limit)}
    rows = []
    choice: Dict[Tuple[str, int], FrozenSet[int]] = {}
    for end in G.ends.ends(end_limit):
        eh = ends_H[end.id]
        for d in depths:
            X_H = set(eh.separator(d))
            X_G = {v for b in X_H for v in P.branch_members(b)}
            tail = _tail_outside(end, X_G, d)
            C_G = bounded_component(G, tail, X_G, window=window, budget=budget)
            C_H = bounded_component(H, P.branch_of(tail), X_H, window=window, budget=budget)
            image = frozenset(P.branch_of(v) for v in C_G)
            choice[(end.id, d)] = frozenset(C_H)
            rows.append({"end": end.id, "depth": d, "agree": image == frozenset(C_H)})
    ids = [e.id for e in G.ends.ends(end_limit)]
    distinct = all(any(choice[(a, d)] != choice[(b, d)] for d in depths)
                   for a, b in itertools.combinations(ids, 2))
    discrepancies = sum(1 for r in rows if not r["agree"])
    return {"rows": len(rows), "discrepancies": discrepancies, "distinct_ends_distinguished": distinct,
            "ok": discrepancies == 0 and distinct}


def fan_evidence(G: GraphOracle, end, k: int, window: int, hubs: int = 8) -> bool:
    """Whether some sampled vertex sends ``k`` disjoint paths to the ray inside the first-``window`` truncation."""
    trunc = G.truncate(window=window)
    ray = [v for v in itertools.takewhile(lambda v: v < window, end.ray()) if v in trunc]
    candidates = [v for v in trunc.vertices[:hubs]]
    candidates += [z for z in itertools.islice(end.dominators(), 4) if z in trunc and z not in candidates]
    return any(len(max_fan(trunc, z, [r for r in ray if r != z])) >= k for z in candidates)


def closure_domination_transfer_check(G: GraphOracle, P: BranchPartition, presets: Dict[str, VertexPredicate],
                                      depths: Iterable[int] = range(1, 13), k: int = 16, end_limit: int = 8,
                                      window: Optional[int] = None, fan_window: int = 80) -> dict:
    """Closure membership and domination before and after contracting."""
    from .rayless import fan_transfer_check

    H = contract(G, P)
    window = window if window is not None else G.default_window
    ends_H = {e.id: e for e in H.ends.ends(end_limit)}
    rows = []
    for end in G.ends.ends(end_limit):
        eh = ends_H[end.id]
        for name, U in presets.items():
            U_H = _image_predicate(U, P)
            for d in depths:
                a = end.meets_closure_of(G, U, d, window=window)
                b = eh.meets_closure_of(H, U_H, d, window=window)
                rows.append({"check": "closure", "end": end.id, "preset": name, "depth": d, "agree": a == b})
        dom_g = fan_evidence(G, end, k, fan_window)
        dom_h = fan_evidence(H, eh, k, fan_window)
        rows.append({"check": "domination", "end": end.id, "G": dom_g, "H": dom_h,
                     "declared": end.dominated, "agree": dom_g == dom_h == end.dominated == eh.dominated})
        if end.dominated:
            for kk in range(1, k + 1):
                res = fan_transfer_check(G, P, end, kk)
                rows.append({"check": "fan-transfer", "end": end.id, "k": kk, "agree": res["ok"]})
    discrepancies = [r for r in rows if not r["agree"]]
    return {"rows": len(rows), "discrepancies": len(discrepancies), "failed": discrepancies[:10],
            "ok": not discrepancies}


def _image_predicate(U: VertexPredicate, P: BranchPartition) -> VertexPredicate:
    return lambda b: any(U(v) for v in P.branch_members(b))


def normally_spanned_transfer_check(G: GraphOracle, P: BranchPartition, cover: DispersedCover,
                                    pieces: int = 6, depth: int = 12, end_limit: int = 8,
                                    window: Optional[int] = None) -> dict:
    """Map the cover to the contraction and compare dispersedness evidence piece by piece."""
    H = contract(G, P)
    mapped = cover.mapped(P.branch_of)
    ends_G, ends_H = G.ends.ends(end_limit), H.ends.ends(end_limit)
    rows = []
    for piece, piece_h in zip(cover.pieces_prefix(pieces), mapped.pieces_prefix(pieces)):
        sg, sh = frozenset(piece), frozenset(piece_h)
        ev_g = all(dispersed_evidence(G, sg.__contains__, ends_G, depth, window=window).values())
        ev_h = all(dispersed_evidence(H, sh.__contains__, ends_H, depth, window=window).values())
        rows.append({"piece": sorted(sg), "image": sorted(sh), "G": ev_g, "H": ev_h, "agree": ev_g == ev_h})
    discrepancies = sum(1 for r in rows if not r["agree"])
    return {"cover": mapped, "rows": rows, "discrepancies": discrepancies, "ok": discrepancies == 0}


# ---------------------------------------------------------------------------
# Restricting a displaying decomposition; separator hat
# ---------------------------------------------------------------------------


def _core_nodes(dec: TreeDecomposition, U: VertexPredicate, members: Optional[Sequence[int]],
                horizon: int) -> Tuple[Set[int], bool]:
    """Down-closure of the nodes whose parts meet U, and whether it stays below ``horizon``."""
    if members is not None:
        hits = {t for u in members for t in dec.nodes_of(u)}
    else:
        hits = set()
        for t in dec.nodes(horizon):
            part = dec.part_members(t)
            if part is None or any(U(v) for v in part):
                hits.add(t)
    core: Set[int] = set()
    for t in hits:
        core.update(dec.ancestors(t))
    bounded = all(dec.depth_of(t) < horizon or not dec.children(t) for t in core)
    return core, bounded


@dataclass
class Restriction:
    decomposition: TreeDecomposition
    core: Set[int]
    bounded: bool
    report: dict


def restrict_displaying(G: GraphOracle, dec: TreeDecomposition, U: VertexPredicate,
                        members: Optional[Sequence[int]] = None, horizon: int = 12,
                        closure_depth: int = 12, end_limit: int = 64) -> Restriction:
    """The decomposition induced on the down-closure of the nodes meeting U.

    With an infinite U the down-closure is computed up to ``horizon`` and
    nodes beyond it are kept as they are.
    """
    core, bounded = _core_nodes(dec, U, members, horizon)

    def keep(t: int) -> bool:
        return t in core or (not bounded and dec.depth_of(t) > horizon)

    restricted = TreeDecomposition(
        name=dec.name + "|U",
        root=dec.root,
        children=lambda t: [c for c in dec.children(t) if keep(c)],
        parent=dec.parent,
        part_contains=dec.part_contains,
        part_members=dec.part_members,
        nodes_of=lambda v: [t for t in dec.nodes_of(v) if keep(t)],
        separator=dec.separator,
        flags=dict(dec.flags),
        tau={},
    )
    undominated = [e for e in closure_ends(G, U, closure_depth, limit=end_limit) if not e.dominated]
    displayed = {}
    for end in undominated:
        if end.id not in dec.tau:
            displayed[end.id] = False
            continue
        nodes = dec.tau_nodes(end.id, horizon)
        ok = all(keep(t) or dec.depth_of(t) > horizon for t in nodes)
        displayed[end.id] = ok
        if ok:
            restricted.tau[end.id] = dec.tau[end.id]
    covers = True
    if members is not None:
        covers = all(any(keep(t) for t in dec.nodes_of(u)) for u in members)
    report = {"core_nodes": sorted(core)[:64], "core_size": len(core), "bounded": bounded,
              "displays_closure_ends": displayed, "covers_U": covers,
              "ok": covers and all(displayed.values())}
    return Restriction(restricted, core, bounded, report)


def separator_hat(dec: TreeDecomposition, U: VertexPredicate) -> VertexPredicate:
    """U together with every vertex lying in a separator of ``dec``."""

    def hat(v: int) -> bool:
        if U(v):
            return True
        nodes = set(dec.nodes_of(v))
        return any(dec.parent(t) in nodes for t in nodes)

    return hat


def closure_invariance_check(G: GraphOracle, U: VertexPredicate, U_hat: VertexPredicate,
                             depths: Iterable[int] = range(1, 13), end_limit: int = 16,
                             window: Optional[int] = None) -> dict:
    """For every declared end and depth: C(X_d, end) meets U iff it meets the hat."""
    rows = []
    for end in G.ends.ends(end_limit):
        for d in depths:
            a = end.meets_closure_of(G, U, d, window=window)
            b = end.meets_closure_of(G, U_hat, d, window=window)
            rows.append((end.id, d, a, b))
    bad = [r for r in rows if r[2] != r[3]]
    return {"rows": len(rows), "discrepancies": len(bad), "failed": bad[:10], "ok": not bad}


# ---------------------------------------------------------------------------
# Reflecting trees
# ---------------------------------------------------------------------------


@dataclass
class ReflectingResult:
    tree: Optional[RootedTree]
    route: str
    report: dict


def _part_tree_edges(G: GraphOracle, dec: TreeDecomposition, t: int, children: Sequence[int],
                     U: VertexPredicate) -> Set[Tuple[int, int]]:
    """Rayless tree of one finite part with its separators contracted to dummies, lifted back."""
    from .rayless import build_rayless_tree, lift_rayless

    members = sorted(dec.part_members(t) or ())
    seps = ([dec.separator(t)] if dec.parent(t) is not None else []) + [dec.separator(c) for c in children]
    seps = [s for s in seps if s]
    edges = [(u, v) for u, v in itertools.combinations(members, 2) if G.adjacent(u, v)]
    part = GraphOracle.from_edges(f"{G.name}/part{t}", members, edges, label=G.label)
    P = BranchPartition(sorted(s) for s in seps)
    H = contract(part, P, transfer_ends=False)
    dummies = [min(s) for s in seps]
    U_t = sorted({P.branch_of(v) for v in members if U(v)} | set(dummies))
    if not U_t:
        return set()
    root = dummies[0] if dec.parent(t) is not None else U_t[0]
    cover = DispersedCover.from_list([[root], [u for u in U_t if u != root]])
    res = build_rayless_tree(H, set(U_t).__contains__, cover, steps=len(U_t), depth=len(members) + 1,
                             check=False, lookahead=0)
    lifted = lift_rayless(res.tree, P, part)
    return set(lifted.edges())


def _tree_from_edges(edges: Set[Tuple[int, int]], root: int) -> RootedTree:
    adj: Dict[int, List[int]] = {root: []}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    parent: Dict[int, Optional[int]] = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in sorted(adj[v]):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    if len(parent) != len(adj) or len(edges) != len(adj) - 1:
        raise InvariantViolation("not-a-tree", "part trees do not glue to a tree")
    return RootedTree.from_parents(parent)


def _down_closure_of(T: RootedTree, U: VertexPredicate) -> RootedTree:
    keep: Set[int] = {T.root}
    for v in T.parent:
        if U(v):
            keep.update(T.down_closure(v))
    return RootedTree.from_parents({v: T.parent[v] for v in keep})


def tracking_count(G: GraphOracle, T: RootedTree, end, d: int, gap: int = 2,
                   window: Optional[int] = None, budget: int = 20000) -> int:
    """Components of T inside C(X_d, end) that run from near X_d into C(X_{d+gap}, end)."""
    near = bounded_component(G, end.tail_vertex(d), end.separator(d), window=window, budget=budget)
    far = bounded_component(G, end.tail_vertex(d + gap), end.separator(d + gap), window=window, budget=budget)
    inside = {v for v in T.parent if v in near}
    seen: Set[int] = set()
    count = 0
    for v in sorted(inside):
        if v in seen:
            continue
        comp = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            nbrs = list(T.children[x]) + ([T.parent[x]] if T.parent[x] is not None else [])
            for y in nbrs:
                if y in inside and y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        if comp & far and comp - far:
            count += 1
    return count


def build_reflecting_tree(G: GraphOracle, U: VertexPredicate, cover: DispersedCover, dec: TreeDecomposition,
                          node_depth: int = 10, members: Optional[Sequence[int]] = None, k: int = 8,
                          steps: int = 40, window: Optional[int] = None, end_limit: int = 16) -> ReflectingResult:
    """Tree containing U that reflects the undominated ends in the closure of U.

    Finite parts get their own rayless trees with separators contracted to
    dummy vertices; the lifted part trees glue along the separator spanning
    trees.  A single infinite part falls back to the duality driver.
    """
    from .rayless import theorem1_driver

    window = window if window is not None else G.default_window
    if dec.part_members(dec.root) is None:
        res = theorem1_driver(G, U, cover, k=k, depth=node_depth, steps=steps, window=window,
                              force_complement=True)
        T = res.tree
        route = "driver:" + res.route
    else:
        restriction = restrict_displaying(G, dec, U, members=members, horizon=node_depth + 2)
        rdec = restriction.decomposition
        nodes = [t for t in rdec.nodes(node_depth)]
        node_set = set(nodes)
        edges: Set[Tuple[int, int]] = set()
        for t in nodes:
            kids = [c for c in rdec.children(t) if c in node_set]
            edges |= _part_tree_edges(G, dec, t, kids, U)
        root = G.root if any(G.root in e for e in edges) or not edges else min(min(e) for e in edges)
        T = _down_closure_of(_tree_from_edges(edges, root), U)
        route = "parts"
    assert T is not None
    report: Dict[str, object] = {"route": route, "size": len(T), "radius": T.radius()}
    closure = closure_ends(G, U, min(node_depth, 12), limit=end_limit, window=window)
    tracks = {}
    for end in closure:
        counts = [tracking_count(G, T, end, d, window=window) for d in range(1, max(2, node_depth - 2))]
        tracks[end.id] = {"dominated": end.dominated, "counts": counts}
    report["tracking"] = tracks
    report["reflects"] = all(
        all(c == 1 for c in v["counts"]) if not v["dominated"] else all(c == 0 for c in v["counts"][-2:])
        for v in tracks.values())
    return ReflectingResult(T, route, report)


# ---------------------------------------------------------------------------
# Star-decompositions and dominated subgraphs
# ---------------------------------------------------------------------------


@dataclass
class StarDecomposition:
    G: GraphOracle
    dec: TreeDecomposition
    core: Set[int]
    leaf_roots: List[int]
    bounded: bool

    def central(self, v: int) -> bool:
        return any(t in self.core for t in self.dec.nodes_of(v))

    def leaves_of(self, v: int) -> Set[int]:
        out = set()
        for t in self.dec.nodes_of(v):
            if t in self.core:
                continue
            x = t
            while self.dec.parent(x) is not None and self.dec.parent(x) not in self.core:
                x = self.dec.parent(x)  # type: ignore[assignment]
            out.add(x)
        return out

    def separator(self, c: int) -> FrozenSet[int]:
        return self.dec.separator(c)

    def to_json(self, sample: int = 12) -> dict:
        G = self.G
        core = sorted(self.core)
        central = sorted({v for t in core for v in (self.dec.part_members(t) or ())})
        return {
            "decomposition": self.dec.name,
            "core_nodes": core[:64],
            "central_part_sample": [{"index": v, "label": G.label(v)} for v in central[:sample]],
            "central_part_finite": all(self.dec.part_members(t) is not None for t in core) and self.bounded,
            "leaves": [{"root_node": c, "separator": [{"index": v, "label": G.label(v)}
                                                      for v in sorted(self.separator(c))]}
                       for c in self.leaf_roots[:64]],
            "bounded": self.bounded,
            "flags": dict(sorted(self.dec.flags.items())),
        }


def star_decomposition(G: GraphOracle, U: VertexPredicate, dec: TreeDecomposition,
                       members: Optional[Sequence[int]] = None, horizon: int = 12, closure_depth: int = 12,
                       end_limit: int = 64, force: bool = False) -> StarDecomposition:
    """Contract the down-closure T' of the U-nodes to the centre; each component of D - T' is a leaf.

    Raises DualityViolation when a declared undominated end lies in the
    closure of U, unless ``force`` is set (then the audit is left to judge).
    """
    if not force:
        bad = [e.id for e in closure_ends(G, U, closure_depth, limit=end_limit) if not e.dominated]
        if bad:
            raise DualityViolation(f"undominated end {bad[0]} lies in the closure of U; extract a comb instead")
    core, bounded = _core_nodes(dec, U, members, horizon)
    leaf_roots = sorted({c for t in core for c in dec.children(t) if c not in core})
    return StarDecomposition(G, dec, core, leaf_roots, bounded)


def star_decomposition_audit(sd: StarDecomposition, U: VertexPredicate, members: Optional[Sequence[int]] = None,
                             depths: Sequence[int] = (5, 10, 15), end_limit: int = 16,
                             window: Optional[int] = None) -> dict:
    """(T1)-(T3) on truncations, U inside the centre, undominated ends tracked into leaves."""
    from .graph import branch_spanning_tree

    G = sd.G
    per_depth = []
    for d in depths:
        trunc = _trunc(G, d, window)
        problems = []
        central = {v: sd.central(v) for v in trunc.vertices}
        leaves = {v: sd.leaves_of(v) for v in trunc.vertices}
        for v in trunc.vertices:
            if not central[v] and not leaves[v]:
                problems.append(f"T1: {v}")
            if len(leaves[v]) > 1 and not central[v]:
                problems.append(f"T3: {v}")
            for c in leaves[v]:
                if central[v] and v not in sd.separator(c):
                    problems.append(f"separator: {v} in centre and leaf {c}")
        for u, v in trunc.edges():
            if not ((central[u] and central[v]) or (leaves[u] & leaves[v])):
                problems.append(f"T2: {u}-{v}")
        for c in sd.leaf_roots:
            for v in sd.separator(c):
                if v in trunc and not (central[v] and c in leaves[v]):
                    problems.append(f"separator: {v} of leaf {c}")
        if members is not None:
            u_ok = all(sd.central(u) for u in members)
        else:
            u_ok = all(central[v] for v in trunc.vertices if U(v))
        if not u_ok:
            problems.append("U leaves the central part")
        per_depth.append({"depth": d, "vertices": len(trunc), "ok": not problems, "problems": problems[:10]})
    connected = all(branch_spanning_tree(G, sorted(sd.separator(c))) is not None
                    for c in sd.leaf_roots[:64] if sd.separator(c))
    horizon = 4 * max(depths)
    tracked = {}
    for end in G.ends.ends(end_limit):
        if end.dominated:
            continue
        ray = end.ray_prefix(horizon + max(depths) + 1)
        start = next((i for i, v in enumerate(ray) if i <= horizon and not sd.central(v)), None)
        if start is None:
            tracked[end.id] = None
            continue
        seg = ray[start:start + max(depths)]
        homes = [sd.leaves_of(v) for v in seg]
        ok = all(len(h) == 1 and not sd.central(v) for h, v in zip(homes, seg)) and len({min(h) for h in homes}) == 1
        tracked[end.id] = min(homes[0]) if ok else None
    ok = sd.bounded and connected and all(r["ok"] for r in per_depth) and all(v is not None for v in tracked.values())
    return {"bounded": sd.bounded, "depths": per_depth, "separators_connected": connected,
            "ends_in_leaves": tracked, "ok": ok}


@dataclass
class DominatedSubgraph:
    contains: VertexPredicate
    audit: dict


def dominated_subgraph(sd: StarDecomposition, U: VertexPredicate, members: Optional[Sequence[int]] = None,
                       k: int = 16, depth: int = 12, end_limit: int = 16,
                       window: Optional[int] = None) -> DominatedSubgraph:
    """The subgraph induced by the central part, with a domination audit.

    Every declared end whose ray stays in the subgraph must have a dominator
    in it whose ``k``-fan also stays inside.
    """
    G = sd.G
    trunc = _trunc(G, depth, window)
    inside = [v for v in trunc.vertices if sd.central(v)]
    connected = trunc.induced(inside).is_connected()
    if members is not None:
        has_u = all(sd.central(u) for u in members)
    else:
        has_u = all(sd.central(v) for v in trunc.vertices if U(v))
    ends = {}
    for end in G.ends.ends(end_limit):
        ray = end.ray_prefix(3 * depth + 1)
        if not all(sd.central(v) for v in ray[depth:]):
            continue
        verdict = False
        if end.dominated:
            z = end.first_dominator()
            if z is not None and sd.central(z):
                paths = end.fan(z, k)  # type: ignore[misc]
                used: Set[int] = set()
                verdict = len(paths) == k
                for p in paths:
                    verdict &= p[0] == z and all(G.adjacent(a, b) for a, b in zip(p, p[1:]))
                    verdict &= all(sd.central(v) for v in p) and not (set(p[1:]) & used)
                    used.update(p[1:])
        ends[end.id] = bool(verdict)
    audit = {"connected": connected, "contains_U": has_u, "ends_inside": ends,
             "ok": connected and has_u and all(ends.values())}
    return DominatedSubgraph(sd.central, audit)
