"""Breadth-first rayless trees, domination contractions and the duality driver."""

from __future__ import annotations

import copy
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple, Union

from .errors import BudgetExhausted, InvariantViolation, PreconditionViolation
from .graph import (BranchPartition, EndDescriptor, GraphOracle, PassedOn, Path, Truncation, VertexPredicate,
                    branch_spanning_tree, contract, map_path, pass_on, transfer_fan)
from .normal import DispersedCover, RootedTree, WellOrderedU, build_normal_tree, t_path_violation
from .starcomb import CombCertificate, closure_ends, comb_along_end


# ---------------------------------------------------------------------------
# Breadth-first attachment steps
# ---------------------------------------------------------------------------


@dataclass
class RaylessBuildState:
    tree: RootedTree
    trunc: Truncation
    consumed: List[int] = field(default_factory=list)
    step: int = 0

    @property
    def log(self) -> List[dict]:
        return self.tree.log

    def copy(self) -> "RaylessBuildState":
        return RaylessBuildState(copy.deepcopy(self.tree), self.trunc, list(self.consumed), self.step)


def _component_avoiding(trunc: Truncation, u: int, blocked: Set[int]) -> Tuple[Set[int], Set[int]]:
    """Component of ``u`` in ``trunc - blocked`` and its neighbours in ``blocked``."""
    comp = {u}
    touch: Set[int] = set()
    queue = deque([u])
    while queue:
        v = queue.popleft()
        for w in trunc.adj[v]:
            if w in blocked:
                touch.add(w)
            elif w not in comp:
                comp.add(w)
                queue.append(w)
    return comp, touch


def _lex_shortest(trunc: Truncation, source: int, target: int, allowed: Set[int]) -> Path:
    """Lexicographically least shortest source-target path with interior in ``allowed``."""
    dist = {target: 0}
    queue = deque([target])
    while queue and source not in dist:
        v = queue.popleft()
        for w in trunc.adj[v]:
            if w not in dist and (w in allowed or w == source):
                dist[w] = dist[v] + 1
                queue.append(w)
    if source not in dist:
        raise InvariantViolation("no-path", f"{source} cannot reach {target}")
    path = [source]
    while path[-1] != target:
        here = path[-1]
        path.append(min(w for w in trunc.adj[here] if dist.get(w, -1) == dist[here] - 1))
    return path


def rayless_step(state: RaylessBuildState, u: int) -> RaylessBuildState:
    """Join ``u`` to the tree by a path whose tree endvertex has minimal height.

    Ties go to the lowest endvertex index, then to the lexicographically least
    shortest path.
    """
    T, trunc = state.tree, state.trunc
    state.step += 1
    state.consumed.append(u)
    if u in T:
        return state
    if u not in trunc:
        raise BudgetExhausted("rayless_step", f"{u} lies outside the truncation", progress=len(T))
    comp, touch = _component_avoiding(trunc, u, set(T.parent))
    if not touch:
        raise BudgetExhausted("rayless_step", f"no path from {u} to the tree within the truncation",
                              progress=len(T))
    end = min(touch, key=lambda w: (T.height[w], w))
    path = _lex_shortest(trunc, u, end, comp)
    T.add_path(path, step=state.step)
    return state


def verify_minimal_attachments(tree: RootedTree, trunc: Truncation) -> List[dict]:
    """Replay the growth log and re-check every attachment height.

    Reachability is recomputed per tree vertex with a depth-first search,
    independently of the search used while building.
    """
    problems = []
    replay = RootedTree(tree.root)
    for event in tree.log:
        path = event["path"]
        u, anchor = path[0], path[-1]
        if event.get("attach") is None:
            continue
        if anchor not in replay:
            problems.append({"step": event["step"], "problem": "anchor not yet in tree"})
            break
        reachable = []
        for w in replay.parent:
            stack, seen = [u], {u}
            found = False
            while stack and not found:
                v = stack.pop()
                for x in trunc.adj[v]:
                    if x == w:
                        found = True
                        break
                    if x not in seen and x not in replay.parent:
                        seen.add(x)
                        stack.append(x)
            if found:
                reachable.append(w)
        best = min(replay.height[w] for w in reachable) if reachable else None
        if best != replay.height[anchor] or event["height"] != best:
            problems.append({"step": event["step"], "chosen": replay.height[anchor], "minimal": best})
        if any(v in replay for v in path[:-1]):
            problems.append({"step": event["step"], "problem": "path meets the tree twice"})
            break
        replay.add_path(path, step=event["step"])
    return problems


# ---------------------------------------------------------------------------
# Whole rayless builds
# ---------------------------------------------------------------------------


@dataclass
class RaylessResult:
    tree: RootedTree
    state: RaylessBuildState
    audit: dict


def dominator_in(end: EndDescriptor, U: VertexPredicate, limit: int = 64) -> Optional[int]:
    return next((z for z in itertools.islice(end.dominators(), limit) if U(z)), None)


def _closure_scope(G: GraphOracle, U: VertexPredicate, depth: int, end_limit: int,
                   window: Optional[int], scope: Optional[Sequence[EndDescriptor]]) -> List[EndDescriptor]:
    if scope is not None:
        return [e for e in scope if e.meets_closure_of(G, U, depth, window=window)]
    return closure_ends(G, U, depth, limit=end_limit, window=window)


def check_rayless_preconditions(G: GraphOracle, U: VertexPredicate, depth: int = 12, end_limit: int = 64,
                                window: Optional[int] = None,
                                scope: Optional[Sequence[EndDescriptor]] = None) -> Dict[str, Optional[int]]:
    """Map each closure end to a dominator in U; raise if one has none."""
    out: Dict[str, Optional[int]] = {}
    for end in _closure_scope(G, U, depth, end_limit, window, scope):
        z = dominator_in(end, U)
        if z is None:
            raise PreconditionViolation(f"end {end.id} lies in the closure of U but has no dominator in U")
        out[end.id] = z
    return out


def build_rayless_tree(G: GraphOracle, U: VertexPredicate, cover: DispersedCover, steps: int,
                       depth: int, window: Optional[int] = None, closure_depth: int = 12,
                       end_limit: int = 64, scope: Optional[Sequence[EndDescriptor]] = None,
                       lookahead: int = 16, check: bool = True) -> RaylessResult:
    """Run ``steps`` breadth-first steps over the cover's order and audit growth."""
    if window is None:
        window = G.default_window
    dominators = check_rayless_preconditions(G, U, closure_depth, end_limit, window, scope) if check else {}
    order = list(itertools.islice(iter(WellOrderedU(cover)), steps + lookahead))
    if not order:
        raise ValueError("empty cover")
    root = order[0]
    trunc = G.truncate(window=window, radius=depth, root=root)
    state = RaylessBuildState(RootedTree(root), trunc)
    state.tree.log.append({"step": 0, "path": [root], "attach": None, "height": 0})
    state.consumed.append(root)
    for u in order[1:steps]:
        rayless_step(state, u)
    audit = growth_audit(state, order[steps:])
    audit["dominators_in_U"] = dominators
    return RaylessResult(state.tree, state, audit)


def growth_audit(state: RaylessBuildState, pending: Sequence[int]) -> dict:
    """Per branch at the root: height, size and whether pending vertices still land in it."""
    T = state.tree
    probe = state.copy()
    landed: Set[int] = set()
    for u in pending:
        if u not in probe.trunc or u in probe.tree:
            continue
        try:
            rayless_step(probe, u)
        except BudgetExhausted:
            continue
        anchor = probe.tree.log[-1]["attach"]
        if anchor in T and anchor != T.root:
            landed.add(T.down_closure(anchor)[1])
    branches = {}
    for c in T.children[T.root]:
        sub = T.up_closure(c)
        branches[str(c)] = {
            "size": len(sub),
            "max_height": max(T.height[v] for v in sub),
            "stopped": c not in landed,
            # no lookahead vertex enlarged the branch
            "finite": len(probe.tree.up_closure(c)) == len(sub),
        }
    return {
        "radius": T.radius(),
        "size": len(T),
        "branches": branches,
        "stopped_branches_finite": all(b["finite"] for b in branches.values() if b["stopped"]),
    }


# ---------------------------------------------------------------------------
# Hat closure
# ---------------------------------------------------------------------------


@dataclass
class HatClosure:
    U: VertexPredicate
    ends: List[str]
    _G: GraphOracle
    depth: int
    window: Optional[int]
    _memo: Dict[str, bool] = field(default_factory=dict)

    def _in_closure(self, end: EndDescriptor) -> bool:
        if end.id not in self._memo:
            self._memo[end.id] = end.meets_closure_of(self._G, self.U, self.depth, window=self.window)
        return self._memo[end.id]

    def __call__(self, v: int) -> bool:
        return self.U(v) or any(self._in_closure(e) for e in self._G.ends.dominated_by(v))


def hat_closure(G: GraphOracle, U: VertexPredicate, depth: int = 12, end_limit: int = 64,
                window: Optional[int] = None) -> HatClosure:
    """U together with the declared dominators of ends in its closure."""
    if window is None:
        window = G.default_window
    ends = [e.id for e in closure_ends(G, U, depth, limit=end_limit, window=window)]
    return HatClosure(U, ends, G, depth, window)


# ---------------------------------------------------------------------------
# Domination contraction
# ---------------------------------------------------------------------------


@dataclass
class RayChoice:
    end_id: str
    ray: Path
    dominator: int
    component: Optional[List[int]]
    path: Optional[Path]


@dataclass
class DominationContraction:
    G: GraphOracle
    T: RootedTree
    choices: List[RayChoice]
    stars: Dict[int, List[int]]
    partition: BranchPartition
    passed_on: PassedOn
    scope: List[EndDescriptor]
    audit: dict

    def contracted(self) -> GraphOracle:
        return contract(self.G, self.partition)


def normal_ray_prefix(T: RootedTree, end: EndDescriptor) -> Path:
    """Longest prefix of the end's ray that descends along T from its root."""
    prefix: Path = []
    for v in end.ray():
        if v not in T:
            break
        if prefix and T.parent[v] != prefix[-1]:
            break
        if not prefix and v != T.root:
            break
        prefix.append(v)
    return prefix


def rays_in_scope(T: RootedTree, ends: Sequence[EndDescriptor]) -> List[Tuple[EndDescriptor, Path]]:
    """Ends whose ray runs down T to a leaf; one end per normal-ray prefix."""
    seen: Set[Tuple[int, ...]] = set()
    out = []
    for end in ends:
        prefix = normal_ray_prefix(T, end)
        if not prefix or T.children[prefix[-1]]:
            continue
        key = tuple(prefix)
        if key in seen:
            continue
        seen.add(key)
        out.append((end, prefix))
    return out


def build_domination_contraction(G: GraphOracle, T: RootedTree, ends: Sequence[EndDescriptor],
                                 depth: int, window: Optional[int] = None) -> DominationContraction:
    """Contract, for each normal ray R of T, a star S_R from its dominator onto R."""
    if window is None:
        window = G.default_window
    trunc = G.truncate(window=window, radius=depth, root=T.root)
    scoped = rays_in_scope(T, ends)
    tset = set(T.parent)
    choices: List[RayChoice] = []
    seen_components: Dict[Tuple[int, ...], str] = {}
    problems = []
    for end, ray in scoped:
        z = end.first_dominator()
        if z is None:
            raise PreconditionViolation(f"normal ray of {end.id} has no declared dominator")
        if z in tset:
            choices.append(RayChoice(end.id, ray, z, None, None))
            continue
        if z not in trunc:
            raise BudgetExhausted("build_domination_contraction", f"dominator {z} lies outside the truncation")
        comp, touch = _component_avoiding(trunc, z, tset)
        landing = sorted(touch & set(ray))
        if not landing:
            raise BudgetExhausted("build_domination_contraction", f"no {z}-ray path for {end.id} in the truncation")
        key = tuple(sorted(comp))
        if key in seen_components:
            problems.append(f"{end.id} and {seen_components[key]} share a component of G - T")
        seen_components[key] = end.id
        path = _lex_shortest(trunc, z, landing[0], comp)
        choices.append(RayChoice(end.id, ray, z, sorted(comp), path))
    stars: Dict[int, Set[int]] = {}
    for ch in choices:
        if ch.path is not None:
            stars.setdefault(ch.path[-1], set()).update(ch.path)
    star_lists = {c: sorted(m) for c, m in sorted(stars.items())}
    P = BranchPartition(star_lists.values())
    P.validate(G)
    passed = pass_on(T.vertices, T.edges(), P)
    meets_once = all(len(set(m) & tset) == 1 for m in star_lists.values())
    audit = {
        "rays_in_scope": len(scoped),
        "contracted_rays": sum(1 for ch in choices if ch.path is not None),
        "stars": len(star_lists),
        "stars_meet_T_once": meets_once,
        "properly_passed_on": passed.proper,
        "branches_have_rayless_spanning_trees": True,
        "problems": problems,
    }
    if not meets_once or not passed.proper:
        raise InvariantViolation("not-passed-on", "a star meets the normal tree more than once")
    return DominationContraction(G, T, choices, star_lists, P, passed, [e for e, _ in scoped], audit)


def passed_on_tree(dc: DominationContraction) -> RootedTree:
    """The normal tree as a tree of the contraction (needs a proper pass-on)."""
    P, T = dc.partition, dc.T
    return RootedTree.from_parents({P.branch_of(v): (None if p is None else P.branch_of(p))
                                    for v, p in T.parent.items()})


# ---------------------------------------------------------------------------
# Lifting and fan transfer
# ---------------------------------------------------------------------------


def lift_rayless(tree_H: RootedTree, P: BranchPartition, G: GraphOracle) -> RootedTree:
    """Union of branch spanning trees plus one host edge per tree edge."""
    edges: Set[Tuple[int, int]] = set()
    for b in tree_H.parent:
        parent_map = P.branch_spanning_tree(G, b)
        edges.update((min(v, p), max(v, p)) for v, p in parent_map.items() if p is not None)
    for b, a in tree_H.parent.items():
        if a is None:
            continue
        pairs = [(u, v) for u in P.branch_members(a) for v in P.branch_members(b) if G.adjacent(u, v)]
        if not pairs:
            raise InvariantViolation("not-adjacent", f"branches {a} and {b} are not joined in {G.name}")
        u, v = min(pairs)
        edges.add((min(u, v), max(u, v)))
    adj: Dict[int, List[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    root = P.branch_members(tree_H.root)[0]
    adj.setdefault(root, [])
    parent: Dict[int, Optional[int]] = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in sorted(adj[v]):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    if len(parent) != len(adj) or len(edges) != len(adj) - 1:
        raise InvariantViolation("not-a-tree", "lifted edge set is not a tree")
    return RootedTree.from_parents(parent)


def fan_transfer_check(G: GraphOracle, P: BranchPartition, end: EndDescriptor, k: int) -> dict:
    """Turn a declared ``k``-fan in G into a fan in the contraction and verify it there."""
    if end.fan is None:
        return {"end": end.id, "dominated": False}
    z = end.first_dominator()
    assert z is not None
    hub = P.branch_of(z)
    raw = end.fan(z, k)
    mapped = transfer_fan(end, P, hub, k)
    H = contract(G, P)
    ray_h = set(map_path(list(itertools.takewhile(lambda v: v <= max(p[-1] for p in raw) * 4 + 8, end.ray())), P))
    ok = len(mapped) == k
    used: Set[int] = set()
    for p in mapped:
        ok &= p[0] == hub and p[-1] in ray_h and all(H.adjacent(a, b) for a, b in zip(p, p[1:]))
        ok &= not (set(p[1:]) & used)
        used.update(p[1:])
    direct = _greedy_count(raw, P, hub, ray_h)
    return {"end": end.id, "dominated": True, "hub": hub, "k": k, "k_transferred": len(mapped),
            "waste": k - direct, "ok": bool(ok)}


def _greedy_count(raw: Sequence[Path], P: BranchPartition, hub: int, ray_h: Set[int]) -> int:
    from .graph import _greedy_disjoint
    return len(_greedy_disjoint([map_path(p, P) for p in raw], hub, ray_h))


# ---------------------------------------------------------------------------
# The duality driver
# ---------------------------------------------------------------------------


@dataclass
class DriverResult:
    route: str
    comb: Optional[CombCertificate] = None
    tree: Optional[RootedTree] = None
    audit: dict = field(default_factory=dict)

    @property
    def outcome(self) -> str:
        return "comb" if self.comb is not None else "rayless-tree"


def theorem1_driver(G: GraphOracle, U: VertexPredicate, cover: DispersedCover, k: int = 8, depth: int = 12,
                    steps: int = 40, window: Optional[int] = None, end_limit: int = 64,
                    closure_depth: Optional[int] = None, force_complement: bool = False) -> DriverResult:
    """Either an undominated comb attached to U or a rayless tree containing a U-prefix.

    Routes: ``comb`` when a declared undominated end lies in the closure of U;
    ``direct`` when every closure end has a dominator inside U; otherwise
    ``contraction`` (normal tree, domination contraction, rayless tree in the
    minor, lift).  ``force_complement`` skips the comb route so the
    complementary construction can be tried on its own.
    """
    if window is None:
        window = G.default_window
    cdepth = closure_depth if closure_depth is not None else min(depth, 12)
    closure = closure_ends(G, U, cdepth, limit=end_limit, window=window)
    undominated = [e for e in closure if not e.dominated]
    base = {"closure_ends": [e.id for e in closure], "undominated_closure_ends": [e.id for e in undominated]}
    if undominated and not force_complement:
        comb = comb_along_end(G, undominated[0], U, k, depth, window=window)
        return DriverResult("comb", comb=comb, audit=base)
    missing = [e.id for e in closure if dominator_in(e, U) is None]
    base["ends_without_dominator_in_U"] = missing
    if not missing:
        res = build_rayless_tree(G, U, cover, steps, depth, window=window, closure_depth=cdepth,
                                 end_limit=end_limit)
        return DriverResult("direct", tree=res.tree, audit={**base, **res.audit})
    T = build_normal_tree(G, cover, steps, window=window, depth=depth)
    dc = build_domination_contraction(G, T, G.ends.ends(end_limit), depth, window=window)
    P = dc.partition
    H = contract(G, P)
    U_H = lambda b: any(U(v) for v in P.branch_members(b))
    scope_H = [e for e in H.ends.ends(end_limit) if e.id in {s.id for s in dc.scope}]
    res = build_rayless_tree(H, U_H, cover.mapped(P.branch_of), steps, depth, window=window,
                             closure_depth=cdepth, scope=scope_H)
    lifted = lift_rayless(res.tree, P, G)
    T_H = passed_on_tree(dc)
    trunc_H = H.truncate(window=window, radius=depth, root=T_H.root)
    audit = {
        **base,
        **res.audit,
        "normal_tree_size": len(T),
        "contraction": dc.audit,
        "passed_on_tree_normal_in_minor": t_path_violation(T_H, trunc_H) is None,
        "lifted_size": len(lifted),
    }
    return DriverResult("contraction", tree=lifted, audit=audit)
