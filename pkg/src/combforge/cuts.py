"""Fundamental cuts of lazy spanning trees and the cut/reflection consistency report."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .graph import EndDescriptor, GraphOracle
from .normal import LazySpanningTree

Edge = Tuple[int, int]


class _Sides:
    """Membership in the subtree below ``c`` for a parent-link tree, memoized."""

    def __init__(self, T: LazySpanningTree, c: int):
        self.T = T
        self.c = c
        self.memo: Dict[int, bool] = {c: True, T.root: T.root == c}

    def below(self, v: int) -> bool:
        chain = []
        x: Optional[int] = v
        while x is not None and x not in self.memo:
            chain.append(x)
            x = self.T.parent(x)
        result = self.memo.get(x, False) if x is not None else False
        for y in chain:
            self.memo[y] = result
        return result


def is_tree_edge(T: LazySpanningTree, u: int, v: int) -> bool:
    return T.parent(v) == u or T.parent(u) == v


@dataclass
class FundamentalCutReport:
    tree: str
    edge: Edge
    verdict: str  # "finite" or "exceeds-budget"
    count: Optional[int]
    budget: int
    method: str
    cut_sample: List[Edge] = field(default_factory=list)
    hub: Optional[int] = None

    @property
    def finite(self) -> bool:
        return self.verdict == "finite"

    def to_json(self, G: GraphOracle) -> dict:
        ref = lambda v: {"index": v, "label": G.label(v)}
        return {
            "tree": self.tree,
            "edge": [ref(self.edge[0]), ref(self.edge[1])],
            "verdict": self.verdict,
            "count": self.count,
            "budget": self.budget,
            "method": self.method,
            "cut_sample": [[ref(a), ref(b)] for a, b in self.cut_sample],
            "hub": None if self.hub is None else ref(self.hub),
        }


def _explore_side(G: GraphOracle, start: int, inside, budget: int) -> Tuple[str, List[Edge]]:
    """Enumerate one side of T - e completely, or give up.

    Returns ("finite", cut) when the side and all its neighbour streams were
    exhausted, ("cut-budget", cut) when more than ``budget`` cut edges showed
    up, and ("side-budget", cut) when the side outgrew ``budget`` vertices.
    """
    seen = {start}
    queue = deque([start])
    cut: List[Edge] = []
    while queue:
        v = queue.popleft()
        for w in G.neighbors(v):
            if inside(w):
                if w not in seen:
                    if len(seen) >= budget:
                        return "side-budget", cut
                    seen.add(w)
                    queue.append(w)
            else:
                cut.append((v, w))
                if len(cut) > budget:
                    return "cut-budget", cut
    return "finite", cut


def brute_force_cut(G: GraphOracle, T: LazySpanningTree, e: Edge, n: int) -> int:
    """Cut edges of ``e`` among the first-``n`` truncation (independent of the lazy search)."""
    p, c = e
    sides = _Sides(T, c)
    trunc = G.truncate(window=n)
    return sum(1 for u, v in trunc.edges() if sides.below(u) != sides.below(v))


def fundamental_cut(G: GraphOracle, T: LazySpanningTree, e: Edge, budget: int = 10_000,
                    stability: Sequence[int] = (60, 120)) -> FundamentalCutReport:
    """Edges of G joining the two sides of T - e.

    The verdict is finite only when one side was enumerated to exhaustion,
    neighbour streams included.  When both sides outgrow the budget the cut
    is counted on growing first-n truncations and reported finite only if the
    count does not move.
    """
    p, c = e
    if T.parent(c) != p:
        if T.parent(p) == c:
            p, c = c, p
        else:
            raise ValueError(f"{e} is not an edge of {T.name}")
    sides = _Sides(T, c)
    lower = sides.below
    upper = lambda v: not sides.below(v)
    status_c, cut_c = _explore_side(G, c, lower, budget)
    if status_c == "finite":
        return _report(T, (p, c), "finite", cut_c, budget, "finite-side")
    if status_c == "cut-budget":
        return _report(T, (p, c), "exceeds-budget", cut_c, budget, "finite-side")
    status_p, cut_p = _explore_side(G, p, upper, budget)
    if status_p == "finite":
        return _report(T, (p, c), "finite", [(b, a) for a, b in cut_p], budget, "finite-side")
    if status_p == "cut-budget":
        return _report(T, (p, c), "exceeds-budget", cut_p, budget, "finite-side")
    counts = [brute_force_cut(G, T, (p, c), n) for n in stability]
    if len(set(counts)) == 1 and counts[0] <= budget:
        rep = _report(T, (p, c), "finite", [], budget, "truncation-stability")
        rep.count = counts[0]
        return rep
    return _report(T, (p, c), "exceeds-budget", [], budget, "truncation-stability")


def _report(T: LazySpanningTree, e: Edge, verdict: str, cut: List[Edge], budget: int,
            method: str) -> FundamentalCutReport:
    hub = None
    if cut:
        tally: Dict[int, int] = {}
        for a, b in cut:
            tally[a] = tally.get(a, 0) + 1
            tally[b] = tally.get(b, 0) + 1
        hub = min(tally, key=lambda v: (-tally[v], v))
    return FundamentalCutReport(T.name, e, verdict, len(cut) if verdict == "finite" else None,
                                budget, method, cut_sample=sorted(cut)[:12], hub=hub)


def sample_tree_edges(G: GraphOracle, T: LazySpanningTree, n: int = 20) -> List[Edge]:
    out = []
    for v in G.vertices():
        p = T.parent(v)
        if p is not None:
            out.append((p, v))
        if len(out) >= n:
            break
    return out


def t_ray_from(T: LazySpanningTree, end: EndDescriptor, start: int, length: int) -> bool:
    """Whether the end's ray runs along tree edges between indices ``start`` and ``start + length``."""
    ray = end.ray_prefix(start + length + 1)[start:]
    return all(is_tree_edge(T, a, b) for a, b in zip(ray, ray[1:]))


def theorem39_consistency(G: GraphOracle, T: LazySpanningTree, ends: Sequence[EndDescriptor],
                          budget: int = 10_000, edges: int = 20, k: int = 8, pairs: int = 10,
                          ray_start: int = 4, ray_length: int = 16) -> dict:
    """Cross-check sampled fundamental cuts against the declared ends.

    All cuts finite should go with finite separability and T reflecting the
    undominated ends: no T-ray is dominated and distinct T-ends are split by
    a finite cut.  An infinite cut should be explained by a dominated ray of
    T whose dominator is the hub of the cut.
    """
    from .decomposition import fan_evidence

    reports = [fundamental_cut(G, T, e, budget) for e in sample_tree_edges(G, T, edges)]
    all_finite = all(r.finite for r in reports)
    t_ends = [e for e in ends if t_ray_from(T, e, ray_start, ray_length)]
    out: Dict[str, object] = {
        "tree": T.name,
        "edges_sampled": len(reports),
        "all_finite": all_finite,
        "cuts": [(r.edge, r.verdict, r.count) for r in reports],
        "t_ends": [e.id for e in t_ends],
    }
    if all_finite:
        vs = list(itertools.islice(G.vertices(), pairs))
        separated = True
        for u, v in itertools.combinations(vs, 2):
            sides = None
            for x in (u, v):
                if T.parent(x) is not None:
                    sides = _Sides(T, x)
                    if sides.below(u) != sides.below(v):
                        break
            separated &= sides is not None and sides.below(u) != sides.below(v)
        undominated = {e.id: not fan_evidence(G, e, k, window=80) and not e.dominated for e in t_ends}
        split = True
        for a, b in itertools.combinations(t_ends, 2):
            ra, rb = a.ray_prefix(ray_start + ray_length), b.ray_prefix(ray_start + ray_length)
            x = next((w for w, z in zip(ra, rb) if w != z), None)
            if x is None or T.parent(x) is None:
                split = False
                continue
            rep = fundamental_cut(G, T, (T.parent(x), x), budget)  # type: ignore[arg-type]
            s = _Sides(T, x)
            split &= rep.finite and s.below(ra[-1]) != s.below(rb[-1])
        out.update({"finitely_separable_sample": separated, "t_rays_undominated": undominated,
                    "t_ends_split": split,
                    "consistent": separated and all(undominated.values()) and split})
    else:
        attributions = []
        for r in reports:
            if r.finite:
                continue
            culprit = next((e for e in t_ends if e.dominated and r.hub in
                            set(itertools.islice(e.dominators(), 4))), None)
            attributions.append({"edge": r.edge, "hub": r.hub,
                                 "dominated_t_ray": None if culprit is None else culprit.id,
                                 "violated": "reflection" if culprit is not None else "unexplained"})
        out.update({"attributions": attributions,
                    "consistent": all(a["dominated_t_ray"] is not None for a in attributions)})
    return out
