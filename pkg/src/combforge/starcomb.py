"""Finite-stage star-comb search and star extraction in rayless trees."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Union

from .errors import BudgetExhausted
from .graph import EndDescriptor, GraphOracle, Path, Truncation, VertexPredicate, _pull
from .normal import RootedTree


def _ref(G: Optional[GraphOracle], v: int) -> dict:
    return {"index": v, "label": G.label(v) if G is not None else str(v)}


@dataclass
class StarCertificate:
    center: int
    leaves: List[int]
    paths: List[Path]
    degenerate: bool = False

    kind = "star"

    def payload(self, G: Optional[GraphOracle] = None) -> dict:
        return {
            "center": _ref(G, self.center),
            "leaves": [_ref(G, v) for v in self.leaves],
            "paths": [[_ref(G, v) for v in p] for p in self.paths],
            "degenerate": self.degenerate,
        }


@dataclass
class CombCertificate:
    spine: Path
    teeth: List[int]
    tooth_paths: List[Path]
    anchor: Optional[str] = None
    continuation: Optional[str] = None
    undominated: bool = False

    kind = "comb"

    def payload(self, G: Optional[GraphOracle] = None) -> dict:
        return {
            "spine_prefix": [_ref(G, v) for v in self.spine],
            "teeth": [_ref(G, v) for v in self.teeth],
            "tooth_paths": [[_ref(G, v) for v in p] for p in self.tooth_paths],
            "anchor": self.anchor,
            "continuation": self.continuation,
            "undominated": self.undominated,
        }


@dataclass
class FanCertificate:
    dominator: int
    end_id: str
    ray_prefix: Path
    paths: List[Path]

    kind = "fan"

    def payload(self, G: Optional[GraphOracle] = None) -> dict:
        return {
            "dominator": _ref(G, self.dominator),
            "end": self.end_id,
            "ray_prefix": [_ref(G, v) for v in self.ray_prefix],
            "paths": [[_ref(G, v) for v in p] for p in self.paths],
        }


@dataclass
class NotFound:
    reason: str
    candidate: Optional[int] = None
    degenerate: Optional[StarCertificate] = None

    kind = "not-found"


Certificate = Union[StarCertificate, CombCertificate, FanCertificate]


# ---------------------------------------------------------------------------
# Combs along declared rays
# ---------------------------------------------------------------------------


def closure_ends(G: GraphOracle, U: VertexPredicate, depth: int, limit: int = 64,
                 window: Optional[int] = None, budget: int = 4000) -> List[EndDescriptor]:
    """Registry ends (first ``limit``) whose depth separator leaves U on the end's side."""
    return [e for e in G.ends.ends(limit)
            if e.meets_closure_of(G, U, depth, window=window, budget=budget)]


def _side_path(G: GraphOracle, start: int, blocked: Set[int], U: VertexPredicate,
               window: Optional[int], budget: int) -> Optional[Path]:
    parent: Dict[int, Optional[int]] = {start: None}
    queue = deque([start])
    while queue and len(parent) <= budget:
        v = queue.popleft()
        if v != start and U(v):
            path = [v]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])  # type: ignore[arg-type]
            return path[::-1]
        for w in _pull(G, v, window):
            if w not in parent and w not in blocked:
                parent[w] = v
                queue.append(w)
    return None


def comb_along_end(G: GraphOracle, end: EndDescriptor, U: VertexPredicate, k: int, depth: int,
                   window: Optional[int] = None, budget: int = 2000) -> CombCertificate:
    """A comb with ``k`` teeth whose spine is a prefix of the end's declared ray.

    Teeth come from the tail beyond ``X_k`` so they lie in ``C(X_k, end)``.
    """
    if window is None:
        window = G.default_window
    horizon = max(4 * depth, 4 * k + 8)
    ray = end.ray_prefix(horizon)
    ray_set = set(ray)
    X = end.separator(k)
    start = next(i for i, v in enumerate(ray) if i > k and v not in X)
    used: Set[int] = set()
    teeth: List[int] = []
    paths: List[Path] = []
    last = start
    for i in range(start, len(ray)):
        if len(teeth) == k:
            break
        p = ray[i]
        if U(p):
            path = [p]
        else:
            path = _side_path(G, p, ray_set | used | set(X), U, window, budget)
            if path is None:
                continue
        used.update(path)
        teeth.append(path[-1])
        paths.append(path)
        last = i
    if len(teeth) < k:
        raise BudgetExhausted("star_comb", f"only {len(teeth)} of {k} teeth along {end.id}", progress=len(teeth))
    return CombCertificate(spine=ray[:last + 1], teeth=teeth, tooth_paths=paths, anchor=end.id,
                           undominated=not end.dominated)


# ---------------------------------------------------------------------------
# Breadth-first search for either structure
# ---------------------------------------------------------------------------


def _bfs_tree(G: GraphOracle, root: int, depth: int, window: Optional[int], budget: int) -> RootedTree:
    T = RootedTree(root)
    frontier = [root]
    for _ in range(depth):
        nxt = []
        for v in frontier:
            for w in _pull(G, v, window):
                if w not in T:
                    T.attach(w, v)
                    nxt.append(w)
                    if len(T) >= budget:
                        return T
        if not nxt:
            break
        frontier = nxt
    return T


def _first_u_below(T: RootedTree, c: int, U: VertexPredicate) -> Optional[int]:
    queue = deque([c])
    while queue:
        x = queue.popleft()
        if U(x):
            return x
        queue.extend(T.children[x])
    return None


def _u_bearing(T: RootedTree, U: VertexPredicate) -> Dict[int, bool]:
    bearing: Dict[int, bool] = {}
    for v in sorted(T.parent, key=lambda x: -T.height[x]):
        bearing[v] = U(v) or any(bearing[c] for c in T.children[v])
    return bearing


def star_in_tree(T: RootedTree, U: VertexPredicate, k: int) -> Optional[StarCertificate]:
    """Deepest vertex (lowest index on ties) with ``k`` U-bearing child subtrees."""
    bearing = _u_bearing(T, U)
    best = None
    for v in T.parent:
        arms = [c for c in T.children[v] if bearing[c]]
        if len(arms) >= k:
            key = (-T.height[v], v)
            if best is None or key < best[0]:
                best = (key, v, arms[:k])
    if best is None:
        return None
    _, center, arms = best
    leaves, paths = [], []
    for c in arms:
        leaf = _first_u_below(T, c, U)
        assert leaf is not None
        leaves.append(leaf)
        paths.append(T.tree_path(center, leaf))
    return StarCertificate(center, leaves, paths, degenerate=k < 3)


def _comb_in_tree(T: RootedTree, U: VertexPredicate, k: int) -> Optional[CombCertificate]:
    best: Dict[int, int] = {}
    for v in sorted(T.parent, key=lambda x: -T.height[x]):
        below = max((best[c] for c in T.children[v]), default=0)
        best[v] = below + (1 if U(v) else 0)
    if best[T.root] < k:
        return None
    spine = [T.root]
    count = 1 if U(T.root) else 0
    while count < k:
        v = spine[-1]
        need = best[v] - (1 if U(v) else 0)
        nxt = min(c for c in T.children[v] if best[c] == need)
        spine.append(nxt)
        count += 1 if U(nxt) else 0
    teeth = [v for v in spine if U(v)]
    return CombCertificate(spine=spine, teeth=teeth, tooth_paths=[[v] for v in teeth],
                           continuation="bfs-branch")


def star_comb(G: GraphOracle, U: VertexPredicate, k: int, depth: int, window: Optional[int] = None,
              end_limit: int = 64, budget: int = 20000) -> Union[StarCertificate, CombCertificate]:
    """Find a star with ``k`` leaves in U or a comb with ``k`` teeth in U.

    Declared ends whose closure contains U are tried first, so combs come out
    anchored to a registry ray.  Otherwise a breadth-first tree from the root
    is searched.  Raises BudgetExhausted when neither shows up.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if window is None:
        window = G.default_window
    for end in closure_ends(G, U, depth=min(depth, 12), limit=end_limit, window=window):
        try:
            return comb_along_end(G, end, U, k, depth, window=window)
        except BudgetExhausted:
            continue
    T = _bfs_tree(G, G.root, depth, window, budget)
    star = star_in_tree(T, U, k)
    if star is not None:
        return star
    comb = _comb_in_tree(T, U, k)
    if comb is not None:
        return comb
    raise BudgetExhausted("star_comb", f"no star or comb with {k} U-vertices within depth {depth}",
                          progress=sum(1 for v in T.parent if U(v)))


def star_in_rayless_tree(T: RootedTree, U: VertexPredicate, k: int) -> Union[StarCertificate, NotFound]:
    """A star attached to U inside the up-closure of its centre.

    When no vertex has ``k`` U-bearing children, the result is NotFound and
    carries the deepest vertex whose up-closure still holds ``k`` U-vertices,
    together with the star it does span (flagged degenerate).
    """
    hits = [v for v in T.parent if U(v)]
    if len(hits) < k:
        return NotFound(f"only {len(hits)} U-vertices in the tree")
    star = star_in_tree(T, U, k)
    if star is not None:
        return star
    count: Dict[int, int] = {}
    for v in sorted(T.parent, key=lambda x: -T.height[x]):
        count[v] = (1 if U(v) else 0) + sum(count[c] for c in T.children[v])
    candidate = min((v for v in T.parent if count[v] >= k), key=lambda v: (-T.height[v], v))
    bearing = _u_bearing(T, U)
    leaves, paths = [], []
    for c in T.children[candidate]:
        if bearing[c]:
            leaf = _first_u_below(T, c, U)
            assert leaf is not None
            leaves.append(leaf)
            paths.append(T.tree_path(candidate, leaf))
    return NotFound(f"no vertex has {k} U-bearing child subtrees", candidate,
                    StarCertificate(candidate, leaves, paths, degenerate=True))


def fan_certificate(G: GraphOracle, end: EndDescriptor, k: int) -> FanCertificate:
    if end.fan is None:
        raise BudgetExhausted("fan", f"{end.id} declares no dominator")
    z = end.first_dominator()
    assert z is not None
    paths = end.fan(z, k)
    top = max(p[-1] for p in paths)
    prefix = list(itertools.takewhile(lambda v: v <= top, end.ray()))
    return FanCertificate(z, end.id, prefix, paths)


def fan_number(T: Truncation, hub: int, targets: Sequence[int]) -> int:
    from .graph import max_fan
    return len(max_fan(T, hub, [t for t in targets if t in T]))
