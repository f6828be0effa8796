"""Rooted tree snapshots, dispersed covers and normal trees."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .errors import BudgetExhausted, InvariantViolation
from .graph import EndDescriptor, GraphOracle, Path, Truncation, VertexPredicate


class RootedTree:
    """A finite snapshot of an incrementally grown rooted tree."""

    def __init__(self, root: int):
        self.root = root
        self.parent: Dict[int, Optional[int]] = {root: None}
        self.height: Dict[int, int] = {root: 0}
        self.children: Dict[int, List[int]] = {root: []}
        self.log: List[dict] = []

    @classmethod
    def from_parents(cls, parent: Dict[int, Optional[int]]) -> "RootedTree":
        roots = [v for v, p in parent.items() if p is None]
        if len(roots) != 1:
            raise InvariantViolation("not-a-tree", f"{len(roots)} roots")
        tree = cls(roots[0])
        pending = {v: p for v, p in parent.items() if p is not None}
        while pending:
            ready = sorted(v for v, p in pending.items() if p in tree.parent)
            if not ready:
                raise InvariantViolation("not-a-tree", "parent links contain a cycle or dangle")
            for v in ready:
                tree.attach(v, pending.pop(v))
        return tree

    def __contains__(self, v: int) -> bool:
        return v in self.parent

    def __len__(self) -> int:
        return len(self.parent)

    @property
    def vertices(self) -> List[int]:
        return sorted(self.parent)

    def edges(self) -> List[Tuple[int, int]]:
        return sorted((p, v) if p < v else (v, p) for v, p in self.parent.items() if p is not None)

    def attach(self, v: int, parent: int) -> None:
        if v in self.parent:
            raise InvariantViolation("not-a-tree", f"{v} is already in the tree")
        if parent not in self.parent:
            raise InvariantViolation("not-a-tree", f"parent {parent} is not in the tree")
        self.parent[v] = parent
        self.height[v] = self.height[parent] + 1
        self.children[v] = []
        self.children[parent].append(v)
        self.children[parent].sort()

    def add_path(self, path: Sequence[int], step: Optional[int] = None) -> None:
        """Add a path whose last vertex is in the tree and whose others are new."""
        anchor = path[-1]
        event = {"step": step if step is not None else len(self.log), "path": list(path),
                 "attach": anchor, "height": self.height[anchor]}
        prev = anchor
        for v in reversed(path[:-1]):
            self.attach(v, prev)
            prev = v
        self.log.append(event)

    def down_closure(self, v: int) -> List[int]:
        out = []
        x: Optional[int] = v
        while x is not None:
            out.append(x)
            x = self.parent[x]
        return out[::-1]

    def up_closure(self, v: int) -> List[int]:
        out = []
        stack = [v]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self.children[x])
        return sorted(out)

    def is_ancestor(self, a: int, b: int) -> bool:
        """``a <= b`` in the tree-order."""
        if self.height[a] > self.height[b]:
            return False
        x = b
        while self.height[x] > self.height[a]:
            x = self.parent[x]  # type: ignore[assignment]
        return x == a

    def comparable(self, a: int, b: int) -> bool:
        return self.is_ancestor(a, b) or self.is_ancestor(b, a)

    def radius(self) -> int:
        return max(self.height.values())

    def leaves(self) -> List[int]:
        return sorted(v for v, c in self.children.items() if not c)

    def tree_path(self, a: int, b: int) -> Path:
        da, db = self.down_closure(a), self.down_closure(b)
        i = 0
        while i < min(len(da), len(db)) and da[i] == db[i]:
            i += 1
        return da[i - 1:][::-1] + db[i:]

    def to_json(self, G: Optional[GraphOracle] = None) -> dict:
        def ref(v):
            return {"index": v, "label": G.label(v)} if G is not None else {"index": v}
        return {
            "root": ref(self.root),
            "parents": [[ref(v), ref(p)] for v, p in sorted(self.parent.items()) if p is not None],
            "heights": {str(v): h for v, h in sorted(self.height.items())},
            "log": self.log,
        }


@dataclass
class LazySpanningTree:
    """A family-supplied spanning tree of an infinite graph, given by parent links."""

    name: str
    root: int
    parent: Callable[[int], Optional[int]]

    def snapshot(self, vertices: Iterable[int]) -> RootedTree:
        vs = set(vertices)
        closed: Dict[int, Optional[int]] = {}
        for v in sorted(vs):
            x: Optional[int] = v
            while x is not None and x not in closed:
                p = self.parent(x)
                closed[x] = p
                x = p
        return RootedTree.from_parents(closed)


# ---------------------------------------------------------------------------
# Dispersed covers and the induced well-order
# ---------------------------------------------------------------------------


class DispersedCover:
    """U as an indexed union of finite dispersed pieces.

    Pieces are disjointified on ingestion: a vertex stays only in the first
    piece that lists it.
    """

    def __init__(self, pieces: Callable[[], Iterator[Sequence[int]]], tag: str = "finite"):
        self._pieces = pieces
        self.tag = tag

    @classmethod
    def from_list(cls, pieces: Sequence[Sequence[int]], tag: str = "finite") -> "DispersedCover":
        frozen = [tuple(p) for p in pieces]
        return cls(lambda: iter(frozen), tag)

    def pieces(self) -> Iterator[Tuple[int, ...]]:
        seen: Set[int] = set()
        for piece in self._pieces():
            fresh = tuple(v for v in sorted(set(piece)) if v not in seen)
            seen.update(fresh)
            yield fresh

    def ordered(self) -> Iterator[Tuple[int, int]]:
        """(piece index, vertex) pairs in the induced well-order."""
        for n, piece in enumerate(self.pieces()):
            for v in piece:
                yield n, v

    def prefix(self, count: int) -> List[int]:
        return [v for _, v in itertools.islice(self.ordered(), count)]

    def pieces_prefix(self, count: int) -> List[Tuple[int, ...]]:
        return list(itertools.islice(self.pieces(), count))

    def mapped(self, f: Callable[[int], int]) -> "DispersedCover":
        return DispersedCover(lambda: (tuple(f(v) for v in p) for p in self.pieces()), self.tag)


class WellOrderedU:
    """The cover's vertices ordered piece by piece."""

    def __init__(self, cover: DispersedCover):
        self.cover = cover

    def __iter__(self) -> Iterator[int]:
        return (v for _, v in self.cover.ordered())

    def initial_segment(self, u: int, limit: int = 100000) -> List[int]:
        out = []
        for v in itertools.islice(self, limit):
            if v == u:
                return out
            out.append(v)
        raise KeyError(u)

    def key(self, limit: int = 100000) -> Dict[int, Tuple[int, int]]:
        return {v: (n, i) for i, (n, v) in enumerate(itertools.islice(self.cover.ordered(), limit))}


def dispersed_evidence(G: GraphOracle, U: VertexPredicate, ends: Sequence[EndDescriptor],
                       depth: int, window: Optional[int] = None, budget: int = 4000) -> Dict[str, bool]:
    """Per end: ``True`` when U shows no vertex beyond the end's depth separator.

    A set is dispersed iff no end lies in its closure, so an all-True report
    is depth-qualified evidence of dispersedness.
    """
    return {e.id: not e.meets_closure_of(G, U, depth, window=window, budget=budget) for e in ends}


# ---------------------------------------------------------------------------
# Normality
# ---------------------------------------------------------------------------


def t_path_violation(T: RootedTree, trunc: Truncation) -> Optional[Path]:
    """First T-path of the truncation whose endvertices are incomparable."""
    in_t = [v for v in trunc.vertices if v in T]
    tset = set(in_t)
    candidates: List[Path] = []
    for u in in_t:
        for w in trunc.adj[u]:
            if u < w and w in tset and not T.comparable(u, w):
                candidates.append([u, w])
    rest = trunc.without(tset)
    for comp in rest.components():
        attach = sorted({w for v in comp for w in trunc.adj[v] if w in tset})
        for x, y in itertools.combinations(attach, 2):
            if not T.comparable(x, y):
                path = trunc.shortest_path(x, y, allowed=comp)
                assert path is not None
                candidates.append(path)
                break
    if not candidates:
        return None
    return min(candidates, key=lambda p: (min(p[0], p[-1]), max(p[0], p[-1]), len(p), p))


def check_normal(T: RootedTree, G: GraphOracle, depth: Optional[int] = None,
                 window: Optional[int] = None) -> Optional[Path]:
    """``None`` if ``T`` is normal in the truncation, else a violating T-path."""
    for v, p in T.parent.items():
        if p is not None and not G.adjacent(v, p):
            raise InvariantViolation("not-adjacent", f"tree edge {p}-{v} is not an edge of {G.name}")
    trunc = G.truncate(window=window, radius=depth, root=T.root)
    return t_path_violation(T, trunc)


def build_normal_tree(G: GraphOracle, cover: DispersedCover, steps: int,
                      window: Optional[int] = None, depth: Optional[int] = None) -> RootedTree:
    """Grow a normal tree through the first ``steps`` cover vertices.

    Each new vertex u is joined through its component C of ``trunc - T`` to the
    highest vertex of ``N(C) ∩ T``; that set is a chain while T is normal, so
    attaching there keeps every T-path comparable.
    """
    order = cover.prefix(steps)
    if not order:
        raise ValueError("empty cover")
    trunc = G.truncate(window=window, radius=depth, root=order[0])
    T = RootedTree(order[0])
    T.log.append({"step": 0, "path": [order[0]], "attach": None, "height": 0})
    for step, u in enumerate(order[1:], start=1):
        if u in T:
            continue
        if u not in trunc:
            raise BudgetExhausted("build_normal_tree", f"{u} lies outside the truncation",
                                  progress=len(T))
        comp = trunc.without(T.parent).component_of(u)
        attach = {w for v in comp for w in trunc.adj[v] if w in T}
        if not attach:
            raise BudgetExhausted("build_normal_tree", f"no path from {u} to the tree in the truncation",
                                  progress=len(T))
        top = max(attach, key=lambda w: (T.height[w], -w))
        if not all(T.is_ancestor(w, top) for w in attach):
            raise InvariantViolation("not-normal", f"attachment set of {u} is not a chain")
        path = trunc.shortest_path(u, top, allowed=comp)
        assert path is not None
        T.add_path(path, step=step)
    return T


def separation_check(T: RootedTree, G: GraphOracle, x: int, y: int, depth: Optional[int] = None,
                     window: Optional[int] = None) -> Optional[Path]:
    """``None`` if every x-y path of the truncation meets ⌈x⌉ ∩ ⌈y⌉."""
    X = set(T.down_closure(x)) & set(T.down_closure(y))
    if x in X or y in X:
        return None
    trunc = G.truncate(window=window, radius=depth, root=T.root)
    return trunc.without(X).shortest_path(x, y)


@dataclass
class EndMatch:
    end_id: str
    prefix: Path
    unique: bool


def normal_ray_end_check(T: RootedTree, G: GraphOracle, ends: Sequence[EndDescriptor],
                         depth: Optional[int] = None, window: Optional[int] = None) -> Dict[str, object]:
    """Match each end to the normal-ray prefix of ``T`` that follows it.

    From the root down: after deleting ⌈t⌉, exactly one child of t may share a
    component with the end's ray tail.  When several do (the tree is not
    normal), the child whose subtree holds the tail is followed.
    """
    trunc = G.truncate(window=window, radius=depth, root=T.root)
    matches: List[EndMatch] = []
    for end in ends:
        ray_in = [v for v in itertools.takewhile(lambda v: v <= max(trunc.adj), end.ray()) if v in trunc]
        prefix = [T.root]
        unique = True
        t = T.root
        while T.children[t]:
            X = set(T.down_closure(t))
            tail = next((v for v in reversed(ray_in) if v not in X), None)
            if tail is None:
                break
            comp = trunc.without(X).component_of(tail)
            hits = [c for c in T.children[t] if c in comp]
            if len(hits) > 1:
                # non-normal trees: keep the child whose subtree carries the tail
                deep = next((v for v in reversed(ray_in) if v in T and v not in X), None)
                hits = [c for c in hits if deep in T.up_closure(c)]
                if len(hits) != 1:
                    unique = False
                    break
            if not hits:
                break
            t = hits[0]
            prefix.append(t)
        matches.append(EndMatch(end.id, prefix, unique))
    distinct = len({tuple(m.prefix) for m in matches}) == len(matches)
    return {
        "matches": {m.end_id: m.prefix for m in matches},
        "unique": all(m.unique for m in matches),
        "injective": distinct,
        "ok": all(m.unique for m in matches) and distinct,
    }
