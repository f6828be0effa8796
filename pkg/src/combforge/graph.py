"""Oracle model for countably infinite graphs and finite-stage primitives.

Vertices are natural numbers (their position in the graph's canonical
enumeration).  Neighbour streams are always ascending, which is what makes
every truncation computable: the neighbours of ``v`` below ``n`` are a finite
prefix of ``neighbors(v)`` even when ``v`` has infinite degree.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

Path = List[int]
VertexPredicate = Callable[[int], bool]


class OracleError(Exception):
    """Raised when an oracle is asked for something it cannot represent."""


class PartitionError(OracleError):
    pass


@dataclass(frozen=True, order=True)
class Vertex:
    index: int
    label: str

    def to_json(self) -> dict:
        return {"index": self.index, "label": self.label}


# ---------------------------------------------------------------------------
# Ends
# ---------------------------------------------------------------------------


def _no_vertices() -> Iterator[int]:
    return iter(())


def _never(v: int) -> bool:
    return False


@dataclass(frozen=True)
class EndDescriptor:
    """Declared metadata for one end.

    ``ray`` yields an index-increasing ray.  ``separator(d)`` (d >= 1) is a
    finite vertex set; ``ray[d + 1:]`` lies in one component of ``G - X_d`` and
    those components shrink as ``d`` grows.  ``fan(z, k)`` returns ``k`` paths
    from the dominator ``z`` to the ray, disjoint except at ``z``.
    """

    id: str
    ray: Callable[[], Iterator[int]]
    separator: Callable[[int], FrozenSet[int]]
    dominators: Callable[[], Iterator[int]] = _no_vertices
    dominates: VertexPredicate = _never
    fan: Optional[Callable[[int, int], List[Path]]] = None
    key: int = 0
    note: str = ""

    @property
    def dominated(self) -> bool:
        return self.fan is not None

    def ray_prefix(self, n: int) -> Path:
        return list(itertools.islice(self.ray(), n))

    def tail_vertex(self, d: int) -> int:
        return self.ray_prefix(d + 2)[d + 1]

    def first_dominator(self) -> Optional[int]:
        return next(self.dominators(), None)

    def tail_component(self, G: "GraphOracle", d: int, window: Optional[int] = None,
                       budget: int = 4000) -> Set[int]:
        """Vertices of C(X_d, end) found within the search budget."""
        X = self.separator(d)
        return bounded_component(G, self.tail_vertex(d), X, window=window, budget=budget)

    def meets_closure_of(self, G: "GraphOracle", U: VertexPredicate, depth: int,
                         window: Optional[int] = None, budget: int = 4000) -> bool:
        """Whether C(X_depth, end) contains a U-vertex within the search budget.

        Depth-qualified: ``True`` is a witness, ``False`` only means none was
        found in the budget.
        """
        X = self.separator(depth)
        start = self.tail_vertex(depth)
        return search_component(G, start, X, U, window=window, budget=budget) is not None


@dataclass
class EndRegistry:
    """Declared ends of a family.

    ``ends`` may be an infinite (lazy) stream; ``dominated_by`` maps a vertex to
    the finitely many ends it dominates.
    """

    stream: Callable[[], Iterator[EndDescriptor]] = lambda: iter(())
    dominated_by: Callable[[int], List[EndDescriptor]] = lambda v: []
    note: str = ""

    def ends(self, limit: int = 64) -> List[EndDescriptor]:
        return list(itertools.islice(self.stream(), limit))

    def ends_with_key_below(self, n: int, limit: int = 4096) -> List[EndDescriptor]:
        out = []
        for end in itertools.islice(self.stream(), limit):
            if end.key >= n:
                break
            out.append(end)
        return out

    def get(self, end_id: str, limit: int = 4096) -> EndDescriptor:
        for end in itertools.islice(self.stream(), limit):
            if end.id == end_id:
                return end
        raise KeyError(end_id)


# ---------------------------------------------------------------------------
# The oracle
# ---------------------------------------------------------------------------


class GraphOracle:
    """A countable graph given by an enumeration and ascending neighbour streams."""

    def __init__(
        self,
        name: str,
        *,
        neighbors: Callable[[int], Iterable[int]],
        label: Callable[[int], str] = str,
        adjacent: Optional[Callable[[int, int], bool]] = None,
        order: Optional[int] = None,
        vertices: Optional[Sequence[int]] = None,
        locally_finite: bool = True,
        ends: Optional[EndRegistry] = None,
        root: int = 0,
        default_window: Optional[int] = None,
        member: Optional[VertexPredicate] = None,
    ):
        self.name = name
        self._member = member
        self._neighbors = neighbors
        self._label = label
        self._adjacent = adjacent
        self._vertices = tuple(sorted(vertices)) if vertices is not None else None
        self.order = len(self._vertices) if self._vertices is not None else order
        self.locally_finite = locally_finite
        self.ends = ends if ends is not None else EndRegistry()
        self.root = root
        self.default_window = default_window

    @classmethod
    def from_edges(cls, name: str, vertices: Iterable[int], edges: Iterable[Tuple[int, int]],
                   label: Callable[[int], str] = str, ends: Optional[EndRegistry] = None,
                   root: Optional[int] = None) -> "GraphOracle":
        vs = sorted(set(vertices))
        adj: Dict[int, Set[int]] = {v: set() for v in vs}
        for u, v in edges:
            if u == v:
                raise OracleError(f"loop at {u}")
            adj[u].add(v)
            adj[v].add(u)
        frozen = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        return cls(
            name,
            neighbors=lambda v: frozen[v],
            label=label,
            adjacent=lambda u, v: u in adj and v in adj[u],
            vertices=vs,
            ends=ends,
            root=vs[0] if root is None and vs else (root or 0),
        )

    # -- enumeration --------------------------------------------------------

    @property
    def finite(self) -> bool:
        return self.order is not None

    def vertices(self) -> Iterator[int]:
        if self._vertices is not None:
            return iter(self._vertices)
        if self.order is not None:
            return iter(range(self.order))
        if self._member is not None:
            return (v for v in itertools.count() if self._member(v))
        return itertools.count()

    def has_vertex(self, v: int) -> bool:
        if self._vertices is not None:
            return v in self._vertex_set
        if v < 0:
            return False
        if self._member is not None and not self._member(v):
            return False
        return self.order is None or v < self.order

    @property
    def _vertex_set(self) -> FrozenSet[int]:
        cached = getattr(self, "_vs_cache", None)
        if cached is None:
            cached = frozenset(self._vertices or ())
            self._vs_cache = cached
        return cached

    def vertex(self, v: int) -> Vertex:
        return Vertex(v, self.label(v))

    def label(self, v: int) -> str:
        return self._label(v)

    # -- adjacency ----------------------------------------------------------

    def neighbors(self, v: int) -> Iterator[int]:
        return iter(self._neighbors(v))

    def neighbors_below(self, v: int, bound: Optional[int]) -> List[int]:
        if bound is None:
            if not self.locally_finite:
                raise OracleError(f"{self.name}: unbounded neighbour pull on an infinite-degree graph")
            return list(self.neighbors(v))
        return list(itertools.takewhile(lambda w: w < bound, self.neighbors(v)))

    def adjacent(self, u: int, v: int) -> bool:
        if u == v:
            return False
        if self._adjacent is not None:
            return self._adjacent(u, v)
        for w in self.neighbors(u):
            if w == v:
                return True
            if w > v:
                return False
        return False

    def truncate(self, window: Optional[int] = None, radius: Optional[int] = None,
                 root: Optional[int] = None) -> "Truncation":
        if radius is None:
            return Truncation.first_n(self, window if window is not None else self._need_window())
        return Truncation.ball(self, self.root if root is None else root, radius,
                               window=window if window is not None else self.default_window)

    def _need_window(self) -> int:
        if self.order is not None:
            return max(self.vertices(), default=-1) + 1
        if self.default_window is None:
            raise OracleError(f"{self.name}: a window is required")
        return self.default_window

    def __repr__(self) -> str:
        return f"GraphOracle({self.name!r})"


# ---------------------------------------------------------------------------
# Bounded lazy searches (work on the infinite graph directly)
# ---------------------------------------------------------------------------


def search_component(G: GraphOracle, start: int, blocked: Iterable[int], goal: VertexPredicate,
                     window: Optional[int] = None, budget: int = 4000) -> Optional[int]:
    """BFS from ``start`` in ``G - blocked`` returning the first goal vertex, or None."""
    blocked = set(blocked)
    if start in blocked:
        return None
    if window is None:
        window = G.default_window
    seen = {start}
    queue = deque([start])
    while queue and len(seen) <= budget:
        v = queue.popleft()
        if goal(v):
            return v
        for w in _pull(G, v, window):
            if w not in seen and w not in blocked:
                seen.add(w)
                queue.append(w)
    return None


def bounded_component(G: GraphOracle, start: int, blocked: Iterable[int],
                      window: Optional[int] = None, budget: int = 4000) -> Set[int]:
    blocked = set(blocked)
    if start in blocked:
        return set()
    if window is None:
        window = G.default_window
    seen = {start}
    queue = deque([start])
    while queue and len(seen) < budget:
        v = queue.popleft()
        for w in _pull(G, v, window):
            if w not in seen and w not in blocked:
                seen.add(w)
                queue.append(w)
    return seen


def _pull(G: GraphOracle, v: int, window: Optional[int]) -> List[int]:
    if window is None and not G.locally_finite:
        # lazy graphs without a window: cap each pull
        return list(itertools.islice(G.neighbors(v), 256))
    return G.neighbors_below(v, window)


# ---------------------------------------------------------------------------
# Truncations
# ---------------------------------------------------------------------------


@dataclass
class Truncation:
    """A finite induced subgraph of an oracle."""

    base: Optional[GraphOracle]
    mode: str
    adj: Dict[int, Tuple[int, ...]]

    @classmethod
    def first_n(cls, G: GraphOracle, n: int) -> "Truncation":
        if G.finite:
            vs = list(itertools.takewhile(lambda v: v < n, G.vertices()))
        else:
            vs = [v for v in range(n) if G.has_vertex(v)]
        vset = set(vs)
        adj = {v: tuple(w for w in G.neighbors_below(v, n) if w in vset) for v in vs}
        return cls(G, f"first-{n}", adj)

    @classmethod
    def ball(cls, G: GraphOracle, root: int, radius: int, window: Optional[int] = None,
             blocked: Iterable[int] = ()) -> "Truncation":
        if window is None and not G.locally_finite and not G.finite:
            raise OracleError(f"{G.name}: balls in an infinite-degree graph need a window")
        blocked = set(blocked)
        if root in blocked:
            raise ValueError("root lies in the deleted set")
        dist = {root: 0}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            if dist[v] == radius:
                continue
            for w in G.neighbors_below(v, window):
                if w not in dist and w not in blocked:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        adj = {v: tuple(w for w in G.neighbors_below(v, window) if w in dist) for v in sorted(dist)}
        return cls(G, f"ball({root},{radius})", adj)

    @classmethod
    def from_adjacency(cls, adj: Dict[int, Iterable[int]], base: Optional[GraphOracle] = None,
                       mode: str = "explicit") -> "Truncation":
        return cls(base, mode, {v: tuple(sorted(ns)) for v, ns in sorted(adj.items())})

    # -- basic queries -------------------------------------------------------

    @property
    def vertices(self) -> List[int]:
        return list(self.adj)

    def __contains__(self, v: int) -> bool:
        return v in self.adj

    def __len__(self) -> int:
        return len(self.adj)

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u, ns in self.adj.items() for v in ns if u < v]

    def induced(self, keep: Iterable[int]) -> "Truncation":
        keep = set(keep) & set(self.adj)
        return Truncation(self.base, self.mode + "|induced",
                          {v: tuple(w for w in self.adj[v] if w in keep) for v in sorted(keep)})

    def without(self, X: Iterable[int]) -> "Truncation":
        X = set(X)
        return self.induced(v for v in self.adj if v not in X)

    def component_of(self, v: int) -> Set[int]:
        if v not in self.adj:
            return set()
        seen = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for y in self.adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def components(self) -> List[Set[int]]:
        seen: Set[int] = set()
        out = []
        for v in self.adj:
            if v not in seen:
                comp = self.component_of(v)
                seen |= comp
                out.append(comp)
        return out

    def is_connected(self) -> bool:
        return len(self.adj) == 0 or len(self.component_of(next(iter(self.adj)))) == len(self.adj)

    def distances(self, source: int, allowed: Optional[Set[int]] = None) -> Dict[int, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            for y in self.adj[x]:
                if y not in dist and (allowed is None or y in allowed):
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def shortest_path(self, source: int, target: int, allowed: Optional[Set[int]] = None) -> Optional[Path]:
        """Lexicographically least among the shortest source-target paths.

        ``allowed`` restricts interior vertices; the endpoints are always allowed.
        """
        if source == target:
            return [source]
        inner = None if allowed is None else set(allowed) | {source, target}
        dist = self.distances(target, inner)
        if source not in dist:
            return None
        path = [source]
        while path[-1] != target:
            here = path[-1]
            nxt = min(w for w in self.adj[here] if dist.get(w, -1) == dist[here] - 1)
            path.append(nxt)
        return path


def component_after_deletion(G: GraphOracle, X: Iterable[int], seed: int, depth: int,
                             window: Optional[int] = None) -> Truncation:
    """Depth-``depth`` ball around ``seed`` in the component of ``G - X`` containing it."""
    X = set(X)
    if seed in X:
        raise ValueError("seed lies in the deleted set")
    return Truncation.ball(G, seed, depth, window=window if window is not None else G.default_window,
                           blocked=X)


# ---------------------------------------------------------------------------
# Contraction minors with fixed branch sets
# ---------------------------------------------------------------------------


class BranchPartition:
    """Finitely many declared finite branch sets; every other vertex is a singleton.

    The branch id of a branch is its least vertex.
    """

    def __init__(self, branches: Iterable[Iterable[int]] = ()):
        self._branch_of: Dict[int, int] = {}
        self._members: Dict[int, Tuple[int, ...]] = {}
        for members in branches:
            members = tuple(sorted(set(members)))
            if not members:
                raise PartitionError("empty branch set")
            if len(members) == 1:
                continue
            bid = members[0]
            for v in members:
                if v in self._branch_of:
                    raise PartitionError(f"vertex {v} lies in two branch sets")
                self._branch_of[v] = bid
            self._members[bid] = members
        self.max_member = max(self._branch_of, default=-1)

    @classmethod
    def identity(cls) -> "BranchPartition":
        return cls(())

    def branch_of(self, v: int) -> int:
        return self._branch_of.get(v, v)

    def branch_members(self, b: int) -> Tuple[int, ...]:
        return self._members.get(b, (b,))

    def nontrivial(self) -> Dict[int, Tuple[int, ...]]:
        return dict(self._members)

    def is_rep(self, v: int) -> bool:
        return self._branch_of.get(v, v) == v

    def validate(self, G: GraphOracle) -> None:
        for bid, members in self._members.items():
            if bid != members[0]:
                raise PartitionError("branch ids must be least members")
            if branch_spanning_tree(G, members) is None:
                raise PartitionError(f"branch {bid} does not induce a connected subgraph")

    def branch_spanning_tree(self, G: GraphOracle, b: int) -> Dict[int, Optional[int]]:
        tree = branch_spanning_tree(G, self.branch_members(b))
        if tree is None:
            raise PartitionError(f"branch {b} is disconnected")
        return tree

    def to_json(self) -> list:
        return [list(m) for _, m in sorted(self._members.items())]


def branch_spanning_tree(G: GraphOracle, members: Sequence[int]) -> Optional[Dict[int, Optional[int]]]:
    """BFS parent map of ``G[members]`` rooted at the least member, or None if disconnected."""
    members = sorted(set(members))
    mset = set(members)
    bound = members[-1] + 1
    root = members[0]
    parent: Dict[int, Optional[int]] = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in G.neighbors_below(v, bound):
            if w in mset and w not in parent:
                parent[w] = v
                queue.append(w)
    return parent if len(parent) == len(mset) else None


def _loop_erase(walk: Sequence[int]) -> Path:
    out: Path = []
    pos: Dict[int, int] = {}
    for v in walk:
        if out and out[-1] == v:
            continue
        if v in pos:
            cut = pos[v]
            for w in out[cut + 1:]:
                del pos[w]
            out = out[:cut + 1]
        else:
            pos[v] = len(out)
            out.append(v)
    return out


def map_path(path: Sequence[int], P: BranchPartition) -> Path:
    """Image of a path in the contraction, with loops erased."""
    return _loop_erase([P.branch_of(v) for v in path])


def contract(G: GraphOracle, P: BranchPartition, transfer_ends: bool = True) -> GraphOracle:
    """The contraction minor of ``G`` with the branch sets of ``P``.

    The end registry of the minor is carried over along the direction
    bijection, which needs finite branch sets (all declared branches are).
    """
    P.validate(G)
    M = P.max_member

    def neighbors(b: int) -> Iterator[int]:
        members = P.branch_members(b)
        streams = [G.neighbors(v) for v in members]
        merged = heapq.merge(*streams)
        emitted: Set[int] = set()
        head: List[int] = []
        for w in merged:
            r = P.branch_of(w)
            if w <= M:
                if r != b and r not in emitted:
                    emitted.add(r)
                    head.append(r)
                continue
            if head:
                yield from sorted(head)
                head = []
            if r != b and r not in emitted:
                emitted.add(r)
                yield r
        yield from sorted(head)

    def adjacent(a: int, b: int) -> bool:
        if a == b:
            return False
        for u in P.branch_members(a):
            for v in P.branch_members(b):
                if G.adjacent(u, v):
                    return True
        return False

    def label(b: int) -> str:
        members = P.branch_members(b)
        if len(members) == 1:
            return G.label(b)
        return "[" + ",".join(G.label(v) for v in members) + "]"

    if G.finite:
        kwargs = dict(vertices=[v for v in G.vertices() if P.is_rep(v)])
    else:
        kwargs = dict(member=lambda v: G.has_vertex(v) and P.is_rep(v))
    H = GraphOracle(
        f"{G.name}/contracted",
        neighbors=neighbors,
        label=label,
        adjacent=adjacent,
        locally_finite=G.locally_finite,
        ends=_transfer_registry(G.ends, P) if transfer_ends else EndRegistry(),
        root=P.branch_of(G.root),
        default_window=G.default_window,
        **kwargs,
    )
    H.partition = P  # type: ignore[attr-defined]
    H.parent_graph = G  # type: ignore[attr-defined]
    return H


def _transfer_end(end: EndDescriptor, P: BranchPartition) -> EndDescriptor:
    M = P.max_member

    def ray() -> Iterator[int]:
        prefix: List[int] = []
        it = end.ray()
        for v in it:
            prefix.append(v)
            if v > M:
                break
        erased = _loop_erase([P.branch_of(v) for v in prefix])
        yield from erased
        for v in it:
            yield v

    def separator(d: int) -> FrozenSet[int]:
        return frozenset(P.branch_of(v) for v in end.separator(d))

    def dominators() -> Iterator[int]:
        seen: Set[int] = set()
        for z in end.dominators():
            r = P.branch_of(z)
            if r not in seen:
                seen.add(r)
                yield r

    def dominates(b: int) -> bool:
        return any(end.dominates(v) for v in P.branch_members(b))

    fan = None
    if end.fan is not None:
        def fan(b: int, k: int) -> List[Path]:
            return transfer_fan(end, P, b, k)

    return EndDescriptor(
        id=end.id,
        ray=ray,
        separator=separator,
        dominators=dominators,
        dominates=dominates,
        fan=fan,
        key=P.branch_of(end.key),
        note=(end.note + " (transferred)").strip(),
    )


def transfer_fan(end: EndDescriptor, P: BranchPartition, b: int, k: int) -> List[Path]:
    """Build a ``k``-fan from branch ``b`` to the transferred ray.

    Ever larger fans are pulled from ``G`` and mapped greedily; the paths
    absorbed by a shared branch set are the waste.
    """
    assert end.fan is not None
    members = [z for z in P.branch_members(b) if end.dominates(z)]
    if not members:
        raise OracleError(f"branch {b} holds no dominator of {end.id}")
    z = members[0]
    m = k
    while True:
        raw = end.fan(z, m)
        top = max(p[-1] for p in raw)
        ray_h = {P.branch_of(v) for v in itertools.takewhile(lambda v: v <= top, end.ray())}
        paths = _greedy_disjoint([map_path(p, P) for p in raw], b, ray_h)
        if len(paths) >= k:
            return paths[:k]
        if m > 64 * k + len(P.nontrivial()):
            raise OracleError(f"fan transfer for {end.id} stalled at {len(paths)} of {k}")
        m *= 2


def _greedy_disjoint(paths: Sequence[Path], hub: int, ray: Set[int]) -> List[Path]:
    used: Set[int] = set()
    out = []
    for p in paths:
        if not p or p[0] != hub:
            continue
        # cut at the first ray vertex other than the hub
        cut = next((i for i, v in enumerate(p) if i > 0 and v in ray), None)
        if cut is None:
            continue
        q = p[:cut + 1]
        if any(v in used for v in q[1:]):
            continue
        used.update(q[1:])
        out.append(q)
    return out


def _transfer_registry(reg: EndRegistry, P: BranchPartition) -> EndRegistry:
    def stream() -> Iterator[EndDescriptor]:
        for end in reg.stream():
            yield _transfer_end(end, P)

    def dominated_by(b: int) -> List[EndDescriptor]:
        seen: Dict[str, EndDescriptor] = {}
        for v in P.branch_members(b):
            for end in reg.dominated_by(v):
                seen.setdefault(end.id, end)
        return [_transfer_end(e, P) for e in seen.values()]

    return EndRegistry(stream=stream, dominated_by=dominated_by, note=reg.note)


@dataclass
class PassedOn:
    vertices: List[int]
    edges: List[Tuple[int, int]]
    proper: bool
    bijection: Dict[int, int] = field(default_factory=dict)


def pass_on(vertices: Iterable[int], edges: Iterable[Tuple[int, int]], P: BranchPartition) -> PassedOn:
    """Pass a finite subgraph of ``G`` on to the contraction by ``P``.

    ``proper`` is set when every branch in the image meets the subgraph once.
    """
    vs = sorted(set(vertices))
    hits: Dict[int, List[int]] = {}
    for v in vs:
        hits.setdefault(P.branch_of(v), []).append(v)
    out_edges = set()
    for u, v in edges:
        a, b = P.branch_of(u), P.branch_of(v)
        if a != b:
            out_edges.add((min(a, b), max(a, b)))
    proper = all(len(m) == 1 for m in hits.values())
    bijection = {m[0]: b for b, m in hits.items()} if proper else {}
    return PassedOn(sorted(hits), sorted(out_edges), proper, bijection)


# ---------------------------------------------------------------------------
# Fans inside truncations
# ---------------------------------------------------------------------------


def max_fan(T: Truncation, hub: int, targets: Iterable[int]) -> List[Path]:
    """Maximum hub-targets fan in a truncation (paths disjoint except at ``hub``).

    Unit vertex capacities, augmenting paths found breadth-first.
    """
    targets = set(targets) - {hub}
    # vertex v split into (v, 0) -> (v, 1); hub is uncapacitated
    flow: Dict[Tuple[Tuple[int, int], Tuple[int, int]], int] = {}
    sink = ("sink", 0)

    def cap(a, b) -> int:
        if a[0] == "sink" or b[0] == "sink":
            return 1 if b == sink and a[1] == 1 and a[0] in targets else 0
        if a[0] == b[0]:
            return 1 if a[1] == 0 and b[1] == 1 else 0
        if a[1] == 1 and b[1] == 0 and b[0] in T.adj[a[0]]:
            return 1
        return 0

    def succ(a):
        if a == sink:
            return
        v, side = a
        if side == 0:
            yield (v, 1)
            for w in T.adj[v]:
                yield (w, 1)  # residual of w_out -> v_in
        else:
            if v in targets:
                yield sink
            for w in T.adj[v]:
                yield (w, 0)
            yield (v, 0)

    def residual(a, b) -> int:
        return cap(a, b) - flow.get((a, b), 0) + flow.get((b, a), 0)

    source = (hub, 1)
    paths_found = 0
    while True:
        prev = {source: None}
        queue = deque([source])
        while queue and sink not in prev:
            a = queue.popleft()
            for b in succ(a):
                if b not in prev and b != (hub, 0) and residual(a, b) > 0:
                    prev[b] = a
                    queue.append(b)
        if sink not in prev:
            break
        b = sink
        while prev[b] is not None:
            a = prev[b]
            if flow.get((b, a), 0) > 0:
                flow[(b, a)] -= 1
            else:
                flow[(a, b)] = flow.get((a, b), 0) + 1
            b = a
        paths_found += 1
    # decompose
    out = []
    for w in T.adj[hub]:
        if flow.get((source, (w, 0)), 0) <= 0:
            continue
        path = [hub, w]
        node = (w, 1)
        while node[0] not in targets or flow.get((node, sink), 0) <= 0:
            nxt = next(x for x in T.adj[node[0]] if flow.get((node, (x, 0)), 0) > 0)
            path.append(nxt)
            node = (nxt, 1)
        out.append(path)
    assert len(out) == paths_found
    return sorted(out)
