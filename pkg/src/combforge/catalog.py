"""Curated infinite graph families with declared ends, presets and decompositions.

Index schemes (every vertex appears at a predictable finite position):

* ray: ``v_i = i``
* ladder: ``b_i = 2i`` (bottom rail), ``t_i = 2i + 1`` (top rail)
* grid: breadth-first by diamonds ``|x| + |y| = r`` around the origin
* fan: apex ``0``, ray vertex ``v_i = i + 1``
* complete-graph, infinite-star: ``i``; the star's hub is ``0``
* binary-tree: heap order, children of ``h`` are ``2h + 1`` (left), ``2h + 2``
* binary-tree-with-tops: tree node ``h`` at ``2h``, the top of anchor ``a`` at ``a + 1``
* tree-t3: level order, root of degree 3 and every other vertex with 2 children
* comb: spine ``s_i = 2i``, tooth ``t_i = 2i + 1``
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Tuple

from .decomposition import TreeDecomposition
from .graph import EndDescriptor, EndRegistry, GraphOracle, Path, VertexPredicate
from .normal import DispersedCover, LazySpanningTree


# how many declared ends the tree-shaped decompositions tabulate in tau
TAU_ENDS = 256


class UnknownFamily(KeyError):
    pass


@dataclass
class Preset:
    name: str
    contains: VertexPredicate
    cover: DispersedCover
    members: Optional[Tuple[int, ...]] = None
    description: str = ""
    steps: Optional[int] = None

    @property
    def finite(self) -> bool:
        return self.members is not None

    def __call__(self, v: int) -> bool:
        return self.contains(v)


@dataclass
class FamilySpec:
    name: str
    title: str
    build: Callable[[], GraphOracle]
    presets: Dict[str, Preset]
    decomposition: Callable[[], TreeDecomposition]
    spanning_trees: Dict[str, LazySpanningTree] = field(default_factory=dict)
    known_answers: Dict[Tuple[str, str], str] = field(default_factory=dict)
    depth: int = 12
    window: Optional[int] = None
    normally_spanned: Dict[str, bool] = field(default_factory=dict)
    notes: str = ""

    @property
    def oracle(self) -> GraphOracle:
        return _oracle(self.name)

    def preset(self, name: str) -> Preset:
        try:
            return self.presets[name]
        except KeyError:
            raise KeyError(f"family {self.name!r} has no preset {name!r}") from None


@dataclass(frozen=True)
class DocumentationEntry:
    name: str
    title: str
    notes: str


DOCUMENTATION_ONLY = {
    "seymour-thomas": DocumentationEntry(
        "seymour-thomas", "Seymour-Thomas graph",
        "Infinitely connected graph of order 2^aleph0 without a rayless spanning tree; uncountable, no oracle."),
    "t-aleph1": DocumentationEntry(
        "t-aleph1", "T_aleph1",
        "Tree with all degrees aleph1; uncountable, no oracle."),
}


def _cover(pieces: Callable[[], Iterator[Tuple[int, ...]]]) -> DispersedCover:
    return DispersedCover(pieces)


def _finite_preset(name: str, members, description: str = "") -> Preset:
    members = tuple(sorted(set(members)))
    mset = frozenset(members)
    return Preset(name, mset.__contains__, DispersedCover.from_list([members]), members, description)


# ---------------------------------------------------------------------------
# ray
# ---------------------------------------------------------------------------


def _ray() -> GraphOracle:
    end = EndDescriptor(
        id="ray-end",
        ray=lambda: itertools.count(),
        separator=lambda d: frozenset({d}),
        note="the unique end; undominated",
    )
    return GraphOracle(
        "ray",
        neighbors=lambda v: [w for w in (v - 1, v + 1) if w >= 0],
        label=lambda v: f"v{v}",
        adjacent=lambda u, v: abs(u - v) == 1 and min(u, v) >= 0,
        ends=EndRegistry(stream=lambda: iter([end])),
        default_window=400,
    )


def _ray_family() -> FamilySpec:
    evens = Preset("even", lambda v: v % 2 == 0, _cover(lambda: ((2 * i,) for i in itertools.count())),
                   description="even-index vertices")
    decomposition = lambda: TreeDecomposition(
        name="ray-path",
        root=0,
        children=lambda t: [t + 1],
        parent=lambda t: t - 1 if t > 0 else None,
        part_contains=lambda t, v: v in (t, t + 1),
        part_members=lambda t: frozenset({t, t + 1}),
        nodes_of=lambda v: [t for t in (v - 1, v) if t >= 0],
        separator=lambda t: frozenset({t}),
        flags={"separators-connected": True, "separators-pairwise-disjoint": True, "upwards-disjoint": True},
        tau={"ray-end": ("ray", lambda: itertools.count())},
    )
    return FamilySpec(
        name="ray",
        title="one-way infinite path",
        build=_ray,
        presets={
            "all": Preset("all", lambda v: v >= 0, _cover(lambda: ((i,) for i in itertools.count()))),
            "even": evens,
            "v0": _finite_preset("v0", [0], "the first vertex"),
        },
        decomposition=decomposition,
        spanning_trees={"path": LazySpanningTree("path", 0, lambda v: v - 1 if v > 0 else None)},
        known_answers={("duality", "all"): "comb", ("duality", "even"): "comb", ("duality", "v0"): "complement"},
        depth=12,
        window=400,
        normally_spanned={"all": True},
    )


# ---------------------------------------------------------------------------
# one-way ladder
# ---------------------------------------------------------------------------


def _ladder_neighbors(v: int) -> List[int]:
    i, top = divmod(v, 2)
    if top:
        return [w for w in (v - 2, v - 1, v + 2) if w >= 0]
    return [w for w in (v - 2, v + 1, v + 2) if w >= 0]


def _ladder() -> GraphOracle:
    end = EndDescriptor(
        id="ladder-end",
        ray=lambda: (2 * i for i in itertools.count()),
        separator=lambda d: frozenset({2 * d, 2 * d + 1}),
        note="the unique end; undominated",
    )
    return GraphOracle(
        "ladder",
        neighbors=_ladder_neighbors,
        label=lambda v: f"{'t' if v % 2 else 'b'}{v // 2}",
        adjacent=lambda u, v: min(u, v) >= 0 and max(u, v) in _ladder_neighbors(min(u, v)),
        ends=EndRegistry(stream=lambda: iter([end])),
        default_window=400,
    )


def _ladder_family() -> FamilySpec:
    decomposition = lambda: TreeDecomposition(
        name="ladder-rungs",
        root=0,
        children=lambda t: [t + 1],
        parent=lambda t: t - 1 if t > 0 else None,
        part_contains=lambda t, v: v // 2 in (t, t + 1),
        part_members=lambda t: frozenset({2 * t, 2 * t + 1, 2 * t + 2, 2 * t + 3}),
        nodes_of=lambda v: [t for t in (v // 2 - 1, v // 2) if t >= 0],
        separator=lambda t: frozenset({2 * t, 2 * t + 1}),
        flags={"separators-connected": True, "separators-pairwise-disjoint": True, "upwards-disjoint": True},
        tau={"ladder-end": ("ray", lambda: itertools.count())},
    )
    rungs = LazySpanningTree("bottom-ray-rungs", 0, lambda v: None if v == 0 else (v - 1 if v % 2 else v - 2))
    return FamilySpec(
        name="ladder",
        title="one-way infinite ladder",
        build=_ladder,
        presets={
            "all": Preset("all", lambda v: v >= 0, _cover(lambda: ((2 * i, 2 * i + 1) for i in itertools.count()))),
            "top-rail": Preset("top-rail", lambda v: v % 2 == 1,
                               _cover(lambda: ((2 * i + 1,) for i in itertools.count()))),
            "rung0": _finite_preset("rung0", [0, 1], "the first rung"),
        },
        decomposition=decomposition,
        spanning_trees={"bottom-ray-rungs": rungs},
        known_answers={("duality", "all"): "comb", ("duality", "top-rail"): "comb",
                       ("duality", "rung0"): "complement"},
        depth=12,
        window=400,
    )


# ---------------------------------------------------------------------------
# grid Z^2
# ---------------------------------------------------------------------------


def _ring_offset(r: int) -> int:
    return 0 if r == 0 else 2 * r * (r - 1) + 1


def grid_coords(v: int) -> Tuple[int, int]:
    if v == 0:
        return (0, 0)
    r = 1
    while _ring_offset(r + 1) <= v:
        r += 1
    j = v - _ring_offset(r)
    q, s = divmod(j, r)
    return [(r - s, s), (-s, r - s), (-(r - s), -s), (s, -(r - s))][q]


def grid_index(x: int, y: int) -> int:
    r = abs(x) + abs(y)
    if r == 0:
        return 0
    if x > 0 and y >= 0:
        q, s = 0, y
    elif x <= 0 and y > 0:
        q, s = 1, -x
    elif x < 0 and y <= 0:
        q, s = 2, -y
    else:
        q, s = 3, x
    return _ring_offset(r) + q * r + s


def _grid_neighbors(v: int) -> List[int]:
    x, y = grid_coords(v)
    return sorted(grid_index(x + dx, y + dy) for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)))


def square_ring(d: int) -> FrozenSet[int]:
    if d == 0:
        return frozenset({0})
    pts = set()
    for t in range(-d, d + 1):
        pts.update({(d, t), (-d, t), (t, d), (t, -d)})
    return frozenset(grid_index(x, y) for x, y in pts)


def linf(v: int) -> int:
    x, y = grid_coords(v)
    return max(abs(x), abs(y))


def _grid() -> GraphOracle:
    end = EndDescriptor(
        id="grid-end",
        ray=lambda: (grid_index(n, 0) for n in itertools.count()),
        separator=square_ring,
        note="the unique end; undominated (classical, evidenced by bounded fans)",
    )

    def adjacent(u: int, v: int) -> bool:
        (a, b), (c, d) = grid_coords(u), grid_coords(v)
        return abs(a - c) + abs(b - d) == 1

    return GraphOracle(
        "grid",
        neighbors=_grid_neighbors,
        label=lambda v: "({},{})".format(*grid_coords(v)),
        adjacent=adjacent,
        ends=EndRegistry(stream=lambda: iter([end])),
        default_window=6000,
    )


def _grid_family() -> FamilySpec:
    def ring_members(t: int) -> FrozenSet[int]:
        return square_ring(t) | square_ring(t + 1)

    decomposition = lambda: TreeDecomposition(
        name="grid-square-rings",
        root=0,
        children=lambda t: [t + 1],
        parent=lambda t: t - 1 if t > 0 else None,
        part_contains=lambda t, v: linf(v) in (t, t + 1),
        part_members=ring_members,
        nodes_of=lambda v: [t for t in (linf(v) - 1, linf(v)) if t >= 0],
        separator=square_ring,
        flags={"separators-connected": True, "separators-pairwise-disjoint": True, "upwards-disjoint": True},
        tau={"grid-end": ("ray", lambda: itertools.count())},
    )
    block = [grid_index(x, y) for x in range(-2, 3) for y in range(-2, 3)]
    return FamilySpec(
        name="grid",
        title="the grid Z^2",
        build=_grid,
        presets={
            "all": Preset("all", lambda v: v >= 0, _cover(
                lambda: (tuple(range(_ring_offset(r), _ring_offset(r + 1))) for r in itertools.count()))),
            "block": _finite_preset("block", block, "5x5 block around the origin"),
        },
        decomposition=decomposition,
        known_answers={("duality", "all"): "comb", ("duality", "block"): "complement"},
        depth=12,
        window=6000,
        notes="Undominatedness of the single end is classical; recorded as fan-bound evidence.",
    )


# ---------------------------------------------------------------------------
# fan: ray plus a dominating apex
# ---------------------------------------------------------------------------


def _fan_neighbors(v: int) -> Iterator[int]:
    if v == 0:
        return itertools.count(1)
    return iter([0] + [w for w in (v - 1, v + 1) if w >= 1])


def _fan() -> GraphOracle:
    end = EndDescriptor(
        id="fan-end",
        ray=lambda: itertools.count(1),
        separator=lambda d: frozenset({0, d + 1}),
        dominators=lambda: iter([0]),
        dominates=lambda v: v == 0,
        fan=lambda z, k: [[0, i] for i in range(1, k + 1)],
        note="the unique end; dominated by the apex",
    )
    return GraphOracle(
        "fan",
        neighbors=_fan_neighbors,
        label=lambda v: "apex" if v == 0 else f"v{v - 1}",
        adjacent=lambda u, v: u != v and (min(u, v) == 0 or abs(u - v) == 1),
        locally_finite=False,
        ends=EndRegistry(stream=lambda: iter([end]), dominated_by=lambda v: [end] if v == 0 else []),
        default_window=400,
    )


def _fan_family() -> FamilySpec:
    decomposition = lambda: TreeDecomposition.single_part("fan-single", ends=["fan-end"])
    ray_tree = LazySpanningTree("ray-tree", 1, lambda v: 1 if v == 0 else (v - 1 if v > 1 else None))
    star_tree = LazySpanningTree("apex-star", 0, lambda v: None if v == 0 else 0)
    return FamilySpec(
        name="fan",
        title="ray plus a dominating apex",
        build=_fan,
        presets={
            "all": Preset("all", lambda v: v >= 0,
                          _cover(lambda: itertools.chain([(0, 1)], ((i,) for i in itertools.count(2))))),
            "ray-vertices": Preset("ray-vertices", lambda v: v >= 1,
                                   _cover(lambda: ((i,) for i in itertools.count(1)))),
            "apex": _finite_preset("apex", [0], "the apex"),
        },
        decomposition=decomposition,
        spanning_trees={"ray-tree": ray_tree, "apex-star": star_tree},
        known_answers={("duality", "all"): "complement", ("duality", "ray-vertices"): "complement",
                       ("duality", "apex"): "complement"},
        depth=12,
        window=400,
    )


# ---------------------------------------------------------------------------
# complete graph K_omega and infinite star K_{1,omega}
# ---------------------------------------------------------------------------


def _complete() -> GraphOracle:
    end = EndDescriptor(
        id="k-end",
        ray=lambda: itertools.count(),
        separator=lambda d: frozenset(range(d)),
        dominators=lambda: itertools.count(),
        dominates=lambda v: v >= 0,
        fan=lambda z, k: [[z, j] for j in itertools.islice((j for j in itertools.count() if j != z), k)],
        note="the unique end; dominated by every vertex",
    )
    return GraphOracle(
        "complete-graph",
        neighbors=lambda v: (w for w in itertools.count() if w != v),
        label=lambda v: f"k{v}",
        adjacent=lambda u, v: u != v and min(u, v) >= 0,
        locally_finite=False,
        ends=EndRegistry(stream=lambda: iter([end]), dominated_by=lambda v: [end]),
        default_window=80,
    )


def _complete_family() -> FamilySpec:
    return FamilySpec(
        name="complete-graph",
        title="the infinite complete graph K_omega",
        build=_complete,
        presets={
            "all": Preset("all", lambda v: v >= 0, _cover(lambda: ((i,) for i in itertools.count()))),
            "first-three": _finite_preset("first-three", [0, 1, 2]),
        },
        decomposition=lambda: TreeDecomposition.single_part("complete-single", ends=["k-end"]),
        spanning_trees={"star": LazySpanningTree("star", 0, lambda v: None if v == 0 else 0)},
        known_answers={("duality", "all"): "complement", ("duality", "first-three"): "complement"},
        depth=12,
        window=80,
    )


def _star() -> GraphOracle:
    return GraphOracle(
        "infinite-star",
        neighbors=lambda v: itertools.count(1) if v == 0 else iter([0]),
        label=lambda v: "hub" if v == 0 else f"l{v}",
        adjacent=lambda u, v: u != v and min(u, v) == 0,
        locally_finite=False,
        ends=EndRegistry(note="rayless: no ends"),
        default_window=400,
    )


def _star_family() -> FamilySpec:
    return FamilySpec(
        name="infinite-star",
        title="the infinite star K_{1,omega}",
        build=_star,
        presets={
            "all": Preset("all", lambda v: v >= 0, _cover(lambda: ((i,) for i in itertools.count()))),
            "leaves": Preset("leaves", lambda v: v >= 1, _cover(lambda: ((i,) for i in itertools.count(1)))),
        },
        decomposition=lambda: TreeDecomposition.single_part("star-single"),
        spanning_trees={"itself": LazySpanningTree("itself", 0, lambda v: None if v == 0 else 0)},
        known_answers={("duality", "all"): "complement", ("duality", "leaves"): "complement"},
        depth=12,
        window=400,
    )


# ---------------------------------------------------------------------------
# trees: T_2, T_3
# ---------------------------------------------------------------------------


def _heap_parent(h: int) -> Optional[int]:
    return (h - 1) // 2 if h > 0 else None


def _heap_label(h: int) -> str:
    bits = []
    while h > 0:
        bits.append("0" if h % 2 else "1")
        h = (h - 1) // 2
    return "r" + "".join(reversed(bits))


def _heap_path(h: int) -> List[int]:
    out = []
    x: Optional[int] = h
    while x is not None:
        out.append(x)
        x = _heap_parent(x)
    return out[::-1]


def _left_chain(a: int) -> Iterator[int]:
    x = a
    while True:
        yield x
        x = 2 * x + 1


def _anchor_ray(a: int) -> Iterator[int]:
    """Root to ``a``, then always left: the eventually-left normal ray of anchor ``a``."""
    yield from _heap_path(a)[:-1]
    yield from _left_chain(a)


def _anchors() -> Iterator[int]:
    """The root and all right children: one per eventually-left ray."""
    return (2 * j for j in itertools.count())


def _binary_tree() -> GraphOracle:
    def end_for(a: int) -> EndDescriptor:
        return EndDescriptor(
            id=f"left-ray@{_heap_label(a)}",
            ray=lambda: _anchor_ray(a),
            separator=lambda d: frozenset({next(itertools.islice(_anchor_ray(a), d, None))}),
            key=a,
            note="eventually-left ray; undominated",
        )

    return GraphOracle(
        "binary-tree",
        neighbors=lambda h: ([] if h == 0 else [(h - 1) // 2]) + [2 * h + 1, 2 * h + 2],
        label=_heap_label,
        adjacent=lambda u, v: min(u, v) >= 0 and _heap_parent(max(u, v)) == min(u, v),
        ends=EndRegistry(stream=lambda: (end_for(a) for a in _anchors()),
                         note="registry lists the countably many eventually-left ends"),
        default_window=4096,
    )


def _tree_decomposition(name: str, children: Callable[[int], List[int]], parent: Callable[[int], Optional[int]],
                        tau: Dict[str, tuple]) -> TreeDecomposition:
    def members(t: int) -> FrozenSet[int]:
        return frozenset([t] + children(t))

    return TreeDecomposition(
        name=name,
        root=0,
        children=children,
        parent=parent,
        part_contains=lambda t, v: v == t or parent(v) == t,
        part_members=members,
        nodes_of=lambda v: [v] + ([parent(v)] if parent(v) is not None else []),
        separator=lambda t: frozenset({t}),
        flags={"separators-connected": True, "separators-pairwise-disjoint": True, "upwards-disjoint": True},
        tau=tau,
    )


def _binary_tree_family() -> FamilySpec:
    chain0 = Preset("left-chain", lambda v: v >= 0 and (v + 1) & v == 0,
                    _cover(lambda: ((v,) for v in _left_chain(0))), description="the leftmost ray")
    return FamilySpec(
        name="binary-tree",
        title="the rooted binary tree T_2",
        build=_binary_tree,
        presets={
            "all": Preset("all", lambda v: v >= 0, _cover(
                lambda: (tuple(range(2 ** n - 1, 2 ** (n + 1) - 1)) for n in itertools.count()))),
            "root": _finite_preset("root", [0]),
            "left-chain": chain0,
        },
        decomposition=lambda: _tree_decomposition(
            "binary-tree-shaped", lambda t: [2 * t + 1, 2 * t + 2], _heap_parent,
            {f"left-ray@{_heap_label(a)}": ("ray", (lambda a=a: _anchor_ray(a))) for a in itertools.islice(_anchors(), TAU_ENDS)}),
        known_answers={("duality", "all"): "comb", ("duality", "root"): "complement",
                       ("duality", "left-chain"): "comb"},
        depth=8,
        window=4096,
    )


# T_3: root with 3 children, everyone else with 2


def _t3_level_offset(L: int) -> int:
    return 0 if L == 0 else 1 + 3 * (2 ** (L - 1) - 1)


def _t3_level(v: int) -> int:
    L = 0
    while _t3_level_offset(L + 1) <= v:
        L += 1
    return L


def _t3_children(v: int) -> List[int]:
    if v == 0:
        return [1, 2, 3]
    L = _t3_level(v)
    p = v - _t3_level_offset(L)
    base = _t3_level_offset(L + 1) + 2 * p
    return [base, base + 1]


def _t3_parent(v: int) -> Optional[int]:
    if v == 0:
        return None
    L = _t3_level(v)
    if L == 1:
        return 0
    p = v - _t3_level_offset(L)
    return _t3_level_offset(L - 1) + p // 2


def _t3_first_chain(a: int) -> Iterator[int]:
    x = a
    while True:
        yield x
        x = _t3_children(x)[0]


def _t3_path(v: int) -> List[int]:
    out = []
    x: Optional[int] = v
    while x is not None:
        out.append(x)
        x = _t3_parent(x)
    return out[::-1]


def _t3_anchor_ray(a: int) -> Iterator[int]:
    yield from _t3_path(a)[:-1]
    yield from _t3_first_chain(a)


def _t3_anchors() -> Iterator[int]:
    return (v for v in itertools.count() if v == 0 or _t3_children(_t3_parent(v))[0] != v)  # type: ignore[arg-type]


def _tree_t3() -> GraphOracle:
    def end_for(a: int) -> EndDescriptor:
        return EndDescriptor(
            id=f"first-ray@{a}",
            ray=lambda: _t3_anchor_ray(a),
            separator=lambda d: frozenset({next(itertools.islice(_t3_anchor_ray(a), d, None))}),
            key=a,
            note="eventually-first-child ray; undominated",
        )

    def neighbors(v: int) -> List[int]:
        p = _t3_parent(v)
        return ([p] if p is not None else []) + _t3_children(v)

    return GraphOracle(
        "tree-t3",
        neighbors=neighbors,
        label=lambda v: f"n{v}",
        adjacent=lambda u, v: min(u, v) >= 0 and _t3_parent(max(u, v)) == min(u, v),
        ends=EndRegistry(stream=lambda: (end_for(a) for a in _t3_anchors()),
                         note="registry lists the eventually-first-child ends"),
        default_window=4096,
    )


def _t3_family() -> FamilySpec:
    return FamilySpec(
        name="tree-t3",
        title="the 3-regular tree T_3",
        build=_tree_t3,
        presets={
            "all": Preset("all", lambda v: v >= 0, _cover(
                lambda: (tuple(range(_t3_level_offset(n), _t3_level_offset(n + 1))) for n in itertools.count()))),
            "root": _finite_preset("root", [0]),
        },
        decomposition=lambda: _tree_decomposition(
            "t3-shaped", _t3_children, _t3_parent,
            {f"first-ray@{a}": ("ray", (lambda a=a: _t3_anchor_ray(a))) for a in itertools.islice(_t3_anchors(), TAU_ENDS)}),
        known_answers={("duality", "all"): "comb", ("duality", "root"): "complement"},
        depth=8,
        window=4096,
    )


# ---------------------------------------------------------------------------
# binary tree with tops
# ---------------------------------------------------------------------------


def tops_node(h: int) -> int:
    return 2 * h


def tops_top(a: int) -> int:
    return a + 1


def _chain_head(h: int) -> int:
    while h > 0 and h % 2 == 1:
        h = (h - 1) // 2
    return h


def _tops_neighbors(v: int) -> Iterator[int]:
    if v % 2 == 1:
        a = v - 1
        return (2 * h for h in _left_chain(a))
    h = v // 2
    out = []
    if h > 0:
        out.append(2 * ((h - 1) // 2))
    out.append(tops_top(_chain_head(h)))
    out += [2 * (2 * h + 1), 2 * (2 * h + 2)]
    return iter(sorted(out))


def _tops_adjacent(u: int, v: int) -> bool:
    if u == v or min(u, v) < 0:
        return False
    if u % 2 == 1 and v % 2 == 1:
        return False
    if u % 2 == 1 or v % 2 == 1:
        top, node = (u, v) if u % 2 == 1 else (v, u)
        return _chain_head(node // 2) == top - 1
    a, b = u // 2, v // 2
    return _heap_parent(max(a, b)) == min(a, b)


def _tops() -> GraphOracle:
    def end_for(a: int) -> EndDescriptor:
        top = tops_top(a)
        ray = lambda: (2 * h for h in _anchor_ray(a))
        return EndDescriptor(
            id=f"top-ray@{_heap_label(a)}",
            ray=ray,
            separator=lambda d: frozenset({next(itertools.islice(ray(), d, None)), top}),
            dominators=lambda: iter([top]),
            dominates=lambda v: v == top,
            fan=lambda z, k: [[top, 2 * h] for h in itertools.islice(_left_chain(a), k)],
            key=2 * a,
            note="eventually-left ray; dominated exactly by its top",
        )

    return GraphOracle(
        "binary-tree-with-tops",
        neighbors=_tops_neighbors,
        label=lambda v: f"top({_heap_label(v - 1)})" if v % 2 else _heap_label(v // 2),
        adjacent=_tops_adjacent,
        locally_finite=False,
        ends=EndRegistry(
            stream=lambda: (end_for(a) for a in _anchors()),
            dominated_by=lambda v: [end_for(v - 1)] if v % 2 == 1 else [],
            note="countable realisation: tops for the eventually-left rays, joined to the ray's left tail",
        ),
        default_window=1024,
    )


def _tops_family() -> FamilySpec:
    def t2_levels():
        return (tuple(2 * h for h in range(2 ** n - 1, 2 ** (n + 1) - 1)) for n in itertools.count())

    def all_levels():
        for level in t2_levels():
            yield level + tuple(tops_top(v // 2) for v in level if (v // 2) % 2 == 0)

    return FamilySpec(
        name="binary-tree-with-tops",
        title="binary tree with tops",
        build=_tops,
        presets={
            "t2-vertices": Preset("t2-vertices", lambda v: v >= 0 and v % 2 == 0, _cover(t2_levels),
                                  description="V(T_2)", steps=127),
            "all": Preset("all", lambda v: v >= 0, _cover(all_levels), steps=191),
            "left-chain": Preset("left-chain", lambda v: v % 2 == 0 and v >= 0 and (v // 2 + 1) & (v // 2) == 0,
                                 _cover(lambda: ((2 * h,) for h in _left_chain(0))), steps=9),
        },
        decomposition=lambda: TreeDecomposition.single_part("tops-single"),
        spanning_trees={},
        known_answers={("duality", "t2-vertices"): "complement", ("duality", "all"): "complement",
                       ("duality", "left-chain"): "complement"},
        depth=8,
        window=1024,
        normally_spanned={"t2-vertices": True, "all": False},
        notes="'all' is declared not normally spanned for the uncountable original; metadata only.",
    )


# ---------------------------------------------------------------------------
# comb
# ---------------------------------------------------------------------------


def _comb_neighbors(v: int) -> List[int]:
    if v % 2:
        return [v - 1]
    return [w for w in (v - 2, v + 1, v + 2) if w >= 0]


def _comb() -> GraphOracle:
    end = EndDescriptor(
        id="comb-end",
        ray=lambda: (2 * i for i in itertools.count()),
        separator=lambda d: frozenset({2 * d}),
        note="the unique end; undominated",
    )
    return GraphOracle(
        "comb",
        neighbors=_comb_neighbors,
        label=lambda v: f"{'t' if v % 2 else 's'}{v // 2}",
        adjacent=lambda u, v: min(u, v) >= 0 and max(u, v) in _comb_neighbors(min(u, v)),
        ends=EndRegistry(stream=lambda: iter([end])),
        default_window=400,
    )


def _comb_family() -> FamilySpec:
    decomposition = lambda: TreeDecomposition(
        name="comb-path",
        root=0,
        children=lambda t: [t + 1],
        parent=lambda t: t - 1 if t > 0 else None,
        part_contains=lambda t, v: v in (2 * t, 2 * t + 1, 2 * t + 2),
        part_members=lambda t: frozenset({2 * t, 2 * t + 1, 2 * t + 2}),
        nodes_of=lambda v: [v // 2] if v % 2 else [t for t in (v // 2 - 1, v // 2) if t >= 0],
        separator=lambda t: frozenset({2 * t}),
        flags={"separators-connected": True, "separators-pairwise-disjoint": True, "upwards-disjoint": True},
        tau={"comb-end": ("ray", lambda: itertools.count())},
    )
    return FamilySpec(
        name="comb",
        title="ray with pendant teeth",
        build=_comb,
        presets={
            "all": Preset("all", lambda v: v >= 0, _cover(lambda: ((2 * i, 2 * i + 1) for i in itertools.count()))),
            "teeth": Preset("teeth", lambda v: v % 2 == 1, _cover(lambda: ((2 * i + 1,) for i in itertools.count()))),
            "spine": Preset("spine", lambda v: v >= 0 and v % 2 == 0,
                            _cover(lambda: ((2 * i,) for i in itertools.count()))),
        },
        decomposition=decomposition,
        spanning_trees={"itself": LazySpanningTree("itself", 0, lambda v: None if v == 0 else (v - 1 if v % 2 else v - 2))},
        known_answers={("duality", "all"): "comb", ("duality", "teeth"): "comb", ("duality", "spine"): "comb"},
        depth=12,
        window=400,
    )


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


_FACTORIES = [
    _ray_family, _ladder_family, _grid_family, _fan_family, _complete_family,
    _star_family, _binary_tree_family, _tops_family, _t3_family, _comb_family,
]


@lru_cache(maxsize=None)
def _catalog() -> Dict[str, FamilySpec]:
    specs = [f() for f in _FACTORIES]
    return {s.name: s for s in specs}


@lru_cache(maxsize=None)
def _oracle(name: str) -> GraphOracle:
    return family(name).build()


def list_families() -> List[FamilySpec]:
    return list(_catalog().values())


def family(name: str) -> FamilySpec:
    if name in DOCUMENTATION_ONLY:
        raise UnknownFamily(f"{name!r} is documentation-only (uncountable); no oracle exists")
    try:
        return _catalog()[name]
    except KeyError:
        raise UnknownFamily(f"unknown family {name!r}") from None


def family_oracle(name: str) -> GraphOracle:
    return family(name).oracle


def manifest() -> dict:
    """The ``families.json`` manifest: ends, presets and defaults per family."""
    out = []
    for spec in list_families():
        G = spec.oracle
        ends = []
        for e in G.ends.ends(limit=3):
            ends.append({
                "id": e.id,
                "dominated": e.dominated,
                "first_dominator": e.first_dominator(),
                "ray_prefix": e.ray_prefix(6),
                "note": e.note,
            })
        out.append({
            "name": spec.name,
            "title": spec.title,
            "locally_finite": G.locally_finite,
            "default_depth": spec.depth,
            "default_window": spec.window,
            "ends": ends,
            "end_registry_note": G.ends.note,
            "presets": {p.name: {"finite": p.finite, "description": p.description} for p in spec.presets.values()},
            "decomposition": spec.decomposition().name,
            "spanning_trees": sorted(spec.spanning_trees),
            "known_answers": {f"{op}:{preset}": ans for (op, preset), ans in sorted(spec.known_answers.items())},
            "normally_spanned": spec.normally_spanned,
            "notes": spec.notes,
        })
    docs = [{"name": d.name, "title": d.title, "notes": d.notes, "documentation_only": True}
            for d in DOCUMENTATION_ONLY.values()]
    return {"families": out, "documentation": docs}


def manifest_json() -> str:
    return json.dumps(manifest(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
