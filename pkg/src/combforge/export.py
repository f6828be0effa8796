"""DOT and JSON rendering of trees, certificates and decompositions."""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Tuple

from .decomposition import TreeDecomposition
from .graph import GraphOracle, Truncation
from .normal import RootedTree


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _node(G: Optional[GraphOracle], v: int) -> str:
    label = G.label(v) if G is not None else str(v)
    return f"  n{v} [label={_quote(label)}];"


def tree_dot(T: RootedTree, G: Optional[GraphOracle] = None, name: str = "tree") -> str:
    """Rooted tree with one ``rank=same`` group per height."""
    lines = [f"digraph {_quote(name)} {{", "  rankdir=TB;"]
    for v in sorted(T.parent):
        lines.append(_node(G, v))
    by_height: Dict[int, List[int]] = {}
    for v, h in T.height.items():
        by_height.setdefault(h, []).append(v)
    for h in sorted(by_height):
        members = " ".join(f"n{v};" for v in sorted(by_height[h]))
        lines.append(f"  {{ rank=same; {members} }}  // height {h}")
    for v, p in sorted(T.parent.items()):
        if p is not None:
            lines.append(f"  n{p} -> n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def paths_dot(paths: Iterable[List[int]], G: Optional[GraphOracle] = None, name: str = "certificate",
              highlight: Iterable[int] = ()) -> str:
    """Undirected union of paths; highlighted vertices are drawn as boxes."""
    marked = set(highlight)
    vertices: set = set()
    edges: set = set()
    for p in paths:
        vertices.update(p)
        edges.update(tuple(sorted(e)) for e in zip(p, p[1:]))
    lines = [f"graph {_quote(name)} {{"]
    for v in sorted(vertices):
        node = _node(G, v)
        if v in marked:
            node = node[:-2] + ", shape=box];"
        lines.append(node)
    for a, b in sorted(edges):
        lines.append(f"  n{a} -- n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def truncation_dot(trunc: Truncation, G: GraphOracle, name: str = "truncation") -> str:
    lines = [f"graph {_quote(name)} {{"]
    lines += [_node(G, v) for v in trunc.vertices]
    lines += [f"  n{a} -- n{b};" for a, b in trunc.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def decomposition_dot(dec: TreeDecomposition, G: GraphOracle, depth: int = 4) -> str:
    """Decomposition tree; edges carry their separator as label, nodes their depth as rank."""
    nodes = dec.nodes(depth)
    lines = [f"digraph {_quote(dec.name)} {{"]
    by_depth: Dict[int, List[int]] = {}
    for t in nodes:
        members = dec.part_members(t)
        size = "inf" if members is None else str(len(members))
        lines.append(f"  t{t} [label={_quote(f'{t} |part|={size}')}];")
        by_depth.setdefault(dec.depth_of(t), []).append(t)
    for d in sorted(by_depth):
        lines.append(f"  {{ rank=same; {' '.join(f't{t};' for t in by_depth[d])} }}")
    for t in nodes:
        p = dec.parent(t)
        if p is not None:
            sep = ",".join(G.label(v) for v in sorted(dec.separator(t)))
            lines.append(f"  t{p} -> t{t} [label={_quote(sep)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def truncation_json(trunc: Truncation, G: GraphOracle) -> dict:
    return {
        "vertices": [{"index": v, "label": G.label(v)} for v in trunc.vertices],
        "edges": [[a, b] for a, b in trunc.edges()],
    }


def payload_paths(kind: str, payload: dict) -> Tuple[List[List[int]], List[int]]:
    """Paths and highlighted vertices of a certificate payload, for DOT rendering."""
    idx = lambda refs: [r["index"] for r in refs]
    if kind == "star":
        return [idx(p) for p in payload["paths"]], idx(payload["leaves"])
    if kind == "comb":
        return [idx(payload["spine_prefix"])] + [idx(p) for p in payload["tooth_paths"]], idx(payload["teeth"])
    if kind == "fan":
        return [idx(payload["ray_prefix"])] + [idx(p) for p in payload["paths"]], [payload["dominator"]["index"]]
    raise ValueError(f"no path rendering for {kind!r}")
