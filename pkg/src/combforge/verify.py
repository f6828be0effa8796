"""Independent certificate verifier.

Works from the serialized certificate and the catalog oracle only: every
claim is re-derived from adjacency queries and preset membership, never from
the search code.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from . import catalog
from .graph import GraphOracle, VertexPredicate

KINDS = ("star", "comb", "fan", "tree")

VIOLATIONS = (
    "schema",
    "unknown-family",
    "unknown-preset",
    "label-mismatch",
    "not-adjacent",
    "not-injective",
    "paths-intersect",
    "leaf-not-in-U",
    "tooth-not-in-U",
    "tooth-meets-spine",
    "wrong-endpoint",
    "bad-anchor",
    "count-mismatch",
    "not-a-tree",
    "vertex-not-in-U",
)


@dataclass(frozen=True)
class Violation:
    cls: str
    detail: str

    def to_json(self) -> dict:
        return {"class": self.cls, "detail": self.detail}


def envelope(kind: str, family: str, preset: Optional[str], budgets: Dict[str, int], payload: dict,
             audit: Optional[dict] = None) -> dict:
    return {
        "kind": kind,
        "family": family,
        "preset": preset,
        "budgets": dict(sorted(budgets.items())),
        "payload": payload,
        "audit": audit or {},
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


class _Checker:
    def __init__(self, G: GraphOracle, U: Optional[VertexPredicate]):
        self.G = G
        self.U = U
        self.out: List[Violation] = []

    def add(self, cls: str, detail: str) -> None:
        self.out.append(Violation(cls, detail))

    def vertex(self, ref) -> Optional[int]:
        if not isinstance(ref, dict) or not isinstance(ref.get("index"), int):
            self.add("schema", f"bad vertex reference {ref!r}")
            return None
        v = ref["index"]
        if not self.G.has_vertex(v):
            self.add("schema", f"{v} is not a vertex of {self.G.name}")
            return None
        if "label" in ref and ref["label"] != self.G.label(v):
            self.add("label-mismatch", f"{v} is {self.G.label(v)!r}, not {ref['label']!r}")
        return v

    def path(self, refs, what: str) -> Optional[List[int]]:
        if not isinstance(refs, list) or not refs:
            self.add("schema", f"{what} must be a non-empty list")
            return None
        vs = [self.vertex(r) for r in refs]
        if any(v is None for v in vs):
            return None
        path = [v for v in vs if v is not None]
        if len(set(path)) != len(path):
            self.add("not-injective", f"{what} repeats a vertex")
        for a, b in zip(path, path[1:]):
            if not self.G.adjacent(a, b):
                self.add("not-adjacent", f"{what}: {a} and {b} are not adjacent")
        return path

    def in_u(self, v: int, cls: str) -> None:
        if self.U is not None and not self.U(v):
            self.add(cls, f"{v} ({self.G.label(v)}) is not in U")


def _check_star(c: _Checker, p: dict, k: Optional[int]) -> None:
    center = c.vertex(p.get("center"))
    leaves = [c.vertex(r) for r in p.get("leaves", [])]
    paths = [c.path(r, f"star path {i}") for i, r in enumerate(p.get("paths", []))]
    if center is None or any(v is None for v in leaves) or any(q is None for q in paths):
        return
    if len(leaves) != len(paths) or (k is not None and len(leaves) != k):
        c.add("count-mismatch", f"{len(leaves)} leaves, {len(paths)} paths, budget {k}")
    if len(set(leaves)) != len(leaves):
        c.add("not-injective", "leaves repeat")
    for i, (leaf, q) in enumerate(zip(leaves, paths)):
        assert q is not None
        if q[0] != center or q[-1] != leaf:
            c.add("wrong-endpoint", f"star path {i} does not run from the centre to its leaf")
        c.in_u(leaf, "leaf-not-in-U")
    for (i, a), (j, b) in itertools.combinations(enumerate(paths), 2):
        shared = (set(a) & set(b)) - {center}  # type: ignore[arg-type]
        if shared:
            c.add("paths-intersect", f"star paths {i} and {j} share {sorted(shared)}")


def _check_comb(c: _Checker, p: dict, k: Optional[int]) -> None:
    spine = c.path(p.get("spine_prefix"), "spine")
    teeth = [c.vertex(r) for r in p.get("teeth", [])]
    paths = [c.path(r, f"tooth path {i}") for i, r in enumerate(p.get("tooth_paths", []))]
    if spine is None or any(v is None for v in teeth) or any(q is None for q in paths):
        return
    anchor, rule = p.get("anchor"), p.get("continuation")
    if anchor is not None:
        try:
            end = c.G.ends.get(anchor)
        except KeyError:
            c.add("bad-anchor", f"no declared end {anchor!r}")
        else:
            if end.ray_prefix(len(spine)) != spine:
                c.add("bad-anchor", f"spine is not a prefix of the ray of {anchor}")
            if p.get("undominated") and end.dominated:
                c.add("bad-anchor", f"{anchor} is declared dominated")
    elif rule != "bfs-branch":
        c.add("bad-anchor", "spine has neither an end anchor nor a continuation rule")
    if len(teeth) != len(paths) or (k is not None and len(teeth) != k):
        c.add("count-mismatch", f"{len(teeth)} teeth, {len(paths)} tooth paths, budget {k}")
    if len(set(teeth)) != len(teeth):
        c.add("not-injective", "teeth repeat")
    on_spine = set(spine)
    for i, (tooth, q) in enumerate(zip(teeth, paths)):
        assert q is not None
        if q[0] not in on_spine or q[-1] != tooth:
            c.add("wrong-endpoint", f"tooth path {i} must start on the spine and end at its tooth")
        if any(v in on_spine for v in q[1:]):
            c.add("tooth-meets-spine", f"tooth path {i} returns to the spine")
        c.in_u(tooth, "tooth-not-in-U")
    for (i, a), (j, b) in itertools.combinations(enumerate(paths), 2):
        shared = set(a) & set(b)  # type: ignore[arg-type]
        if shared:
            c.add("paths-intersect", f"tooth paths {i} and {j} share {sorted(shared)}")


def _check_fan(c: _Checker, p: dict, k: Optional[int]) -> None:
    z = c.vertex(p.get("dominator"))
    ray = c.path(p.get("ray_prefix"), "ray prefix")
    paths = [c.path(r, f"fan path {i}") for i, r in enumerate(p.get("paths", []))]
    if z is None or ray is None or any(q is None for q in paths):
        return
    try:
        end = c.G.ends.get(p.get("end"))
    except KeyError:
        c.add("bad-anchor", f"no declared end {p.get('end')!r}")
    else:
        if end.ray_prefix(len(ray)) != ray:
            c.add("bad-anchor", f"ray prefix is not a prefix of the ray of {end.id}")
    if k is not None and len(paths) != k:
        c.add("count-mismatch", f"{len(paths)} fan paths, budget {k}")
    on_ray = set(ray) - {z}
    for i, q in enumerate(paths):
        assert q is not None
        if q[0] != z or q[-1] not in on_ray:
            c.add("wrong-endpoint", f"fan path {i} must run from the dominator to the ray")
        if any(v in on_ray for v in q[1:-1]):
            c.add("wrong-endpoint", f"fan path {i} meets the ray before its end")
    for (i, a), (j, b) in itertools.combinations(enumerate(paths), 2):
        shared = (set(a) & set(b)) - {z}  # type: ignore[arg-type]
        if shared:
            c.add("paths-intersect", f"fan paths {i} and {j} share {sorted(shared)}")


def _check_tree(c: _Checker, p: dict, k: Optional[int]) -> None:
    root = c.vertex(p.get("root"))
    parents = {}
    for pair in p.get("parents", []):
        if not isinstance(pair, list) or len(pair) != 2:
            c.add("schema", "parent entries are [child, parent] pairs")
            return
        v, w = c.vertex(pair[0]), c.vertex(pair[1])
        if v is None or w is None:
            return
        if v in parents:
            c.add("not-a-tree", f"{v} has two parents")
        parents[v] = w
        if not c.G.adjacent(v, w):
            c.add("not-adjacent", f"tree edge {w}-{v} is not an edge")
    if root is None:
        return
    if root in parents:
        c.add("not-a-tree", "the root has a parent")
    for v in parents:
        seen = {v}
        x = v
        while x != root:
            if x not in parents:
                c.add("not-a-tree", f"{x} does not lead to the root")
                break
            x = parents[x]
            if x in seen:
                c.add("not-a-tree", f"parent links cycle through {x}")
                break
            seen.add(x)
    for ref in p.get("contains", []):
        v = c.vertex(ref)
        if v is not None and v != root and v not in parents:
            c.add("count-mismatch", f"claimed vertex {v} is not in the tree")
        if v is not None:
            c.in_u(v, "vertex-not-in-U")


_CHECKS = {"star": _check_star, "comb": _check_comb, "fan": _check_fan, "tree": _check_tree}


def verify_document(doc: dict) -> List[Violation]:
    """All violations found in a certificate document (empty list when valid)."""
    if not isinstance(doc, dict) or any(key not in doc for key in ("kind", "family", "budgets", "payload")):
        return [Violation("schema", "expected keys kind, family, budgets, payload")]
    kind = doc["kind"]
    if kind not in KINDS:
        return [Violation("schema", f"unknown certificate kind {kind!r}")]
    try:
        spec = catalog.family(doc["family"])
    except KeyError as exc:
        return [Violation("unknown-family", str(exc))]
    U = None
    if doc.get("preset") is not None:
        try:
            U = spec.preset(doc["preset"])
        except KeyError as exc:
            return [Violation("unknown-preset", str(exc))]
    budgets = doc["budgets"] if isinstance(doc["budgets"], dict) else {}
    k = budgets.get("k") if kind != "tree" else None
    checker = _Checker(spec.oracle, U)
    payload = doc["payload"]
    if not isinstance(payload, dict):
        return [Violation("schema", "payload must be an object")]
    _CHECKS[kind](checker, payload, k)
    return checker.out


def violation_report(violations: Sequence[Violation]) -> dict:
    return {
        "ok": not violations,
        "classes": sorted({v.cls for v in violations}),
        "violations": [v.to_json() for v in violations],
    }
