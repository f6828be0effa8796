"""Property suites over the catalog, shared by the CLI and the acceptance tests."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from . import catalog
from .catalog import FamilySpec, grid_index
from .cuts import brute_force_cut, fundamental_cut, theorem39_consistency
from .decomposition import (closure_domination_transfer_check, closure_invariance_check, decomposition_soundness,
                            direction_transfer_check, dominated_subgraph, normally_spanned_transfer_check,
                            restrict_displaying, separator_hat, star_decomposition, star_decomposition_audit)
from .errors import BudgetExhausted, CombforgeError
from .graph import BranchPartition
from .rayless import theorem1_driver
from .starcomb import closure_ends, comb_along_end
from .verify import envelope, verify_document

SUITES = ("duality", "contraction", "decomposition", "cuts", "all")


class UsageError(CombforgeError):
    pass


@dataclass
class Row:
    suite: str
    family: str
    check: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{self.suite:<13} {self.family:<22} {self.check:<34} {'PASS' if self.ok else 'FAIL'}"


def select_families(names: Optional[Sequence[str]] = None) -> List[FamilySpec]:
    specs = catalog.list_families()
    if names is None:
        return specs
    chosen = [s for s in specs if s.name in set(names)]
    if not chosen:
        raise UsageError("family filter matches no catalog family")
    return chosen


# ---------------------------------------------------------------------------
# Duality
# ---------------------------------------------------------------------------


def duality_row(spec: FamilySpec, preset: str, k: int = 8, depth: int = 40) -> Row:
    """Run both sides of the duality on one preset and compare with the known answer.

    The comb side is an undominated comb along a declared end, re-checked by
    the verifier.  The complementary side is a star-decomposition plus the
    dominated-subgraph audit, both built without the precondition guard so
    they can fail on their own.
    """
    G, U = spec.oracle, spec.preset(preset)
    comb_hit, comb_doc = False, None
    for end in closure_ends(G, U, min(depth, 12), window=G.default_window):
        if end.dominated:
            continue
        try:
            comb = comb_along_end(G, end, U, k, depth, window=G.default_window)
        except BudgetExhausted:
            continue
        comb_doc = envelope("comb", spec.name, preset, {"k": k, "depth": depth}, comb.payload(G))
        comb_hit = not verify_document(comb_doc)
        if comb_hit:
            break
    sd = star_decomposition(G, U, spec.decomposition(), members=U.members, force=True)
    sd_audit = star_decomposition_audit(sd, U, members=U.members)
    dom = dominated_subgraph(sd, U, members=U.members)
    complement_hit = sd_audit["ok"] and dom.audit["ok"]
    steps = U.steps if U.steps is not None else 40
    driver = theorem1_driver(G, U, U.cover, k=k, depth=spec.depth, steps=steps, window=G.default_window)
    outcome = "comb" if comb_hit else "complement"
    expected = spec.known_answers.get(("duality", preset))
    ok = (comb_hit != complement_hit and outcome == expected
          and (driver.outcome == "comb") == comb_hit)
    return Row("duality", spec.name, f"preset={preset}", ok, {
        "comb": comb_hit, "complement": complement_hit, "expected": expected,
        "driver_route": driver.route, "star_decomposition_ok": sd_audit["ok"],
        "dominated_subgraph_ok": dom.audit["ok"],
    })


def duality_suite(families: Optional[Sequence[str]] = None, k: int = 8, depth: int = 40) -> List[Row]:
    return [duality_row(spec, p, k, depth) for spec in select_families(families) for p in spec.presets]


# ---------------------------------------------------------------------------
# Contraction
# ---------------------------------------------------------------------------


def standard_partitions() -> Dict[str, tuple]:
    """Partition name -> (family, branch sets)."""
    block = [grid_index(0, 0), grid_index(1, 0), grid_index(0, 1), grid_index(1, 1)]
    return {
        "identity": ("ray", []),
        "fan-merge": ("fan", [[0, 1]]),
        "grid-block-merge": ("grid", [block]),
    }


def transfer_rows(name: str, family: str, branches, depth: int = 12, k: int = 16) -> List[Row]:
    spec = catalog.family(family)
    G = spec.oracle
    P = BranchPartition(branches)
    presets = {p: spec.preset(p) for p in spec.presets}
    a = direction_transfer_check(G, P, depths=range(1, depth + 1))
    b = closure_domination_transfer_check(G, P, presets, depths=range(1, depth + 1), k=k)
    first = spec.preset(next(iter(spec.presets)))
    c = normally_spanned_transfer_check(G, P, first.cover, depth=depth)
    return [
        Row("contraction", family, f"{name}: directions", a["ok"], {"discrepancies": a["discrepancies"]}),
        Row("contraction", family, f"{name}: closure+domination", b["ok"], {"discrepancies": b["discrepancies"]}),
        Row("contraction", family, f"{name}: dispersedness", c["ok"], {"discrepancies": c["discrepancies"]}),
    ]


def tops_pipeline_row(preset: str = "t2-vertices", depth: int = 6) -> Row:
    spec = catalog.family("binary-tree-with-tops")
    G, U = spec.oracle, spec.preset(preset)
    res = theorem1_driver(G, U, U.cover, k=8, depth=spec.depth, steps=U.steps or 40, window=G.default_window)
    assert res.tree is not None or res.route == "comb"
    wanted = tops_t2_vertices(depth)
    if not all(U(v) for v in wanted):
        raise ValueError(f"preset {preset} does not contain the T2 vertices")
    contained = res.tree is not None and all(v in res.tree for v in wanted)
    audit = res.audit
    ok = (res.route == "contraction" and bool(audit.get("ends_without_dominator_in_U")) and contained
          and audit.get("stopped_branches_finite", False)
          and audit.get("contraction", {}).get("properly_passed_on", False)
          and audit.get("passed_on_tree_normal_in_minor", False))
    return Row("contraction", spec.name, f"driver preset={preset}", ok, {
        "route": res.route, "contains_all_depth_vertices": contained, "wanted": len(wanted),
        "lifted_size": audit.get("lifted_size"),
    })


def tops_t2_height(v: int) -> int:
    """Height in T2 of the vertex ``v = 2h`` (heap index h)."""
    return (v // 2 + 1).bit_length() - 1


def tops_t2_vertices(depth: int) -> List[int]:
    """T2 vertices of height at most ``depth``, in heap order."""
    return [2 * h for h in range(2 ** (depth + 1) - 1)]


def contraction_suite(families: Optional[Sequence[str]] = None) -> List[Row]:
    names = {s.name for s in select_families(families)}
    rows: List[Row] = []
    for name, (family, branches) in standard_partitions().items():
        if family in names:
            rows += transfer_rows(name, family, branches)
    if "binary-tree-with-tops" in names:
        rows.append(tops_pipeline_row())
    return rows


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------


def decomposition_suite(families: Optional[Sequence[str]] = None, depths: Sequence[int] = (5, 10, 15)) -> List[Row]:
    rows: List[Row] = []
    for spec in select_families(families):
        G = spec.oracle
        dec = spec.decomposition()
        if dec.part_members(dec.root) is not None:
            reps = [decomposition_soundness(G, dec, d) for d in depths]
            rows.append(Row("decomposition", spec.name, "soundness", all(r["ok"] for r in reps),
                            {"problems": [p for r in reps for p in r["problems"]][:5]}))
        for preset in spec.presets:
            if spec.known_answers.get(("duality", preset)) != "complement":
                continue
            U = spec.preset(preset)
            sd = star_decomposition(G, U, dec, members=U.members)
            audit = star_decomposition_audit(sd, U, members=U.members, depths=depths)
            rows.append(Row("decomposition", spec.name, f"star-decomposition {preset}", audit["ok"],
                            {"ends_in_leaves": audit["ends_in_leaves"]}))
        first = next(iter(spec.presets))
        U = spec.preset(first)
        restriction = restrict_displaying(G, dec, U, members=U.members)
        hat = separator_hat(restriction.decomposition, U)
        inv = closure_invariance_check(G, U, hat)
        rows.append(Row("decomposition", spec.name, f"restrict+hat {first}",
                        restriction.report["ok"] and inv["ok"], {"discrepancies": inv["discrepancies"]}))
    return rows


# ---------------------------------------------------------------------------
# Fundamental cuts
# ---------------------------------------------------------------------------


def cuts_suite(families: Optional[Sequence[str]] = None, budgets: Sequence[int] = (10, 100, 1000, 10_000)) -> List[Row]:
    names = {s.name for s in select_families(families)}
    rows: List[Row] = []
    if "ladder" in names:
        spec = catalog.family("ladder")
        G, T = spec.oracle, spec.spanning_trees["bottom-ray-rungs"]
        interior = [(2 * i, 2 * i + 1) for i in range(1, 15)]
        sizes = [fundamental_cut(G, T, e).count for e in interior]
        stable = all(brute_force_cut(G, T, e, 60) == brute_force_cut(G, T, e, 120) == 3 for e in interior)
        cons = theorem39_consistency(G, T, G.ends.ends(8))
        rows.append(Row("cuts", "ladder", "bottom-ray-rungs",
                        all(s == 3 for s in sizes) and stable and cons["all_finite"] and cons["consistent"],
                        {"rung_cuts": sizes, "stable_30_to_60": stable}))
    if "fan" in names:
        spec = catalog.family("fan")
        G = spec.oracle
        T = spec.spanning_trees["ray-tree"]
        verdicts = [fundamental_cut(G, T, (1, 0), budget=b).verdict for b in budgets]
        cons = theorem39_consistency(G, T, G.ends.ends(8))
        attributed = all(a["dominated_t_ray"] == "fan-end" for a in cons.get("attributions", []))
        rows.append(Row("cuts", "fan", "ray-tree",
                        all(v == "exceeds-budget" for v in verdicts) and not cons["all_finite"]
                        and attributed and cons["consistent"], {"verdicts": verdicts}))
        S = spec.spanning_trees["apex-star"]
        cons = theorem39_consistency(G, S, G.ends.ends(8))
        sizes = [fundamental_cut(G, S, (0, i)).count for i in range(2, 20)]
        rows.append(Row("cuts", "fan", "apex-star",
                        cons["all_finite"] and cons["consistent"] and all(s == 3 for s in sizes),
                        {"cuts": sizes}))
    return rows


SUITE_FUNCS: Dict[str, Callable[..., List[Row]]] = {
    "duality": duality_suite,
    "contraction": contraction_suite,
    "decomposition": decomposition_suite,
    "cuts": cuts_suite,
}


def run_suite(name: str, families: Optional[Sequence[str]] = None) -> List[Row]:
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    select_families(families)
    names = list(SUITE_FUNCS) if name == "all" else [name]
    rows: List[Row] = []
    for n in names:
        start = time.perf_counter()
        got = SUITE_FUNCS[n](families)
        elapsed = time.perf_counter() - start
        for r in got:
            r.detail.setdefault("suite_seconds", round(elapsed, 1))
        rows += got
    return rows
