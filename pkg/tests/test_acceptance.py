"""The seven acceptance criteria, each reported as one PASS/FAIL line."""

import json
import time
from pathlib import Path


from combforge import catalog
from combforge.cli import main
from combforge.cuts import brute_force_cut, fundamental_cut, theorem39_consistency
from combforge.decomposition import dominated_subgraph, star_decomposition, star_decomposition_audit
from combforge.errors import CombforgeError, InvariantViolation, PreconditionViolation
from combforge.rayless import build_rayless_tree, theorem1_driver
from combforge.suites import duality_suite, standard_partitions, tops_pipeline_row, tops_t2_vertices, transfer_rows
from combforge.verify import envelope, verify_document

from conftest import ACCEPTANCE_LINES
from test_rayless import complete_nx, engine_log, fan_nx, simulate

FIXTURES = Path(__file__).parent / "fixtures"


def report(number, title, ok, detail=""):
    line = f"criterion {number} {title:<34} {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_duality_exclusivity():
    start = time.perf_counter()
    rows = duality_suite(k=8, depth=40)
    elapsed = time.perf_counter() - start
    double = [r for r in rows if r.detail["comb"] and r.detail["complement"]]
    missing = [r for r in rows if not r.detail["comb"] and not r.detail["complement"]]
    wrong = [r for r in rows if not r.ok]
    families = {r.family for r in rows}
    ok = len(families) == 10 and not double and not missing and not wrong and elapsed < 300
    report(1, "duality exclusivity", ok,
           f"{len(rows)} presets, double={len(double)} miss={len(missing)} wrong={len(wrong)} {elapsed:.1f}s")


def test_criterion_2_rayless_shapes():
    details, ok = [], True
    for family, make, bound in (("complete-graph", complete_nx, 1), ("fan", fan_nx, 2)):
        spec = catalog.family(family)
        U = spec.preset("all")
        res = build_rayless_tree(spec.oracle, U, U.cover, steps=200, depth=4, window=400)
        log, heights = simulate(make(400), list(range(200)))
        same = json.dumps(engine_log(res.tree)) == json.dumps(log) and res.tree.height == heights
        radius = res.tree.radius()
        shape = radius == 1 if bound == 1 else radius <= bound
        ok &= same and shape and len(res.tree) == 200
        details.append(f"{family} radius={radius} oracle={'same' if same else 'differs'}")
    report(2, "rayless star shapes", ok, "; ".join(details))


def test_criterion_3_tops_contraction():
    spec = catalog.family("binary-tree-with-tops")
    G, U = spec.oracle, spec.preset("t2-vertices")
    try:
        build_rayless_tree(G, U, U.cover, steps=20, depth=spec.depth)
        direct_fails = False
    except PreconditionViolation:
        direct_fails = True
    row = tops_pipeline_row("t2-vertices", depth=6)
    violations = 0
    try:
        res = theorem1_driver(G, U, U.cover, k=8, depth=spec.depth, steps=U.steps or 40)
        wanted = tops_t2_vertices(6)
        contained = all(v in res.tree for v in wanted)
        doc = envelope("tree", spec.name, "t2-vertices", {}, res.tree.to_json(G))
        violations = len(verify_document(doc))
        edges_ok = all(G.adjacent(v, p) for v, p in res.tree.parent.items() if p is not None)
    except InvariantViolation:
        violations, wanted, edges_ok, contained = violations + 1, [], False, False
    ok = direct_fails and row.ok and violations == 0 and edges_ok and contained and len(wanted) == 127
    report(3, "tops contraction pipeline", ok,
           f"route={row.detail['route']} direct-fails={direct_fails} depth-6 vertices={len(wanted)} "
           f"violations={violations}")


def test_criterion_4_fundamental_cuts():
    ladder = catalog.family("ladder")
    T = ladder.spanning_trees["bottom-ray-rungs"]
    rungs = [(2 * i, 2 * i + 1) for i in range(1, 14)]
    exact = all(fundamental_cut(ladder.oracle, T, e).count == 3 for e in rungs)
    stable = all(brute_force_cut(ladder.oracle, T, e, n) == 3 for e in rungs for n in range(30, 61, 2))

    fan = catalog.family("fan")
    R = fan.spanning_trees["ray-tree"]
    budgets = (10, 100, 1000, 10_000)
    exceeds = all(fundamental_cut(fan.oracle, R, (1, 0), budget=b).verdict == "exceeds-budget" for b in budgets)
    attributed = True
    for b in budgets:
        cons = theorem39_consistency(fan.oracle, R, fan.oracle.ends.ends(8), budget=b)
        attributed &= bool(cons.get("attributions")) and all(
            a["dominated_t_ray"] == "fan-end" for a in cons["attributions"])
    S = fan.spanning_trees["apex-star"]
    star = theorem39_consistency(fan.oracle, S, fan.oracle.ends.ends(8))
    ok = exact and stable and exceeds and attributed and star["all_finite"] and star["consistent"]
    report(4, "fundamental cuts", ok,
           f"ladder exact={exact} stable={stable}; fan exceeds={exceeds} attributed={attributed} "
           f"apex-star finite={star['all_finite']}")


def test_criterion_5_transfer():
    rows = []
    for name, (family, branches) in standard_partitions().items():
        rows += transfer_rows(name, family, branches, depth=12, k=16)
    discrepancies = sum(r.detail["discrepancies"] for r in rows)
    ok = len(rows) == 9 and all(r.ok for r in rows) and discrepancies == 0
    report(5, "contraction transfer", ok, f"{len(rows)} checks, discrepancies={discrepancies}")


def _extract_everything(tmp_path):
    made = []
    runs = []
    for spec in catalog.list_families():
        for preset in spec.presets:
            runs.append(["star-comb", "--family", spec.name, "--u", preset])
            runs.append(["theorem1", "--family", spec.name, "--u", preset])
        for end in spec.oracle.ends.ends(8):
            if end.dominated:
                runs.append(["fan", "--family", spec.name, "--end", end.id])
    for i, argv in enumerate(runs):
        out = tmp_path / f"{i:03d}.json"
        if main(["extract", *argv, "--out", str(out)]) == 0:
            made.append(out)
    return made


def test_criterion_6_certificates(tmp_path, capsys):
    extracted = _extract_everything(tmp_path)
    valid = sorted((FIXTURES / "valid").glob("*.json")) + extracted
    reverified = sum(1 for p in valid if not verify_document(json.loads(p.read_text())))
    index = json.loads((FIXTURES / "forged" / "index.json").read_text())
    rejected = 0
    for name, cls in index.items():
        found = verify_document(json.loads((FIXTURES / "forged" / name).read_text()))
        rejected += cls in {v.cls for v in found}
    capsys.readouterr()
    ok = len(extracted) > 0 and reverified == len(valid) and len(index) >= 12 and rejected == len(index)
    report(6, "certificate verification", ok,
           f"re-verified {reverified}/{len(valid)} ({len(extracted)} extracted); "
           f"forged rejected {rejected}/{len(index)}")


def test_criterion_7_star_decompositions():
    cases, passed, details = 0, 0, []
    for spec in catalog.list_families():
        for preset in spec.presets:
            if spec.known_answers[("duality", preset)] != "complement":
                continue
            cases += 1
            U = spec.preset(preset)
            try:
                sd = star_decomposition(spec.oracle, U, spec.decomposition(), members=U.members)
                audit = star_decomposition_audit(sd, U, members=U.members, depths=(5, 10, 15))
                dom = dominated_subgraph(sd, U, members=U.members)
            except CombforgeError as exc:
                details.append(f"{spec.name}/{preset}: {exc}")
                continue
            depths_ok = [d["depth"] for d in audit["depths"] if d["ok"]] == [5, 10, 15]
            tracked = all(v is not None for v in audit["ends_in_leaves"].values())
            good = audit["ok"] and depths_ok and tracked and dom.audit["contains_U"]
            passed += good
            if not good:
                details.append(f"{spec.name}/{preset}")
    ok = cases > 0 and passed == cases
    report(7, "star decompositions", ok, f"{passed}/{cases} presets " + " ".join(details))
