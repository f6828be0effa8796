"""Command-line front end: ``combforge families|extract|verify|suite|export``.

Exit codes: 0 verified, 1 usage error, 2 budget exhausted, 3 invariant
violation (including a failed verification), 4 precondition violation.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
from typing import List, Optional, Sequence

from . import catalog, export
from .catalog import DOCUMENTATION_ONLY, UnknownFamily
from .cuts import fundamental_cut, theorem39_consistency
from .decomposition import (build_reflecting_tree, dominated_subgraph, star_decomposition,
                            star_decomposition_audit)
from .errors import CombforgeError, InvariantViolation, PreconditionViolation
from .normal import build_normal_tree, check_normal
from .rayless import build_rayless_tree, theorem1_driver
from .starcomb import fan_certificate, star_comb
from .suites import SUITES, UsageError, run_suite
from .verify import dumps, envelope, verify_document, violation_report

OPERATIONS = ("star-comb", "theorem1", "rayless", "normal-tree", "star-decomposition", "dominated-subgraph",
              "fan", "reflecting-tree", "cut")
EXPORTS = ("manifest", "decomposition", "truncation")
FORMATS = ("json", "dot", "text")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def default_depth() -> int:
    raw = os.environ.get("COMBFORGE_DEPTH_DEFAULT")
    if raw is None:
        return 12
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"COMBFORGE_DEPTH_DEFAULT must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError("COMBFORGE_DEPTH_DEFAULT must be positive")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="combforge", description="Star-comb certificates on lazy infinite graphs.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    fam = sub.add_parser("families", help="list catalog families and presets")
    fam.add_argument("--format", choices=("json", "text"), default="text")

    ext = sub.add_parser("extract", help="run an operation and write its certificate")
    ext.add_argument("operation", choices=OPERATIONS)
    ext.add_argument("--family", required=True)
    ext.add_argument("--u", dest="preset", default="all", help="preset name for U")
    ext.add_argument("-k", type=_positive, default=8)
    ext.add_argument("--depth", type=_positive, default=None)
    ext.add_argument("--steps", type=_positive, default=None)
    ext.add_argument("--end", default=None, help="declared end id (fan)")
    ext.add_argument("--tree", default=None, help="spanning tree name (cut)")
    ext.add_argument("--edge", default=None, help="tree edge 'p,c' (cut)")
    ext.add_argument("--window", type=_positive, default=None, help="override the family's index window")
    ext.add_argument("--budget", type=_positive, default=10_000)
    ext.add_argument("--format", choices=FORMATS, default="json")
    ext.add_argument("--out", default=None)

    ver = sub.add_parser("verify", help="re-check a certificate file against the oracle")
    ver.add_argument("file")
    ver.add_argument("--family", default=None, help="require this family")

    sui = sub.add_parser("suite", help="run a property suite over the catalog")
    sui.add_argument("name", choices=SUITES)
    sui.add_argument("--family", action="append", default=None, help="restrict to these families")
    sui.add_argument("--format", choices=("json", "text"), default="text")

    exp = sub.add_parser("export", help="export catalog artifacts")
    exp.add_argument("what", choices=EXPORTS)
    exp.add_argument("--family", default=None)
    exp.add_argument("--depth", type=_positive, default=None)
    exp.add_argument("--format", choices=("json", "dot"), default="json")
    exp.add_argument("--out", default=None)
    return parser


def _family(name: str) -> catalog.FamilySpec:
    if name in DOCUMENTATION_ONLY:
        raise PreconditionViolation(f"{name!r} is documentation-only: {DOCUMENTATION_ONLY[name].notes}")
    try:
        return catalog.family(name)
    except UnknownFamily as exc:
        raise UsageError(str(exc.args[0])) from None


def _preset(spec: catalog.FamilySpec, name: str) -> catalog.Preset:
    try:
        return spec.preset(name)
    except KeyError:
        raise UsageError(f"family {spec.name} has no preset {name!r}; choose from {', '.join(spec.presets)}") from None


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _checked(doc: dict) -> dict:
    problems = verify_document(doc)
    if problems:
        raise InvariantViolation(problems[0].cls, f"extracted certificate failed verification: {problems[0].detail}")
    return doc


def _paths_dot(kind: str, doc: dict, G) -> str:
    paths, marked = export.payload_paths(kind, doc["payload"])
    return export.paths_dot(paths, G, name=kind, highlight=marked)


def _extract(args: argparse.Namespace) -> tuple:
    """Return (document, dot text or None)."""
    spec = _family(args.family)
    G = spec.oracle
    if args.window is not None:
        G = copy.copy(G)  # the catalog caches oracles; keep the override local
        G.default_window = args.window
    U = _preset(spec, args.preset)
    depth = args.depth or default_depth()
    steps = args.steps or U.steps or 40
    budgets = {"k": args.k, "depth": depth, "steps": steps}
    op = args.operation

    if op == "star-comb":
        cert = star_comb(G, U, args.k, depth)
        doc = _checked(envelope(cert.kind, spec.name, args.preset, budgets, cert.payload(G)))
        return doc, _paths_dot(cert.kind, doc, G)
    if op == "theorem1":
        res = theorem1_driver(G, U, U.cover, k=args.k, depth=depth, steps=steps)
        if res.comb is not None:
            doc = _checked(envelope("comb", spec.name, args.preset, budgets, res.comb.payload(G),
                                    {"route": res.route, **res.audit}))
            return doc, _paths_dot("comb", doc, G)
        assert res.tree is not None
        contained = sorted(v for v in res.tree.parent if U(v))
        payload = {**res.tree.to_json(G), "contains": [{"index": v, "label": G.label(v)} for v in contained]}
        doc = _checked(envelope("tree", spec.name, args.preset, budgets, payload, {"route": res.route, **res.audit}))
        return doc, export.tree_dot(res.tree, G, name="rayless")
    if op == "rayless":
        rr = build_rayless_tree(G, U, U.cover, steps, depth)
        contained = sorted(v for v in rr.tree.parent if U(v))
        payload = {**rr.tree.to_json(G), "contains": [{"index": v, "label": G.label(v)} for v in contained]}
        doc = _checked(envelope("tree", spec.name, args.preset, budgets, payload, rr.audit))
        return doc, export.tree_dot(rr.tree, G, name="rayless")
    if op == "normal-tree":
        T = build_normal_tree(G, U.cover, steps, depth=depth)
        bad = check_normal(T, G, depth=depth)
        if bad is not None:
            raise InvariantViolation("not-normal", f"T-path {bad} has incomparable ends")
        doc = _checked(envelope("tree", spec.name, None, budgets, T.to_json(G), {"normal": True}))
        return doc, export.tree_dot(T, G, name="normal")
    if op == "reflecting-tree":
        res = build_reflecting_tree(G, U, U.cover, spec.decomposition(), node_depth=min(depth, 10),
                                    members=U.members, k=args.k, steps=steps)
        assert res.tree is not None
        if not res.report["reflects"]:
            raise InvariantViolation("not-reflecting", json.dumps(res.report["tracking"], sort_keys=True))
        doc = _checked(envelope("tree", spec.name, None, budgets, res.tree.to_json(G), res.report))
        return doc, export.tree_dot(res.tree, G, name="reflecting")
    if op in ("star-decomposition", "dominated-subgraph"):
        sd = star_decomposition(G, U, spec.decomposition(), members=U.members)
        audit = star_decomposition_audit(sd, U, members=U.members)
        if op == "dominated-subgraph":
            audit = {"star_decomposition": audit, **dominated_subgraph(sd, U, members=U.members, depth=depth).audit}
        if not audit["ok"]:
            raise InvariantViolation("audit", f"{op} audit failed")
        doc = envelope(op, spec.name, args.preset, budgets, sd.to_json(), audit)
        return doc, export.decomposition_dot(spec.decomposition(), G)
    if op == "fan":
        ends = G.ends.ends(64)
        end = next((e for e in ends if e.id == args.end), None) if args.end else \
            next((e for e in ends if e.dominated), None)
        if end is None:
            raise PreconditionViolation(f"{spec.name} declares no {'end ' + args.end if args.end else 'dominated end'}")
        cert = fan_certificate(G, end, args.k)
        doc = _checked(envelope("fan", spec.name, None, budgets, cert.payload(G)))
        return doc, _paths_dot("fan", doc, G)
    if op == "cut":
        if not spec.spanning_trees:
            raise PreconditionViolation(f"{spec.name} ships no spanning tree")
        tree_name = args.tree or next(iter(spec.spanning_trees))
        if tree_name not in spec.spanning_trees:
            raise UsageError(f"unknown tree {tree_name!r}; choose from {', '.join(spec.spanning_trees)}")
        T = spec.spanning_trees[tree_name]
        cons = theorem39_consistency(G, T, G.ends.ends(8), budget=args.budget)
        payload: dict = {"consistency": json.loads(json.dumps(cons, default=list))}
        if args.edge:
            try:
                p, c = (int(x) for x in args.edge.split(","))
            except ValueError:
                raise UsageError("--edge expects 'p,c'") from None
            try:
                payload["cut"] = fundamental_cut(G, T, (p, c), args.budget).to_json(G)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        budgets = {"budget": args.budget}
        return envelope("cut", spec.name, None, budgets, payload), None
    raise UsageError(f"unknown operation {op!r}")


def _text_summary(doc: dict) -> str:
    p = doc["payload"]
    lines = [f"{doc['kind']} on {doc['family']} (preset {doc['preset']})"]
    if doc["kind"] == "star":
        lines.append(f"centre {p['center']['label']}, leaves " + ", ".join(r["label"] for r in p["leaves"]))
    elif doc["kind"] == "comb":
        lines.append(f"spine of {len(p['spine_prefix'])} vertices anchored to {p['anchor'] or p['continuation']}")
        lines.append("teeth " + ", ".join(r["label"] for r in p["teeth"]))
    elif doc["kind"] == "fan":
        lines.append(f"dominator {p['dominator']['label']} with {len(p['paths'])} paths to {p['end']}")
    elif doc["kind"] == "tree":
        heights = p["heights"].values()
        lines.append(f"{len(p['heights'])} vertices, radius {max(heights) if heights else 0}")
    lines.append("audit ok" if doc["audit"].get("ok", True) else "audit FAILED")
    return "\n".join(lines) + "\n"


def cmd_extract(args: argparse.Namespace) -> int:
    doc, dot = _extract(args)
    if args.format == "json":
        _emit(dumps(doc), args.out)
    elif args.format == "dot":
        if dot is None:
            raise UsageError(f"{args.operation} has no DOT rendering")
        _emit(dot, args.out)
    else:
        _emit(_text_summary(doc), args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from None
    problems = verify_document(doc)
    if args.family and isinstance(doc, dict) and doc.get("family") != args.family:
        from .verify import Violation
        problems.insert(0, Violation("unknown-family", f"certificate is for {doc.get('family')!r}"))
    sys.stdout.write(dumps(violation_report(problems)))
    return 0 if not problems else 3


def cmd_suite(args: argparse.Namespace) -> int:
    rows = run_suite(args.name, args.family)
    if args.format == "json":
        sys.stdout.write(dumps({"suite": args.name, "rows": [
            {"suite": r.suite, "family": r.family, "check": r.check, "ok": r.ok,
             "detail": json.loads(json.dumps(r.detail, default=str))} for r in rows]}))
    else:
        for r in rows:
            sys.stdout.write(r.line() + "\n")
        failed = sum(1 for r in rows if not r.ok)
        sys.stdout.write(f"{len(rows) - failed}/{len(rows)} passed\n")
    return 0 if all(r.ok for r in rows) else 3


def cmd_export(args: argparse.Namespace) -> int:
    if args.what == "manifest":
        if args.format != "json":
            raise UsageError("the manifest is JSON only")
        _emit(catalog.manifest_json(), args.out)
        return 0
    if args.family is None:
        raise UsageError(f"export {args.what} needs --family")
    spec = _family(args.family)
    G = spec.oracle
    depth = args.depth or default_depth()
    if args.what == "decomposition":
        dec = spec.decomposition()
        depth = min(depth, 6)
        text = export.decomposition_dot(dec, G, depth) if args.format == "dot" else dumps(dec.to_json(G, depth))
    else:
        trunc = G.truncate(window=G.default_window, radius=depth, root=G.root)
        text = export.truncation_dot(trunc, G) if args.format == "dot" else dumps(export.truncation_json(trunc, G))
    _emit(text, args.out)
    return 0


def cmd_families(args: argparse.Namespace) -> int:
    if args.format == "json":
        sys.stdout.write(catalog.manifest_json())
        return 0
    for spec in catalog.list_families():
        sys.stdout.write(f"{spec.name:<22} {spec.title}  presets: {', '.join(spec.presets)}\n")
    for doc in DOCUMENTATION_ONLY.values():
        sys.stdout.write(f"{doc.name:<22} {doc.title}  (documentation only)\n")
    return 0


COMMANDS = {"families": cmd_families, "extract": cmd_extract, "verify": cmd_verify,
            "suite": cmd_suite, "export": cmd_export}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.verb](args)
    except CombforgeError as exc:
        sys.stderr.write(f"combforge: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
