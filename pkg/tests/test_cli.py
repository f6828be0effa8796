import json
import shutil
import subprocess
from pathlib import Path

import pytest

from combforge.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_star_comb_on_infinite_star(capsys):
    code, out, _ = run(capsys, "extract", "star-comb", "--family", "infinite-star")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "star"
    assert set(doc) == {"kind", "family", "preset", "budgets", "payload", "audit"}


def test_driver_on_grid_gives_a_comb(capsys):
    code, out, _ = run(capsys, "extract", "theorem1", "--family", "grid", "--u", "all", "-k", "8", "--depth", "40")
    assert code == 0
    assert json.loads(out)["kind"] == "comb"


def test_documentation_only_family(capsys):
    code, _, err = run(capsys, "extract", "theorem1", "--family", "seymour-thomas")
    assert code == 4
    assert "documentation" in err


@pytest.mark.parametrize("argv", [
    ["extract", "star-comb", "--family", "no-such-family"],
    ["extract", "star-comb", "--family", "ray", "--u", "no-such-preset"],
    ["extract", "no-such-operation", "--family", "ray"],
    ["bogus"],
    [],
    ["extract", "star-comb", "--family", "ray", "-k", "0"],
    ["suite", "duality", "--family", "nope"],
    ["export", "truncation"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err.startswith("combforge:")


def test_star_decomposition_refused_on_a_comb_preset(capsys):
    code, _, _ = run(capsys, "extract", "star-decomposition", "--family", "ray", "--u", "all")
    assert code == 4


def test_budget_exhaustion_exits_2(capsys):
    code, _, _ = run(capsys, "extract", "normal-tree", "--family", "ladder", "--depth", "2")
    assert code == 2
    code, _, _ = run(capsys, "extract", "normal-tree", "--family", "ladder", "--depth", "40")
    assert code == 0


def test_depth_default_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("COMBFORGE_DEPTH_DEFAULT", "40")
    code, out, _ = run(capsys, "extract", "normal-tree", "--family", "ladder")
    assert code == 0
    assert json.loads(out)["budgets"]["depth"] == 40
    monkeypatch.setenv("COMBFORGE_DEPTH_DEFAULT", "deep")
    code, _, _ = run(capsys, "extract", "normal-tree", "--family", "ladder")
    assert code == 1


def test_output_is_byte_deterministic(capsys):
    argv = ("extract", "rayless", "--family", "fan", "--steps", "60", "--window", "400")
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert first.endswith("\n")


def test_rayless_complete_graph_is_a_star(capsys):
    code, out, _ = run(capsys, "extract", "rayless", "--family", "complete-graph", "--steps", "200",
                       "--window", "400")
    assert code == 0
    heights = json.loads(out)["payload"]["heights"]
    assert len(heights) == 200 and max(heights.values()) == 1


def test_extract_then_verify_round_trip(capsys, tmp_path):
    target = tmp_path / "comb.json"
    code, _, _ = run(capsys, "extract", "star-comb", "--family", "comb", "--u", "teeth", "--out", str(target))
    assert code == 0
    code, out, _ = run(capsys, "verify", str(target))
    assert code == 0
    assert json.loads(out)["ok"] is True
    code, _, _ = run(capsys, "verify", str(target), "--family", "ray")
    assert code == 3


def test_forged_certificates_exit_3(capsys):
    index = json.loads((FIXTURES / "forged" / "index.json").read_text())
    for name in index:
        code, out, _ = run(capsys, "verify", str(FIXTURES / "forged" / name))
        assert code == 3, name
        assert json.loads(out)["ok"] is False


def test_verify_unreadable_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "verify", str(bad))[0] == 1


@pytest.mark.parametrize("fmt", ["dot", "text"])
def test_other_formats(capsys, fmt):
    code, out, _ = run(capsys, "extract", "star-comb", "--family", "infinite-star", "--format", fmt)
    assert code == 0
    if fmt == "dot":
        assert out.startswith("graph ")
    else:
        assert out.startswith("star on infinite-star")


def test_cut_operation(capsys):
    code, out, _ = run(capsys, "extract", "cut", "--family", "ladder", "--edge", "2,3")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert json.dumps(payload).count('"finite"') >= 1


def test_suite_cuts_passes(capsys):
    code, out, _ = run(capsys, "suite", "cuts")
    assert code == 0
    assert "FAIL" not in out


def test_families_and_exports(capsys):
    code, out, _ = run(capsys, "families")
    assert code == 0 and "seymour-thomas" in out and "documentation only" in out
    code, out, _ = run(capsys, "export", "manifest")
    assert code == 0 and json.loads(out)
    code, out, _ = run(capsys, "export", "decomposition", "--family", "ray", "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    code, out, _ = run(capsys, "export", "truncation", "--family", "grid", "--depth", "3")
    assert code == 0 and len(json.loads(out)["vertices"]) == 25


@pytest.mark.skipif(shutil.which("combforge") is None, reason="entry point not installed")
def test_console_script():
    proc = subprocess.run(["combforge", "extract", "theorem1", "--family", "seymour-thomas"],
                          capture_output=True, text=True)
    assert proc.returncode == 4
