import copy
import json
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from combforge.verify import KINDS, VIOLATIONS, dumps, verify_document, violation_report

FIXTURES = Path(__file__).parent / "fixtures"
FORGED = json.loads((FIXTURES / "forged" / "index.json").read_text())
VALID = sorted((FIXTURES / "valid").glob("*.json"))


def _load(path: Path) -> dict:
    return json.loads(path.read_text())


def test_forged_corpus_is_large_enough():
    assert len(FORGED) >= 12
    assert set(FORGED.values()) <= set(VIOLATIONS)


@pytest.mark.parametrize("path", VALID, ids=lambda p: p.stem)
def test_valid_fixtures_verify(path):
    assert verify_document(_load(path)) == []


@pytest.mark.parametrize("name", sorted(FORGED))
def test_forged_fixture_is_rejected_with_its_class(name):
    found = verify_document(_load(FIXTURES / "forged" / name))
    assert FORGED[name] in {v.cls for v in found}


def test_report_shape():
    found = verify_document(_load(FIXTURES / "forged" / sorted(FORGED)[0]))
    report = violation_report(found)
    assert not report["ok"] and report["classes"] == sorted({v.cls for v in found})


def test_unknown_kind_is_schema():
    doc = _load(VALID[0])
    doc["kind"] = "ladder"
    assert [v.cls for v in verify_document(doc)] == ["schema"]
    assert "ladder" not in KINDS


def test_dumps_is_stable():
    doc = _load(VALID[0])
    assert dumps(doc) == dumps(json.loads(dumps(doc)))


GRID_COMB = _load(FIXTURES / "valid" / "comb_grid.json")


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_any_relabelled_spine_vertex_is_caught(data):
    doc = copy.deepcopy(GRID_COMB)
    spine = doc["payload"]["spine_prefix"]
    i = data.draw(st.integers(0, len(spine) - 1))
    shift = data.draw(st.integers(1, 50))
    spine[i] = {"index": spine[i]["index"] + shift}
    assert verify_document(doc)
