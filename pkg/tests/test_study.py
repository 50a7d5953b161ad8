import copy
import json
from importlib import resources

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greydematel.grey import LinguisticScale
from greydematel.study import (
    StudyError,
    check_study,
    load_scenarios,
    load_study,
    save_study,
    save_study_bundle,
    validate_document,
)

from .conftest import random_study_doc

TINY = {
    "name": "tiny",
    "barriers": [{"code": "A"}, {"code": "B"}],
    "experts": [{"id": "E1", "group": "g"}],
    "assessments": {"E1": [["N", "H"], ["L", "N"]]},
}


def _write(tmp_path, doc, name="study.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return p


def _messages(tmp_path, doc):
    _, findings = check_study(_write(tmp_path, doc))
    return [str(f) for f in findings]


def test_load_tiny(tmp_path):
    s = load_study(_write(tmp_path, TINY))
    assert (s.n, s.k, s.codes) == (2, 1, ["A", "B"])
    assert s.groups() == {"g": ["E1"]}


def test_load_synthetic(synthetic_path):
    s = load_study(synthetic_path)
    assert (s.n, s.k) == (10, 18)
    assert sorted(len(v) for v in s.groups().values()) == [6, 6, 6]


def test_codes_are_case_insensitive(tmp_path):
    doc = copy.deepcopy(TINY)
    doc["assessments"]["E1"] = [["n", "h"], [" l ", "N"]]
    s = load_study(_write(tmp_path, doc))
    assert s.assessments["E1"] == [["N", "H"], ["L", "N"]]


def test_non_square(tmp_path):
    doc = copy.deepcopy(TINY)
    doc["assessments"]["E1"] = [["N", "H", "L"], ["L", "N", "L"]]
    with pytest.raises(StudyError, match="expert E1: matrix is not square 2x2"):
        load_study(_write(tmp_path, doc))


def test_parse_error_has_position(tmp_path):
    msgs = _messages(tmp_path, '{"name": "x",\n  "barriers": [}')
    assert msgs == ["parse error at line 2, column 16: Expecting value"]


def test_missing_file(tmp_path):
    assert [str(f) for f in check_study(tmp_path / "nope.json")[1]][0].startswith("file not found")


def test_duplicate_barrier(tmp_path):
    doc = copy.deepcopy(TINY)
    doc["barriers"] = [{"code": "A"}, {"code": "A"}]
    assert "duplicate barrier code 'A'" in _messages(tmp_path, doc)


def test_unknown_code_names_expert_and_cell(tmp_path):
    doc = copy.deepcopy(TINY)
    doc["assessments"]["E1"][1][0] = "XX"
    (msg,) = _messages(tmp_path, doc)
    assert msg.startswith("expert E1, row 2, column 1: unknown code 'XX'")


def test_diagonal_must_be_none(tmp_path):
    doc = copy.deepcopy(TINY)
    doc["assessments"]["E1"][0][0] = "H"
    assert _messages(tmp_path, doc) == ["expert E1, row 1, column 1: diagonal must be 'N', got 'H'"]


def test_missing_rating(tmp_path):
    doc = copy.deepcopy(TINY)
    doc["assessments"]["E1"][0][1] = ""
    assert _messages(tmp_path, doc) == ["expert E1, row 1, column 2: missing rating"]


def test_missing_and_extra_assessments(tmp_path):
    doc = copy.deepcopy(TINY)
    doc["experts"].append({"id": "E2"})
    doc["assessments"]["E9"] = doc["assessments"]["E1"]
    msgs = _messages(tmp_path, doc)
    assert "expert E2: missing assessment" in msgs
    assert "expert E9: assessment given for an expert not on the panel" in msgs


def test_all_findings_reported(tmp_path):
    doc = copy.deepcopy(TINY)
    doc["assessments"]["E1"] = [["H", "Q"], ["L", "VH"]]
    assert len(_messages(tmp_path, doc)) == 3


@pytest.mark.parametrize(
    "mutate, fragment",
    [
        (lambda d: d.pop("barriers"), "'barriers' must be a non-empty list"),
        (lambda d: d.update(experts=[]), "'experts' must be a non-empty list"),
        (lambda d: d.update(assessments=[]), "'assessments' must map"),
        (lambda d: d.update(scale={"N": [0, 0], "L": [2, 1]}), "invalid scale"),
        (lambda d: d["experts"].append({"id": "E1"}), "duplicate expert id"),
        (lambda d: d["barriers"].append({"name": "no code"}), "has no code"),
    ],
)
def test_error_catalogue(tmp_path, mutate, fragment):
    doc = copy.deepcopy(TINY)
    mutate(doc)
    msgs = _messages(tmp_path, doc)
    assert any(fragment in m for m in msgs), msgs


def test_custom_scale_document(tmp_path):
    doc = copy.deepcopy(TINY)
    doc["scale"] = {"N": [0, 0], "Y": [1, 3]}
    doc["assessments"]["E1"] = [["N", "Y"], ["N", "N"]]
    s = load_study(_write(tmp_path, doc))
    assert s.scale == LinguisticScale.from_pairs({"N": (0, 0), "Y": (1, 3)})
    assert s.grey_matrices()[0][0, 1].as_tuple() == (1, 3)


def test_round_trip_json(tmp_path, synthetic_path):
    s = load_study(synthetic_path)
    again = load_study(save_study(s, tmp_path / "copy.json"))
    assert again == s


def test_round_trip_bundle(tmp_path, synthetic_path):
    s = load_study(synthetic_path)
    again = load_study(save_study_bundle(s, tmp_path / "bundle"))
    assert again.barriers == s.barriers and again.assessments == s.assessments
    assert [(e.id, e.group) for e in again.experts] == [(e.id, e.group) for e in s.experts]


def test_bundle_errors(tmp_path):
    (tmp_path / "b").mkdir()
    _, findings = check_study(tmp_path / "b")
    assert "CSV bundle is missing barriers.csv" in [str(f) for f in findings]


def test_bundle_label_mismatch(tmp_path):
    s = load_study(_write(tmp_path, TINY))
    bundle = save_study_bundle(s, tmp_path / "bundle")
    (bundle / "E1.csv").write_text(",A,C\nA,N,H\nB,L,N\n")
    _, findings = check_study(bundle)
    assert any("header does not list the barrier codes" in str(f) for f in findings)


def test_bundle_missing_matrix_file(tmp_path):
    s = load_study(_write(tmp_path, TINY))
    bundle = save_study_bundle(s, tmp_path / "bundle")
    (bundle / "E1.csv").unlink()
    assert [str(f) for f in check_study(bundle)[1]] == ["expert E1: missing assessment"]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 8), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_round_trip_property(tmp_path_factory, n, k, seed):
    doc = random_study_doc(np.random.default_rng(seed), n, k, groups=["a", "b"])
    study, findings = validate_document(doc)
    assert not findings
    path = tmp_path_factory.mktemp("rt") / "s.json"
    assert load_study(save_study(study, path)) == study


def test_fixtures_match_shipped_schema(fixtures_dir):
    schema = json.loads(resources.files("greydematel").joinpath("data/study.schema.json").read_text())
    for name in ("synthetic18.json", "tiny.json"):
        jsonschema.validate(json.loads((fixtures_dir / name).read_text()), schema)


def test_load_scenarios(fixtures_dir, synthetic_path):
    study = load_study(synthetic_path)
    (s1,) = load_scenarios(fixtures_dir / "scenarios_s1.json", study)
    assert s1.group_weights == {">8y": 0.5, "5-8y": 0.3, "3.5-5y": 0.2}
    assert len(load_scenarios(fixtures_dir / "scenarios_six_illustrative.json", study)) == 6


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ({"scenarios": []}, "non-empty"),
        ({"scenarios": [{"name": "x", "group_weights": {"g": -1}}]}, "non-negative"),
        ({"scenarios": [{"name": "x", "group_weights": {"g": 0}}]}, "all zero"),
        ({"scenarios": [{"name": "x", "group_weights": {"zzz": 1}}]}, "unknown group"),
        ({"scenarios": [{"group_weights": {"g": 1}}]}, "no name"),
    ],
)
def test_bad_scenarios(tmp_path, doc, fragment):
    study = load_study(_write(tmp_path, TINY))
    with pytest.raises(StudyError, match=fragment):
        load_scenarios(_write(tmp_path, doc, "sc.json"), study)
