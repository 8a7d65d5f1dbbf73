import json

import pytest
from click.testing import CliRunner

from curvemoduli.catalog import catalog_curve
from curvemoduli.cli import emit, main
from curvemoduli.curvegerm import CurveGerm


def invoke(*args):
    result = CliRunner().invoke(main, list(args))
    return result.exit_code, result.output


def write(tmp_path, doc, name="curve.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def test_semiring_golden_json():
    code, out = invoke("semiring", "--catalog", "golden")
    assert code == 0
    doc = json.loads(out)
    assert doc["conductor"] == [3, 5]
    assert doc["absolute_points"] == [[1, 2], [2, 4], [3, "inf"], ["inf", 3]]


def test_table_format_uses_infinity_glyph():
    code, out = invoke("semiring", "--catalog", "golden", "--format", "table")
    assert code == 0 and "∞" in out and "conductor" in out


def test_output_is_deterministic():
    first = invoke("classify", "--catalog", "type_row6")
    second = invoke("classify", "--catalog", "type_row6")
    assert first == second and first[0] == 0


def test_classify_fermat_5():
    code, out = invoke("classify", "--catalog", "fermat_5")
    doc = json.loads(out)
    assert code == 0
    assert (doc["type"], doc["nu1"], doc["nu2"], doc["dimension"]) == ("Od", 2, 2, 2)
    assert "perturbation" in doc


def test_unsupported_dimension_exits_2():
    code, out = invoke("dimension", "--catalog", "double_cusp")
    doc = json.loads(out)
    assert code == 2 and doc["dimension"] == "unsupported" and "blow-up" in doc["reason"]


def test_equation_only_semiring_is_unsupported():
    code, out = invoke("semiring", "--catalog", "fermat_5")
    assert code == 2 and json.loads(out)["status"] == "unsupported"


def test_input_errors_exit_1(tmp_path):
    assert invoke("semiring", "--input", write(tmp_path, "{not json"))[0] == 1
    assert invoke("semiring", "--input", str(tmp_path / "missing.json"))[0] == 1
    bad = {"branches": [{"x": [[1, "1"]], "y": []}], "equation": [[1, 0, "1"]]}
    assert invoke("semiring", "--input", write(tmp_path, bad))[0] == 1
    assert invoke("saito", "--catalog", "golden", "--degree-bound", "1")[0] == 1
    assert invoke("semiring", "--catalog", "golden", "--truncation", "4")[0] == 1
    assert invoke("semiring", "--catalog", "no_such_curve")[0] == 1


def test_identity_action():
    code, out = invoke("action", "--catalog", "golden", "--point", "2,3,5", "--phi", '[["0","1"],["0","1"]]')
    doc = json.loads(out)
    assert code == 0 and doc["image"] == ["2", "3", "5"]
    assert doc["orbit_representative"] == ["1", "0", "0"]


def test_marking_permutes_branches():
    code, out = invoke("semiring", "--catalog", "golden", "--marking", "2,1")
    assert code == 0 and json.loads(out)["conductor"] == [5, 3]


def test_equiv_command():
    code, out = invoke("equiv", "--catalog", "golden", "--other-catalog", "golden")
    assert code == 0 and json.loads(out)["equivalent"] is True


def test_input_file_round_trip(tmp_path):
    curve = catalog_curve("type_row6")
    doc = curve.to_json()
    again = CurveGerm.from_json(json.loads(json.dumps(doc))).to_json()
    assert again == doc
    code, out = invoke("saito", "--input", write(tmp_path, doc))
    assert code == 0 and json.loads(out)["type"] == "Ed"


def test_emit_encodes_infinity():
    assert json.loads(emit({"v": [float("inf"), 2]}, "json")) == {"v": ["inf", 2]}


@pytest.mark.parametrize("name", ["type_row3", "golden"])
def test_catalog_check_single(name):
    code, out = invoke("catalog", "--check", "--catalog", name)
    assert code == 0 and json.loads(out) == {name: "ok"}
