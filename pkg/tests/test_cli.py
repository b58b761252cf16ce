import json

import pytest

from app.main import run
from tests.conftest import A2_CARTAN, EXAMPLE_CARTAN, EXAMPLE_P4


def _lines(capsys):
    return [json.loads(line) for line in capsys.readouterr().out.splitlines() if line.strip()]


@pytest.fixture
def example_matrix(matrix_file):
    return matrix_file({"cartan": EXAMPLE_CARTAN}, "example.json")


@pytest.fixture
def a2_matrix(matrix_file):
    return matrix_file({"cartan": A2_CARTAN}, "a2.json")


@pytest.fixture
def example_table(example_matrix, tmp_path, capsys):
    assert run(["relations", "--matrix", example_matrix, "--degree", "4"]) == 0
    path = tmp_path / "table.jsonl"
    path.write_text(capsys.readouterr().out)
    return path


def test_relations_prints_the_example_relation(example_matrix, capsys):
    assert run(["relations", "--matrix", example_matrix, "--degree", "4"]) == 0
    lines = _lines(capsys)
    assert all(line["degree"] == 4 and line["kind"] == "prerelation" for line in lines)
    blocks = {tuple(line["blocks"][0]["multidegree"]): line["blocks"][0] for line in lines}
    assert blocks[(1, 0, 3)]["display"] == [EXAMPLE_P4]
    assert "redundant" not in blocks[(1, 0, 3)]


def test_relations_with_redundancy_flags(a2_matrix, capsys):
    assert run(["relations", "--matrix", a2_matrix, "--degree", "3", "--redundancy"]) == 0
    lines = _lines(capsys)
    assert sorted(tuple(line["blocks"][0]["multidegree"]) for line in lines) == [(1, 2), (2, 1)]
    assert all(line["blocks"][0]["redundant"] == [] for line in lines)


def test_check_identities(capsys):
    assert run(["check-identities", "--n", "3", "--seed", "1", "--count", "2"]) == 0
    reports = _lines(capsys)
    assert {r["suite"] for r in reports} >= {"braid_relations", "garside", "differential"}
    assert all(r["passed"] for r in reports)


def test_check_identities_selection(capsys):
    assert run(["check-identities", "--n", "3", "--count", "2", "--suite", "garside"]) == 0
    assert [r["suite"] for r in _lines(capsys)] == ["garside"]
    assert run(["check-identities", "--n", "3", "--count", "2", "--operator", "SnFactoredU"]) == 0
    assert [r["suite"] for r in _lines(capsys)] == ["symmetrizer"]
    assert run(["check-identities", "--n", "3", "--count", "1", "--operator", "Foo"]) == 2


def test_degrees(example_matrix, a2_matrix, capsys):
    assert run(["degrees", "--matrix", example_matrix, "--max", "4"]) == 0
    (report,) = _lines(capsys)
    assert not report["semipositive"]
    assert report["truncated_at"] == 4
    assert [1, 0, 3] in report["points"]

    assert run(["degrees", "--matrix", a2_matrix, "--max", "4"]) == 0
    (report,) = _lines(capsys)
    assert report["semipositive"]
    assert "truncated_at" not in report
    assert [2, 2] in report["points"]


def test_degrees_default_height(example_matrix, capsys):
    assert run(["degrees", "--matrix", example_matrix]) == 0
    (report,) = _lines(capsys)
    assert report["truncated_at"] == 8
    assert [1, 0, 3] in report["points"]


def test_degrees_with_mixed_diagonal(matrix_file, capsys):
    path = matrix_file({"braiding_exponents_doubled": [[4, -2], [-2, 2]]})
    assert run(["degrees", "--matrix", path, "--max", "6"]) == 0
    (report,) = _lines(capsys)
    assert "semipositive" not in report
    assert report["truncated_at"] == 6
    assert [2, 1] in report["points"]
    assert [3, 3] in report["points"]
    assert [1, 1] not in report["points"]


def test_witness_from_table(example_table, capsys):
    assert run(["witness", "--table", str(example_table)]) == 0
    reports = {tuple(r["multidegree"]): r for r in _lines(capsys)}
    report = reports[(1, 0, 3)]
    assert report["verdict"] == "NotInRadical"
    assert report["chain"] == [3, 3, 3]
    assert report["terminal"] == "36*f1"
    assert len(report["h_residues"]) == 3


def test_witness_from_matrix(example_matrix, capsys):
    assert run(["witness", "--matrix", example_matrix, "--degree", "4"]) == 0
    reports = {tuple(r["multidegree"]): r for r in _lines(capsys)}
    assert reports[(1, 0, 3)]["chain"] == [3, 3, 3]


def test_witness_needs_a_cartan_matrix(matrix_file):
    path = matrix_file({"braiding_exponents_doubled": [[4, -2], [-2, 4]]})
    assert run(["witness", "--matrix", path, "--degree", "3"]) == 2


def test_witness_needs_one_source(example_matrix, example_table):
    assert run(["witness", "--degree", "4"]) == 2
    assert run(["witness", "--matrix", example_matrix, "--table", str(example_table)]) == 2


def test_tampered_table_fails_verification(example_table):
    lines = [json.loads(line) for line in example_table.read_text().splitlines() if line.strip()]
    for line in lines:
        if line["blocks"][0]["multidegree"] == [1, 0, 3]:
            line["blocks"][0]["relations"][0][0]["coeff"] = "1"
    example_table.write_text("\n".join(json.dumps(line) for line in lines))
    assert run(["witness", "--table", str(example_table)]) == 1


def test_table_word_outside_its_block(example_table):
    lines = [json.loads(line) for line in example_table.read_text().splitlines() if line.strip()]
    for line in lines:
        if line["blocks"][0]["multidegree"] == [1, 0, 3]:
            line["blocks"][0]["relations"][0][0]["word"] = [2, 2, 2, 2]
    example_table.write_text("\n".join(json.dumps(line) for line in lines))
    assert run(["specialize", "--table", str(example_table)]) == 2


def test_table_with_code_in_a_coefficient(example_table, tmp_path):
    marker = tmp_path / "marker"
    lines = [json.loads(line) for line in example_table.read_text().splitlines() if line.strip()]
    lines[0]["blocks"][0]["relations"][0][0]["coeff"] = f"__import__('pathlib').Path('{marker}').write_text('x')"
    example_table.write_text("\n".join(json.dumps(line) for line in lines))
    assert run(["witness", "--table", str(example_table)]) == 2
    assert not marker.exists()


def test_malformed_inputs_exit_with_input_error(matrix_file):
    assert run(["relations", "--matrix", matrix_file("{not json"), "--degree", "3"]) == 2
    bad_cartan = matrix_file({"cartan": [[2, 1], [-1, 2]]})
    assert run(["relations", "--matrix", bad_cartan, "--degree", "3"]) == 2
    missing = matrix_file({"cartan": [[2, 0], [-1, 2]]})
    assert run(["dims", "--matrix", missing, "--max", "2"]) == 2
    assert run(["relations", "--matrix", "/nonexistent/matrix.json", "--degree", "3"]) == 2


def test_relations_rejects_degree_one(a2_matrix):
    assert run(["relations", "--matrix", a2_matrix, "--degree", "1"]) == 2


def test_dims_of_rank_one(matrix_file, capsys):
    assert run(["dims", "--matrix", matrix_file({"cartan": [[2]]}), "--max", "3"]) == 0
    reports = _lines(capsys)
    assert [r["degree"] for r in reports] == [0, 1, 2, 3]
    assert [r["total"] for r in reports] == [1, 1, 1, 1]


def test_balance(a2_matrix, capsys):
    assert run(["balance", "--matrix", a2_matrix, "--degree", "3"]) == 0
    (report,) = _lines(capsys)
    assert report["kind"] == "prerelation"
    assert all(b["balanced"] for b in report["blocks"])


def test_specialize_a2(a2_matrix, capsys):
    assert run(["specialize", "--matrix", a2_matrix, "--degree", "3"]) == 0
    reports = _lines(capsys)
    assert len(reports) == 2
    assert all(r["serre_member"] for r in reports)


def test_specialize_without_cartan(matrix_file, capsys):
    path = matrix_file({"braiding_exponents_doubled": [[4, -2], [-2, 4]]})
    assert run(["specialize", "--matrix", path, "--degree", "3"]) == 0
    reports = _lines(capsys)
    assert reports
    assert all("serre_member" not in r for r in reports)
