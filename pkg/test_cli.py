"""
Tests for the command-line surface and its exit codes
"""

import json

import pytest

from cli import main
from config import EXIT_FAILED, EXIT_OK, EXIT_USAGE
from modules.formats import write_matrix_csv
from modules.process import self_circle


def _report(capsys):
    return json.loads(capsys.readouterr().out)


def test_check_named(capsys):
    assert main(["check", "--named", "self_circle"]) == EXIT_OK
    assert _report(capsys)["consistent"] is True
    assert main(["check", "--named", "unidirectional_cycle"]) == EXIT_FAILED
    assert _report(capsys)["consistent"] is False


def test_check_process_file(tmp_path, capsys):
    path = tmp_path / "circle.json"
    path.write_text(json.dumps(self_circle().to_json()))
    assert main(["check", "--process", str(path)]) == EXIT_OK
    assert _report(capsys)["type"] == "ICO"


def test_usage_errors(tmp_path, capsys):
    assert main(["bogus"]) == EXIT_USAGE
    assert main(["check", "--named", "self_circle", "--unknown"]) == EXIT_USAGE
    assert main(["structure", "--catalog", str(tmp_path / "absent.jsonl")]) == EXIT_USAGE


def test_effect_matrix(tmp_path, capsys):
    path = tmp_path / "z.csv"
    write_matrix_csv([[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1]], path)
    assert main(["effect", "--matrix", str(path)]) == EXIT_OK
    assert _report(capsys) == {"case": "3", "kind": "Extra", "witness_tags": [1, 1]}


def test_dual(capsys):
    assert main(["dual", "--n", "2"]) == EXIT_OK
    report = _report(capsys)
    assert (report["direction_a"], report["direction_b"]) == ("pass", "pass")


def test_enum_then_structure(tmp_path, capsys):
    catalog = tmp_path / "n2.jsonl"
    assert main(["enum", "--n", "2", "--catalog", str(catalog), "--threads", "1"]) == EXIT_OK
    assert _report(capsys)["classes"] == 2

    out = tmp_path / "classes.json"
    assert main(["structure", "--catalog", str(catalog), "--out", str(out)]) == EXIT_OK
    classes = _report(capsys)
    assert [row["structure_id"] for row in classes] == ["S01", "S02"]
    assert json.loads(out.read_text()) == classes


def test_discover_small(tmp_path, capsys):
    catalog = tmp_path / "n2_sampled.jsonl"
    args = ["discover", "--n", "2", "--seconds", "60", "--seed", "4", "--threads", "1",
            "--objectives", "4", "--catalog", str(catalog)]
    assert main(args) == EXIT_OK
    first = _report(capsys)
    assert 1 <= first["classes"] <= 2
    assert main(args) == EXIT_OK
    assert _report(capsys)["new_classes"] == 0


def test_switch(capsys):
    assert main(["switch"]) == EXIT_OK
    assert _report(capsys)["contractions_ok"] is True


@pytest.mark.slow
def test_certify_exit_code(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["certify", "--out", str(out)]) == EXIT_FAILED
    report = _report(capsys)
    assert report["verdict"] == "not_violated"
    assert json.loads(out.read_text()) == report
