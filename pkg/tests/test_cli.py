from __future__ import annotations

import json
import time
from importlib.resources import files
from pathlib import Path

import jsonschema
import pytest

from choiceid.cli import FIXTURE_DIR, GOLDEN_DIR, fixture_names, golden_pair, main
from choiceid.io import Report

SCHEMA = json.loads(files("choiceid").joinpath("report.schema.json").read_text(encoding="utf-8"))
DOCS_SCHEMA = Path(__file__).resolve().parents[1] / "docs" / "report.schema.json"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc), encoding="utf-8")
    return str(path)


@pytest.mark.parametrize(
    "name, headline",
    [
        ("example1", "GLOBAL (unique matching t1→x, t2→z, t3→y)"),
        ("example6", "STRUCTURAL (Γ-class [2,2] cancels)"),
    ],
)
def test_analyze_headlines(capsys, name, headline):
    code, out, _ = run(capsys, "analyze", str(FIXTURE_DIR / f"{name}.json"))
    assert code == 0
    assert out.splitlines()[0] == headline


def test_malformed_json_exits_2_with_position(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", write(tmp_path, "bad.json", '{"kind": "pattern",\n  "types": [}'))
    assert code == 2
    assert "line 2" in err and "column" in err


def test_invalid_model_exits_2(capsys, tmp_path):
    doc = {"kind": "pattern", "alternatives": ["x"], "types": ["t1"], "allowed": [[2]]}
    assert run(capsys, "analyze", write(tmp_path, "m.json", doc))[0] == 2
    assert run(capsys, "analyze", "fixture:no_such_fixture")[0] == 2
    assert run(capsys, "montecarlo", "fixture:example1", "--samples", "0")[0] == 2


def test_intractable_model_exits_3(capsys, tmp_path):
    r = 21
    doc = {
        "kind": "pattern",
        "alternatives": [f"x{i}" for i in range(r)],
        "types": [f"t{i}" for i in range(r)],
        "allowed": [[int(i == j) for j in range(r)] for i in range(r)],
    }
    assert run(capsys, "analyze", write(tmp_path, "big.json", doc))[0] == 3


def test_recover_identity_echoes_the_shares(capsys, tmp_path):
    shares = write(tmp_path, "p.json", ["1/2", "1/3", "1/6"])
    code, out, _ = run(capsys, "recover", "fixture:identity3", "--shares", shares, "--format", "json")
    assert code == 0
    result = json.loads(out)["result"]
    assert result["unique"] and result["particular"] == ["1/2", "1/3", "1/6"]


def test_recover_prints_the_cancelling_direction(capsys):
    code, out, _ = run(capsys, "recover", "fixture:example6")
    assert code == 0
    assert "(1, -1, -1, 1)" in out.splitlines()[0]


def test_recover_inconsistent_shares_exits_4(capsys, tmp_path):
    shares = write(tmp_path, "p.json", {"shares": [1, 0, 0, 0]})
    assert run(capsys, "recover", "fixture:example6", "--shares", shares)[0] == 4


@pytest.mark.parametrize("name, fraction", [("example1", 1.0), ("example6", 0.0)])
def test_montecarlo_fractions(capsys, name, fraction):
    code, out, _ = run(capsys, "montecarlo", f"fixture:{name}", "--samples", "1000", "--format", "json")
    assert code == 0
    assert json.loads(out)["result"]["full_rank_fraction"] == fraction


def test_montecarlo_same_seed_is_byte_identical(capsys):
    argv = ("montecarlo", "fixture:example1_augmented", "--samples", "200", "--seed", "5", "--format", "json")
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_fixtures_list(capsys):
    code, out, _ = run(capsys, "fixtures", "list")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == fixture_names()


def test_fixtures_check_passes(capsys):
    code, out, _ = run(capsys, "fixtures", "check")
    assert code == 0 and "FAIL" not in out


def test_fixtures_check_reports_a_mismatch(capsys, monkeypatch, tmp_path):
    for p in GOLDEN_DIR.iterdir():
        (tmp_path / p.name).write_bytes(p.read_bytes())
    (tmp_path / "example1.txt").write_text("tampered\n", encoding="utf-8")
    monkeypatch.setattr("choiceid.cli.GOLDEN_DIR", tmp_path)
    code, out, _ = run(capsys, "fixtures", "check")
    assert code == 1 and "FAIL example1" in out


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_matches_golden_quickly(name):
    start = time.perf_counter()
    text, js = golden_pair(name)
    assert time.perf_counter() - start < 1.0
    assert text == (GOLDEN_DIR / f"{name}.txt").read_text(encoding="utf-8")
    assert js == (GOLDEN_DIR / f"{name}.json").read_text(encoding="utf-8")


@pytest.mark.parametrize("name", fixture_names())
def test_reports_validate_and_roundtrip(name):
    text, js = golden_pair(name)
    doc = json.loads(js)
    jsonschema.validate(doc, SCHEMA)
    report = Report.from_json(js)
    assert report.to_json() == js and report.to_text() == text
    # text and JSON carry the same verdicts
    assert text.splitlines()[0] == doc["headline"]
    for s in doc["sections"]:
        assert f"[{s['name']}] {s['class'].upper()}" in text


def test_other_commands_validate_against_the_schema(capsys):
    for argv in (
        ("recover", "fixture:example6"),
        ("montecarlo", "fixture:example5", "--samples", "20"),
        ("analyze", "fixture:example5", "--verbose", "--timing"),
        ("analyze", "fixture:multiocc1_three", "--generic"),
        ("analyze", "fixture:example1_augmented", "--global"),
    ):
        code, out, _ = run(capsys, *argv, "--format", "json")
        assert code == 0
        jsonschema.validate(json.loads(out), SCHEMA)


def test_docs_schema_is_the_shipped_schema():
    assert json.loads(DOCS_SCHEMA.read_text(encoding="utf-8")) == SCHEMA


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "choiceid", "analyze", "fixture:example1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("GLOBAL")
