"""
Tests for the command line front end: reports, formats and exit codes
"""

import json
import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from algebra.errors import ConfigurationError
from algebra.polyring import RatFunc, denominator_factors, get_context, poly_from_json
from cli.main import EXIT_OK, EXIT_USAGE, main
from models.config import Settings
from transverse.fixtures import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_orbit_text_report(capsys):
    code, out, _ = run(capsys, "orbit", "4", "3,1")
    assert code == EXIT_OK
    assert "characteristic: (2, 0, 2)" in out
    assert "height: 4" in out
    assert "dim g^e: 5" in out


def test_orbit_json_report(capsys):
    code, out, _ = run(capsys, "orbit", "5", "3,2", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["characteristic"] == [1, 1, 1, 1]
    assert report["height"] == 4
    assert report["centralizer_dim"] == 8
    assert report["classification"]["conormal_family"] is True
    assert report["classification"]["family_type"] == "II"


def test_orbit_latex_report(capsys):
    code, out, _ = run(capsys, "orbit", "4", "3,1", "--format", "latex")
    assert code == EXIT_OK
    assert "\\begin{tabular}" in out


@pytest.mark.parametrize("argv", [
    ["orbit", "4", "1,1,1,1"],
    ["orbit", "4", "1,3"],
    ["orbit", "4", "3,2"],
    ["transverse", "4", "3,1", "--complement", "conormal"],
    ["transverse", "4", "3,1", "--complement", "file:does/not/exist.json"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert "error:" in err


def test_malformed_complement_file(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    code, _, err = run(capsys, "transverse", "4", "3,1", "--complement", f"file:{path}")
    assert code == EXIT_USAGE
    assert "malformed" in err


def test_transverse_from_file_json(capsys):
    path = fixture_path("subregular_graded_prime")
    code, out, _ = run(capsys, "transverse", "4", "3,1", "--complement", f"file:{path}", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["degree"] == 2
    assert report["polynomial"] is True
    assert report["coordinate_scaling"] == ["-4", "1", "1", "1", "1"]
    assert report["jacobi"]["passed"] is True
    assert [t["name"] for t in report["tensors"]] == ["lambda", "lambda_prime"]


def test_transverse_ungraded_file_reports_denominators(capsys):
    path = fixture_path("subregular_ungraded")
    code, out, _ = run(capsys, "transverse", "4", "3,1", "--complement", f"file:{path}",
                       "--format", "json", "--tensor", "prime")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["polynomial"] is False
    assert report["degree"] is None
    assert report["grading"]["applicable"] is False
    (tensor,) = report["tensors"]
    factors = {d["factor"] for entry in tensor["non_polynomial_entries"] for d in entry["denominator"]}
    assert factors == {"q3 - 1"}


def test_transverse_builtin_text_and_latex(capsys):
    code, out, _ = run(capsys, "transverse", "5", "3,2", "--complement", "conormal")
    assert code == EXIT_OK
    assert "(conormal orbit)" in out
    assert "Jacobi identity: pass" in out

    code, out, _ = run(capsys, "transverse", "4", "3,1", "--format", "latex", "--show-a")
    assert code == EXIT_OK
    assert "\\begin{pmatrix}" in out
    assert "A_N(q)" in out


def test_transverse_json_is_deterministic(capsys, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["transverse", "4", "3,1", "--format", "json", "--output", str(first)]) == EXIT_OK
    assert main(["transverse", "4", "3,1", "--format", "json", "--output", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_check_command(capsys):
    code, out, _ = run(capsys, "check", "--max-n", "3", "--format", "json")
    assert code == EXIT_OK
    summary = json.loads(out)
    assert summary["failed"] == 0
    assert [suite["name"] for suite in summary["suites"]] == ["fixtures", "lie", "orbit", "transverse", "rescaling"]


def test_check_fixtures_text(capsys):
    code, out, _ = run(capsys, "check", "fixtures")
    assert code == EXIT_OK
    assert out.strip().endswith("total: 5 passed, 0 failed")


def _read_entry(ctx, entry):
    num = poly_from_json(ctx, entry["num"])
    if entry["den"] is None:
        return RatFunc.of(num)
    return RatFunc(num, poly_from_json(ctx, entry["den"]))


def test_json_tensor_entries_are_serialized_polynomials(capsys):
    code, out, _ = run(capsys, "transverse", "4", "3,1", "--format", "json")
    assert code == EXIT_OK
    lam = json.loads(out)["tensors"][0]
    ctx = get_context(5)
    for row in lam["entries"]:
        for entry in row:
            assert entry["den"] is None
            assert _read_entry(ctx, entry).format() == entry["text"]
    assert lam["entries"][0][0] == {"text": "0", "num": [], "den": None}
    assert all(term["coeff"].count("/") == 1 for row in lam["entries"] for e in row for term in e["num"])


def test_json_rational_entries_round_trip(capsys):
    path = fixture_path("subregular_ungraded")
    code, out, _ = run(capsys, "transverse", "4", "3,1", "--complement", f"file:{path}",
                       "--format", "json", "--tensor", "prime")
    assert code == EXIT_OK
    (tensor,) = json.loads(out)["tensors"]
    ctx = get_context(5)
    q3 = ctx.gens[2]
    rational = [entry for row in tensor["entries"] for entry in row if entry["den"] is not None]
    assert rational
    for entry in rational:
        r = _read_entry(ctx, entry)
        assert r.format() == entry["text"]
        assert {factor for factor, _ in denominator_factors(r)} == {q3 - 1}


@pytest.mark.parametrize("name, value", [("PT_SEED", "abc"), ("PT_NUM_THREADS", "0"), ("PT_FORM", "cartan")])
def test_invalid_environment_is_a_usage_error(capsys, monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigurationError):
        Settings.from_env()
    code, _, err = run(capsys, "orbit", "4", "3,1")
    assert code == EXIT_USAGE
    assert f"error: {name}" in err


def test_environment_settings(monkeypatch):
    monkeypatch.setenv("PT_NUM_THREADS", "3")
    monkeypatch.setenv("PT_SEED", "11")
    monkeypatch.setenv("PT_LOG_LEVEL", "info")
    settings = Settings.from_env()
    assert (settings.num_threads, settings.seed, settings.log_level) == (3, 11, "INFO")
