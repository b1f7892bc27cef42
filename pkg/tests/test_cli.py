import json
import subprocess
import sys

import pytest

from dgha.cli import EX_DATAERR, EX_USAGE, main
from dgha.presentation import load_example


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_pd_on_hanrei(capsys):
    code, rep = run_json(capsys, "pd", "--example", "hanrei")
    assert code == 0
    assert rep["results"]["pd"] == 1
    assert rep["results"]["ranks"] == [1, 1]
    assert rep["cutoff"] == 32 and rep["window"] == [-8, 8]
    assert rep["input_sha256"] == load_example("hanrei").digest()


def test_gorenstein_on_R_nG(capsys):
    code, rep = run_json(capsys, "gorenstein", "--example", "R_nG")
    assert code == 0
    assert rep["results"]["gorenstein"] is False
    assert rep["results"]["bass"]["0"] == 2


def test_cohomology_and_depth(capsys):
    _, rep = run_json(capsys, "cohomology", "--example", "hanrei")
    assert rep["results"] == {"H": {"-1": 1, "0": 1}, "inf": -1, "sup": 0, "amp": 1}
    code, rep = run_json(capsys, "depth", "--example", "S_kx")
    assert code == 0 and rep["results"]["via_bass"] == rep["results"]["via_sequence"] == 0


def test_bass_sources_agree(capsys):
    tables = []
    for src in ("ifij", "rhom", "dginj"):
        _, rep = run_json(capsys, "bass", "--example", "R_nG", "--source", src, "--window", "-1:2", "--cutoff", "5")
        tables.append({k: v for k, v in rep["results"]["bass"].items() if -1 <= int(k) <= 2})
    assert tables[0] == tables[1] == tables[2] == {"0": 2, "1": 3, "2": 6}


def test_resolve(capsys):
    _, rep = run_json(capsys, "resolve", "--sppj", "--example", "hanrei")
    assert rep["results"]["ranks"] == [1, 1] and rep["results"]["length"] == 1
    _, rep = run_json(capsys, "resolve", "--ifij", "--example", "R_dn")
    assert rep["results"]["multiplicities"] == [1] and rep["results"]["length"] == 0


def test_inconclusive_exit_code(capsys):
    code, rep = run_json(capsys, "injdim", "--example", "R_nG", "--cutoff", "3")
    assert code == 3
    assert rep["verdict"] == "Inconclusive"
    assert rep["results"]["injdim"] is None


def test_dualizing(capsys):
    code, rep = run_json(capsys, "dualizing", "--example", "R_dn")
    assert code == 0 and rep["results"]["dualizing"] is True


def test_verify_ab(capsys):
    code, rep = run_json(capsys, "verify", "--suite", "ab", "--seed", "7", "--count", "50")
    assert code == 0
    assert rep["results"]["counts"] == {"Holds": 50, "Violated": 0, "Inconclusive": 0}
    assert len(rep["results"]["reports"]) == 50


def test_violated_exit_code(capsys, monkeypatch):
    from dgha import cli
    from dgha.invariants import TheoremReport
    from dgha.verify import SuiteResult
    fake = SuiteResult("ab", 0, [TheoremReport("t", "i", 1, 2, "Violated")])
    monkeypatch.setattr(cli, "run_suite", lambda *a: fake)
    code, _ = run(capsys, "verify", "--suite", "ab")
    assert code == 2


def test_determinism(capsys):
    argv = ["verify", "--suite", "fj", "--seed", "3", "--count", "4", "--format", "json"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b


def test_cutoff_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("DGHA_CUTOFF", "4")
    _, rep = run_json(capsys, "pd", "--example", "hanrei")
    assert rep["cutoff"] == 4
    _, rep = run_json(capsys, "pd", "--example", "hanrei", "--cutoff", "9")
    assert rep["cutoff"] == 9


def test_input_file_and_errors(capsys, tmp_path):
    good = tmp_path / "doc.json"
    good.write_text(load_example("hanrei").dumps())
    code, rep = run_json(capsys, "pd", "--input", str(good))
    assert code == 0 and rep["results"]["pd"] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"field":{"kind":"Q"},"base_ring":{"kind":"monomial_quotient","vars":["x"],"relations":["x^"]}}')
    code, err = run_json(capsys, "pd", "--input", str(bad))
    assert code == EX_DATAERR
    assert err["error"]["code"] == "parse_error"
    assert err["error"]["path"] == "/base_ring/relations/0"
    code, err = run_json(capsys, "pd", "--input", str(tmp_path / "missing.json"))
    assert code == EX_DATAERR


def test_usage_errors(capsys):
    assert run(capsys, "pd")[0] == EX_USAGE
    assert run(capsys, "pd", "--example", "hanrei", "--window", "3")[0] == EX_USAGE
    assert run(capsys, "frobnicate")[0] == EX_USAGE


def test_generate_and_validate(capsys, tmp_path):
    _, rep = run_json(capsys, "generate", "--family", "shifted_cones", "--seed", "2", "--count", "3")
    docs = rep["results"]["docs"]
    assert len(docs) == 3
    f = tmp_path / "g.json"
    f.write_text(json.dumps(docs[0]))
    code, rep = run_json(capsys, "validate", "--input", str(f))
    assert code == 0 and rep["results"]["valid"]


def test_text_format(capsys):
    code, out = run(capsys, "pd", "--example", "hanrei")
    assert code == 0
    assert "pd: 1" in out


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "dgha.cli", "gorenstein", "--example", "K", "--format", "json"],
                         capture_output=True, text=True, check=True).stdout
    rep = json.loads(out)
    assert rep["results"]["gorenstein"] is True and rep["results"]["shift"] == 0
