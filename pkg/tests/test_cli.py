import json
import os
from pathlib import Path

import pytest

from qgw import __version__
from qgw.cli import RunConfig, main, run_command
from qgw.errors import StructureError

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("QGW_REGEN_GOLDEN") == "1"

CASES = {
    "check_hopf": ["check-hopf", "--group", "s3"],
    "haar": ["haar", "--group", "s3"],
    "dual": ["dual", "--group", "s3"],
    "kac_quotient_group": ["kac-quotient", "--group", "s3"],
    "kac_quotient_suq2": ["kac-quotient", "--presentation", "suq2.json", "--ideal", "gamma", "--cap", "6"],
    "certify_trace_zero": ["certify-trace-zero", "--presentation", "suq2", "--target", "gamma* gamma",
                           "--target", "alpha* alpha", "--cap", "2"],
    "quotient": ["quotient", "--presentation", "suq2", "--ideal", "gamma", "--check-trace"],
    "corep_decompose": ["corep-decompose", "--group", "s3"],
    "fusion": ["fusion", "--group", "s3"],
    "hankel": ["hankel", "--window", "nwindow.json"],
    "corpus_sweep": ["corpus-sweep"],
}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def same(a, b, tol=1e-9):
    """Structural equality with a float tolerance (the golden files are not BLAS-bitwise)."""
    if isinstance(a, dict):
        return isinstance(b, dict) and a.keys() == b.keys() and all(same(a[k], b[k], tol) for k in a)
    if isinstance(a, list):
        return isinstance(b, list) and len(a) == len(b) and all(same(x, y, tol) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        return isinstance(b, (int, float)) and abs(a - b) <= tol
    return a == b


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys, monkeypatch):
    monkeypatch.delenv("QGW_DEFAULT_CAP", raising=False)
    code, out, _ = run(CASES[name], capsys)
    assert code == 0
    path = GOLDEN / f"{name}.json"
    if REGEN:
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(out)
    doc = json.loads(out)
    assert doc["ok"] and doc["failures"] == [] and doc["version"] == __version__
    assert same(doc, json.loads(path.read_text()))


@pytest.mark.parametrize("name", ["kac_quotient_suq2", "hankel", "corpus_sweep"])
def test_byte_determinism(name, capsys):
    _, a, _ = run(CASES[name], capsys)
    _, b, _ = run(CASES[name], capsys)
    assert a == b


def test_report_contents(capsys):
    _, out, _ = run(CASES["kac_quotient_suq2"], capsys)
    doc = json.loads(out)
    assert doc["config"]["cap"] == 6 and doc["config"]["inputs"] == {"presentation": "suq2.json"}
    r = doc["results"]["SUq2"]
    assert r["kac_type"] and r["descent_verified_to_degree"] == 6 and r["quotient_blocks"] == [1] + [2] * 6


def test_hankel_verdict(capsys):
    _, out, _ = run(CASES["hankel"], capsys)
    res = json.loads(out)["results"]["result"]
    assert res["verdict"] == "obstructed" and res["rank"] == 2


def test_out_file_and_summary(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(["check-hopf", "--group", "Z3", "--out", str(target)], capsys)
    assert code == 0 and "ok" in out.lower()
    assert json.loads(target.read_text())["ok"]


def test_failing_check_exits_one(capsys):
    code, out, _ = run(["kac-quotient", "--presentation", "suq2", "--ideal", "alpha", "--cap", "4"], capsys)
    doc = json.loads(out)
    assert code == 1 and doc["failures"] and not doc["ok"]
    code, out, _ = run(["quotient", "--presentation", "double_torus", "--ideal", "a"], capsys)
    assert code == 1 and json.loads(out)["failures"]


def test_bad_json_reports_location(tmp_path, capsys):
    path = tmp_path / "g.json"
    path.write_text('{"elements": ["e"],\n  "table": [[0]],, "identity": 0}')
    code, _, err = run(["check-hopf", "--group", str(path)], capsys)
    assert code == 2 and "g.json:2:" in err


@pytest.mark.parametrize("argv,needle", [
    (["certify-trace-zero", "--presentation", "suq2", "--target", "beta"], "unknown generator"),
    (["haar", "--group", "nonexistent"], "nonexistent"),
    (["hankel", "--window", "missing-window"], "missing-window"),
    (["check-hopf", "--group", "s3", "--cap", "0"], "--cap"),
    (["check-hopf", "--group", "s3", "--tol", "-1"], "--tol"),
])
def test_input_errors_exit_two(argv, needle, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and needle in err


def test_unwritable_output_exits_two(tmp_path, capsys):
    code, _, err = run(["check-hopf", "--group", "Z2", "--out", str(tmp_path / "no" / "such" / "dir.json")], capsys)
    assert code == 2 and "dir.json" in err


def test_default_cap_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("QGW_DEFAULT_CAP", "3")
    _, out, _ = run(["certify-trace-zero", "--presentation", "suq2", "--target", "gamma* gamma"], capsys)
    assert json.loads(out)["config"]["cap"] == 3
    monkeypatch.setenv("QGW_DEFAULT_CAP", "x")
    code, _, err = run(["certify-trace-zero", "--presentation", "suq2", "--target", "gamma"], capsys)
    assert code == 2 and "QGW_DEFAULT_CAP" in err


def test_run_config_validation():
    with pytest.raises(StructureError):
        RunConfig("haar", cap=0)
    with pytest.raises(StructureError):
        RunConfig("haar", tol=0.0)
    status, doc = run_command(RunConfig("hankel", {"window": "character.json"}))
    assert status == 0 and doc["results"]["result"]["verdict"] == "ap"
