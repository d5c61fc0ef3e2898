import json
import os
import subprocess
import sys

import pytest

from perpsys.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_pipeline_text(capsys):
    code, out = run_cli(["pipeline"], capsys)
    assert code == 0
    assert "RESULT: all checks passed" in out
    assert "[PASS] The generalized quadrangle W(2)" in out
    assert "assumed, not verified" in out


def test_pipeline_json_schema(capsys):
    code, out = run_cli(["pipeline", "--format", "json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["schema_version"] == 1
    assert rep["counts"] == {"F4": 4, "L": 24, "F5": 5, "F6": 6, "F15": 15, "M21": 21, "F10": 10}
    assert rep["results"]["partial_geometry"] == {"s": 8, "t": 20, "alpha": 2}
    assert rep["results"]["srg"] == {"v": 729, "k": 168, "lambda": 27, "mu": 42}
    assert rep["groups"]["stabilizer"]["order"] == 240
    assert len(rep["grams"]["family_basis"]) == 10
    assert rep["timings_ms"] == {}
    assert all(len(m) == 2 and len(m[0]) == 6 for m in rep["stages"]["M21"])


def test_text_and_json_verdicts_agree(capsys):
    _, text = run_cli(["verify", "6"], capsys)
    _, js = run_cli(["verify", "6", "--format", "json"], capsys)
    rep = json.loads(js)
    for name, c in rep["checks"]["F6"].items():
        assert (("ok  " + name) in text) == c["pass"]


def test_json_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["pipeline", "--seed-index", "7", "--format", "json", "--out", str(a)]) == 0
    assert main(["pipeline", "--seed-index", "7", "--format", "json", "--out", str(b),
                 "--jobs", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["counts"]["M21"] == 21


def test_timings_flag(capsys):
    code, out = run_cli(["verify", "4", "--format", "json", "--timings"], capsys)
    assert code == 0 and "L" in json.loads(out)["timings_ms"]


@pytest.mark.parametrize("lemma,needle", [("1", "500/500 agree"), ("4", "|L| = 24"),
                                          ("5", "|<C,D>| = 240"), ("6", "|F6| = 6"),
                                          ("15", "unique line in span(m5, m6)")])
def test_verify_stages(lemma, needle, capsys):
    code, out = run_cli(["verify", lemma], capsys)
    assert code == 0 and needle in out


def test_verify_fifteen_confirmations(capsys):
    _, out = run_cli(["verify", "15"], capsys)
    assert out.count("ok  unique line in span") == 15


@pytest.mark.parametrize("args", [["verify", "9"], ["pipeline", "--seed-index", "99"],
                                  ["pipeline", "--seed-index", "x"], ["polarity-search", "--budget", "-1"],
                                  []])
def test_usage_errors(args):
    with pytest.raises(SystemExit) as info:
        main(args)
    assert info.value.code == 2


def test_quiet(capsys):
    code, out = run_cli(["verify", "4", "--quiet"], capsys)
    assert code == 0 and out == ""


def test_polarity_search_and_witness_roundtrip(tmp_path, capsys):
    out = tmp_path / "w.json"
    assert main(["polarity-search", "--format", "json", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["ok"]
    assert rep["witnesses"]["hyperbolic"]["singular_points"] == 130
    assert rep["witnesses"]["elliptic"]["singular_points"] == 112
    assert all(r["pass"] for r in rep["reverified"].values())
    assert main(["check-witness", str(out)]) == 0
    again = tmp_path / "w2.json"
    main(["polarity-search", "--format", "json", "--out", str(again)])
    assert again.read_bytes() == out.read_bytes()
    capsys.readouterr()


def test_tampered_witness_fails(tmp_path):
    out = tmp_path / "w.json"
    main(["polarity-search", "--format", "json", "--out", str(out)])
    rep = json.loads(out.read_text())
    rep["witnesses"]["elliptic"]["sym"] = rep["witnesses"]["hyperbolic"]["sym"]
    out.write_text(json.dumps(rep))
    assert main(["check-witness", str(out), "--quiet"]) == 1
    assert main(["check-witness", str(tmp_path / "missing.json"), "--quiet"]) == 2


def test_polarity_search_failure_is_reported(capsys):
    code, out = run_cli(["polarity-search", "--search-group", "full", "--budget", "0"], capsys)
    assert code == 1 and "RESULT: FAILED" in out and "no hyperbolic or elliptic" in out


def test_pure_python_backend_gives_identical_report():
    env = dict(os.environ, PERPSYS_PURE_PYTHON="1")
    cmd = [sys.executable, "-m", "perpsys", "pipeline", "--format", "json", "--quiet"]
    pure = subprocess.run(cmd[:-1], env=env, capture_output=True, text=True, check=True)
    compiled = subprocess.run(cmd[:-1], capture_output=True, text=True, check=True)
    assert pure.stdout == compiled.stdout
    probe = subprocess.run([sys.executable, "-c", "import perpsys; print(perpsys.BACKEND)"],
                           env=env, capture_output=True, text=True, check=True)
    assert probe.stdout.strip() == "python"
