import json
import subprocess
import sys

import pytest

from tdlc.cli import EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK, EXIT_PROPERTY, main
from tdlc.fixtures import load_fixture

INPUT_KEYS = ("schema", "universe", "p", "group", "endo", "subgroups")


def write_input(tmp_path, fixture):
    doc = load_fixture(fixture)
    path = tmp_path / f"{fixture}.json"
    path.write_text(json.dumps({k: doc[k] for k in INPUT_KEYS if k in doc}))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_scale_human(tmp_path, capsys):
    code, out, _ = run(capsys, "scale", "--input", write_input(tmp_path, "shift-t-inverse"))
    assert code == EXIT_OK
    assert out.startswith("scale = 2 (p=2), certified")


def test_scale_finite_is_exact(tmp_path, capsys):
    code, out, _ = run(capsys, "scale", "--input", write_input(tmp_path, "ex-3-1-p2"))
    assert code == EXIT_OK and out.startswith("scale = 1, exact")


def test_tidy_reports_tb2_failure(tmp_path, capsys):
    code, out, _ = run(capsys, "tidy", "--input", write_input(tmp_path, "ex-6-1"),
                       "--subgroup", "Vp")
    assert code == EXIT_OK
    assert "TB2 fails" in out and "index sequence 2, 2, 2, 1" in out
    assert "displacements: 2 -> 2 -> 1" in out


def test_json_report_round_trips(tmp_path, capsys):
    src = write_input(tmp_path, "ex-3-11-p2")
    code, out, _ = run(capsys, "tidy", "--input", src, "--subgroup", "U", "--json")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["exit_code"] == EXIT_OK
    assert rep["results"]["displacements"] == [4, 2, 1]
    assert rep["results"]["final_report"]["tidy"]
    again = tmp_path / "report.json"
    again.write_text(out)
    code, out, _ = run(capsys, "scale", "--input", str(again), "--subgroup",
                       rep["results"]["w"], "--json")
    assert code == EXIT_OK and json.loads(out)["results"]["scale"] == 1


def test_json_is_deterministic(tmp_path, capsys):
    src = write_input(tmp_path, "mult-one-plus-t-inverse")
    first = run(capsys, "scale", "--input", src, "--json")[1]
    second = run(capsys, "scale", "--input", src, "--json")[1]
    assert first == second
    assert "timing" not in json.loads(first)
    assert "timing" in json.loads(run(capsys, "scale", "--input", src, "--json", "--timing")[1])


def test_digest_tracks_input(tmp_path, capsys):
    a = json.loads(run(capsys, "scale", "--input", write_input(tmp_path, "ex-6-1"), "--json")[1])
    b = json.loads(run(capsys, "scale", "--input", write_input(tmp_path, "ex-3-11-p2"),
                       "--json")[1])
    assert a["inputs_digest"] != b["inputs_digest"]


@pytest.mark.parametrize("argv", [
    ["scale", "--input", "/nonexistent.json"],
    ["check", "--properties", "nope"],
    ["examples", "no-such-fixture"],
])
def test_input_errors_exit_2(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT and "error" in err


def test_unknown_subgroup_exit_2(tmp_path, capsys):
    code, out, _ = run(capsys, "scale", "--input", write_input(tmp_path, "ex-6-1"),
                       "--subgroup", "Q", "--json")
    assert code == EXIT_INPUT
    assert "unknown subgroup" in json.loads(out)["results"]["error"]


def test_small_horizon_is_inconclusive(tmp_path, capsys):
    code, out, _ = run(capsys, "tidy", "--input", write_input(tmp_path, "ex-3-11-p2"),
                       "--subgroup", "U", "--horizon", "1", "--json")
    assert code == EXIT_INCONCLUSIVE
    assert json.loads(out)["exit_code"] == EXIT_INCONCLUSIVE


def test_check(capsys):
    code, out, _ = run(capsys, "check", "--properties", "tidy-iff-minimizing,powers-converse-fails",
                       "--max-order", "6")
    assert code == EXIT_OK
    assert "tidy-iff-minimizing: PASS" in out and "2 expected failures" in out


def test_check_failure_exit_1(capsys, monkeypatch):
    from tdlc import properties

    monkeypatch.setattr(properties, "_tidy", lambda e, w: True)
    code, out, _ = run(capsys, "check", "--properties", "tidy-iff-minimizing",
                       "--max-order", "4", "--json")
    rep = json.loads(out)
    assert code == EXIT_PROPERTY
    assert rep["results"]["tidy-iff-minimizing"]["counterexamples"]


def test_examples(capsys):
    code, out, _ = run(capsys, "examples", "ex-3-1-p2", "ex-8-5")
    assert code == EXIT_OK
    assert out.splitlines() == [l for l in out.splitlines() if l.endswith("checks)")]
    code, out, _ = run(capsys, "examples", "--list")
    assert "ex-6-1: laurent (oracle, worked-example)" in out


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "tdlc.cli", "examples", "--list", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "ex-3-11-p2" in json.loads(proc.stdout)["results"]
