import json
import subprocess
import sys

import pytest

from paca.cli import main


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_prob_and_classify_exit_codes(capsys):
    w = "00000111222" + "33333"
    code, out, _ = call(capsys, "prob", "--automaton", "appendixA", "--input", w, "--json")
    assert code == 0 and json.loads(out)["probability"] == "3/16"
    assert call(capsys, "classify", "--automaton", "appendixA", "--input", w, "--mode", "one:7/8")[0] == 0
    assert call(capsys, "classify", "--automaton", "appendixA", "--input", "0011223", "--mode", "one:7/8")[0] == 1
    assert call(capsys, "classify", "--automaton", "thm31_at_most_one_one", "--input", "0101",
                "--mode", "two:1/8")[0] == 2


def test_usage_and_format_errors(capsys, tmp_path):
    assert call(capsys, "prob", "--automaton", "nope", "--input", "0")[0] == 3
    assert call(capsys, "prob")[0] == 3
    assert call(capsys, "diagram", "--automaton", "appendixA", "--input", "abc", "--seed", "1")[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"states": ["a"], "input_alphabet": ["a"], "accepting": ["a"], "rule0": {}}')
    assert call(capsys, "prob", "--automaton", str(bad), "--input", "a")[0] == 3


def test_budget_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("PACA_BUDGET", "4")
    code, _, err = call(capsys, "prob", "--automaton", "thm31_expanded", "--input", "0101010",
                        "--method", "enum")
    assert code == 4 and "budget" in err


def test_run_critical_independence_horizon(capsys):
    assert call(capsys, "run", "--automaton", "degenerate_no_11", "--input", "0101")[0] == 0
    assert call(capsys, "run", "--automaton", "degenerate_no_11", "--input", "0110")[0] == 1
    code, out, _ = call(capsys, "critical", "--automaton", "appendixA", "--input", "00111222333",
                        "--step", "3", "--json")
    assert code == 0 and len(json.loads(out)["critical"]) == 3
    assert call(capsys, "independence", "--automaton", "appendixA", "--input", "00000112223333",
                "--i", "5", "--j", "7", "--step", "3")[0] == 1
    assert call(capsys, "horizon", "--automaton", "thm31_at_most_one_one", "--input", "0100",
                "--claimed", "7")[0] == 0


def test_transform_round_trip(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = call(capsys, "transform", "reduce-one", "--in", "appendixA", "--p", "7/8",
                      "--p-target", "1/2", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["provenance"]["parameters"]["m"] == 6
    w = "00111222333"
    direct = call(capsys, "prob", "--automaton", "appendixA", "--input", w, "--json")[1]
    p = __import__("fractions").Fraction(json.loads(direct)["probability"])
    reloaded = json.loads(call(capsys, "prob", "--automaton", str(out), "--input", w, "--json")[1])
    assert __import__("fractions").Fraction(reloaded["probability"]) == 1 - (1 - p) ** 6


def test_lang_verbs(capsys, tmp_path):
    spec = "corpus/th11.json"
    assert call(capsys, "lang", "--spec", spec, "--input", "0100")[0] == 0
    assert call(capsys, "lang", "--spec", spec, "--input", "0111", "--scanner")[0] == 1
    norm = tmp_path / "n.json"
    assert call(capsys, "lang", "--spec", spec, "--normalize", "--out", str(norm))[0] == 0
    code, out, _ = call(capsys, "equiv", "--a", spec, "--b", str(norm), "--max-len", "8", "--json")
    assert code == 0 and json.loads(out)["equal"]
    code, out, _ = call(capsys, "equiv", "--a", "degenerate_no_11", "--b", "thm31_at_most_one_one",
                        "--mode-a", "one:1/2", "--mode-b", "two:1/4", "--json")
    assert code == 1 and json.loads(out)["counterexample"] == "101"


def test_diagram_and_fixtures(capsys, tmp_path):
    code, out, _ = call(capsys, "diagram", "--automaton", "appendixA", "--input", "00111222333",
                        "--tape", ";".join(["11111111111"] * 3))
    assert code == 0 and "ACC*" in out and "REJ" in out
    svg = tmp_path / "d.svg"
    assert call(capsys, "diagram", "--automaton", "appendixA", "--input", "0011122233",
                "--seed", "2", "--format", "svg", "--out", str(svg))[0] == 0
    assert svg.read_text().startswith("<svg")
    code, out, _ = call(capsys, "fixtures", "--list", "--json")
    assert "appendixA" in json.loads(out)["fixtures"]
    assert call(capsys, "fixtures", "--export", str(tmp_path / "c"))[0] == 0


def test_identical_invocations_give_identical_bytes(tmp_path):
    args = [sys.executable, "-m", "paca.cli", "transform", "reduce-two", "--in", "no_11_two_sided",
            "--p", "1/4", "--p-target", "5/32", "--json"]
    a = subprocess.run(args, capture_output=True, check=True).stdout
    b = subprocess.run(args, capture_output=True, check=True).stdout
    assert a == b and b"achieved_error" in a
