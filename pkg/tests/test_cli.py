import json
import subprocess
import sys

import pytest

from alwb.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_skip(capsys):
    assert run(capsys, "parse", "program", "skip") == (0, "skip\n", "")


def test_parse_artifact(capsys):
    code, out, _ = run(capsys, "parse", "formula", "@H")
    assert code == 0 and out.startswith("forall n . forall m .")


def test_syntax_error_exit_two(capsys):
    code, _, err = run(capsys, "parse", "term", "s(")
    assert code == 2 and "line 1, column 3" in err


def test_usage_error_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_bad_set_is_usage_error(capsys):
    code, _, err = run(capsys, "run", "--set", "n", "skip")
    assert code == 2 and "NAME=VALUE" in err


def test_run_nsn_divergence(capsys):
    code, out, _ = run(capsys, "run", "--model", "nsn", "--set", "n=NSN(12,0,1)",
                       "--set", "m=NSN(15,1,2)", "--budget", "100", "--trace", "@E")
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "BudgetExhausted after 100 steps"
    assert lines[1:5] == ["step | n | m", "0 | NSN(12,0,1) | NSN(15,1,2)",
                          "1 | NSN(12,0,1) | NSN(3,1,2)", "2 | NSN(12,0,1) | NSN(-9,1,2)"]


def test_run_standard(capsys):
    code, out, _ = run(capsys, "run", "--set", "n=12", "--set", "m=18", "@E")
    assert code == 0 and out.startswith("Halted after 7 steps: n=6, m=6")


def test_eval_union_witness(capsys):
    code, out, _ = run(capsys, "eval", "--set", "n=4", "--set", "m=6", "@H-union-matrix")
    assert (code, out) == (0, "True (witness i=2)\n")


def test_eval_divergent_box_false(capsys):
    code, out, _ = run(capsys, "eval", "--model", "nsn", "--budget", "1000",
                       "--set", "n=NSN(12,0,1)", "--set", "m=NSN(15,1,2)", "@H-matrix")
    assert (code, out) == (1, "False\n")


def test_eval_unbound_is_usage_error(capsys):
    code, _, err = run(capsys, "eval", "(x = y)")
    assert code == 2 and "UnboundVariable" in err


def test_validate_refutes_s_on_nsn(capsys):
    code, out, _ = run(capsys, "validate", "--model", "nsn", "--var-bound", "2", "--all",
                       "--output", "json", "@S")
    data = json.loads(out)
    assert code == 1 and data["result"] == "Refuted"
    points = [data["valuation"]] + data["others"]
    assert any(p.startswith("x=NSN(0,1,2),") for p in points)


def test_validate_s_on_standard(capsys):
    code, out, _ = run(capsys, "validate", "--var-bound", "6", "@S")
    assert code == 0 and out.startswith("ValidUpToBound")


def test_check_shipped(capsys):
    code, out, _ = run(capsys, "check", "@lemma1")
    assert code == 0 and out.splitlines()[-1].startswith("ACCEPTED trusting")
    code, out, _ = run(capsys, "check", "@lemma1_altered_conclusion")
    assert code == 1 and out.splitlines()[-1] == "REJECTED at s7"


def test_check_missing_file(capsys):
    code, _, _ = run(capsys, "check", "/nonexistent.proof")
    assert code == 2


def test_demo_commands(capsys):
    assert run(capsys, "demo", "nsn-halt")[0] == 0
    code, out, _ = run(capsys, "demo", "nsn-diverge")
    assert code == 0 and "BudgetExhausted after 1000 steps" in out
    code, out, _ = run(capsys, "demo", "standard", "--set", "n=12", "--set", "m=18")
    assert code == 0 and out.startswith("demo: standard(12,18)")


def test_suite_command(capsys):
    code, out, _ = run(capsys, "suite", "engeler")
    assert code == 0 and out.splitlines()[-1] == "verdict: PASS 0 failures"


def test_json_mirrors_text(capsys):
    code, out, _ = run(capsys, "run", "--output", "json", "--trace", "--set", "n=4",
                       "--set", "m=6", "@E")
    data = json.loads(out)
    assert data["outcome"] == "Halted" and data["final"] == {"n": "2", "m": "2"}
    assert data["trace"][1] == {"n": "4", "m": "2"}


def test_bounds_must_be_positive(capsys):
    assert run(capsys, "eval", "--iter-bound", "0", "true")[0] == 2


def test_output_is_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "alwb", "check", "@lemma1"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first
