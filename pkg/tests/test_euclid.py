import pytest

from alwb.euclid import (
    ARTIFACTS, DomainError, EUCLID, EngelerDisjunct, NSN_GCD, UnknownArtifact, artifact,
    canonical, demo_nsn_diverge, demo_nsn_halt, demo_standard, engeler_disjunction,
    engeler_witness, expected_divergence_row, gcd_oracle, max_oracle,
)
from alwb.models import NSNValue, nsn_equal
from alwb.semantics import BudgetExhausted, EvalConfig, Halted
from alwb.syntax import Forall, Not, Less, Var


def test_every_artifact_parses_and_round_trips():
    from alwb.parser import parse
    for name, (sort, _) in ARTIFACTS.items():
        tree = artifact(name)
        assert parse(sort, canonical(name)) == tree


def test_euclid_canonical_string():
    assert canonical("E") == EUCLID


def test_remainder_loop_guard():
    loop = artifact("E-remainder-loop").second
    assert loop.cond == Not(Less(Var("r"), Var("m")))


def test_h_top_node():
    h = artifact("H")
    assert isinstance(h, Forall) and h.var == "n"


def test_unknown_artifact():
    with pytest.raises(UnknownArtifact):
        artifact("nope")


@pytest.mark.parametrize("n,m,g", [(12, 18, 6), (12, 15, 3), (7, 7, 7), (1, 9, 1)])
def test_gcd_oracle(n, m, g):
    assert gcd_oracle(n, m) == g


def test_gcd_oracle_domain():
    with pytest.raises(DomainError):
        gcd_oracle(0, 4)


def test_max_oracle():
    assert max_oracle(3, 8) == 8 and max_oracle(8, 3) == 8


def test_engeler_rows():
    assert [str(d) for d in engeler_disjunction(1)] == ["n=m"]
    assert [str(d) for d in engeler_disjunction(2)] == ["n=m", "n=2m", "2n=m"]
    assert [str(d) for d in engeler_disjunction(3)][3:] == ["n=3m", "2n=3m", "3n=2m", "3n=m"]


def test_engeler_rows_are_complete():
    from math import gcd
    for k in range(1, 9):
        pairs = {(d.a, d.b) for d in engeler_disjunction(k)}
        expected = {(a, b) for a in range(1, k + 1) for b in range(1, k + 1) if gcd(a, b) == 1}
        assert pairs == expected
        assert len(pairs) == len(engeler_disjunction(k))


def test_engeler_disjunct_rejects_non_coprime():
    with pytest.raises(ValueError):
        EngelerDisjunct(2, 4)


def test_engeler_rendering_uses_additions():
    from alwb.printer import render
    assert render(EngelerDisjunct(2, 3).formula()) == "((n + n) = ((m + m) + m))"


@pytest.mark.parametrize("n,m,w", [(4, 6, (3, 2, 3)), (5, 5, (1, 1, 1)), (9, 6, (2, 3, 3))])
def test_engeler_witness(n, m, w):
    assert engeler_witness(n, m) == w


def test_demo_standard():
    report = demo_standard(12, 18)
    assert report.passed
    assert isinstance(report.outcome, Halted)
    assert report.outcome.final.nums["n"] == 6
    assert "2 loop iterations" in report.render()
    assert report.render().splitlines()[0] == "demo: standard(12,18)"
    assert report.render().splitlines()[-1].startswith("verdict: PASS")


def test_demo_standard_budget_too_small():
    report = demo_standard(1, 40, EvalConfig(step_budget=10))
    assert not report.passed
    assert report.render().splitlines()[-1].startswith("verdict: FAIL")


def test_demo_nsn_halt():
    report = demo_nsn_halt()
    assert report.passed
    assert nsn_equal(report.outcome.final.nums["n"], NSN_GCD)


def test_demo_nsn_diverge_rows():
    report = demo_nsn_diverge()
    assert report.passed
    assert isinstance(report.outcome, BudgetExhausted)
    lines = report.render().splitlines()
    assert lines[1:7] == [
        "step | n | m",
        "0 | NSN(12,0,1) | NSN(15,1,2)",
        "1 | NSN(12,0,1) | NSN(3,1,2)",
        "2 | NSN(12,0,1) | NSN(-9,1,2)",
        "3 | NSN(12,0,1) | NSN(-21,1,2)",
        "4 | NSN(12,0,1) | NSN(-33,1,2)",
    ]


def test_demo_nsn_diverge_small_budget_fails():
    assert not demo_nsn_diverge(EvalConfig(step_budget=20)).passed


def test_expected_row_formula():
    assert expected_divergence_row(3) == (NSNValue(12, 0, 1), NSNValue(-21, 1, 2))
