import random

import pytest
from hypothesis import given, settings, strategies as st

from alwb.gen import BOOL_NAMES, NAMES, TreeGen
from alwb.models import StdNat
from alwb.parser import parse
from alwb.proof.rules import check_pc, check_rule, is_assignment_chain, is_tautology, omega_premise
from alwb.semantics import EvalConfig, F, T, Valuation, eval_formula
from alwb.syntax import Box, Exists, Forall, Implies


def f(text):
    return parse("formula", text)


def p(text):
    return parse("program", text)


def test_r1_ok():
    r = check_rule("R1", [f("(0 = 0)"), f("((0 = 0) -> (0 < s(0)))")], f("(0 < s(0))"))
    assert r.ok


def test_r1_swapped_premises():
    r = check_rule("R1", [f("((0 = 0) -> (0 < s(0)))"), f("(0 = 0)")], f("(0 < s(0))"))
    assert r.kind == "SchemaMismatch"


def test_r1_missing_premise():
    assert check_rule("R1", [f("(0 = 0)")], f("(0 < s(0))")).kind == "PremiseMissing"


def test_r2_ok():
    r = check_rule("R2", [f("((x = 0) -> (x < s(0)))")],
                   f("([y := 0] (x = 0) -> [y := 0] (x < s(0)))"), {"K": p("y := 0")})
    assert r.ok


def test_r2_wrong_program():
    r = check_rule("R2", [f("((x = 0) -> (x < s(0)))")],
                   f("([y := 0] (x = 0) -> [y := s(0)] (x < s(0)))"))
    assert r.kind == "SchemaMismatch"


def test_r2_aux():
    assert check_rule("R2'", [f("(x = x)"), f("[y := 0] true")], f("[y := 0] (x = x)")).ok
    assert not check_rule("R2'", [f("(x = x)"), f("[y := s(0)] true")], f("[y := 0] (x = x)")).ok


def test_r6_side_condition():
    r = check_rule("R6", [f("((x = 0) -> (x = 0))")], f("(exists x . (x = 0) -> (x = 0))"))
    assert r.kind == "SideConditionViolated"


def test_r6_ok():
    assert check_rule("R6", [f("((x = 0) -> (y = y))")], f("(exists x . (x = 0) -> (y = y))")).ok


def test_r7():
    assert check_rule("R7", [f("((y = y) -> (x = x))")], f("((y = y) -> forall x . (x = x))")).ok
    r = check_rule("R7", [f("((x = 0) -> (x = x))")], f("((x = 0) -> forall x . (x = x))"))
    assert r.kind == "SideConditionViolated"


def test_descent_rules():
    loop = "[while !(x = 0) do x := P(x) od] (x = 0)"
    assert check_rule("D1", [f("((x = k) -> [x := P(x)] (x = P(k)))")], f(loop)).ok
    assert check_rule("D2", [f("((x = k) -> [x := P(x)] (x < P(k)))")], f(loop)).ok
    assert check_rule("D2", [f("((x = k) -> [x := P(x)] (x = P(k)))")], f(loop)).kind == "SchemaMismatch"
    bad = check_rule("D1", [f("((x = x) -> [x := P(x)] (x = P(x)))")], f(loop))
    assert bad.kind == "SideConditionViolated"


def test_omega_rules_need_templates():
    assert check_rule("R4", [], f("(U[x := s(x)] (x = 0) -> true)")).kind == "SchemaMismatch"


def test_pc():
    assert is_tautology(f("([x := 0] (x = 0) | ![x := 0] (x = 0))"))
    assert not is_tautology(f("(x = 0)"))
    assert check_pc([f("(a1 = 0)"), f("((a1 = 0) -> (b = 0))")], f("(b = 0)")).ok
    assert not check_pc([f("(a1 = 0)")], f("(b = 0)")).ok


def test_pc_atoms_up_to_alpha():
    assert is_tautology(f("(exists x . (x = y) -> exists z . (z = y))"))


def test_omega_premises():
    c = f("([y := 0] U[y := s(y)] (x = y) -> (x = x))")
    assert omega_premise("R4", c, 2) == f("([y := 0][y := s(y)][y := s(y)] (x = y) -> (x = x))")
    c5 = f("(true -> I[x := s(x)] (0 < s(x)))")
    assert omega_premise("R5", c5, 0) == f("(true -> (0 < s(x)))")
    c3 = f("([while (x < y) do x := s(x) od] (x = y) -> true)")
    assert omega_premise("R3", c3, 1) == f(
        "([if (x < y) then x := s(x) fi] (!(x < y) & (x = y)) -> true)")


def test_omega_prefix_must_be_assignments():
    with pytest.raises(ValueError):
        omega_premise("R4", f("([skip] U[y := s(y)] (x = y) -> true)"), 0)
    assert is_assignment_chain(p("{x := 0; y := x}"))
    assert not is_assignment_chain(p("{x := 0; skip}"))


def _valuations(rng, count=6):
    for _ in range(count):
        yield Valuation({n: rng.randrange(4) for n in NAMES}, {b: rng.random() < 0.5 for b in BOOL_NAMES})


CFG = EvalConfig(step_budget=60, iter_bound=6, carrier_bound=3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_rule_sanity_r1_r2(seed):
    # accepted applications with true premises never give a false conclusion
    rng = random.Random(seed)
    gen = TreeGen(rng, mul=False)
    a, b, k = gen.formula(3), gen.formula(3), gen.program(3)
    s = StdNat()
    imp = Implies(a, b)
    concl2 = Implies(Box(k, a), Box(k, b))
    assert check_rule("R1", [a, imp], b).ok
    assert check_rule("R2", [imp], concl2).ok
    for v in _valuations(rng):
        if eval_formula(a, s, v, CFG) is T and eval_formula(imp, s, v, CFG) is T:
            assert eval_formula(b, s, v, CFG) is not F


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_rule_sanity_r6_r7(seed):
    rng = random.Random(seed)
    gen = TreeGen(rng, mul=False)
    a, b = gen.formula(3), gen.formula(3)
    x = "v"  # not among generated names, so never free in b
    r6 = check_rule("R6", [Implies(a, b)], Implies(Exists(x, a), b))
    r7 = check_rule("R7", [Implies(b, a)], Implies(b, Forall(x, a)))
    assert r6.ok and r7.ok
