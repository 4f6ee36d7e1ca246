import pytest

from alwb.parser import parse
from alwb.proof.schemas import SCHEMAS, Match, Mismatch, instantiate, match_schema, schema_metas
from alwb.suites import AXIOM_INSTANCES, axiom_instance
from alwb.models import StdNat
from alwb.semantics import EvalConfig, Refuted, bounded_validate


def f(text):
    return parse("formula", text)


def test_all_axioms_registered():
    assert sorted(SCHEMAS, key=lambda s: int(s[2:])) == [f"Ax{i}" for i in range(1, 24)]


def test_ax15_binding():
    m = match_schema("Ax15", f("([x := 0] ((x = 0) | (x < 0)) <-> ([x := 0] (x = 0) | [x := 0] (x < 0)))"))
    assert isinstance(m, Match)
    assert m.bindings == {"K": parse("program", "x := 0"), "a": f("(x = 0)"), "b": f("(x < 0)")}


def test_ax15_mismatch():
    assert isinstance(match_schema("Ax15", f("(0 = 0)")), Mismatch)


def test_ax21_instance_accepted():
    g = axiom_instance("Ax21", {"g": "(x < y)", "K": "x := s(x)", "a": "(x = y)"})
    m = match_schema("Ax21", g)
    assert isinstance(m, Match)
    assert m.bindings["K"] == parse("program", "x := s(x)")


def test_guard_metavariable_must_be_open():
    from alwb.syntax import Box, Iff, Skip, TrueConst, While
    k = parse("program", "x := 0")
    loop = While(Box(k, TrueConst()), Skip())
    a = TrueConst()
    shape = match_schema("Ax21", axiom_instance("Ax21", {"g": "true", "K": "skip", "a": "true"}))
    assert isinstance(shape, Match)
    bad = Iff(Box(loop, a), axiom_instance("Ax21", {"g": "true", "K": "skip", "a": "true"}).right)
    assert isinstance(match_schema("Ax21", bad), Mismatch)


def test_ax12_infers_replacement():
    m = match_schema("Ax12", f("(forall x . (x < s(x)) -> (s(y) < s(s(y))))"))
    assert isinstance(m, Match)
    assert m.bindings["t"] == parse("term", "s(y)")


def test_ax12_rejects_wrong_instance():
    assert isinstance(match_schema("Ax12", f("(forall x . (x < y) -> (y < x))")), Mismatch)


def test_ax14_side_condition():
    ok = f("([z := s(z)] exists x . (x = z) <-> exists y . [z := s(z)] (y = z))")
    assert isinstance(match_schema("Ax14", ok), Match)
    bad = f("([z := s(z)] exists x . (x = z) <-> exists z . [z := s(z)] (z = z))")
    m = match_schema("Ax14", bad)
    assert isinstance(m, Mismatch)


def test_ax18_boolean_part():
    g = axiom_instance("Ax18", {"x": "x", "t": "s(y)", "g": "((x < y) | ?q)", "q": "q", "h": "(y = 0)"})
    assert isinstance(match_schema("Ax18", g), Match)


def test_metavariable_sorts_consistent():
    for schema in SCHEMAS.values():
        schema_metas(schema.pattern)


def test_explicit_bindings_are_respected():
    g = f("((x = 0) | !(x = 0))")
    assert isinstance(match_schema("Ax11", g, {"a": f("(x = 0)")}), Match)
    assert isinstance(match_schema("Ax11", g, {"a": f("(y = 0)")}), Mismatch)


def test_instantiate_round_trip():
    for schema_id, instances in AXIOM_INSTANCES.items():
        for b in instances:
            g = axiom_instance(schema_id, b)
            m = match_schema(schema_id, g)
            assert isinstance(m, Match), schema_id
            assert instantiate(SCHEMAS[schema_id].pattern, m.bindings) == g


@pytest.mark.parametrize("schema_id", sorted(AXIOM_INSTANCES))
def test_soundness_harness(schema_id):
    # matched instances are never refuted on the standard model
    for b in AXIOM_INSTANCES[schema_id]:
        g = axiom_instance(schema_id, b)
        assert isinstance(match_schema(schema_id, g), Match)
        result = bounded_validate(g, StdNat(), EvalConfig(step_budget=200), 3)
        assert not isinstance(result, Refuted), schema_id


def test_at_least_three_instances_each():
    assert all(len(AXIOM_INSTANCES[f"Ax{i}"]) >= 3 for i in range(1, 24))
