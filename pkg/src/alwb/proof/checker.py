"""Step-by-step checking of proof scripts."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..models import StdNat
from ..parser import ParseError, parse
from ..semantics import EvalConfig, Refuted, Structure, bounded_validate
from ..syntax import Var, alpha_equal
from .rules import OMEGA_RULES, check_rule, omega_premise
from .schemas import SCHEMAS, match_schema, parse_binding, schema_metas
from .script import (
    AxiomInstance, OmegaApp, ProofScript, RuleApp, TheoryAxiom, TrustedLemma,
)
from .theories import NotFirstOrder, UnknownAxiom, theory_axiom

OMEGA_VAR_BOUND = 3
OMEGA_BUDGET = 200


@dataclass(frozen=True)
class StepVerdict:
    id: str
    kind: str
    detail: str = ""
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.kind == "OK"

    def render(self) -> str:
        text = f"{self.id} {self.kind}"
        if self.note:
            text += f" {self.note}"
        if self.detail:
            text += f" ({self.detail})"
        return text


@dataclass(frozen=True)
class CheckReport:
    steps: tuple
    trusted: tuple = ()

    @property
    def accepted(self) -> bool:
        return all(v.ok for v in self.steps)

    @property
    def failed_at(self) -> Optional[str]:
        for v in self.steps:
            if not v.ok:
                return v.id
        return None

    def verdict(self, step_id: str) -> StepVerdict:
        for v in self.steps:
            if v.id == step_id:
                return v
        raise KeyError(step_id)

    def render(self) -> str:
        lines = [v.render() for v in self.steps]
        if self.accepted:
            lines.append(f"ACCEPTED trusting [{', '.join(self.trusted)}]")
        else:
            lines.append(f"REJECTED at {self.failed_at}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Passed:
    name: str


@dataclass(frozen=True)
class TrustedLemmaRefuted:
    name: str
    valuation: object


def validate_trusted(name: str, formula, structure: Optional[Structure] = None,
                     bound: int = 4, budget: int = 200):
    """Screen a trusted lemma by bounded validation; only a refutation fails it."""
    s = structure or StdNat()
    result = bounded_validate(formula, s, EvalConfig(step_budget=budget), bound)
    if isinstance(result, Refuted):
        return TrustedLemmaRefuted(name, result.valuation)
    return Passed(name)


@dataclass
class _State:
    structure: Structure
    proven: dict = field(default_factory=dict)
    trusted: list = field(default_factory=list)


def _verdict(step, kind, detail="", note=""):
    return StepVerdict(step.id, kind, detail, note)


def _check_axiom(step, by: AxiomInstance, st: _State):
    if by.schema not in SCHEMAS:
        return _verdict(step, "UnknownAxiom", f"no schema {by.schema}")
    metas = schema_metas(SCHEMAS[by.schema].pattern)
    bindings = {}
    for name, text in by.bindings:
        if name not in metas:
            return _verdict(step, "SchemaMismatch", f"{by.schema} has no metavariable {name}")
        try:
            bindings[name] = parse_binding(metas[name], text)
        except ParseError as err:
            return _verdict(step, "SchemaMismatch", f"binding {name}: {err}")
    result = match_schema(by.schema, step.formula, bindings)
    if hasattr(result, "bindings"):
        return _verdict(step, "OK")
    kind = "SideConditionViolated" if result.side_condition else "SchemaMismatch"
    return _verdict(step, kind, result.reason)


def _check_theory(step, by: TheoryAxiom, st: _State):
    try:
        axiom = theory_axiom(by.theory, by.name, by.phi)
    except UnknownAxiom as err:
        return _verdict(step, "UnknownAxiom", str(err))
    except NotFirstOrder as err:
        return _verdict(step, "NotFirstOrder", str(err))
    if alpha_equal(axiom, step.formula):
        return _verdict(step, "OK")
    return _verdict(step, "SchemaMismatch", f"not axiom {by.name} of {by.theory}")


def _check_rule(step, by: RuleApp, st: _State):
    premises = []
    for pid in by.premises:
        if pid not in st.proven:
            return _verdict(step, "PremiseMissing", f"no earlier step {pid}")
        premises.append(st.proven[pid])
    extras = {}
    for name, text in by.extras:
        try:
            if name == "K":
                extras[name] = parse("program", text)
            else:
                v = parse("term", text)
                extras[name] = v.name if isinstance(v, Var) else v
        except ParseError as err:
            return _verdict(step, "SchemaMismatch", f"extra {name}: {err}")
    result = check_rule(by.rule, premises, step.formula, extras)
    return _verdict(step, result.kind, result.detail)


def _check_trusted(step, by: TrustedLemma, st: _State):
    result = validate_trusted(by.name, step.formula, st.structure, by.bound, by.budget)
    if isinstance(result, TrustedLemmaRefuted):
        return _verdict(step, "TrustedLemmaRefuted",
                        f"{by.name} fails at {result.valuation.format(st.structure)}")
    if by.name not in st.trusted:
        st.trusted.append(by.name)
    return _verdict(step, "OK")


def _check_omega(step, by: OmegaApp, st: _State, templates: dict):
    if by.rule not in OMEGA_RULES:
        return _verdict(step, "SchemaMismatch", f"{by.rule} is not an omega-rule")
    if by.samples < 1:
        return _verdict(step, "SchemaMismatch", "sample count must be at least 1")
    template = templates.get(by.template)
    if template is None:
        return _verdict(step, "PremiseMissing", f"no template {by.template}")
    for i in range(by.samples):
        try:
            expected = omega_premise(by.rule, step.formula, i)
        except ValueError as err:
            return _verdict(step, "SchemaMismatch", str(err))
        sub = _State(st.structure, dict(st.proven), st.trusted)
        sub_steps = template.instantiate(i)
        for s in sub_steps:
            v = _check_step(s, sub, templates)
            if not v.ok:
                return _verdict(step, f"OmegaSampleFailed({i})", v.render())
            sub.proven[s.id] = s.formula
        if not sub_steps or not alpha_equal(sub_steps[-1].formula, expected):
            return _verdict(step, f"OmegaSampleFailed({i})",
                            "template does not conclude the premise instance")
    result = bounded_validate(step.formula, st.structure,
                              EvalConfig(step_budget=OMEGA_BUDGET), OMEGA_VAR_BOUND)
    if isinstance(result, Refuted):
        return _verdict(step, "OmegaSampleFailed(validation)",
                        f"conclusion refuted at {result.valuation.format(st.structure)}")
    return _verdict(step, "OK", note=f"schema-checked (ω, {by.samples} samples)")


def _check_step(step, st: _State, templates: dict) -> StepVerdict:
    by = step.by
    if isinstance(by, AxiomInstance):
        return _check_axiom(step, by, st)
    if isinstance(by, TheoryAxiom):
        return _check_theory(step, by, st)
    if isinstance(by, RuleApp):
        return _check_rule(step, by, st)
    if isinstance(by, TrustedLemma):
        return _check_trusted(step, by, st)
    if isinstance(by, OmegaApp):
        return _check_omega(step, by, st, templates)
    raise TypeError(f"unknown justification {by!r}")


def check_proof(script: ProofScript, structure: Optional[Structure] = None) -> CheckReport:
    """Check every step in order; later steps may cite earlier ones only."""
    st = _State(structure or StdNat())
    verdicts = []
    for step in script.steps:
        if step.id in st.proven:
            verdicts.append(_verdict(step, "SchemaMismatch", "duplicate step id"))
            continue
        verdicts.append(_check_step(step, st, script.templates))
        st.proven[step.id] = step.formula
    return CheckReport(tuple(verdicts), tuple(st.trusted))
