"""Proof scripts for algorithmic logic: schemas, rules, theories and the checker."""
from .checker import CheckReport, Passed, StepVerdict, TrustedLemmaRefuted, check_proof, validate_trusted
from .rules import check_pc, check_rule, is_tautology, omega_premise
from .schemas import SCHEMAS, Match, Mismatch, instantiate, match_schema
from .script import ProofScript, ProofStep, ScriptError, Template, load_script, parse_script
from .theories import NotFirstOrder, UnknownAxiom, axiom_names, induction_instance, theory_axiom

__all__ = [
    "CheckReport", "Passed", "StepVerdict", "TrustedLemmaRefuted", "check_proof",
    "validate_trusted", "check_pc", "check_rule", "is_tautology", "omega_premise",
    "SCHEMAS", "Match", "Mismatch", "instantiate", "match_schema", "ProofScript",
    "ProofStep", "ScriptError", "Template", "load_script", "parse_script",
    "NotFirstOrder", "UnknownAxiom", "axiom_names", "induction_instance", "theory_axiom",
]
