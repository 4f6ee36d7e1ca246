"""Inference rules R1, R2, R2', R6, R7, the derived rules D1, D2 and PC.

The omega-rules R3, R4 and R5 are handled by the checker (they need a
template of premises); :func:`omega_premise` computes their i-th premise.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from ..syntax import (
    And, Assign, Box, Eq, Exists, FalseConst, Forall, Iff, If, Implies,
    IterInter, IterUnion, Less, Not, Or, Pred, Seq, Skip, TrueConst, Var,
    While, Zero, alpha_equal, free_vars, iterate, program_vars, term_vars,
)


@dataclass(frozen=True)
class RuleResult:
    kind: str  # OK, SchemaMismatch, SideConditionViolated, PremiseMissing
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.kind == "OK"


OK = RuleResult("OK")


def _mismatch(detail: str) -> RuleResult:
    return RuleResult("SchemaMismatch", detail)


def _side(detail: str) -> RuleResult:
    return RuleResult("SideConditionViolated", detail)


ARITY = {"R1": 2, "R2": 1, "R2'": 2, "R6": 1, "R7": 1, "D1": 1, "D2": 1}
OMEGA_RULES = ("R3", "R4", "R5")


def check_rule(rule_id: str, premises: Sequence, conclusion, extras: Optional[dict] = None) -> RuleResult:
    """Check one application of a finitary rule; premises in rule order."""
    extras = extras or {}
    if rule_id in OMEGA_RULES:
        return _mismatch(f"{rule_id} is an omega-rule; apply it with a premise template")
    if rule_id == "PC":
        return check_pc(premises, conclusion)
    if rule_id not in ARITY:
        return _mismatch(f"unknown rule {rule_id}")
    if len(premises) < ARITY[rule_id]:
        return RuleResult("PremiseMissing", f"{rule_id} needs {ARITY[rule_id]} premise(s)")
    if len(premises) > ARITY[rule_id]:
        return _mismatch(f"{rule_id} takes {ARITY[rule_id]} premise(s)")
    return _RULES[rule_id](premises, conclusion, extras)


def _r1(premises, conclusion, extras):
    alpha, imp = premises
    if not isinstance(imp, Implies):
        return _mismatch("second premise is not an implication")
    if not alpha_equal(imp.left, alpha):
        return _mismatch("antecedent of the implication differs from the first premise")
    if not alpha_equal(imp.right, conclusion):
        return _mismatch("conclusion differs from the consequent of the implication")
    return OK


def _r2(premises, conclusion, extras):
    (imp,) = premises
    if not isinstance(imp, Implies):
        return _mismatch("premise is not an implication")
    if not (isinstance(conclusion, Implies) and isinstance(conclusion.left, Box)
            and isinstance(conclusion.right, Box)):
        return _mismatch("conclusion is not of the form ([K] a -> [K] b)")
    k = conclusion.left.prog
    if conclusion.right.prog != k:
        return _mismatch("the two programs of the conclusion differ")
    if "K" in extras and extras["K"] != k:
        return _mismatch("program differs from the one given with the rule")
    if not (alpha_equal(conclusion.left.body, imp.left) and alpha_equal(conclusion.right.body, imp.right)):
        return _mismatch("conclusion does not wrap the premise")
    return OK


def _r2_aux(premises, conclusion, extras):
    alpha, halts = premises
    if not isinstance(conclusion, Box):
        return _mismatch("conclusion is not of the form [K] a")
    k = conclusion.prog
    if "K" in extras and extras["K"] != k:
        return _mismatch("program differs from the one given with the rule")
    if not (isinstance(halts, Box) and halts.prog == k and isinstance(halts.body, TrueConst)):
        return _mismatch("second premise is not [K] true")
    if not alpha_equal(conclusion.body, alpha):
        return _mismatch("conclusion does not wrap the first premise")
    return OK


def _r6(premises, conclusion, extras):
    (imp,) = premises
    if not (isinstance(imp, Implies) and isinstance(conclusion, Implies)
            and isinstance(conclusion.left, Exists)):
        return _mismatch("expected (a -> b) |- (exists x . a -> b)")
    x = conclusion.left.var
    if "x" in extras and extras["x"] != x:
        return _mismatch("quantified variable differs from the one given")
    if not (alpha_equal(conclusion.left.body, imp.left) and alpha_equal(conclusion.right, imp.right)):
        return _mismatch("conclusion does not match the premise")
    if x in free_vars(conclusion.right):
        return _side(f"{x} is free in the consequent")
    return OK


def _r7(premises, conclusion, extras):
    (imp,) = premises
    if not (isinstance(imp, Implies) and isinstance(conclusion, Implies)
            and isinstance(conclusion.right, Forall)):
        return _mismatch("expected (b -> a) |- (b -> forall x . a)")
    x = conclusion.right.var
    if "x" in extras and extras["x"] != x:
        return _mismatch("quantified variable differs from the one given")
    if not (alpha_equal(conclusion.right.body, imp.right) and alpha_equal(conclusion.left, imp.left)):
        return _mismatch("conclusion does not match the premise")
    if x in free_vars(conclusion.left):
        return _side(f"{x} is free in the antecedent")
    return OK


def _descent(premises, conclusion, extras, relation):
    (imp,) = premises
    c = conclusion
    bad = _mismatch("conclusion is not [while !(x = 0) do M od] (x = 0)")
    if not (isinstance(c, Box) and isinstance(c.prog, While)):
        return bad
    guard = c.prog.cond
    if not (isinstance(guard, Not) and isinstance(guard.arg, Eq) and isinstance(guard.arg.left, Var)
            and guard.arg.right == Zero()):
        return bad
    x, m = guard.arg.left, c.prog.body
    if c.body != Eq(x, Zero()):
        return bad
    if not (isinstance(imp, Implies) and isinstance(imp.left, Eq) and imp.left.left == x
            and isinstance(imp.right, Box) and imp.right.prog == m):
        return _mismatch("premise is not ((x = t) -> [M] ...)")
    tau = imp.left.right
    if imp.right.body != relation(x, Pred(tau)):
        return _mismatch("premise does not descend to P(t)")
    if set(term_vars(tau)) & set(program_vars(m)):
        return _side("the term shares a variable with the loop body")
    return OK


_RULES = {
    "R1": _r1,
    "R2": _r2,
    "R2'": _r2_aux,
    "R6": _r6,
    "R7": _r7,
    "D1": lambda p, c, e: _descent(p, c, e, Eq),
    "D2": lambda p, c, e: _descent(p, c, e, Less),
}


# ------------------------------------------------------------ tautologies

_PROPOSITIONAL = (Not, And, Or, Implies, Iff, TrueConst, FalseConst)


def _atoms(f, out: list) -> None:
    if isinstance(f, (TrueConst, FalseConst)):
        return
    if isinstance(f, Not):
        _atoms(f.arg, out)
    elif isinstance(f, (And, Or, Implies, Iff)):
        _atoms(f.left, out)
        _atoms(f.right, out)
    elif not any(alpha_equal(f, a) for a in out):
        out.append(f)


def _truth(f, atoms: list, row: tuple) -> bool:
    if isinstance(f, TrueConst):
        return True
    if isinstance(f, FalseConst):
        return False
    if isinstance(f, Not):
        return not _truth(f.arg, atoms, row)
    if isinstance(f, And):
        return _truth(f.left, atoms, row) and _truth(f.right, atoms, row)
    if isinstance(f, Or):
        return _truth(f.left, atoms, row) or _truth(f.right, atoms, row)
    if isinstance(f, Implies):
        return (not _truth(f.left, atoms, row)) or _truth(f.right, atoms, row)
    if isinstance(f, Iff):
        return _truth(f.left, atoms, row) == _truth(f.right, atoms, row)
    for i, a in enumerate(atoms):
        if alpha_equal(a, f):
            return row[i]
    raise AssertionError("atom not collected")


MAX_PC_ATOMS = 16


def is_tautology(f) -> bool:
    """Propositional tautology, treating non-propositional subformulas as atoms."""
    atoms: list = []
    _atoms(f, atoms)
    if len(atoms) > MAX_PC_ATOMS:
        raise ValueError("too many atoms for a truth table")
    return all(_truth(f, atoms, row) for row in itertools.product((False, True), repeat=len(atoms)))


def check_pc(premises: Sequence, conclusion) -> RuleResult:
    """The conclusion follows from the premises by propositional calculus."""
    goal = conclusion
    for p in reversed(premises):
        goal = Implies(p, goal)
    try:
        if is_tautology(goal):
            return OK
    except ValueError as err:
        return _mismatch(str(err))
    return _mismatch("conclusion is not a propositional consequence of the premises")


# ------------------------------------------------------------ omega rules

def is_assignment_chain(k) -> bool:
    if isinstance(k, Assign):
        return True
    if isinstance(k, Seq):
        return is_assignment_chain(k.first) and is_assignment_chain(k.second)
    return False


def _split_prefix(f, kind):
    """``[s] X`` with ``s`` an assignment chain, or plain ``X``; returns (s, X)."""
    if isinstance(f, kind):
        return None, f
    if isinstance(f, Box) and isinstance(f.body, kind):
        if not is_assignment_chain(f.prog):
            raise ValueError("prefix is not a sequence of assignments")
        return f.prog, f.body
    raise ValueError("conclusion does not have the shape of the rule")


def _wrap(prefix, f):
    return f if prefix is None else Box(prefix, f)


def omega_premise(rule_id: str, conclusion, i: int):
    """The i-th premise of an omega-rule with the given conclusion.

    R3: ([s] while g do K od a -> b) from ([s][if g then K fi]^i (!g & a) -> b)
    R4: ([s] U[K] a -> b) from ([s] [K]^i a -> b)
    R5: (a -> [s] I[K] b) from (a -> [s] [K]^i b)
    Raises ValueError when the conclusion has the wrong shape.
    """
    if not isinstance(conclusion, Implies):
        raise ValueError("conclusion is not an implication")
    if rule_id == "R3":
        left, prefix = conclusion.left, None
        if (isinstance(left, Box) and is_assignment_chain(left.prog)
                and isinstance(left.body, Box) and isinstance(left.body.prog, While)):
            prefix, left = left.prog, left.body
        if not (isinstance(left, Box) and isinstance(left.prog, While)):
            raise ValueError("conclusion does not have the shape of the rule")
        loop = left.prog
        body = iterate(If(loop.cond, loop.body, Skip()), i, And(Not(loop.cond), left.body))
        return Implies(_wrap(prefix, body), conclusion.right)
    if rule_id == "R4":
        prefix, u = _split_prefix(conclusion.left, IterUnion)
        return Implies(_wrap(prefix, iterate(u.prog, i, u.body)), conclusion.right)
    if rule_id == "R5":
        prefix, n = _split_prefix(conclusion.right, IterInter)
        return Implies(conclusion.left, _wrap(prefix, iterate(n.prog, i, n.body)))
    raise ValueError(f"{rule_id} is not an omega-rule")
