"""Specific axioms of the theories Th0-Th3."""
from __future__ import annotations

from typing import Optional

from ..parser import parse
from ..syntax import And, Forall, Implies, Succ, Var, Zero, is_first_order, substitute


class UnknownAxiom(LookupError):
    pass


class NotFirstOrder(ValueError):
    pass


_TH1 = {
    "1": "forall x . !(s(x) = 0)",
    "2": "forall x . forall y . ((s(x) = s(y)) -> (x = y))",
    "3": "forall x . ((x + 0) = x)",
    "4": "forall x . forall y . ((x + s(y)) = s((x + y)))",
    "5": "((x < y) <-> exists z . (y = (x + s(z))))",
    "6": "(P(0) = 0)",
    "7": "(P(s(x)) = x)",
    "8": "((z -. 0) = z)",
    "9": "((z -. s(x)) = P((z -. x)))",
}

_MULTIPLICATION = {
    "11": "forall x . ((x * 0) = 0)",
    "12": "forall x . forall y . ((x * s(y)) = ((x * y) + x))",
}

STANDARDIZATION = "{y := 0; while !(y = x) do y := s(y) od}"

_TH3 = {
    "I": _TH1["1"],
    "M": _TH1["2"],
    "S": f"forall x . [{STANDARDIZATION}] (x = y)",
    "A": "(((x + y) = z) <-> [{t := 0; w := x; while !(t = y) do {t := s(t); w := s(w)} od}] (z = w))",
    "L": "((x < y) <-> [{w := 0; while (!(w = y) & !(w = x)) do w := s(w) od}] ((w = x) & !(w = y)))",
    "P": "((P(x) = z) <-> [{w := 0; if !(x = 0) then while !(s(w) = x) do w := s(w) od fi}] (z = w))",
    "O": "(((x -. y) = z) <-> [{w := x; t := 0; while !(t = y) do {t := s(t); w := P(w)} od}] (z = w))",
}

THEORIES = {
    "Th1": dict(_TH1),
    "Th2": {**_TH1, **_MULTIPLICATION},
    "Th0": {**_TH1, **_MULTIPLICATION},
    "Th3": dict(_TH3),
}
INDUCTIVE = ("Th0", "Th1", "Th2")


def induction_instance(phi, var: str = "x"):
    """``(phi(x/0) & forall x . (phi -> phi(x/s(x)))) -> forall x . phi``."""
    if not is_first_order(phi):
        raise NotFirstOrder("the induction formula must be first-order")
    x = Var(var)
    step = Forall(var, Implies(phi, substitute(phi, var, Succ(x))))
    return Implies(And(substitute(phi, var, Zero()), step), Forall(var, phi))


def theory_axiom(theory: str, name: str, phi: Optional[object] = None):
    """The named specific axiom of a theory as a formula tree."""
    if theory not in THEORIES:
        raise UnknownAxiom(f"unknown theory {theory}")
    if name == "induction":
        if theory not in INDUCTIVE:
            raise UnknownAxiom(f"{theory} has no induction scheme")
        if phi is None:
            raise UnknownAxiom("the induction scheme needs phi")
        return induction_instance(phi)
    axioms = THEORIES[theory]
    if name not in axioms:
        raise UnknownAxiom(f"{theory} has no axiom {name!r}")
    return parse("formula", axioms[name])


def axiom_names(theory: str) -> list[str]:
    names = list(THEORIES[theory])
    if theory in INDUCTIVE:
        names.append("induction")
    return names
