"""Canonical text rendering; ``parse(sort, render(t)) == t`` for every tree."""
from __future__ import annotations

from .syntax import (
    BINARY_CONNECTIVES, BINARY_TERMS, Assign, BoolAssign, BoolVar, Box, Eq,
    Exists, FalseConst, Forall, If, IterInter, IterUnion, Less, Meta, Not, Pred,
    Seq, Skip, SubstMeta, Succ, TrueConst, Var, While, Zero,
)


def _name(n) -> str:
    return f"${n.name}" if isinstance(n, Meta) else n


def render(node) -> str:
    """Render a term, formula or program in the concrete ASCII grammar."""
    t = type(node)
    if t is Var:
        return _name(node.name)
    if t is Zero:
        return "0"
    if t is Succ:
        return f"s({render(node.arg)})"
    if t is Pred:
        return f"P({render(node.arg)})"
    if t in BINARY_TERMS:
        return f"({render(node.left)} {BINARY_TERMS[t]} {render(node.right)})"
    if t is Eq:
        return f"({render(node.left)} = {render(node.right)})"
    if t is Less:
        return f"({render(node.left)} < {render(node.right)})"
    if t is TrueConst:
        return "true"
    if t is FalseConst:
        return "false"
    if t is BoolVar:
        return f"?{_name(node.name)}"
    if t is Not:
        return f"!{render(node.arg)}"
    if t in BINARY_CONNECTIVES:
        return f"({render(node.left)} {BINARY_CONNECTIVES[t]} {render(node.right)})"
    if t is Box:
        sep = "" if type(node.body) is Box else " "
        return f"[{render(node.prog)}]{sep}{render(node.body)}"
    if t is IterUnion:
        return f"U[{render(node.prog)}] {render(node.body)}"
    if t is IterInter:
        return f"I[{render(node.prog)}] {render(node.body)}"
    if t is Forall:
        return f"forall {_name(node.var)} . {render(node.body)}"
    if t is Exists:
        return f"exists {_name(node.var)} . {render(node.body)}"
    if t is Assign:
        return f"{_name(node.var)} := {render(node.term)}"
    if t is BoolAssign:
        return f"?{_name(node.var)} := {render(node.cond)}"
    if t is Skip:
        return "skip"
    if t is Seq:
        return f"{{{render(node.first)}; {render(node.second)}}}"
    if t is If:
        if type(node.orelse) is Skip:
            return f"if {render(node.cond)} then {render(node.then)} fi"
        return f"if {render(node.cond)} then {render(node.then)} else {render(node.orelse)} fi"
    if t is While:
        return f"while {render(node.cond)} do {render(node.body)} od"
    if t is Meta:
        return f"${node.name}"
    if t is SubstMeta:
        prefix = "?" if node.var.sort == "bvar" else ""
        return f"${node.body.name}{{{prefix}${node.var.name}/${node.repl.name}}}"
    raise TypeError(f"cannot render {node!r}")
