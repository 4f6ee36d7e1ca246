"""Axiom schemas Ax1-Ax23 and sorted first-order matching against them."""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Callable, Optional

from ..parser import ParseError, parse, parse_pattern
from ..syntax import (
    FORMULA_TYPES, PROGRAM_TYPES, TERM_TYPES, Exists, Meta, SortError,
    SubstMeta, Var, alpha_equal, free_vars, is_open, program_vars, substitute,
)


@dataclass(frozen=True)
class Schema:
    id: str
    pattern: object
    side_condition: Optional[Callable] = None
    note: str = ""


@dataclass(frozen=True)
class Match:
    bindings: dict


@dataclass(frozen=True)
class Mismatch:
    reason: str
    side_condition: bool = False


def _ax14_side(b: dict) -> Optional[str]:
    y, x = b["y"], b["x"]
    if y in program_vars(b["K"]):
        return f"{y} occurs in the program"
    if y != x and y in free_vars(Exists(x, b["a"])):
        return f"{y} is free in the quantified formula"
    return None


_AXIOMS = {
    "Ax1": "(($a -> $b) -> (($b -> $d) -> ($a -> $d)))",
    "Ax2": "($a -> ($a | $b))",
    "Ax3": "($b -> ($a | $b))",
    "Ax4": "(($a -> $d) -> (($b -> $d) -> (($a | $b) -> $d)))",
    "Ax5": "(($a & $b) -> $a)",
    "Ax6": "(($a & $b) -> $b)",
    "Ax7": "(($d -> $a) -> (($d -> $b) -> ($d -> ($a & $b))))",
    "Ax8": "(($a -> ($b -> $d)) <-> (($a & $b) -> $d))",
    "Ax9": "(($a & !$a) -> $b)",
    "Ax10": "(($a -> ($a & !$a)) -> !$a)",
    "Ax11": "($a | !$a)",
    "Ax12": "(forall $x . $a -> $a{$x/$t})",
    "Ax13": "(forall $x . $a <-> !exists $x . !$a)",
    "Ax14": "([$K] exists $x . $a <-> exists $y . [$K] $a{$x/$y})",
    "Ax15": "([$K] ($a | $b) <-> ([$K] $a | [$K] $b))",
    "Ax16": "([$K] ($a & $b) <-> ([$K] $a & [$K] $b))",
    "Ax17": "([$K] !$a -> ![$K] $a)",
    "Ax18": "(([$x := $t] $g <-> ($g{$x/$t} & [$x := $t] true)) & ([?$q := $h] $g <-> $g{?$q/$h}))",
    "Ax19": "([{$K; $M}] $a <-> [$K][$M] $a)",
    "Ax20": "([if $g then $K else $M fi] $a <-> ((!$g & [$M] $a) | ($g & [$K] $a)))",
    "Ax21": "([while $g do $K od] $a <-> ((!$g & $a) | ($g & [$K][while $g do $K od] (!$g & $a))))",
    "Ax22": "(I[$K] $a <-> ($a & [$K] I[$K] $a))",
    "Ax23": "(U[$K] $a <-> ($a | [$K] U[$K] $a))",
}

SCHEMAS = {
    name: Schema(name, parse_pattern("formula", text),
                 _ax14_side if name == "Ax14" else None)
    for name, text in _AXIOMS.items()
}


def schema_metas(pattern) -> dict:
    """Metavariable name -> sort for every metavariable in ``pattern``."""
    out: dict = {}

    def walk(n):
        if isinstance(n, Meta):
            if out.setdefault(n.name, n.sort) != n.sort:
                raise ValueError(f"metavariable ${n.name} used with two sorts")
            return
        if isinstance(n, str):
            return
        for f in fields(n):
            walk(getattr(n, f.name))

    walk(pattern)
    return out


def _sort_ok(sort: str, value) -> bool:
    if sort == "formula":
        return isinstance(value, FORMULA_TYPES)
    if sort == "open":
        return isinstance(value, FORMULA_TYPES) and is_open(value)
    if sort == "program":
        return isinstance(value, PROGRAM_TYPES)
    if sort == "term":
        return isinstance(value, TERM_TYPES)
    return isinstance(value, str)


def _bind(meta: Meta, value, b: dict) -> bool:
    if not _sort_ok(meta.sort, value):
        return False
    if meta.name in b:
        return b[meta.name] == value
    b[meta.name] = value
    return True


def _match(p, t, b: dict, deferred: list) -> bool:
    if isinstance(p, Meta):
        return _bind(p, t, b)
    if isinstance(p, SubstMeta):
        if not isinstance(t, FORMULA_TYPES):
            return False
        deferred.append((p, t))
        return True
    if isinstance(p, str):
        return p == t
    if type(p) is not type(t):
        return False
    return all(_match(getattr(p, f.name), getattr(t, f.name), b, deferred)
               for f in fields(p))


def _subterms(node, out: list) -> None:
    if isinstance(node, TERM_TYPES) and node not in out:
        out.append(node)
    if isinstance(node, str):
        return
    for f in fields(node):
        _subterms(getattr(node, f.name), out)


def _subst_equal(body, x: str, repl, target) -> bool:
    try:
        return alpha_equal(substitute(body, x, repl), target)
    except SortError:
        return False


def _resolve(sm: SubstMeta, target, b: dict) -> Optional[str]:
    body = b.get(sm.body.name)
    x = b.get(sm.var.name)
    if body is None or x is None:
        return f"cannot resolve ${sm.body.name}{{${sm.var.name}/${sm.repl.name}}}"
    name = sm.repl.name
    as_term = (lambda r: Var(r) if isinstance(r, str) else r) if sm.var.sort == "ivar" else (lambda r: r)
    if name in b:
        if _subst_equal(body, x, as_term(b[name]), target):
            return None
        return "substitution instance does not match"
    # infer the replacement: try the unchanged variable, then every candidate in the target
    if sm.repl.sort == "ivar":
        candidates = [x] + sorted({v.name for v in _vars_in(target)} | _bound_names(target))
    elif sm.repl.sort == "open":
        candidates = [c for c in _open_subformulas(target)]
    else:
        terms: list = [Var(x)]
        _subterms(target, terms)
        candidates = terms
    for cand in candidates:
        if _subst_equal(body, x, as_term(cand), target):
            b[name] = cand
            return None
    return "no replacement makes the substitution instance match"


def _vars_in(node) -> set:
    out: list = []
    _subterms(node, out)
    return {t for t in out if isinstance(t, Var)}


def _bound_names(node) -> set:
    names = set()

    def walk(n):
        if isinstance(n, str):
            return
        if hasattr(n, "var") and isinstance(getattr(n, "var"), str):
            names.add(n.var)
        for f in fields(n):
            walk(getattr(n, f.name))

    walk(node)
    return names


def _open_subformulas(node) -> list:
    out: list = []

    def walk(n):
        if isinstance(n, str):
            return
        if isinstance(n, FORMULA_TYPES) and is_open(n) and n not in out:
            out.append(n)
        for f in fields(n):
            walk(getattr(n, f.name))

    walk(node)
    return out


def parse_binding(sort: str, text: str):
    text = text.strip()
    if sort in ("formula", "open"):
        value = parse("formula", text)
        if sort == "open" and not is_open(value):
            raise ParseError("expected an open formula", 1, 1)
        return value
    if sort == "program":
        return parse("program", text)
    if sort == "term":
        return parse("term", text)
    value = parse("term", text)
    if not isinstance(value, Var):
        raise ParseError("expected a variable name", 1, 1)
    return value.name


def match_pattern(pattern, conclusion, bindings: Optional[dict] = None,
                  side_condition: Optional[Callable] = None) -> Match | Mismatch:
    b = dict(bindings or {})
    deferred: list = []
    if not _match(pattern, conclusion, b, deferred):
        return Mismatch("formula does not have the shape of the schema")
    for sm, target in deferred:
        problem = _resolve(sm, target, b)
        if problem:
            return Mismatch(problem)
    if side_condition is not None:
        problem = side_condition(b)
        if problem:
            return Mismatch(problem, side_condition=True)
    return Match(b)


def match_schema(schema_id: str, conclusion, bindings: Optional[dict] = None) -> Match | Mismatch:
    """Most general binding of the schema's metavariables, or the reason there is none.

    Matching is syntactic, so it is deterministic: a pattern node either
    fixes a metavariable or compares equal, and substitution placeholders
    are checked after the structural pass.
    """
    schema = SCHEMAS[schema_id]
    return match_pattern(schema.pattern, conclusion, bindings, schema.side_condition)


def instantiate(pattern, b: dict):
    """Fill a pattern with a complete binding."""
    if isinstance(pattern, Meta):
        return b[pattern.name]
    if isinstance(pattern, SubstMeta):
        body, x, r = b[pattern.body.name], b[pattern.var.name], b[pattern.repl.name]
        if pattern.var.sort == "ivar" and isinstance(r, str):
            r = Var(r)
        return substitute(body, x, r)
    if isinstance(pattern, str):
        return pattern
    kwargs = {}
    for f in fields(pattern):
        v = getattr(pattern, f.name)
        if isinstance(v, Meta) and v.sort in ("ivar", "bvar"):
            kwargs[f.name] = b[v.name]
        else:
            kwargs[f.name] = instantiate(v, b)
    return type(pattern)(**kwargs)
