"""Abstract syntax of the algorithmic-logic language.

Four sorts: terms, open formulas, programs and formulas.  Open formulas are
the quantifier-free, program-free formulas; they share their node classes
with formulas, so the embedding of an open formula into the formula sort is
the identity and :func:`is_open` tells the two apart.

All nodes are frozen dataclasses and therefore immutable and hashable.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterator, Union


class SortError(TypeError):
    """A substitution mixes an individual variable with a boolean one."""


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Succ:
    arg: "Term"


@dataclass(frozen=True)
class Pred:
    arg: "Term"


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Monus:
    left: "Term"
    right: "Term"


Term = Union[Var, Zero, Succ, Pred, Add, Mul, Monus]
TERM_TYPES = (Var, Zero, Succ, Pred, Add, Mul, Monus)
BINARY_TERMS = {Add: "+", Mul: "*", Monus: "-."}


# -------------------------------------------------------------- formulas

@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Less:
    left: Term
    right: Term


@dataclass(frozen=True)
class TrueConst:
    pass


@dataclass(frozen=True)
class FalseConst:
    pass


@dataclass(frozen=True)
class BoolVar:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    """``K a``: K halts and ``a`` holds in the resulting state."""
    prog: "Program"
    body: "Formula"


@dataclass(frozen=True)
class IterUnion:
    """Some finite iteration of ``prog`` establishes ``body``."""
    prog: "Program"
    body: "Formula"


@dataclass(frozen=True)
class IterInter:
    """Every finite iteration of ``prog`` establishes ``body``."""
    prog: "Program"
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


BINARY_CONNECTIVES = {And: "&", Or: "|", Implies: "->", Iff: "<->"}
MODAL_TYPES = (Box, IterUnion, IterInter)
QUANTIFIER_TYPES = (Forall, Exists)

Formula = Union[Eq, Less, TrueConst, FalseConst, BoolVar, Not, And, Or,
                Implies, Iff, Box, IterUnion, IterInter, Forall, Exists]
FORMULA_TYPES = (Eq, Less, TrueConst, FalseConst, BoolVar, Not, And, Or,
                 Implies, Iff, Box, IterUnion, IterInter, Forall, Exists)


# -------------------------------------------------------------- programs

@dataclass(frozen=True)
class Assign:
    var: str
    term: Term


@dataclass(frozen=True)
class BoolAssign:
    var: str
    cond: Formula


@dataclass(frozen=True)
class Seq:
    first: "Program"
    second: "Program"


@dataclass(frozen=True)
class If:
    cond: Formula
    then: "Program"
    orelse: "Program"


@dataclass(frozen=True)
class While:
    cond: Formula
    body: "Program"


@dataclass(frozen=True)
class Skip:
    pass


Program = Union[Assign, BoolAssign, Seq, If, While, Skip]
PROGRAM_TYPES = (Assign, BoolAssign, Seq, If, While, Skip)


# ---------------------------------------------------------- pattern nodes

META_SORTS = ("formula", "open", "program", "term", "ivar", "bvar")


@dataclass(frozen=True)
class Meta:
    """A sorted metavariable; appears only in axiom and rule schemas."""
    name: str
    sort: str


@dataclass(frozen=True)
class SubstMeta:
    """Schema placeholder for ``body(var/repl)``, resolved after matching."""
    body: Meta
    var: Meta
    repl: Meta


# ------------------------------------------------------------ utilities

def children(node) -> Iterator:
    for f in fields(node):
        value = getattr(node, f.name)
        if not isinstance(value, str):
            yield value


def is_open(f) -> bool:
    """True iff ``f`` has no program, iteration quantifier or quantifier."""
    if isinstance(f, (Eq, Less, TrueConst, FalseConst, BoolVar)):
        return True
    if isinstance(f, Meta):
        return f.sort == "open"
    if isinstance(f, Not):
        return is_open(f.arg)
    if isinstance(f, (And, Or, Implies, Iff)):
        return is_open(f.left) and is_open(f.right)
    return False


def is_first_order(f) -> bool:
    """No programs or iteration quantifiers; classical quantifiers allowed."""
    if isinstance(f, MODAL_TYPES):
        return False
    if isinstance(f, QUANTIFIER_TYPES):
        return is_first_order(f.body)
    if isinstance(f, Not):
        return is_first_order(f.arg)
    if isinstance(f, (And, Or, Implies, Iff)):
        return is_first_order(f.left) and is_first_order(f.right)
    return True


def numeral(k: int, base: Term = Zero()) -> Term:
    for _ in range(k):
        base = Succ(base)
    return base


# ------------------------------------------------------ variable analysis

def _term_vars(t, out: dict) -> None:
    if isinstance(t, Var):
        out.setdefault(t.name, None)
    elif isinstance(t, (Succ, Pred)):
        _term_vars(t.arg, out)
    elif isinstance(t, (Add, Mul, Monus)):
        _term_vars(t.left, out)
        _term_vars(t.right, out)


def term_vars(t: Term) -> list[str]:
    out: dict = {}
    _term_vars(t, out)
    return list(out)


def _prog_vars(k, out: dict, bools: dict, assigned_only: bool) -> None:
    if isinstance(k, Assign):
        out.setdefault(k.var, None)
        if not assigned_only:
            _term_vars(k.term, out)
    elif isinstance(k, BoolAssign):
        bools.setdefault(k.var, None)
        if not assigned_only:
            _formula_vars(k.cond, out, bools, set())
    elif isinstance(k, Seq):
        _prog_vars(k.first, out, bools, assigned_only)
        _prog_vars(k.second, out, bools, assigned_only)
    elif isinstance(k, If):
        if not assigned_only:
            _formula_vars(k.cond, out, bools, set())
        _prog_vars(k.then, out, bools, assigned_only)
        _prog_vars(k.orelse, out, bools, assigned_only)
    elif isinstance(k, While):
        if not assigned_only:
            _formula_vars(k.cond, out, bools, set())
        _prog_vars(k.body, out, bools, assigned_only)


def _formula_vars(f, out: dict, bools: dict, bound: set) -> None:
    if isinstance(f, (Eq, Less)):
        for name in term_vars(f.left) + term_vars(f.right):
            if name not in bound:
                out.setdefault(name, None)
    elif isinstance(f, BoolVar):
        bools.setdefault(f.name, None)
    elif isinstance(f, Not):
        _formula_vars(f.arg, out, bools, bound)
    elif isinstance(f, (And, Or, Implies, Iff)):
        _formula_vars(f.left, out, bools, bound)
        _formula_vars(f.right, out, bools, bound)
    elif isinstance(f, MODAL_TYPES):
        # programs bind nothing: every variable they mention is free
        pv: dict = {}
        _prog_vars(f.prog, pv, bools, False)
        for name in pv:
            if name not in bound:
                out.setdefault(name, None)
        _formula_vars(f.body, out, bools, bound)
    elif isinstance(f, QUANTIFIER_TYPES):
        _formula_vars(f.body, out, bools, bound | {f.var})


def ordered_free_vars(f: Formula) -> list[str]:
    """Free individual variables of ``f`` in order of first occurrence."""
    out: dict = {}
    _formula_vars(f, out, {}, set())
    return list(out)


def free_vars(f: Formula) -> frozenset[str]:
    return frozenset(ordered_free_vars(f))


def free_bool_vars(f: Formula) -> list[str]:
    bools: dict = {}
    _formula_vars(f, {}, bools, set())
    return list(bools)


def program_vars(k: Program) -> list[str]:
    """V(K): every individual variable read or written by ``k``."""
    out: dict = {}
    _prog_vars(k, out, {}, False)
    return list(out)


def assigned_vars(k: Program) -> frozenset[str]:
    out: dict = {}
    _prog_vars(k, out, {}, True)
    return frozenset(out)


def ordered_assigned_vars(k: Program) -> list[str]:
    """Assigned variables, ordered by first occurrence anywhere in ``k``."""
    assigned = assigned_vars(k)
    return [v for v in program_vars(k) if v in assigned]


def assigned_bool_vars(k: Program) -> frozenset[str]:
    bools: dict = {}
    _prog_vars(k, {}, bools, True)
    return frozenset(bools)


def program_bool_vars(k: Program) -> frozenset[str]:
    bools: dict = {}
    _prog_vars(k, {}, bools, False)
    return frozenset(bools)


def all_names(node) -> set[str]:
    """Every identifier anywhere in ``node``, bound or free."""
    names: set[str] = set()

    def walk(n):
        if isinstance(n, (Var, BoolVar)):
            names.add(n.name)
            return
        for f in fields(n):
            value = getattr(n, f.name)
            if isinstance(value, str):
                if f.name == "var":
                    names.add(value)
            else:
                walk(value)

    walk(node)
    return names


def fresh_name(base: str, avoid: set[str]) -> str:
    """``base`` with the fewest primes appended that is not in ``avoid``."""
    k = 1
    while base + "'" * k in avoid:
        k += 1
    return base + "'" * k


# ----------------------------------------------------------- substitution

def subst_term(t: Term, x: str, r: Term) -> Term:
    if isinstance(t, Var):
        return r if t.name == x else t
    if isinstance(t, Zero):
        return t
    if isinstance(t, (Succ, Pred)):
        return type(t)(subst_term(t.arg, x, r))
    return type(t)(subst_term(t.left, x, r), subst_term(t.right, x, r))


def _subst_open(g, x: str, r, boolean: bool):
    if isinstance(g, (Eq, Less)):
        if boolean:
            return g
        return type(g)(subst_term(g.left, x, r), subst_term(g.right, x, r))
    if isinstance(g, BoolVar):
        return r if boolean and g.name == x else g
    if isinstance(g, (TrueConst, FalseConst)):
        return g
    if isinstance(g, Not):
        return Not(_subst_open(g.arg, x, r, boolean))
    return type(g)(_subst_open(g.left, x, r, boolean),
                   _subst_open(g.right, x, r, boolean))


def _subst_prog(k, x: str, r, boolean: bool):
    """Replace reads of ``x`` inside ``k``; caller guarantees ``x`` is not assigned."""
    if isinstance(k, Assign):
        return k if boolean else Assign(k.var, subst_term(k.term, x, r))
    if isinstance(k, BoolAssign):
        return BoolAssign(k.var, _subst_open(k.cond, x, r, boolean))
    if isinstance(k, Seq):
        return Seq(_subst_prog(k.first, x, r, boolean), _subst_prog(k.second, x, r, boolean))
    if isinstance(k, If):
        return If(_subst_open(k.cond, x, r, boolean),
                  _subst_prog(k.then, x, r, boolean),
                  _subst_prog(k.orelse, x, r, boolean))
    if isinstance(k, While):
        return While(_subst_open(k.cond, x, r, boolean), _subst_prog(k.body, x, r, boolean))
    return k


def _occurs_free(f, x: str, boolean: bool) -> bool:
    if boolean:
        return x in free_bool_vars(f)
    return x in free_vars(f)


def _subst(f, x: str, r, rvars: set[str], rbools: set[str], boolean: bool):
    if not _occurs_free(f, x, boolean):
        return f
    if isinstance(f, (Eq, Less, BoolVar, TrueConst, FalseConst)):
        return _subst_open(f, x, r, boolean)
    if isinstance(f, Not):
        return Not(_subst(f.arg, x, r, rvars, rbools, boolean))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(_subst(f.left, x, r, rvars, rbools, boolean),
                       _subst(f.right, x, r, rvars, rbools, boolean))
    if isinstance(f, MODAL_TYPES):
        written = assigned_vars(f.prog)
        written_b = assigned_bool_vars(f.prog)
        target_written = x in (written_b if boolean else written)
        if not target_written and not (rvars & written) and not (rbools & written_b):
            return type(f)(_subst_prog(f.prog, x, r, boolean),
                           _subst(f.body, x, r, rvars, rbools, boolean))
        # the program would capture x or the replacement: assign first instead
        pre = BoolAssign(x, r) if boolean else Assign(x, r)
        return Box(pre, f)
    if isinstance(f, QUANTIFIER_TYPES):
        var, body = f.var, f.body
        if var in rvars:
            new = fresh_name(var, rvars | all_names(body) | {x})
            body = rename(body, var, new)
            var = new
        return type(f)(var, _subst(body, x, r, rvars, rbools, boolean))
    raise TypeError(f"not a formula: {f!r}")


def _check_sorts(f, x: str, r) -> bool:
    """Return True for a boolean substitution; raise SortError on a mix-up."""
    if isinstance(r, TERM_TYPES):
        if x in free_bool_vars(f) or (isinstance(f, FORMULA_TYPES) and x in _bool_assigned_anywhere(f)):
            raise SortError(f"{x} is a boolean variable; cannot substitute a term")
        return False
    if isinstance(r, FORMULA_TYPES) and is_open(r):
        if x in free_vars(f):
            raise SortError(f"{x} is an individual variable; cannot substitute a formula")
        return True
    raise SortError(f"replacement must be a term or an open formula, got {r!r}")


def _bool_assigned_anywhere(f) -> set[str]:
    out: set[str] = set()
    if isinstance(f, MODAL_TYPES):
        out |= assigned_bool_vars(f.prog)
    for c in children(f):
        if isinstance(c, FORMULA_TYPES):
            out |= _bool_assigned_anywhere(c)
    return out


def substitute(f: Formula, x: str, r) -> Formula:
    """Capture-avoiding simultaneous replacement of free ``x`` by ``r``.

    ``r`` is a term (``x`` individual) or an open formula (``x`` boolean).
    Bound variables clashing with the replacement are renamed with primes.
    Where a program assigns ``x`` or a variable of ``r``, the result is the
    semantically equal ``[x := r] f``.
    """
    boolean = _check_sorts(f, x, r)
    if not boolean and r == Var(x):
        return f
    if boolean and r == BoolVar(x):
        return f
    if boolean:
        rvars = set(ordered_free_vars(r))
        rbools = set(free_bool_vars(r))
    else:
        rvars, rbools = set(term_vars(r)), set()
    return _subst(f, x, r, rvars, rbools, boolean)


def _rename_term(t, old: str, new: str):
    return subst_term(t, old, Var(new))


def _rename_prog(k, old: str, new: str):
    if isinstance(k, Assign):
        return Assign(new if k.var == old else k.var, _rename_term(k.term, old, new))
    if isinstance(k, BoolAssign):
        return BoolAssign(k.var, _rename_open(k.cond, old, new))
    if isinstance(k, Seq):
        return Seq(_rename_prog(k.first, old, new), _rename_prog(k.second, old, new))
    if isinstance(k, If):
        return If(_rename_open(k.cond, old, new), _rename_prog(k.then, old, new),
                  _rename_prog(k.orelse, old, new))
    if isinstance(k, While):
        return While(_rename_open(k.cond, old, new), _rename_prog(k.body, old, new))
    return k


def _rename_open(g, old: str, new: str):
    return _subst_open(g, old, Var(new), False)


def rename(f: Formula, old: str, new: str) -> Formula:
    """Rename every free occurrence of ``old`` (assignment targets included).

    ``new`` must not occur in ``f``.
    """
    if isinstance(f, (Eq, Less, BoolVar, TrueConst, FalseConst)):
        return _rename_open(f, old, new)
    if isinstance(f, Not):
        return Not(rename(f.arg, old, new))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(rename(f.left, old, new), rename(f.right, old, new))
    if isinstance(f, MODAL_TYPES):
        return type(f)(_rename_prog(f.prog, old, new), rename(f.body, old, new))
    if isinstance(f, QUANTIFIER_TYPES):
        if f.var == old:
            return f
        return type(f)(f.var, rename(f.body, old, new))
    raise TypeError(f"not a formula: {f!r}")


def alpha_equal(f: Formula, g: Formula) -> bool:
    """Structural equality up to consistent renaming of quantified variables."""
    return _canon(f, {}, [0]) == _canon(g, {}, [0])


def _canon(f, env: dict, counter: list):
    if isinstance(f, QUANTIFIER_TYPES):
        counter[0] += 1
        name = f"#{counter[0]}"
        body = rename(f.body, f.var, name) if f.var != name else f.body
        return type(f)(name, _canon(body, env, counter))
    if isinstance(f, Not):
        return Not(_canon(f.arg, env, counter))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(_canon(f.left, env, counter), _canon(f.right, env, counter))
    if isinstance(f, MODAL_TYPES):
        return type(f)(f.prog, _canon(f.body, env, counter))
    return f


def iterate(k: Program, i: int, f: Formula) -> Formula:
    """``K^i f``: ``f`` wrapped in ``i`` boxes of ``k``."""
    if i < 0:
        raise ValueError("iteration count must be non-negative")
    for _ in range(i):
        f = Box(k, f)
    return f


def seq(*progs: Program) -> Program:
    """Right-nested sequential composition of one or more programs."""
    if not progs:
        return Skip()
    out = progs[-1]
    for p in reversed(progs[:-1]):
        out = Seq(p, out)
    return out
