"""Recursive-descent parser for the concrete ASCII grammar.

    term    = ident | "0" | "s(" term ")" | "P(" term ")" | "(" term ("+"|"*"|"-.") term ")"
    open    = "(" term ("="|"<") term ")" | "true" | "false" | "!" open
            | "(" open ("&"|"|"|"->"|"<->") open ")" | "?" ident
    program = ident ":=" term | "?" ident ":=" open | "skip" | "{" program (";" program)+ "}"
            | "if" open "then" program ["else" program] "fi" | "while" open "do" program "od"
    formula = open | "[" program "]" formula | "U[" program "]" formula | "I[" program "]" formula
            | "forall" ident "." formula | "exists" ident "." formula | "!" formula
            | "(" formula ("&"|"|"|"->"|"<->") formula ")"

Extras: ``s^3(t)`` / ``P^2(t)`` abbreviate towers, ``[K]^3 a`` abbreviates
``[K][K][K] a``, and a single unparenthesized binary connective is allowed
at the top of a formula.  In pattern mode ``$name`` is a metavariable and
``$a{$x/$t}`` a deferred substitution.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    Add, And, Assign, BoolAssign, BoolVar, Box, Eq, Exists, FalseConst, Forall,
    Iff, If, Implies, IterInter, IterUnion, Less, Meta, Monus, Mul, Not, Or,
    Pred, Seq, Skip, SubstMeta, Succ, TrueConst, Var, While, Zero, is_open,
    iterate,
)

KEYWORDS = frozenset({
    "if", "then", "else", "fi", "while", "do", "od", "skip", "true", "false",
    "forall", "exists",
})
RESERVED = KEYWORDS | {"s", "P"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*'*)
  | (?P<op><->|->|:=|-\.|[()\[\]{};=<+*!&|?.$/^])
""", re.VERBOSE)

_TERM_OPS = {"+": Add, "*": Mul, "-.": Monus}
_CONNECTIVES = {"&": And, "|": Or, "->": Implies, "<->": Iff}

# default metavariable sorts, keyed by first letter of the name
_META_SORT_BY_INITIAL = {
    **dict.fromkeys("abdefp", "formula"),
    **dict.fromkeys("gh", "open"),
    **dict.fromkeys("KMNS", "program"),
    **dict.fromkeys("tu", "term"),
    **dict.fromkeys("xyzvw", "ivar"),
    **dict.fromkeys("qr", "bvar"),
}


class ParseError(SyntaxError):
    """Text outside the grammar; carries line, column and expected tokens."""

    def __init__(self, message: str, line: int, column: int, expected: frozenset = frozenset()):
        self.line = line
        self.column = column
        self.expected = expected
        detail = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"line {line}, column {column}: {message}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


class _Backtrack(Exception):
    pass


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            line, col = _line_col(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str, patterns: bool, meta_sorts: dict | None):
        self.text = text
        self.toks = tokenize(text)
        self.pos = 0
        self.patterns = patterns
        self.meta_sorts = meta_sorts or {}
        self.memo: dict = {}
        self.far = -1
        self.far_expected: set[str] = set()

    # ------------------------------------------------------------ helpers
    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def fail(self, *expected: str):
        if self.pos > self.far:
            self.far = self.pos
            self.far_expected = set(expected)
        elif self.pos == self.far:
            self.far_expected.update(expected)
        raise _Backtrack()

    def hard_error(self, message: str):
        line, col = _line_col(self.text, self.peek().offset)
        raise ParseError(message, line, col)

    def accept(self, text: str) -> bool:
        if self.peek().text == text and self.peek().kind != "eof":
            self.pos += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.fail(repr(text))

    def ident(self) -> str:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in RESERVED:
            self.fail("identifier")
        self.pos += 1
        return tok.text

    def number(self) -> int:
        tok = self.peek()
        if tok.kind != "num":
            self.fail("number")
        self.pos += 1
        return int(tok.text)

    def meta(self, allowed: tuple[str, ...]) -> Meta:
        self.expect("$")
        tok = self.peek()
        if tok.kind != "ident":
            self.fail("metavariable name")
        sort = self.meta_sorts.get(tok.text) or _META_SORT_BY_INITIAL.get(tok.text[0])
        if sort not in allowed:
            self.fail(f"metavariable of sort {'/'.join(allowed)}")
        self.pos += 1
        return Meta(tok.text, sort)

    def memoized(self, kind: str, fn):
        key = (kind, self.pos)
        hit = self.memo.get(key)
        if hit is not None:
            node, end = hit
            if node is None:
                raise _Backtrack()
            self.pos = end
            return node
        start = self.pos
        try:
            node = fn()
        except _Backtrack:
            self.memo[key] = (None, start)
            self.pos = start
            raise
        self.memo[key] = (node, self.pos)
        return node

    def var_name(self):
        if self.patterns and self.peek().text == "$":
            return self.meta(("ivar",))
        return self.ident()

    # -------------------------------------------------------------- terms
    def term(self):
        return self.memoized("term", self._term)

    def _term(self):
        tok = self.peek()
        if tok.kind == "num":
            if tok.text != "0":
                self.fail("term")
            self.pos += 1
            return Zero()
        if tok.kind == "ident" and tok.text in ("s", "P"):
            self.pos += 1
            power = 1
            if self.accept("^"):
                power = self.number()
            self.expect("(")
            arg = self.term()
            self.expect(")")
            ctor = Succ if tok.text == "s" else Pred
            for _ in range(power):
                arg = ctor(arg)
            return arg
        if tok.kind == "ident":
            return Var(self.ident())
        if self.patterns and tok.text == "$":
            m = self.meta(("term", "ivar"))
            return Var(m) if m.sort == "ivar" else m
        if self.accept("("):
            left = self.term()
            op = self.peek().text
            if op not in _TERM_OPS:
                self.fail("'+'", "'*'", "'-.'")
            self.pos += 1
            right = self.term()
            self.expect(")")
            return _TERM_OPS[op](left, right)
        self.fail("term")

    # ----------------------------------------------------------- formulas
    def formula(self):
        return self.memoized("formula", self._formula)

    def _formula(self):
        tok = self.peek()
        if tok.text == "(":
            start = self.pos
            try:
                self.pos += 1
                left = self.term()
                op = self.peek().text
                if op not in ("=", "<"):
                    self.fail("'='", "'<'")
                self.pos += 1
                right = self.term()
                self.expect(")")
                return (Eq if op == "=" else Less)(left, right)
            except _Backtrack:
                self.pos = start
            self.pos += 1
            left = self.formula()
            op = self.peek().text
            if op not in _CONNECTIVES:
                self.fail(*(repr(c) for c in _CONNECTIVES))
            self.pos += 1
            right = self.formula()
            self.expect(")")
            return _CONNECTIVES[op](left, right)
        if self.accept("true"):
            return TrueConst()
        if self.accept("false"):
            return FalseConst()
        if self.accept("!"):
            return Not(self.formula())
        if self.accept("?"):
            if self.patterns and self.peek().text == "$":
                return BoolVar(self.meta(("bvar",)))
            return BoolVar(self.ident())
        if self.accept("["):
            prog = self.program()
            self.expect("]")
            power = 1
            if self.accept("^"):
                power = self.number()
            return iterate(prog, power, self.formula())
        if tok.kind == "ident" and tok.text in ("U", "I") and self.peek(1).text == "[":
            self.pos += 2
            prog = self.program()
            self.expect("]")
            body = self.formula()
            return (IterUnion if tok.text == "U" else IterInter)(prog, body)
        if tok.text in ("forall", "exists"):
            self.pos += 1
            var = self.var_name()
            self.expect(".")
            body = self.formula()
            return (Forall if tok.text == "forall" else Exists)(var, body)
        if self.patterns and tok.text == "$":
            m = self.meta(("formula", "open"))
            if self.accept("{"):
                boolean = self.accept("?")
                var = self.meta(("bvar",) if boolean else ("ivar",))
                self.expect("/")
                repl = self.meta(("open",) if boolean else ("term", "ivar"))
                self.expect("}")
                return SubstMeta(m, var, repl)
            return m
        self.fail("formula")

    def guard(self):
        g = self.formula()
        if not is_open(g):
            self.hard_error("guards must be open formulas")
        return g

    # ----------------------------------------------------------- programs
    def program(self):
        return self.memoized("program", self._program)

    def _program(self):
        tok = self.peek()
        if self.accept("skip"):
            return Skip()
        if self.patterns and tok.text == "$":
            if self.peek(2).text == ":=":
                var = self.meta(("ivar",))
                self.expect(":=")
                return Assign(var, self.term())
            return self.meta(("program",))
        if tok.kind == "ident" and tok.text not in RESERVED:
            var = self.ident()
            self.expect(":=")
            return Assign(var, self.term())
        if self.accept("?"):
            if self.patterns and self.peek().text == "$":
                var = self.meta(("bvar",))
            else:
                var = self.ident()
            self.expect(":=")
            cond = self.formula()
            if not is_open(cond):
                self.hard_error("boolean assignment needs an open formula")
            return BoolAssign(var, cond)
        if self.accept("{"):
            parts = [self.program()]
            while self.accept(";"):
                parts.append(self.program())
            self.expect("}")
            if len(parts) == 1:
                self.fail("';'")
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = Seq(p, out)
            return out
        if self.accept("if"):
            cond = self.guard()
            self.expect("then")
            then = self.program()
            orelse = Skip()
            if self.accept("else"):
                orelse = self.program()
            self.expect("fi")
            return If(cond, then, orelse)
        if self.accept("while"):
            cond = self.guard()
            self.expect("do")
            body = self.program()
            self.expect("od")
            return While(cond, body)
        self.fail("program")

    # ---------------------------------------------------------- toplevel
    def top(self, sort: str):
        try:
            if sort == "term":
                node = self.term()
            elif sort == "program":
                node = self.program()
            elif sort in ("formula", "open"):
                node = self.formula()
                op = self.peek().text
                if op in _CONNECTIVES:
                    self.pos += 1
                    node = _CONNECTIVES[op](node, self.formula())
                if sort == "open" and not is_open(node):
                    self.hard_error("not an open formula")
            else:
                raise ValueError(f"unknown sort {sort!r}")
            if self.peek().kind != "eof":
                self.fail("end of input")
        except _Backtrack:
            offset = self.toks[self.far].offset if self.far >= 0 else 0
            line, col = _line_col(self.text, offset)
            found = self.toks[self.far].text if self.far >= 0 else ""
            msg = f"unexpected {found!r}" if found else "unexpected end of input"
            raise ParseError(msg, line, col, frozenset(self.far_expected)) from None
        return node


def parse(sort: str, text: str) -> object:
    """Parse ``text`` as one of the sorts ``term``, ``open``, ``program``, ``formula``."""
    return _Parser(text, False, None).top(sort)


def parse_pattern(sort: str, text: str, meta_sorts: dict | None = None) -> object:
    """Parse a schema with ``$``-metavariables; sorts default by initial letter."""
    return _Parser(text, True, meta_sorts).top(sort)


def parse_term(text: str):
    return parse("term", text)


def parse_formula(text: str):
    return parse("formula", text)


def parse_program(text: str):
    return parse("program", text)
