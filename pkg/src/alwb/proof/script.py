"""Text format of proof scripts.

    # comment
    template T (i):
    step t1:
      formula: ([x := 0][x := s(x)]^i (x = z) -> [x := 0] U[x := s(x)] (x = z))
      by: trusted unfold-union validate bound=3 budget=200
    end

    step s1:
      formula: <formula>
      by: axiom Ax15 [bind K=x := 0, a=(x = 0)]
        | theory Th1 induction [phi=<formula>]
        | rule R1 from s1, s2 [with K=<program>]
        | omega R4 template T samples 5
        | trusted <name> validate bound=4 budget=200

Inside a template ``^i`` stands for the sample index.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from ..parser import ParseError, parse


class ScriptError(ValueError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class AxiomInstance:
    schema: str
    bindings: tuple = ()  # (metavariable, text) pairs


@dataclass(frozen=True)
class TheoryAxiom:
    theory: str
    name: str
    phi: Optional[object] = None


@dataclass(frozen=True)
class RuleApp:
    rule: str
    premises: tuple = ()
    extras: tuple = ()


@dataclass(frozen=True)
class OmegaApp:
    rule: str
    template: str
    samples: int


@dataclass(frozen=True)
class TrustedLemma:
    name: str
    bound: int
    budget: int


Justification = Union[AxiomInstance, TheoryAxiom, RuleApp, OmegaApp, TrustedLemma]


@dataclass(frozen=True)
class ProofStep:
    id: str
    formula: object
    by: Justification
    line: int = 0


@dataclass(frozen=True)
class Template:
    name: str
    index: str
    lines: tuple  # (line number, text) pairs of the body

    def instantiate(self, i: int) -> tuple:
        pattern = re.compile(r"\^" + re.escape(self.index) + r"\b")
        text = [(n, pattern.sub(f"^{i}", t)) for n, t in self.lines]
        return _parse_steps(text)


@dataclass(frozen=True)
class ProofScript:
    steps: tuple
    templates: dict = field(default_factory=dict)


def _pairs(text: str, line: int) -> tuple:
    out = []
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ScriptError(f"expected name=value, got {part.strip()!r}", line)
        name, value = part.split("=", 1)
        out.append((name.strip().lstrip("$"), value.strip()))
    return tuple(out)


_AXIOM = re.compile(r"axiom\s+(\S+)(?:\s+bind\s+(.*))?$")
_THEORY = re.compile(r"theory\s+(\S+)\s+(\S+)(?:\s+phi=(.*))?$")
_RULE = re.compile(r"rule\s+(\S+)(?:\s+from\s+(.*?))?(?:\s+with\s+(.*))?$")
_OMEGA = re.compile(r"omega\s+(\S+)\s+template\s+(\S+)\s+samples\s+(\d+)$")
_TRUSTED = re.compile(r"trusted\s+(\S+)\s+validate\s+bound=(\d+)\s+budget=(\d+)$")


def parse_justification(text: str, line: int = 0) -> Justification:
    text = text.strip()
    try:
        if m := _AXIOM.match(text):
            return AxiomInstance(m.group(1), _pairs(m.group(2) or "", line))
        if m := _THEORY.match(text):
            phi = parse("formula", m.group(3)) if m.group(3) else None
            return TheoryAxiom(m.group(1), m.group(2), phi)
        if m := _RULE.match(text):
            premises = tuple(p.strip() for p in (m.group(2) or "").split(",") if p.strip())
            return RuleApp(m.group(1), premises, _pairs(m.group(3) or "", line))
        if m := _OMEGA.match(text):
            return OmegaApp(m.group(1), m.group(2), int(m.group(3)))
        if m := _TRUSTED.match(text):
            return TrustedLemma(m.group(1), int(m.group(2)), int(m.group(3)))
    except ParseError as err:
        raise ScriptError(f"in justification: {err}", line) from None
    raise ScriptError(f"cannot read justification {text!r}", line)


_STEP = re.compile(r"step\s+(\S+?)\s*:$")
_TEMPLATE = re.compile(r"template\s+(\S+)\s*\(\s*(\w+)\s*\)\s*:$")


def _parse_steps(lines) -> tuple:
    steps = []
    current: Optional[dict] = None

    def finish():
        if current is None:
            return
        if "formula" not in current or "by" not in current:
            raise ScriptError(f"step {current['id']} needs formula: and by: lines", current["line"])
        steps.append(ProofStep(current["id"], current["formula"], current["by"], current["line"]))

    for n, raw in lines:
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        if m := _STEP.match(text):
            finish()
            current = {"id": m.group(1), "line": n}
        elif current is None:
            raise ScriptError(f"expected 'step <id>:', got {text!r}", n)
        elif text.startswith("formula:"):
            try:
                current["formula"] = parse("formula", text[len("formula:"):])
            except ParseError as err:
                raise ScriptError(f"in formula: {err}", n) from None
        elif text.startswith("by:"):
            current["by"] = parse_justification(text[len("by:"):], n)
        else:
            raise ScriptError(f"unexpected line {text!r}", n)
    finish()
    return tuple(steps)


def parse_script(text: str) -> ProofScript:
    main: list = []
    templates: dict = {}
    block: Optional[list] = None
    header = None
    for n, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if block is None:
            if m := _TEMPLATE.match(stripped):
                header = (m.group(1), m.group(2), n)
                block = []
            else:
                main.append((n, raw))
        elif stripped == "end":
            name, index, _ = header
            if name in templates:
                raise ScriptError(f"template {name} defined twice", n)
            templates[name] = Template(name, index, tuple(block))
            block = None
        else:
            block.append((n, raw))
    if block is not None:
        raise ScriptError(f"template {header[0]} is not closed with 'end'", header[2])
    for t in templates.values():
        t.instantiate(0)  # syntax check
    return ProofScript(_parse_steps(main), templates)


def load_script(path) -> ProofScript:
    with open(path, encoding="utf-8") as fh:
        return parse_script(fh.read())
