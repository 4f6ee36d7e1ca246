"""Euclid's algorithm and its relatives: named artifacts, oracles, demos.

``gcd`` and ``max`` are not symbols of the object language; they appear here
only as oracles that runs of the object-language programs are checked against.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd as _math_gcd

from .models import NSN, NSN_CERTIFICATES, NSNValue, StdNat, nsn_equal
from .parser import parse
from .printer import render
from .semantics import (
    BudgetExhausted, Certified, EvalConfig, Halted, Valuation,
    check_divergence_certificate, format_trace, run_program,
)
from .syntax import Add, Eq, Var


class UnknownArtifact(KeyError):
    pass


class DomainError(ValueError):
    pass


EUCLID_BODY = "if (m < n) then n := (n -. m) else m := (m -. n) fi"
EUCLID = f"while !(n = m) do {EUCLID_BODY} od"
NONZERO = "(!(n = 0) & !(m = 0))"

ARTIFACTS = {
    "E": ("program", EUCLID),
    "E-body": ("program", EUCLID_BODY),
    "H": ("formula", f"forall n . forall m . ({NONZERO} -> [{EUCLID}] (n = m))"),
    "H-matrix": ("formula", f"[{EUCLID}] (n = m)"),
    "H-union": ("formula", f"forall n . forall m . ({NONZERO} -> U[{EUCLID_BODY}] (n = m))"),
    "H-union-matrix": ("formula", f"U[{EUCLID_BODY}] (n = m)"),
    "E-nested": ("program",
                 "while !(n = m) do {while (m < n) do n := (n -. m) od; "
                 "while (n < m) do m := (m -. n) od} od"),
    "E-remainder-loop": ("program", "{r := n; while !(r < m) do r := (r -. m) od}"),
    "E-division": ("program",
                   "{r := n; q := 0; while !(r < m) do {r := (r -. m); q := s(q)} od}"),
    "E-gcd-remainder": ("program",
                        "{r := n; while !(r = 0) do {r := n; while !(r < m) do r := (r -. m) od; "
                        "n := m; m := r} od}"),
    "loop-split": ("formula",
                   f"([{EUCLID}] (n = m) <-> [while !(n = m) do "
                   "{while (!(n = m) & (m < n)) do n := (n -. m) od; "
                   "while (!(n = m) & !(m < n)) do m := (m -. n) od} od] (n = m))"),
    "S": ("formula", "forall x . [{y := 0; while !(y = x) do y := s(y) od}] (x = y)"),
}


def artifact_source(name: str) -> tuple[str, str]:
    try:
        return ARTIFACTS[name]
    except KeyError:
        raise UnknownArtifact(name) from None


def artifact(name: str):
    """Parsed tree of a built-in program or formula."""
    sort, text = artifact_source(name)
    return parse(sort, text)


# ----------------------------------------------------------------- oracles

def gcd_oracle(n: int, m: int) -> int:
    """Largest d dividing both, found by scanning down from min(n, m)."""
    if n < 1 or m < 1:
        raise DomainError("gcd oracle needs positive arguments")
    for d in range(min(n, m), 0, -1):
        if n % d == 0 and m % d == 0:
            return d
    raise AssertionError("unreachable: 1 divides everything")


def max_oracle(n: int, m: int) -> int:
    return n if n >= m else m


# ----------------------------------------------------------------- Engeler

@dataclass(frozen=True)
class EngelerDisjunct:
    """The open formula ``a·n = b·m`` with coprime positive ``a``, ``b``."""
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1 or _math_gcd(self.a, self.b) != 1:
            raise ValueError(f"({self.a},{self.b}) is not a coprime pair of positives")

    @property
    def row(self) -> int:
        return max(self.a, self.b)

    def formula(self, n: str = "n", m: str = "m"):
        return _disjunct_formula(self.a, self.b, n, m)

    def __str__(self) -> str:
        left = "n" if self.a == 1 else f"{self.a}n"
        right = "m" if self.b == 1 else f"{self.b}m"
        return f"{left}={right}"


@lru_cache(maxsize=None)
def _disjunct_formula(a: int, b: int, n: str, m: str):
    # shared trees keep the compiled-closure cache warm across sweeps
    return Eq(_times(a, Var(n)), _times(b, Var(m)))


def _times(k: int, t):
    out = t
    for _ in range(k - 1):
        out = Add(out, t)
    return out


def engeler_row(k: int) -> list[EngelerDisjunct]:
    row = [EngelerDisjunct(a, k) for a in range(1, k) if _math_gcd(a, k) == 1]
    row += [EngelerDisjunct(k, b) for b in range(k - 1, 0, -1) if _math_gcd(k, b) == 1]
    if k == 1:
        row = [EngelerDisjunct(1, 1)]
    return row


def engeler_disjunction(k: int) -> list[EngelerDisjunct]:
    """All disjuncts with ``max(a, b) <= k``, row by row."""
    if k < 1:
        raise ValueError("k must be at least 1")
    out: list[EngelerDisjunct] = []
    for row in range(1, k + 1):
        out.extend(engeler_row(row))
    return out


def engeler_witness(n: int, m: int) -> tuple[int, int, int]:
    """The disjunct true at (n, m) and the first row containing it."""
    if n < 1 or m < 1:
        raise DomainError("Engeler witness needs positive arguments")
    g = gcd_oracle(n, m)
    a, b = m // g, n // g
    return a, b, max(a, b)


# ------------------------------------------------------------------- demos

@dataclass(frozen=True)
class DemoReport:
    name: str
    lines: tuple
    passed: bool
    outcome: object = None

    def render(self) -> str:
        return "\n".join((f"demo: {self.name}",) + tuple(self.lines))


def _finish(name, lines, ok, detail, outcome=None) -> DemoReport:
    lines = list(lines) + [f"verdict: {'PASS' if ok else 'FAIL'} {detail}"]
    return DemoReport(name, tuple(lines), ok, outcome)


def loop_iterations(outcome) -> int:
    """Body executions of a traced run of E: one assignment per iteration."""
    return len(outcome.trace) - 1


def demo_standard(n: int, m: int, cfg: EvalConfig = EvalConfig()) -> DemoReport:
    name = f"standard({n},{m})"
    s = StdNat()
    expected = gcd_oracle(n, m)
    out = run_program(artifact("E"), s, Valuation({"n": n, "m": m}),
                      EvalConfig(cfg.step_budget, cfg.iter_bound, cfg.carrier_bound, True))
    lines = [format_trace(out, s)] if cfg.trace_on and hasattr(out, "trace") else []
    if not isinstance(out, Halted):
        return _finish(name, lines, False, f"did not halt within {cfg.step_budget} steps", out)
    final = out.final.nums["n"]
    lines.append(f"halted after {out.steps} steps, {loop_iterations(out)} loop iterations")
    lines.append(f"final: n={final}, m={out.final.nums['m']}")
    return _finish(name, lines, final == expected, f"final n = {final}, gcd oracle = {expected}", out)


NSN_HALT_START = {"n": NSNValue(12, 0, 1), "m": NSNValue(15, 0, 2)}
NSN_DIVERGE_START = {"n": NSNValue(12, 0, 1), "m": NSNValue(15, 1, 2)}
NSN_GCD = NSNValue(3, 0, 1)
DIVERGENCE_ROWS = 80


def demo_nsn_halt(cfg: EvalConfig = EvalConfig()) -> DemoReport:
    name = "nsn-halt"
    s = NSN()
    out = run_program(artifact("E"), s, Valuation(dict(NSN_HALT_START)),
                      EvalConfig(cfg.step_budget, cfg.iter_bound, cfg.carrier_bound, True))
    lines = [format_trace(out, s)] if hasattr(out, "trace") else []
    if not isinstance(out, Halted):
        return _finish(name, lines, False, "E did not halt", out)
    final = out.final.nums["n"]
    lines.append(f"final: {out.final.format(s)}")
    ok = nsn_equal(final, NSN_GCD) and nsn_equal(out.final.nums["m"], NSN_GCD)
    return _finish(name, lines, ok, f"final n = {final}, equal to {NSN_GCD}: {ok}", out)


def expected_divergence_row(i: int) -> tuple[NSNValue, NSNValue]:
    return NSNValue(12, 0, 1), NSNValue(15 - 12 * i, 1, 2)


def demo_nsn_diverge(cfg: EvalConfig = EvalConfig(step_budget=1000)) -> DemoReport:
    name = "nsn-diverge"
    s = NSN()
    loop = artifact("E")
    start = Valuation(dict(NSN_DIVERGE_START))
    out = run_program(loop, s, start,
                      EvalConfig(cfg.step_budget, cfg.iter_bound, cfg.carrier_bound, True))
    lines = [format_trace(out, s)]
    if not isinstance(out, BudgetExhausted):
        return _finish(name, lines, False, "expected the budget to run out", out)
    for i, snap in enumerate(out.trace):
        want = expected_divergence_row(i)
        got = (snap.nums["n"], snap.nums["m"])
        if got != want:
            return _finish(name, lines, False, f"row {i} is {got[0]}, {got[1]}; expected {want[0]}, {want[1]}", out)
    if len(out.trace) <= DIVERGENCE_ROWS:
        return _finish(name, lines, False, f"only {len(out.trace)} rows; raise the budget", out)
    inv = NSN_CERTIFICATES[0]
    cert = check_divergence_certificate(loop, s, start, inv, DIVERGENCE_ROWS, cfg)
    lines.append(f"BudgetExhausted after {out.steps} steps; certificate {inv.name}: "
                 f"{'Certified' if isinstance(cert, Certified) else cert}")
    ok = isinstance(cert, Certified)
    return _finish(name, lines, ok,
                   f"{len(out.trace)} rows match m = NSN(15-12i,1,2); divergence "
                   + ("certified" if ok else "not certified"), out)


DEMOS = {"nsn-halt": demo_nsn_halt, "nsn-diverge": demo_nsn_diverge}


def canonical(name: str) -> str:
    return render(artifact(name))
