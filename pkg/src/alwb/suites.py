"""Property sweeps over the Euclid artifacts, the axiom schemas and the models.

Each suite returns a ``SuiteResult``; the acceptance tests and the ``suite``
CLI command both go through here.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from math import gcd as _math_gcd

from .euclid import (
    artifact, engeler_disjunction, engeler_witness, gcd_oracle, loop_iterations,
    max_oracle,
)
from .models import NSN, NSNValue, StdNat, nsn_equal, nsn_less, nsn_subtract
from .parser import parse
from .proof.schemas import SCHEMAS, Match, instantiate, match_schema, parse_binding, schema_metas
from .proof.theories import theory_axiom
from .semantics import (
    EvalConfig, Halted, Inconclusive, Refuted, T, F, ValidUpToBound, Valuation,
    bounded_validate, eval_formula, eval_open, format_validation, least_union_witness,
    run_program,
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    checked: int
    failures: tuple = ()
    notes: tuple = ()
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def render(self) -> str:
        lines = [f"suite: {self.name}", f"checked: {self.checked}"]
        lines += list(self.notes)
        lines += [f"failure: {f}" for f in self.failures[:10]]
        if len(self.failures) > 10:
            lines.append(f"... {len(self.failures) - 10} more failures")
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"verdict: {verdict} {len(self.failures)} failures")
        return "\n".join(lines)


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        return SuiteResult(result.name, result.checked, result.failures, result.notes,
                           time.perf_counter() - start)
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------- Euclid sweeps

@_timed
def oracle_equivalence(limit: int = 64) -> SuiteResult:
    """E and E-nested reach gcd on every pair; E-gcd-remainder on every n > m."""
    s = StdNat()
    failures = []
    checked = 0
    for name in ("E", "E-nested"):
        k = artifact(name)
        for n in range(1, limit + 1):
            for m in range(1, limit + 1):
                checked += 1
                out = run_program(k, s, Valuation({"n": n, "m": m}))
                if not isinstance(out, Halted) or out.final.nums["n"] != gcd_oracle(n, m):
                    failures.append(f"{name} at n={n}, m={m}")
    k = artifact("E-gcd-remainder")
    for n in range(2, limit + 1):
        for m in range(1, n):
            checked += 1
            out = run_program(k, s, Valuation({"n": n, "m": m}))
            if not isinstance(out, Halted) or out.final.nums["n"] != gcd_oracle(n, m):
                failures.append(f"E-gcd-remainder at n={n}, m={m}")
    return SuiteResult("oracle-equivalence", checked, tuple(failures))


@_timed
def halting_formula(limit: int = 32) -> SuiteResult:
    """[E](n = m) is true everywhere; the least U witness is the loop count of E."""
    s = StdNat()
    h = artifact("H-matrix")
    h_union = artifact("H-union-matrix")
    e = artifact("E")
    failures = []
    checked = 0
    for n in range(1, limit + 1):
        for m in range(1, limit + 1):
            checked += 1
            v = Valuation({"n": n, "m": m})
            cfg = EvalConfig(step_budget=10 * (n + m))
            if eval_formula(h, s, v, cfg) is not T:
                failures.append(f"[E](n = m) not true at n={n}, m={m}")
                continue
            run = run_program(e, s, v, EvalConfig(step_budget=10 * (n + m), trace_on=True))
            witness = least_union_witness(h_union, s, v, EvalConfig(step_budget=10 * (n + m)))
            if witness != loop_iterations(run):
                failures.append(f"witness {witness} vs {loop_iterations(run)} iterations "
                                f"at n={n}, m={m}")
    return SuiteResult("halting-formula", checked, tuple(failures))


@_timed
def engeler_suite(limit: int = 20) -> SuiteResult:
    """The witness disjunct holds at (n, m) and every other disjunct up to its row fails."""
    s = StdNat()
    failures = []
    checked = 0
    for n in range(1, limit + 1):
        for m in range(1, limit + 1):
            checked += 1
            a, b, k = engeler_witness(n, m)
            if _math_gcd(a, b) != 1 or a * n != b * m or k > max_oracle(n, m):
                failures.append(f"bad witness ({a},{b},{k}) at n={n}, m={m}")
                continue
            v = Valuation({"n": n, "m": m})
            for d in engeler_disjunction(k):
                holds = eval_open(d.formula(), s, v)
                if holds != ((d.a, d.b) == (a, b)):
                    failures.append(f"{d} is {holds} at n={n}, m={m}")
    return SuiteResult("engeler", checked, tuple(failures))


@_timed
def loop_split(bound: int = 6) -> SuiteResult:
    """The loop-splitting equivalence for E validates on the standard model."""
    result = bounded_validate(artifact("loop-split"), StdNat(), EvalConfig(), bound)
    failures = () if isinstance(result, ValidUpToBound) else (format_validation(result, StdNat()),)
    checked = result.checked if hasattr(result, "checked") else 0
    return SuiteResult("loop-split", checked, failures)


@_timed
def variant_invariant(limit: int = 32) -> SuiteResult:
    """One body step of E lowers max(n, m) and keeps gcd(n, m) when n != m."""
    s = StdNat()
    body = artifact("E-body")
    failures = []
    checked = 0
    for n in range(1, limit + 1):
        for m in range(1, limit + 1):
            if n == m:
                continue
            checked += 1
            out = run_program(body, s, Valuation({"n": n, "m": m}))
            n2, m2 = out.final.nums["n"], out.final.nums["m"]
            if not max_oracle(n2, m2) < max_oracle(n, m):
                failures.append(f"max not decreased at n={n}, m={m}")
            if gcd_oracle(n2, m2) != gcd_oracle(n, m):
                failures.append(f"gcd changed at n={n}, m={m}")
    return SuiteResult("variant-invariant", checked, tuple(failures))


# ------------------------------------------------------------ axiom suite

_P1 = {"a": "(x = 0)", "b": "(x < y)", "d": "(y = 0)"}
_P2 = {"a": "[x := s(x)] (y < x)", "b": "!(x = y)", "d": "U[x := P(x)] (x = 0)"}
_P3 = {"a": "[while (x < y) do x := s(x) od] (x = y)", "b": "(?q & (y < x))",
       "d": "I[y := P(y)] (y < s(x))"}
_PROPOSITIONAL = [_P1, _P2, _P3]

AXIOM_INSTANCES: dict[str, list[dict[str, str]]] = {
    **{f"Ax{i}": _PROPOSITIONAL for i in range(1, 12)},
    "Ax12": [
        {"x": "x", "a": "(x < s(x))", "t": "y"},
        {"x": "x", "a": "(x = y)", "t": "y"},
        {"x": "x", "a": "[y := x] (y = x)", "t": "s(z)"},
    ],
    "Ax13": [
        {"x": "x", "a": "(x = y)"},
        {"x": "x", "a": "(x = 0)"},
        {"x": "x", "a": "[y := s(x)] (x < y)"},
    ],
    "Ax14": [
        {"K": "z := s(z)", "x": "x", "a": "(x = z)", "y": "y"},
        {"K": "skip", "x": "x", "a": "(x < w)", "y": "v"},
        {"K": "if (z < w) then z := w fi", "x": "x", "a": "(z = x)", "y": "u"},
    ],
    "Ax15": [
        {"K": "x := 0", "a": "(x = 0)", "b": "(x < 0)"},
        {"K": "while (x < y) do x := s(x) od", "a": "(x = y)", "b": "(y < x)"},
        {"K": "if (x < y) then x := y else y := x fi", "a": "(x = 0)", "b": "!(x = y)"},
    ],
    "Ax16": [
        {"K": "x := s(y)", "a": "(y < x)", "b": "!(x = 0)"},
        {"K": "{x := (x + y); y := 0}", "a": "(y = 0)", "b": "(x < y)"},
        {"K": "while !(x = 0) do x := P(x) od", "a": "(x = 0)", "b": "(x < s(y))"},
    ],
    "Ax17": [
        {"K": "x := 0", "a": "(x = y)"},
        {"K": "while !(x = y) do x := P(x) od", "a": "(x = y)"},
        {"K": "{y := x; x := s(x)}", "a": "(x < y)"},
    ],
    "Ax18": [
        {"x": "x", "t": "s(y)", "g": "((x < y) | ?q)", "q": "q", "h": "(y = 0)"},
        {"x": "y", "t": "(x + x)", "g": "((y = x) & ?p)", "q": "p", "h": "(x < y)"},
        {"x": "x", "t": "0", "g": "!(x = y)", "q": "q", "h": "true"},
    ],
    "Ax19": [
        {"K": "x := s(x)", "M": "y := x", "a": "(x = y)"},
        {"K": "while (x < y) do x := s(x) od", "M": "x := P(x)", "a": "(x < y)"},
        {"K": "?q := (x = y)", "M": "if ?q then x := 0 fi", "a": "(x < s(y))"},
    ],
    "Ax20": [
        {"g": "(x < y)", "K": "x := y", "M": "y := x", "a": "(x = y)"},
        {"g": "(x = 0)", "K": "skip", "M": "x := P(x)", "a": "(x < y)"},
        {"g": "?q", "K": "x := s(x)", "M": "while (x < y) do x := s(x) od", "a": "(y < x)"},
    ],
    "Ax21": [
        {"g": "(x < y)", "K": "x := s(x)", "a": "(x = y)"},
        {"g": "!(x = y)", "K": "x := P(x)", "a": "(x = y)"},
        {"g": "!(x = 0)", "K": "{x := P(x); y := s(y)}", "a": "(x = 0)"},
    ],
    "Ax22": [
        {"K": "x := s(x)", "a": "(x < y)"},
        {"K": "x := P(x)", "a": "(x < s(y))"},
        {"K": "if (x < y) then x := s(x) fi", "a": "!(y < x)"},
    ],
    "Ax23": [
        {"K": "x := s(x)", "a": "(y < x)"},
        {"K": "x := P(x)", "a": "(x = 0)"},
        {"K": "y := s(y)", "a": "(x = y)"},
    ],
}


def axiom_instance(schema_id: str, bindings: dict):
    """Instantiate a schema from textual bindings."""
    sorts = schema_metas(SCHEMAS[schema_id].pattern)
    b = {name: parse_binding(sorts[name], text) for name, text in bindings.items()
         if name in sorts}
    return instantiate(SCHEMAS[schema_id].pattern, b)


@_timed
def axiom_suite(var_bound: int = 4, budget: int = 200) -> SuiteResult:
    """Every shipped axiom instance matches its schema and is never refuted."""
    s = StdNat()
    cfg = EvalConfig(step_budget=budget)
    failures = []
    notes = []
    checked = 0
    for schema_id, instances in AXIOM_INSTANCES.items():
        counts = {"valid": 0, "inconclusive": 0}
        for bindings in instances:
            checked += 1
            f = axiom_instance(schema_id, bindings)
            if not isinstance(match_schema(schema_id, f), Match):
                failures.append(f"{schema_id} instance does not match its schema: {bindings}")
                continue
            result = bounded_validate(f, s, cfg, var_bound)
            if isinstance(result, Refuted):
                failures.append(f"{schema_id} {format_validation(result, s)}")
            elif isinstance(result, Inconclusive):
                counts["inconclusive"] += 1
            else:
                counts["valid"] += 1
        notes.append(f"{schema_id}: {counts['valid']} valid, {counts['inconclusive']} inconclusive")
    return SuiteResult("axioms", checked, tuple(failures), tuple(notes))


# ------------------------------------------------------ theory separation

TH1_OPEN_INSTANCES = {
    "1": "!(s(x) = 0)",
    "2": "((s(x) = s(y)) -> (x = y))",
    "3": "((x + 0) = x)",
    "4": "((x + s(y)) = s((x + y)))",
    "5a": "((x < y) -> (y = (x + s(P((y -. x))))))",
    "5b": "(x < (x + s(y)))",
    "6": "(P(0) = 0)",
    "7": "(P(s(x)) = x)",
    "8": "((x -. 0) = x)",
    "9": "((x -. s(y)) = P((x -. y)))",
}

SEPARATION_POINT = NSNValue(0, 1, 2)


@_timed
def theory_separation(var_bound: int = 4) -> SuiteResult:
    """NSN satisfies the open Th1 axioms yet refutes axiom S; axiom S holds on the standard model."""
    nsn, std = NSN(), StdNat()
    failures = []
    notes = []
    checked = 0
    for name, text in TH1_OPEN_INSTANCES.items():
        result = bounded_validate(parse("formula", text), nsn, EvalConfig(), var_bound)
        checked += getattr(result, "checked", 1)
        if not isinstance(result, ValidUpToBound):
            failures.append(f"Th1 ({name}) on NSN: {format_validation(result, nsn)}")
    notes.append(f"Th1 open instances on NSN: {len(TH1_OPEN_INSTANCES)} checked over enumerate({var_bound})")
    axiom_s = theory_axiom("Th3", "S")
    on_nsn = bounded_validate(axiom_s, nsn, EvalConfig(step_budget=200), 2, collect_all=True)
    points = []
    if isinstance(on_nsn, Refuted):
        points = [on_nsn.valuation] + list(on_nsn.others)
    if not any(nsn_equal(p.nums["x"], SEPARATION_POINT) for p in points):
        failures.append(f"axiom S on NSN not refuted at x={SEPARATION_POINT}: "
                        f"{format_validation(on_nsn, nsn)}")
    else:
        notes.append(f"axiom S on NSN: Refuted at x={SEPARATION_POINT} ({len(points)} counterexamples)")
    on_std = bounded_validate(axiom_s, std, EvalConfig(), 6)
    notes.append(f"axiom S on standard: {format_validation(on_std, std)}")
    if not isinstance(on_std, ValidUpToBound):
        failures.append("axiom S on the standard model is not ValidUpToBound")
    return SuiteResult("theory-separation", checked, tuple(failures), tuple(notes))


@_timed
def nsn_divergence_invariant(bound: int = 4) -> SuiteResult:
    """Standard positive n against fractional m: n < m, n != m, and m -. n keeps m's fraction."""
    from .models import nsn_enumerate
    sample = nsn_enumerate(bound)
    failures = []
    checked = 0
    for n in sample:
        if not (n.nomprt == 0 and n.intpart > 0):
            continue
        for m in sample:
            if m.nomprt == 0:
                continue
            checked += 1
            d = nsn_subtract(m, n)
            if not nsn_less(n, m) or nsn_equal(n, m) or d.frac != m.frac:
                failures.append(f"n={n}, m={m}")
    return SuiteResult("nsn-divergence-invariant", checked, tuple(failures))


SUITES = {
    "oracle": oracle_equivalence,
    "halting": halting_formula,
    "axioms": axiom_suite,
    "theory-separation": theory_separation,
    "engeler": engeler_suite,
    "loop-split": loop_split,
    "variant-invariant": variant_invariant,
    "nsn-invariant": nsn_divergence_invariant,
}


# ------------------------------------------------- round trip and sampling

@_timed
def round_trip(count: int = 1000, seed: int | None = None) -> SuiteResult:
    """parse(render(t)) == t for ``count`` generated trees of each sort."""
    from .gen import SORTS, generate
    from .printer import render
    failures = []
    checked = 0
    for sort in SORTS:
        for t in generate(sort, count, seed):
            checked += 1
            text = render(t)
            try:
                back = parse(sort, text)
            except SyntaxError as err:
                failures.append(f"{sort} {text!r}: {err}")
                continue
            if back != t:
                failures.append(f"{sort} {text!r} parsed to a different tree")
    return SuiteResult("round-trip", checked, tuple(failures))


_SMALL = EvalConfig(step_budget=40, iter_bound=4, carrier_bound=2)
_LARGE = EvalConfig(step_budget=400, iter_bound=16, carrier_bound=4)


def _sample_valuation(rng, names, bools) -> Valuation:
    return Valuation({n: rng.randrange(6) for n in names},
                     {b: rng.random() < 0.5 for b in bools})


@_timed
def kleene_monotonicity(count: int = 200, seed: int | None = None) -> SuiteResult:
    """Raising every bound only resolves Unknown; a True or False verdict never flips."""
    import random
    from .gen import BOOL_NAMES, NAMES, TreeGen, seed_from_env
    rng = random.Random(seed_from_env() if seed is None else seed)
    gen = TreeGen(rng, mul=False)
    s = StdNat()
    failures = []
    for _ in range(count):
        f = gen.formula(4)
        v = _sample_valuation(rng, NAMES, BOOL_NAMES)
        small = eval_formula(f, s, v, _SMALL)
        large = eval_formula(f, s, v, _LARGE)
        if small is not large and small in (T, F):
            from .printer import render
            failures.append(f"{render(f)} at {v.format(s)}: {small} then {large}")
    return SuiteResult("kleene-monotonicity", count, tuple(failures))


@_timed
def frame_property(count: int = 200, seed: int | None = None) -> SuiteResult:
    """Variables a halting program never assigns keep their values."""
    import random
    from .gen import BOOL_NAMES, NAMES, TreeGen, seed_from_env
    from .printer import render
    from .syntax import assigned_bool_vars, assigned_vars
    rng = random.Random(seed_from_env() if seed is None else seed)
    gen = TreeGen(rng, mul=False)
    s = StdNat()
    failures = []
    for _ in range(count):
        k = gen.program(4)
        v = _sample_valuation(rng, NAMES, BOOL_NAMES)
        out = run_program(k, s, v, EvalConfig(step_budget=400))
        if not isinstance(out, Halted):
            continue
        for name in set(NAMES) - assigned_vars(k):
            if out.final.nums[name] != v.nums[name]:
                failures.append(f"{render(k)} changed {name}")
        for name in set(BOOL_NAMES) - assigned_bool_vars(k):
            if out.final.bools[name] != v.bools[name]:
                failures.append(f"{render(k)} changed ?{name}")
    return SuiteResult("frame-property", count, tuple(failures))


SUITES.update({
    "round-trip": round_trip,
    "kleene-monotonicity": kleene_monotonicity,
    "frame-property": frame_property,
})
