"""Budgeted execution and three-valued evaluation over pluggable structures.

Programs, terms and open formulas compile to closures (cached on the node).
Every assignment and every guard test costs one step.  A run that would
exceed the budget stops with :class:`BudgetExhausted`; the formula evaluator
turns such a run into ``Unknown`` unless a divergence certificate shows the
interrupted loop can never finish, in which case the verdict is ``False``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .syntax import (
    Add, And, Assign, BoolAssign, BoolVar, Box, Eq, Exists, FalseConst, Forall,
    If, Iff, Implies, IterInter, IterUnion, Less, Monus, Mul, Not, Or, Pred,
    Seq, Skip, Succ, TrueConst, Var, While, Zero, free_bool_vars,
    ordered_assigned_vars, ordered_free_vars, program_bool_vars, program_vars,
)


class UnsupportedOperation(Exception):
    """The structure does not implement an operation (e.g. ``*`` on NSN)."""


class UnboundVariable(Exception):
    """A variable was read before it had a value."""


class EvaluationError(Exception):
    pass


# ------------------------------------------------------------ truth values

class TruthValue(enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value

    @staticmethod
    def of(b: bool) -> "TruthValue":
        return TruthValue.TRUE if b else TruthValue.FALSE


T, F, U = TruthValue.TRUE, TruthValue.FALSE, TruthValue.UNKNOWN


def k_not(a: TruthValue) -> TruthValue:
    return {T: F, F: T, U: U}[a]


def k_and(a: TruthValue, b: TruthValue) -> TruthValue:
    if a is F or b is F:
        return F
    if a is T and b is T:
        return T
    return U


def k_or(a: TruthValue, b: TruthValue) -> TruthValue:
    return k_not(k_and(k_not(a), k_not(b)))


def k_implies(a: TruthValue, b: TruthValue) -> TruthValue:
    return k_or(k_not(a), b)


def k_iff(a: TruthValue, b: TruthValue) -> TruthValue:
    if U in (a, b):
        return U
    return TruthValue.of(a is b)


# --------------------------------------------------------------- structure

class Structure:
    """An arithmetic interpretation of the signature ``0, s, P, +, *, -., =, <``."""

    name = "abstract"

    def zero(self):
        raise NotImplementedError

    def succ(self, a):
        raise NotImplementedError

    def pred(self, a):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise UnsupportedOperation(f"structure {self.name} has no multiplication")

    def monus(self, a, b):
        raise NotImplementedError

    def equal(self, a, b) -> bool:
        raise NotImplementedError

    def less(self, a, b) -> bool:
        raise NotImplementedError

    def enumerate(self, bound: int) -> list:
        raise NotImplementedError

    def is_exhaustive(self, bound: int) -> bool:
        return False

    def key(self, a):
        """Hashable representative of the ``equal``-class of ``a``."""
        return a

    def format(self, a) -> str:
        return str(a)

    def parse_value(self, text: str):
        raise NotImplementedError

    def certificates(self) -> tuple:
        return ()


# --------------------------------------------------------------- valuation

@dataclass(frozen=True)
class Valuation:
    """Values of individual variables plus truth values of boolean ones."""
    nums: Mapping[str, object] = field(default_factory=dict)
    bools: Mapping[str, bool] = field(default_factory=dict)

    def env(self) -> dict:
        env = dict(self.nums)
        for name, b in self.bools.items():
            env["?" + name] = b
        return env

    @staticmethod
    def from_env(env: Mapping, names: Optional[Iterable[str]] = None) -> "Valuation":
        nums, bools = {}, {}
        for k in (env if names is None else names):
            if k not in env:
                continue
            if k.startswith("?"):
                bools[k[1:]] = env[k]
            else:
                nums[k] = env[k]
        return Valuation(nums, bools)

    def format(self, s: Structure) -> str:
        parts = [f"{k}={s.format(v)}" for k, v in self.nums.items()]
        parts += [f"?{k}={'true' if v else 'false'}" for k, v in self.bools.items()]
        return ", ".join(parts)


@dataclass(frozen=True)
class EvalConfig:
    step_budget: int = 10000
    iter_bound: int = 64
    carrier_bound: int = 6
    trace_on: bool = False
    certificates: Optional[tuple] = None  # None: the structure's own plus state cycles

    def __post_init__(self):
        for name in ("step_budget", "iter_bound", "carrier_bound"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")


# ---------------------------------------------------------------- outcomes

@dataclass(frozen=True)
class Halted:
    final: Valuation
    steps: int
    trace: tuple = ()
    columns: tuple = ()


@dataclass(frozen=True)
class BudgetExhausted:
    steps: int
    trace: tuple = ()
    columns: tuple = ()
    active_loops: tuple = ()  # (While node, head env) pairs, innermost first


@dataclass(frozen=True)
class RunError:
    reason: str


# -------------------------------------------------------------- compilation

class _Exhausted(Exception):
    def __init__(self):
        super().__init__("step budget exhausted")
        self.loops: list = []


class _Ctx:
    __slots__ = ("s", "steps", "budget", "trace", "columns", "track_loops")

    def __init__(self, s, budget, columns=None, track_loops=False):
        self.s = s
        self.steps = 0
        self.budget = budget
        self.columns = columns
        self.trace = [] if columns is not None else None
        self.track_loops = track_loops

    def tick(self):
        if self.steps >= self.budget:
            raise _Exhausted()
        self.steps += 1

    def snap(self, env):
        self.trace.append(tuple(env.get(c) for c in self.columns))


def _cached(node, build):
    fn = node.__dict__.get("_fn")
    if fn is None:
        fn = build(node)
        object.__setattr__(node, "_fn", fn)
    return fn


def compile_term(t) -> Callable:
    return _cached(t, _build_term)


def _build_term(t):
    if isinstance(t, Var):
        name = t.name

        def var(env, s):
            try:
                return env[name]
            except KeyError:
                raise UnboundVariable(name) from None
        return var
    if isinstance(t, Zero):
        return lambda env, s: s.zero()
    if isinstance(t, Succ):
        a = compile_term(t.arg)
        return lambda env, s: s.succ(a(env, s))
    if isinstance(t, Pred):
        a = compile_term(t.arg)
        return lambda env, s: s.pred(a(env, s))
    left, right = compile_term(t.left), compile_term(t.right)
    if isinstance(t, Add):
        return lambda env, s: s.add(left(env, s), right(env, s))
    if isinstance(t, Mul):
        return lambda env, s: s.mul(left(env, s), right(env, s))
    if isinstance(t, Monus):
        return lambda env, s: s.monus(left(env, s), right(env, s))
    raise TypeError(f"not a term: {t!r}")


def compile_open(g) -> Callable:
    return _cached(g, _build_open)


def _build_open(g):
    if isinstance(g, (Eq, Less)):
        left, right = compile_term(g.left), compile_term(g.right)
        if isinstance(g, Eq):
            return lambda env, s: s.equal(left(env, s), right(env, s))
        return lambda env, s: s.less(left(env, s), right(env, s))
    if isinstance(g, TrueConst):
        return lambda env, s: True
    if isinstance(g, FalseConst):
        return lambda env, s: False
    if isinstance(g, BoolVar):
        key = "?" + g.name

        def bvar(env, s):
            try:
                return env[key]
            except KeyError:
                raise UnboundVariable(key) from None
        return bvar
    if isinstance(g, Not):
        a = compile_open(g.arg)
        return lambda env, s: not a(env, s)
    left, right = compile_open(g.left), compile_open(g.right)
    if isinstance(g, And):
        return lambda env, s: left(env, s) and right(env, s)
    if isinstance(g, Or):
        return lambda env, s: left(env, s) or right(env, s)
    if isinstance(g, Implies):
        return lambda env, s: (not left(env, s)) or right(env, s)
    if isinstance(g, Iff):
        return lambda env, s: left(env, s) == right(env, s)
    raise TypeError(f"not an open formula: {g!r}")


def compile_program(k) -> Callable:
    """A closure ``run(env, ctx)`` that mutates ``env`` in place."""
    return _cached(k, _build_program)


def _build_program(k):
    if isinstance(k, Assign):
        name, term = k.var, compile_term(k.term)

        def assign(env, ctx):
            ctx.tick()
            env[name] = term(env, ctx.s)
            if ctx.trace is not None:
                ctx.snap(env)
        return assign
    if isinstance(k, BoolAssign):
        key, cond = "?" + k.var, compile_open(k.cond)

        def bassign(env, ctx):
            ctx.tick()
            env[key] = cond(env, ctx.s)
            if ctx.trace is not None:
                ctx.snap(env)
        return bassign
    if isinstance(k, Skip):
        return lambda env, ctx: None
    if isinstance(k, Seq):
        first, second = compile_program(k.first), compile_program(k.second)

        def seq(env, ctx):
            first(env, ctx)
            second(env, ctx)
        return seq
    if isinstance(k, If):
        cond = compile_open(k.cond)
        then, orelse = compile_program(k.then), compile_program(k.orelse)

        def if_(env, ctx):
            ctx.tick()
            if cond(env, ctx.s):
                then(env, ctx)
            else:
                orelse(env, ctx)
        return if_
    if isinstance(k, While):
        cond, body = compile_open(k.cond), compile_program(k.body)
        loop = k

        def while_(env, ctx):
            s = ctx.s
            while True:
                head = env.copy() if ctx.track_loops else None
                try:
                    ctx.tick()
                    if not cond(env, s):
                        return
                    body(env, ctx)
                except _Exhausted as exc:
                    if ctx.track_loops:
                        exc.loops.append((loop, head))
                    raise
        return while_
    raise TypeError(f"not a program: {k!r}")


def eval_term(t, s: Structure, v: Valuation):
    """Homomorphic value of ``t`` under ``v``."""
    return compile_term(t)(v.env(), s)


def eval_open(g, s: Structure, v: Valuation) -> bool:
    return compile_open(g)(v.env(), s)


# ---------------------------------------------------------------- running

def trace_columns(k, post=None) -> tuple:
    cols = list(ordered_assigned_vars(k))
    if post is not None:
        for name in ordered_free_vars(post):
            if name not in cols:
                cols.append(name)
    return tuple(cols)


def _exec(k, s, env: dict, budget: int, columns=None, track_loops=False):
    """Run ``k`` on ``env`` (mutated).  Returns ``(ctx, exhausted_exc | None)``."""
    ctx = _Ctx(s, budget, columns, track_loops)
    if columns is not None:
        ctx.snap(env)
    try:
        compile_program(k)(env, ctx)
    except _Exhausted as exc:
        return ctx, exc
    return ctx, None


def run_program(k, s: Structure, v: Valuation, cfg: EvalConfig = EvalConfig(),
                post=None) -> Halted | BudgetExhausted | RunError:
    """Execute ``k`` from ``v`` within ``cfg.step_budget`` steps."""
    columns = trace_columns(k, post) if cfg.trace_on else None
    env = v.env()
    try:
        ctx, exc = _exec(k, s, env, cfg.step_budget, columns, track_loops=True)
    except (UnsupportedOperation, UnboundVariable) as err:
        return RunError(f"{type(err).__name__}: {err}")
    trace = ()
    if columns is not None:
        trace = tuple(Valuation.from_env(dict(zip(columns, row)), columns)
                      for row in ctx.trace)
    if exc is not None:
        return BudgetExhausted(ctx.steps, trace, columns or (), tuple(exc.loops))
    return Halted(Valuation.from_env(env), ctx.steps, trace, columns or ())


def format_trace(outcome, s: Structure) -> str:
    """``step | n | m`` table of trace snapshots; unbound cells print ``-``."""
    cols = outcome.columns
    lines = [" | ".join(("step",) + tuple(cols))]
    for i, snap in enumerate(outcome.trace):
        cells = []
        for c in cols:
            if c in snap.nums:
                cells.append(s.format(snap.nums[c]))
            else:
                cells.append("-")
        lines.append(" | ".join([str(i)] + cells))
    return "\n".join(lines)


def format_outcome(outcome, s: Structure) -> str:
    if isinstance(outcome, Halted):
        head = f"Halted after {outcome.steps} steps: {outcome.final.format(s)}"
    elif isinstance(outcome, BudgetExhausted):
        head = f"BudgetExhausted after {outcome.steps} steps"
    else:
        return f"RunError: {outcome.reason}"
    if outcome.columns:
        return head + "\n" + format_trace(outcome, s)
    return head


# ------------------------------------------------------------ certificates

@dataclass(frozen=True)
class Certified:
    certificate: str = ""


@dataclass(frozen=True)
class Failed:
    step: int
    reason: str


@dataclass(frozen=True)
class LoopInvariant:
    """A structure-level invariant of one loop that keeps its guard true.

    ``predicate`` receives the structure and the values of ``variables``.
    ``inductive`` is the plugin's claim that the body preserves the
    invariant; the checker re-validates it over an enumerated sample.
    """
    name: str
    loop: While
    variables: tuple
    predicate: Callable = field(compare=False)
    inductive: bool = True

    def applies(self, loop) -> bool:
        return loop == self.loop

    def holds(self, s: Structure, env: Mapping) -> bool:
        try:
            return bool(self.predicate(s, *(env[x] for x in self.variables)))
        except KeyError:
            return False


class StateCycle:
    """Generic certificate: the loop revisits a state it has been in before."""
    name = "state-cycle"

    def applies(self, loop) -> bool:
        return isinstance(loop, While)

    def check(self, loop, s: Structure, env: Mapping, cfg: EvalConfig):
        names = [*program_vars(loop), *("?" + b for b in sorted(program_bool_vars(loop)))]
        cond, body = compile_open(loop.cond), compile_program(loop.body)
        env = dict(env)
        seen = set()
        ctx = _Ctx(s, cfg.step_budget)
        try:
            for step in itertools.count():
                state = tuple(s.key(env[n]) if not n.startswith("?") else env[n]
                              for n in names if n in env)
                if state in seen:
                    return Certified(self.name)
                seen.add(state)
                if not cond(env, s):
                    return Failed(step, "loop exits")
                body(env, ctx)
        except _Exhausted:
            return Failed(ctx.steps, "no repeated state within budget")
        except (UnsupportedOperation, UnboundVariable) as err:
            return Failed(0, str(err))


STATE_CYCLE = StateCycle()


def check_divergence_certificate(k, s: Structure, v: Valuation | Mapping,
                                 inv: LoopInvariant, n_steps: int,
                                 cfg: EvalConfig = EvalConfig()) -> Certified | Failed:
    """Check that ``inv`` proves ``k`` (a while loop) runs forever from ``v``."""
    if not isinstance(k, While):
        raise TypeError("divergence certificates apply to while loops only")
    env = v.env() if isinstance(v, Valuation) else dict(v)
    cond, body = compile_open(k.cond), compile_program(k.body)
    for step in range(n_steps):
        if not inv.holds(s, env):
            return Failed(step, "invariant does not hold")
        if not cond(env, s):
            return Failed(step, "invariant holds but the guard is false")
        ctx = _Ctx(s, cfg.step_budget)
        try:
            body(env, ctx)
        except _Exhausted:
            return Failed(step, "loop body did not halt")
    if not inv.holds(s, env):
        return Failed(n_steps, "invariant does not hold")
    if not inv.inductive:
        return Failed(n_steps, "invariant is not declared inductive")
    bad = _inductive_counterexample(inv, s, cfg.carrier_bound, cfg.step_budget)
    if bad is not None:
        return Failed(n_steps, f"not inductive at {bad}")
    return Certified(inv.name)


@lru_cache(maxsize=256)
def _inductive_counterexample(inv: LoopInvariant, s: Structure, bound: int, budget: int):
    cond, body = compile_open(inv.loop.cond), compile_program(inv.loop.body)
    sample = s.enumerate(bound)
    for values in itertools.product(sample, repeat=len(inv.variables)):
        env = dict(zip(inv.variables, values))
        if not inv.holds(s, env):
            continue
        if not cond(env, s):
            return ", ".join(f"{x}={s.format(e)}" for x, e in zip(inv.variables, values))
        try:
            body(env, _Ctx(s, budget))
        except _Exhausted:
            return "body did not halt"
        if not inv.holds(s, env):
            return ", ".join(f"{x}={s.format(e)}" for x, e in zip(inv.variables, values))
    return None


def _certificates(s: Structure, cfg: EvalConfig) -> tuple:
    if cfg.certificates is None:
        return tuple(s.certificates()) + (STATE_CYCLE,)
    return cfg.certificates


def certify_divergence(active_loops: Sequence, s: Structure, cfg: EvalConfig) -> Optional[str]:
    """Name of a certificate proving some interrupted loop diverges, if any."""
    certs = _certificates(s, cfg)
    if not certs:
        return None
    for loop, head in active_loops:
        if head is None:
            continue
        for cert in certs:
            if not cert.applies(loop):
                continue
            if isinstance(cert, LoopInvariant):
                result = check_divergence_certificate(loop, s, head, cert, cfg.iter_bound, cfg)
            else:
                result = cert.check(loop, s, head, cfg)
            if isinstance(result, Certified):
                return cert.name
    return None


# -------------------------------------------------------------- evaluation

@dataclass(frozen=True)
class Verdict:
    value: TruthValue
    witness: Optional[str] = None


class _Evaluator:
    def __init__(self, s: Structure, cfg: EvalConfig):
        self.s = s
        self.cfg = cfg
        self.track = bool(_certificates(s, cfg))
        self.witness: Optional[str] = None

    def run(self, k, env: dict):
        """Run ``k`` on a copy of env: (final env | None, certified-divergent)."""
        env = env.copy()
        ctx, exc = _exec(k, self.s, env, self.cfg.step_budget, track_loops=self.track)
        if exc is None:
            return env, False
        return None, certify_divergence(exc.loops, self.s, self.cfg) is not None

    def state_key(self, env: dict):
        s = self.s
        return tuple(sorted((n, s.key(x) if not n.startswith("?") else x)
                            for n, x in env.items()))

    def ev(self, f, env: dict, top: bool = False) -> TruthValue:
        s = self.s
        if isinstance(f, (Eq, Less, TrueConst, FalseConst, BoolVar)):
            return TruthValue.of(compile_open(f)(env, s))
        if isinstance(f, Not):
            return k_not(self.ev(f.arg, env))
        if isinstance(f, And):
            a = self.ev(f.left, env)
            return F if a is F else k_and(a, self.ev(f.right, env))
        if isinstance(f, Or):
            a = self.ev(f.left, env)
            return T if a is T else k_or(a, self.ev(f.right, env))
        if isinstance(f, Implies):
            a = self.ev(f.left, env)
            return T if a is F else k_implies(a, self.ev(f.right, env))
        if isinstance(f, Iff):
            return k_iff(self.ev(f.left, env), self.ev(f.right, env))
        if isinstance(f, Box):
            out, diverges = self.run(f.prog, env)
            if out is None:
                return F if diverges else U
            return self.ev(f.body, out)
        if isinstance(f, (IterUnion, IterInter)):
            return self.iteration(f, env, top)
        if isinstance(f, (Forall, Exists)):
            return self.quantifier(f, env, top)
        raise TypeError(f"not a formula: {f!r}")

    def iteration(self, f, env: dict, top: bool) -> TruthValue:
        # U[K]a is the l.u.b. of K^i a over i; I[K]a is the g.l.b.
        union = isinstance(f, IterUnion)
        decisive = T if union else F
        unknown = False
        seen = set()
        state = env
        for i in range(self.cfg.iter_bound + 1):
            value = self.ev(f.body, state)
            if value is decisive:
                if top:
                    self.witness = f"i={i}"
                return decisive
            unknown |= value is U
            key = self.state_key(state)
            if key in seen:
                # the sequence of states is periodic from here on
                return U if unknown else k_not(decisive)
            seen.add(key)
            state, diverges = self.run(f.prog, state)
            if state is None:
                if not diverges:
                    return U
                # K^j a is false for every later j
                if union:
                    return U if unknown else F
                if top:
                    self.witness = f"i={i + 1}"
                return F
        return U

    def quantifier(self, f, env: dict, top: bool) -> TruthValue:
        universal = isinstance(f, Forall)
        decisive = F if universal else T
        sample = self.s.enumerate(self.cfg.carrier_bound)
        unknown = False
        env = env.copy()
        for e in sample:
            env[f.var] = e
            value = self.ev(f.body, env)
            if value is decisive:
                if top:
                    self.witness = f"{f.var}={self.s.format(e)}"
                return decisive
            unknown |= value is U
        if unknown or not self.s.is_exhaustive(self.cfg.carrier_bound):
            return U
        return k_not(decisive)


def evaluate(f, s: Structure, v: Valuation, cfg: EvalConfig = EvalConfig()) -> Verdict:
    """Three-valued verdict plus, for a top-level quantifier, its witness."""
    ev = _Evaluator(s, cfg)
    value = ev.ev(f, v.env(), top=True)
    return Verdict(value, ev.witness)


def eval_formula(f, s: Structure, v: Valuation, cfg: EvalConfig = EvalConfig()) -> TruthValue:
    return _Evaluator(s, cfg).ev(f, v.env())


def least_union_witness(f: IterUnion, s: Structure, v: Valuation,
                        cfg: EvalConfig = EvalConfig()) -> Optional[int]:
    """Least ``i`` with ``K^i a`` true, if found within the bounds."""
    verdict = evaluate(f, s, v, cfg)
    if verdict.value is T and verdict.witness:
        return int(verdict.witness.split("=")[1])
    return None


# ------------------------------------------------------ bounded validation

@dataclass(frozen=True)
class ValidUpToBound:
    checked: int


@dataclass(frozen=True)
class Refuted:
    valuation: Valuation
    others: tuple = ()


@dataclass(frozen=True)
class Inconclusive:
    unknown_at: Valuation
    checked: int


def sweep_variables(f) -> tuple[Sequence[str], object]:
    """Leading universally quantified variables plus remaining free ones."""
    names: list[str] = []
    body = f
    while isinstance(body, Forall):
        if body.var not in names:
            names.append(body.var)
        body = body.body
    for name in ordered_free_vars(body):
        if name not in names:
            names.append(name)
    return names, body


def bounded_validate(f, s: Structure, cfg: EvalConfig = EvalConfig(), var_bound: int = 4,
                     collect_all: bool = False):
    """Evaluate ``f`` at every valuation of its variables drawn from ``enumerate(var_bound)``."""
    if var_bound < 1:
        raise ValueError("var_bound must be at least 1")
    names, body = sweep_variables(f)
    bools = free_bool_vars(body)
    sample = s.enumerate(var_bound)
    ev = _Evaluator(s, cfg)
    refuted: list[Valuation] = []
    unknown_at = None
    checked = 0
    for values in itertools.product(sample, repeat=len(names)):
        for flags in itertools.product((False, True), repeat=len(bools)):
            env = dict(zip(names, values))
            for b, flag in zip(bools, flags):
                env["?" + b] = flag
            checked += 1
            value = ev.ev(body, env)
            if value is F:
                refuted.append(Valuation(dict(zip(names, values)), dict(zip(bools, flags))))
                if not collect_all:
                    return Refuted(refuted[0])
            elif value is U and unknown_at is None:
                unknown_at = Valuation(dict(zip(names, values)), dict(zip(bools, flags)))
    if refuted:
        return Refuted(refuted[0], tuple(refuted[1:]))
    if unknown_at is not None:
        return Inconclusive(unknown_at, checked)
    return ValidUpToBound(checked)


def format_validation(result, s: Structure) -> str:
    if isinstance(result, ValidUpToBound):
        return f"ValidUpToBound ({result.checked} valuations)"
    if isinstance(result, Refuted):
        return f"Refuted at {result.valuation.format(s)}"
    return f"Inconclusive (unknown at {result.unknown_at.format(s)})"
