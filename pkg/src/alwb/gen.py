"""Seeded random syntax trees for round-trip and semantic sampling."""
from __future__ import annotations

import os
import random

from .syntax import (
    Add, And, Assign, BoolAssign, BoolVar, Box, Eq, Exists, FalseConst, Forall, If,
    Iff, Implies, IterInter, IterUnion, Less, Monus, Mul, Not, Or, Pred, Seq, Skip,
    Succ, TrueConst, Var, While, Zero,
)

NAMES = ("x", "y", "z", "n", "m", "w")
BOOL_NAMES = ("q", "p")
SORTS = ("term", "open", "program", "formula")


def seed_from_env(default: int = 0) -> int:
    """Seed from ``ALWB_SEED`` when set."""
    text = os.environ.get("ALWB_SEED")
    return int(text) if text else default


class TreeGen:
    """Random trees of bounded depth; ``mul=False`` keeps programs cheap to run."""

    def __init__(self, rng: random.Random, mul: bool = True, names=NAMES, bools=BOOL_NAMES):
        self.rng = rng
        self.mul = mul
        self.names = names
        self.bools = bools

    def term(self, depth: int):
        r = self.rng
        if depth <= 1 or r.random() < 0.3:
            return Var(r.choice(self.names)) if r.random() < 0.75 else Zero()
        kind = r.randrange(5 if self.mul else 4)
        if kind == 0:
            return Succ(self.term(depth - 1))
        if kind == 1:
            return Pred(self.term(depth - 1))
        ctor = (Add, Monus, Add, Mul)[kind - 2 if kind < 4 else 3]
        return ctor(self.term(depth - 1), self.term(depth - 1))

    def open(self, depth: int):
        r = self.rng
        if depth <= 1 or r.random() < 0.3:
            kind = r.randrange(10)
            if kind < 4:
                return Eq(self.term(2), self.term(2))
            if kind < 8:
                return Less(self.term(2), self.term(2))
            if kind == 8:
                return BoolVar(r.choice(self.bools))
            return r.choice((TrueConst(), FalseConst()))
        kind = r.randrange(5)
        if kind == 0:
            return Not(self.open(depth - 1))
        ctor = (And, Or, Implies, Iff)[kind - 1]
        return ctor(self.open(depth - 1), self.open(depth - 1))

    def program(self, depth: int):
        r = self.rng
        if depth <= 1 or r.random() < 0.25:
            kind = r.randrange(8)
            if kind < 6:
                return Assign(r.choice(self.names), self.term(3))
            if kind == 6:
                return BoolAssign(r.choice(self.bools), self.open(2))
            return Skip()
        kind = r.randrange(4)
        if kind == 0:
            return Seq(self.program(depth - 1), self.program(depth - 1))
        if kind == 1:
            return If(self.open(2), self.program(depth - 1), self.program(depth - 1))
        if kind == 2:
            return If(self.open(2), self.program(depth - 1), Skip())
        return While(self.open(2), self.program(depth - 1))

    def formula(self, depth: int):
        r = self.rng
        if depth <= 1 or r.random() < 0.2:
            return self.open(2)
        kind = r.randrange(10)
        if kind == 0:
            return Not(self.formula(depth - 1))
        if kind <= 3:
            ctor = (And, Or, Implies, Iff)[r.randrange(4)]
            return ctor(self.formula(depth - 1), self.formula(depth - 1))
        if kind <= 5:
            return Box(self.program(depth - 1), self.formula(depth - 1))
        if kind == 6:
            return IterUnion(self.program(depth - 1), self.formula(depth - 1))
        if kind == 7:
            return IterInter(self.program(depth - 1), self.formula(depth - 1))
        ctor = Forall if kind == 8 else Exists
        return ctor(r.choice(self.names), self.formula(depth - 1))

    def tree(self, sort: str, depth: int):
        if sort not in SORTS:
            raise ValueError(f"unknown sort {sort!r}")
        return getattr(self, sort)(depth)


def generate(sort: str, count: int, seed: int | None = None, depth: int = 6, mul: bool = True) -> list:
    """``count`` trees of ``sort`` with depth at most ``depth``."""
    gen = TreeGen(random.Random(seed_from_env() if seed is None else seed), mul=mul)
    return [gen.tree(sort, depth) for _ in range(count)]
