"""Concrete structures: the standard naturals and the non-standard model NSN.

An NSN element is a triple ``(intpart, nomprt, denom)`` standing for the pair
``<intpart, nomprt/denom>``.  Triples are never normalized; equality is the
semantic ``nsn_equal`` (integer parts equal, fractions equal by
cross-multiplication).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .parser import parse
from .semantics import LoopInvariant, Structure, UnsupportedOperation


class ConstructionException(ValueError):
    """Raised by the NSN constructor guard."""


@dataclass(frozen=True)
class NSNValue:
    intpart: int
    nomprt: int
    denom: int

    def __post_init__(self):
        i, n, d = self.intpart, self.nomprt, self.denom
        if (n == 0 and i < 0) or n * d < 0 or d == 0:
            raise ConstructionException(f"invalid NSN triple ({i},{n},{d})")

    @property
    def frac(self) -> Fraction:
        return Fraction(self.nomprt, self.denom)

    @property
    def is_standard(self) -> bool:
        return self.nomprt == 0

    def __str__(self) -> str:
        return f"NSN({self.intpart},{self.nomprt},{self.denom})"


def nsn_new(i: int, n: int, d: int) -> NSNValue:
    return NSNValue(i, n, d)


NSN_ZERO = NSNValue(0, 0, 1)
NSN_ONE = NSNValue(1, 0, 1)


def nsn_add(a: NSNValue, b: NSNValue) -> NSNValue:
    return NSNValue(a.intpart + b.intpart,
                    a.nomprt * b.denom + a.denom * b.nomprt,
                    a.denom * b.denom)


def nsn_equal(a: NSNValue, b: NSNValue) -> bool:
    return a.intpart == b.intpart and a.nomprt * b.denom == a.denom * b.nomprt


def nsn_less(a: NSNValue, b: NSNValue) -> bool:
    """Order of type w + (w* + w)·eta: standard part first, then by fraction, then by integer part."""
    if a.nomprt == 0 and b.nomprt == 0:
        return a.intpart < b.intpart
    if a.nomprt == 0:
        return True
    if b.nomprt == 0:
        return False
    fa, fb = a.frac, b.frac
    if fa != fb:
        return fa < fb
    return a.intpart < b.intpart


def nsn_less_literal(a: NSNValue, b: NSNValue) -> bool:
    """Four-branch comparison that looks at integer parts before fractions.

    With two non-standard arguments this is not the order of the model:
    ``monus`` built on it can produce an invalid triple.  Kept for tests.
    """
    if a.nomprt == 0 and b.nomprt == 0:
        return a.intpart < b.intpart
    if a.nomprt == 0 and b.nomprt > 0:
        return True
    if a.nomprt > 0 and b.nomprt == 0:
        return False
    if a.intpart != b.intpart:
        return a.intpart < b.intpart
    return a.nomprt * b.denom < a.denom * b.nomprt


def nsn_subtract(a: NSNValue, b: NSNValue) -> NSNValue:
    if nsn_less(a, b):
        return NSN_ZERO
    return NSNValue(a.intpart - b.intpart,
                    a.nomprt * b.denom - a.denom * b.nomprt,
                    a.denom * b.denom)


def nsn_s(a: NSNValue) -> NSNValue:
    return NSNValue(a.intpart + 1, a.nomprt, a.denom)


def nsn_pred(a: NSNValue) -> NSNValue:
    return nsn_subtract(a, NSN_ONE)


def nsn_enumerate(bound: int) -> list[NSNValue]:
    """Guard-passing triples within ``bound``, one per ``nsn_equal`` class."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    reps: dict = {}
    for i in range(-bound, bound + 1):
        for n in range(0, bound + 1):
            for d in range(1, bound + 1):
                if n == 0 and i < 0:
                    continue
                key = (i, Fraction(n, d))
                if key not in reps:
                    reps[key] = NSNValue(i, n, d)
    return [reps[k] for k in sorted(reps, key=lambda k: (k[0], k[1]))]


_NSN_TEXT = re.compile(r"\s*NSN\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")


class StdNat(Structure):
    """The standard model of the natural numbers (Python ints)."""
    name = "standard"

    def zero(self):
        return 0

    def succ(self, a):
        return a + 1

    def pred(self, a):
        return a - 1 if a > 0 else 0

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def monus(self, a, b):
        return a - b if a > b else 0

    def equal(self, a, b):
        return a == b

    def less(self, a, b):
        return a < b

    def enumerate(self, bound):
        if bound < 1:
            raise ValueError("bound must be at least 1")
        return list(range(bound + 1))

    def parse_value(self, text):
        value = int(text.strip())
        if value < 0:
            raise ValueError(f"not a natural number: {text}")
        return value


class NSN(Structure):
    """The non-standard model of the theory of addition (no multiplication)."""
    name = "nsn"

    def zero(self):
        return NSN_ZERO

    def succ(self, a):
        return nsn_s(a)

    def pred(self, a):
        return nsn_pred(a)

    def add(self, a, b):
        return nsn_add(a, b)

    def mul(self, a, b):
        raise UnsupportedOperation("NSN has no multiplication")

    def monus(self, a, b):
        return nsn_subtract(a, b)

    def equal(self, a, b):
        return nsn_equal(a, b)

    def less(self, a, b):
        return nsn_less(a, b)

    def enumerate(self, bound):
        return nsn_enumerate(bound)

    def key(self, a):
        return (a.intpart, a.frac)

    def parse_value(self, text):
        m = _NSN_TEXT.match(text)
        if m is None:
            raise ValueError(f"expected NSN(i,n,d), got {text!r}")
        return NSNValue(*(int(g) for g in m.groups()))

    def certificates(self):
        return NSN_CERTIFICATES


def _standard_vs_fractional(s, std, other) -> bool:
    return std.nomprt == 0 and std.intpart > 0 and other.nomprt != 0


def _never_meets(s, std, other) -> bool:
    return std.nomprt == 0 and other.nomprt != 0


EUCLID_LOOP = parse("program", "while !(n = m) do if (m < n) then n := (n -. m) else m := (m -. n) fi od")
STANDARDIZATION_LOOP = parse("program", "while !(y = x) do y := s(y) od")

NSN_CERTIFICATES = (
    # n standard and positive, m with a positive fraction: m := m -. n forever
    LoopInvariant("nsn-fraction-mismatch", EUCLID_LOOP, ("n", "m"), _standard_vs_fractional),
    LoopInvariant("nsn-fraction-mismatch", EUCLID_LOOP, ("m", "n"), _standard_vs_fractional),
    # counting up from a standard y never reaches an x with a fraction
    LoopInvariant("nsn-fraction-mismatch", STANDARDIZATION_LOOP, ("y", "x"), _never_meets),
)

STRUCTURES = {"standard": StdNat, "nsn": NSN}


def structure(name: str) -> Structure:
    try:
        return STRUCTURES[name]()
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choose from {sorted(STRUCTURES)}") from None
