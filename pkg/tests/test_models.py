from fractions import Fraction
import itertools

import pytest
from hypothesis import given, strategies as st

from alwb.models import (
    NSN, ConstructionException, NSNValue, NSN_ZERO, StdNat, nsn_add, nsn_enumerate,
    nsn_equal, nsn_less, nsn_less_literal, nsn_new, nsn_pred, nsn_s, nsn_subtract, structure,
)


def pair(a):
    """Oracle view of an element: <integer part, fraction>."""
    return a.intpart, Fraction(a.nomprt, a.denom)


def oracle_less(a, b):
    # order type w + (w* + w)·eta: standard elements first, then by fraction
    (i, x), (j, y) = pair(a), pair(b)
    return (x != 0, x, i) < (y != 0, y, j)


SAMPLE = nsn_enumerate(3)
triples = st.sampled_from(nsn_enumerate(4))


def test_new_zero():
    assert nsn_new(0, 0, 1) == NSN_ZERO


def test_new_accepts_negative_fractional():
    assert nsn_new(-9, 1, 2).intpart == -9


@pytest.mark.parametrize("args", [(-1, 0, 1), (0, 1, 0), (0, -1, 2), (3, 1, -2)])
def test_new_guard(args):
    with pytest.raises(ConstructionException):
        nsn_new(*args)


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_guard_exactly(i, n, d):
    bad = (n == 0 and i < 0) or n * d < 0 or d == 0
    if bad:
        with pytest.raises(ConstructionException):
            NSNValue(i, n, d)
    else:
        NSNValue(i, n, d)


def test_add_examples():
    assert nsn_add(NSNValue(12, 0, 1), NSNValue(3, 1, 2)) == NSNValue(15, 1, 2)
    assert nsn_add(NSNValue(1, 1, 2), NSNValue(1, 1, 2)) == NSNValue(2, 4, 4)
    assert nsn_equal(NSNValue(2, 4, 4), NSNValue(2, 1, 1))


@given(triples, triples)
def test_add_matches_pair_oracle(a, b):
    (i, x), (j, y) = pair(a), pair(b)
    assert pair(nsn_add(a, b)) == (i + j, x + y)


@given(triples)
def test_add_zero(a):
    assert nsn_equal(nsn_add(a, NSN_ZERO), a)


def test_subtract_examples():
    assert nsn_subtract(NSNValue(15, 1, 2), NSNValue(12, 0, 1)) == NSNValue(3, 1, 2)
    assert nsn_subtract(NSNValue(3, 1, 2), NSNValue(12, 0, 1)) == NSNValue(-9, 1, 2)
    assert nsn_subtract(NSNValue(2, 0, 1), NSNValue(5, 0, 1)) == NSNValue(0, 0, 1)


def test_equal_examples():
    assert nsn_equal(NSNValue(15, 0, 2), NSNValue(15, 0, 1))
    assert not nsn_equal(NSNValue(12, 0, 1), NSNValue(15, 1, 2))


def test_less_examples():
    assert nsn_less(NSNValue(12, 0, 1), NSNValue(15, 1, 2))
    assert not nsn_less(NSNValue(3, 1, 2), NSNValue(12, 0, 1))
    assert not nsn_less(NSNValue(5, 1, 2), NSNValue(5, 1, 3))


@given(triples, triples)
def test_less_matches_order_oracle(a, b):
    assert nsn_less(a, b) == oracle_less(a, b)


def test_literal_less_breaks_subtraction():
    # integer parts first: <5,1/4> is not below <0,1/2>, so monus goes negative
    a, b = NSNValue(5, 1, 4), NSNValue(0, 1, 2)
    assert not nsn_less_literal(a, b)
    with pytest.raises(ConstructionException):
        NSNValue(a.intpart - b.intpart, a.nomprt * b.denom - a.denom * b.nomprt, a.denom * b.denom)
    assert nsn_subtract(a, b) == NSN_ZERO


def test_literal_and_fixed_agree_when_a_side_is_standard():
    for a, b in itertools.product(SAMPLE, repeat=2):
        if a.nomprt == 0 or b.nomprt == 0:
            assert nsn_less(a, b) == nsn_less_literal(a, b)


def test_s_and_pred():
    assert nsn_s(NSNValue(0, 0, 1)) == NSNValue(1, 0, 1)
    assert nsn_pred(NSNValue(0, 0, 1)) == NSNValue(0, 0, 1)
    assert nsn_pred(NSNValue(-9, 1, 2)) == NSNValue(-10, 1, 2)


def test_less_is_strict_total_order_on_sample():
    for a, b in itertools.product(SAMPLE, repeat=2):
        assert sum([nsn_less(a, b), nsn_less(b, a), nsn_equal(a, b)]) == 1
    for a, b, c in itertools.product(SAMPLE[::3], repeat=3):
        if nsn_less(a, b) and nsn_less(b, c):
            assert nsn_less(a, c)


def test_equal_is_congruence():
    classes = {}
    for i in range(-2, 3):
        for n in range(0, 3):
            for d in range(1, 4):
                if n == 0 and i < 0:
                    continue
                classes.setdefault(pair(NSNValue(i, n, d)), []).append(NSNValue(i, n, d))
    groups = [g for g in classes.values() if len(g) > 1][:6]
    probes = SAMPLE[::4]
    for group in groups:
        for a, a2 in itertools.combinations(group, 2):
            assert nsn_equal(nsn_s(a), nsn_s(a2))
            assert nsn_equal(nsn_pred(a), nsn_pred(a2))
            for b in probes:
                assert nsn_equal(nsn_add(a, b), nsn_add(a2, b))
                assert nsn_equal(nsn_subtract(a, b), nsn_subtract(a2, b))
                assert nsn_equal(nsn_subtract(b, a), nsn_subtract(b, a2))
                assert nsn_less(a, b) == nsn_less(a2, b)
                assert nsn_less(b, a) == nsn_less(b, a2)


def test_subtract_closed_on_sample():
    for a, b in itertools.product(SAMPLE, repeat=2):
        nsn_subtract(a, b)


def test_divergence_invariant_exhaustive():
    sample = nsn_enumerate(4)
    for n, m in itertools.product(sample, repeat=2):
        if n.nomprt == 0 and n.intpart > 0 and m.nomprt != 0:
            assert nsn_less(n, m)
            assert not nsn_equal(n, m)
            assert nsn_subtract(m, n).frac == m.frac


def test_enumerate_one():
    sample = nsn_enumerate(1)
    for t in [(0, 0, 1), (1, 0, 1), (0, 1, 1), (-1, 1, 1), (1, 1, 1)]:
        assert any(nsn_equal(NSNValue(*t), e) for e in sample)
    assert all(not (e.nomprt == 0 and e.intpart < 0) for e in sample)


def test_enumerate_dedup_and_order():
    sample = nsn_enumerate(3)
    keys = [pair(e) for e in sample]
    assert len(set(keys)) == len(keys)
    assert keys == sorted(keys)


def test_enumerate_guard():
    with pytest.raises(ValueError):
        nsn_enumerate(0)


def test_stdnat():
    s = StdNat()
    assert s.enumerate(3) == [0, 1, 2, 3]
    assert not s.is_exhaustive(3)
    assert s.pred(0) == 0 and s.monus(2, 5) == 0
    assert not NSN().is_exhaustive(3)


@given(st.integers(0, 50), st.integers(0, 50))
def test_stdnat_monus_law(a, b):
    s = StdNat()
    if a >= b:
        assert s.monus(a, b) == a - b
    else:
        assert s.monus(a, b) == 0


def test_formats_and_parsing():
    n = NSN()
    assert str(NSNValue(12, 0, 1)) == "NSN(12,0,1)"
    assert n.parse_value("NSN(-9, 1, 2)") == NSNValue(-9, 1, 2)
    with pytest.raises(ValueError):
        n.parse_value("12")
    with pytest.raises(ValueError):
        StdNat().parse_value("-1")


def test_structure_registry():
    assert isinstance(structure("nsn"), NSN)
    with pytest.raises(ValueError):
        structure("reals")


def test_big_integers_do_not_overflow():
    m = NSNValue(15, 1, 2)
    n = NSNValue(10**30, 0, 1)
    assert nsn_subtract(m, n) == NSNValue(15 - 10**30, 1, 2)
