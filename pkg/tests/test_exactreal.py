from __future__ import annotations

import math
import random
from fractions import Fraction
from math import isqrt

import pytest

from propcf.exactreal import (
    GOLDEN,
    IncompatibleSurds,
    Interval,
    ParseError,
    PrecisionExhausted,
    Rational,
    Surd,
    exact_to_interval,
    floor_exact,
    frac_part,
    get_default_precision,
    parse_exact,
    set_default_precision,
    sqrt_exact,
    to_text,
)


def _approx(v) -> float:
    return float(v)


# ---------------------------------------------------------------------------
# canonical form


def test_surd_normalization_is_canonical():
    # (2 + 2*sqrt(20))/4 = (2 + 4*sqrt(5))/4 = (1 + 2*sqrt(5))/2
    s = Surd(2, 2, 20, 4)
    assert (s.p, s.q, s.d, s.r) == (1, 2, 5, 2)
    # negative denominator flips all signs
    t = Surd(1, -1, 5, -2)
    assert (t.p, t.q, t.d, t.r) == (-1, 1, 5, 2)
    # building again from the canonical data is the identity
    assert Surd(s.p, s.q, s.d, s.r) == s


def test_surd_demotes_to_rational():
    assert Surd(3, 0, 7, 2) == Rational(3, 2)
    assert isinstance(Surd(3, 0, 7, 2), Rational)
    # perfect-square radicand collapses: (1 + 2*sqrt(9))/4 = 7/4
    assert Surd(1, 2, 9, 4) == Rational(7, 4)


def test_rational_lowest_terms():
    r = Rational(-6, -8)
    assert (r.num, r.den) == (3, 4)
    r = Rational(6, -8)
    assert (r.num, r.den) == (-3, 4)
    with pytest.raises(ZeroDivisionError):
        Rational(1, 0)


def test_sqrt_exact_extracts_square_part():
    assert sqrt_exact(8) == Surd(0, 2, 2, 1)
    assert sqrt_exact(9) == Rational(3)
    assert sqrt_exact(Fraction(1, 4)) == Rational(1, 2)
    # sqrt(5/9) = sqrt(45)/9 = 3 sqrt(5)/9 = sqrt(5)/3
    assert sqrt_exact(Fraction(5, 9)) == Surd(0, 1, 5, 3)


# ---------------------------------------------------------------------------
# arithmetic against hand-rationalized values


def test_golden_arithmetic():
    g = GOLDEN
    assert g * g == Surd(3, -1, 5, 2)          # g^2 = (3 - sqrt5)/2
    assert 1 / g == Surd(1, 1, 5, 2)           # 1/g = (1 + sqrt5)/2 = g + 1
    assert 1 / g == g + 1
    assert g * g + g == Rational(1)            # the defining identity
    conj = Surd(-1, -1, 5, 2)
    assert g * conj == Rational(-1)


def test_reciprocal_of_sqrt5_minus_2():
    x = sqrt_exact(5) - 2
    y = Rational(2) / x
    assert y == Surd(4, 2, 5, 1)               # 2/(sqrt5-2) = 4 + 2 sqrt5
    assert floor_exact(y) == 8
    assert frac_part(y) == Surd(-4, 2, 5, 1)   # 2 sqrt5 - 4
    assert abs(_approx(y) - 8.47213595499958) < 1e-12


def test_cross_field_arithmetic_raises():
    with pytest.raises(IncompatibleSurds):
        sqrt_exact(2) + sqrt_exact(3)
    with pytest.raises(IncompatibleSurds):
        sqrt_exact(2) * sqrt_exact(5)
    # but ordering still works, through interval refinement
    assert sqrt_exact(2) - 1 < GOLDEN < sqrt_exact(3) - 1


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Rational(1) / Rational(0)
    with pytest.raises(ZeroDivisionError):
        Rational(1) / (sqrt_exact(5) - sqrt_exact(5))


# ---------------------------------------------------------------------------
# floor / frac


def test_floor_small_cases():
    assert floor_exact(sqrt_exact(2)) == 1
    assert floor_exact(-sqrt_exact(2)) == -2
    assert floor_exact(Surd(1, 1, 5, 2)) == 1     # (1+sqrt5)/2
    assert floor_exact(Rational(-7, 2)) == -4
    assert floor_exact(Rational(6, 3)) == 2


def test_floor_frac_recombine_randomized():
    rng = random.Random(20260822)
    for _ in range(300):
        d = rng.choice([2, 3, 5, 6, 7, 10, 11, 13])
        v = Surd(rng.randint(-50, 50), rng.randint(-20, 20), d, rng.randint(1, 9))
        if isinstance(v, Rational):
            continue
        n = floor_exact(v)
        f = frac_part(v)
        assert v == f + n
        assert Rational(0) <= f
        assert f < Rational(1)
        # independent dyadic oracle for the floor: isqrt enclosure at 64 bits
        s = isqrt(v.q * v.q * v.d << 128)
        lo = Fraction(v.p * (1 << 64) + (s if v.q > 0 else -s - 1), v.r << 64)
        hi = Fraction(v.p * (1 << 64) + (s + 1 if v.q > 0 else -s), v.r << 64)
        assert math.floor(lo) == math.floor(hi) == n


def test_comparison_total_order_matches_floats():
    rng = random.Random(7)
    vals = [GOLDEN, Rational(1, 2), sqrt_exact(2) - 1, Rational(2, 3)]
    for _ in range(40):
        d = rng.choice([2, 3, 5, 7])
        vals.append(Surd(rng.randint(-8, 8), rng.randint(-5, 5), d, rng.randint(1, 6)))
    exact_sorted = sorted(vals)
    float_sorted = sorted(vals, key=_approx)
    assert [round(_approx(v), 9) for v in exact_sorted] == \
        [round(_approx(v), 9) for v in float_sorted]


# ---------------------------------------------------------------------------
# intervals


def test_interval_width_contract():
    iv = exact_to_interval(GOLDEN)
    for bits in (16, 50, 200, 1000):
        c = iv.refined(bits)
        assert c.width() <= Fraction(1, 2**bits)
        assert c.encloses(GOLDEN)


def test_interval_refinement_is_pure():
    iv = Interval(lambda b: (Fraction(1, 3) - Fraction(1, 2**b), Fraction(1, 3)),
                  budget=512, bits=16)
    before = (iv.bits, iv.lo, iv.hi)
    iv.refined(128)
    assert (iv.bits, iv.lo, iv.hi) == before


def test_composed_interval_encloses_exact_value():
    rng = random.Random(99)
    for _ in range(25):
        a = Surd(rng.randint(-5, 5), rng.randint(1, 4), 5, rng.randint(1, 5))
        b = Surd(rng.randint(-5, 5), rng.randint(1, 4), 5, rng.randint(1, 5))
        exact = (a * b + a) - b
        composed = (exact_to_interval(a) * exact_to_interval(b)
                    + exact_to_interval(a)) - exact_to_interval(b)
        c = composed.refined(200)
        assert c.width() <= Fraction(1, 2**200)
        assert c.encloses(exact)


def test_interval_budget_exhaustion():
    iv = Interval(lambda b: (Fraction(1) - Fraction(1, 2**b),
                             Fraction(1) + Fraction(1, 2**b)), budget=256)
    with pytest.raises(PrecisionExhausted):
        floor_exact(iv)   # endpoints straddle the integer at every precision
    with pytest.raises(PrecisionExhausted):
        iv.refined(2048)


def test_interval_division_guards_zero():
    zero = exact_to_interval(Rational(0))
    with pytest.raises(ZeroDivisionError):
        Rational(1) / zero
    near = exact_to_interval(Rational(1, 10**30))
    assert floor_exact(1 / near) == 10**30


def test_default_precision_round_trip():
    old = get_default_precision()
    try:
        set_default_precision(128)
        iv = Interval(lambda b: (Fraction(0), Fraction(1, 2**b)))
        assert iv.budget == 128
        with pytest.raises(ValueError):
            set_default_precision(16)
    finally:
        set_default_precision(old)


# ---------------------------------------------------------------------------
# parsing and printing


def test_parse_basic_forms():
    assert parse_exact("5/6") == Rational(5, 6)
    assert parse_exact("-3") == Rational(-3)
    assert parse_exact("0.125") == Rational(1, 8)
    assert parse_exact("golden") == GOLDEN
    assert parse_exact("(sqrt5-1)/2") == GOLDEN
    assert parse_exact("(sqrt(5)-1)/2") == GOLDEN
    assert parse_exact(" ( 3 - sqrt(17) ) / 2 ") == Surd(3, -1, 17, 2)
    assert parse_exact("2*sqrt(7)/3") == Surd(0, 2, 7, 3)
    assert parse_exact("sqrt2-1") == Surd(-1, 1, 2, 1)


def test_parse_round_trip_exact():
    rng = random.Random(4)
    samples = [Rational(5, 6), Rational(-12), GOLDEN, Surd(4, 2, 5, 1),
               Surd(0, -1, 2, 3), Surd(-3, 7, 13, 11)]
    for _ in range(60):
        d = rng.choice([2, 3, 5, 7, 11, 13])
        samples.append(Surd(rng.randint(-99, 99), rng.randint(-99, 99) or 1,
                            d, rng.randint(1, 99)))
    for v in samples:
        if isinstance(v, Rational) or isinstance(v, Surd):
            assert parse_exact(to_text(v)) == v


def test_parse_errors_carry_position():
    for text, pos in [("2+", 2), ("sqrt(", 5), ("5/6)", 3), ("foo", 0)]:
        with pytest.raises(ParseError) as err:
            parse_exact(text)
        assert err.value.pos == pos
    with pytest.raises(ParseError):
        parse_exact("")
    with pytest.raises(ParseError):
        parse_exact("1 @ 2")


def test_equality_and_hashing():
    assert Rational(1, 2) == Fraction(1, 2)
    assert Rational(3) == 3
    assert hash(Rational(3)) == hash(3)
    assert hash(Rational(1, 2)) == hash(Fraction(1, 2))
    assert GOLDEN != Rational(1, 2)
    assert sqrt_exact(2) != sqrt_exact(3)
    assert len({GOLDEN, Surd(-1, 1, 5, 2), 1 / GOLDEN - 1}) == 1
