"""Joint expansion dynamics on the unit square and the scalar digit families.

The two-coordinate map reads a numerator digit a = floor(1/y) off the
second coordinate and a denominator digit b = floor(a/x) off the first,
then moves to (a/x - b, 1/y - a).  Each digit pair labels an open
rectangle (cylinder) of the square, and iterating the map expands x as a
proper continued fraction whose numerators are the classical digits of y.
Choosing y by formula instead gives the scalar families: y = golden mean
reproduces the classical expansion of x, y built from x's own remainders
gives the variable-numerator and chained-digit families, and a periodic y
gives the constant-numerator greedy expansion.

Orbits are exact whenever the seeds are exact; a float fallback exists
for long ergodic-statistics runs where digit-level fidelity is not needed.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactreal import (
    ExactReal,
    Interval,
    PrecisionExhausted,
    Rational,
    Surd,
    _coerce,
    floor_exact,
    is_zero,
    sqrt_exact,
)
from .pcf import ConvergentSeq, pcf_step


class ZeroCoordinate(ArithmeticError):
    """The map is undefined once a coordinate hits zero.

    A zero x with nonzero y means the first coordinate's expansion
    terminated and no further digit pair exists for this orbit.
    """

    def __init__(self, coordinate: str):
        self.coordinate = coordinate
        super().__init__(f"coordinate {coordinate} reached zero; "
                         "the joint step is undefined there")


class OnBoundary(ValueError):
    """The point sits on a cylinder gridline, in no open cell."""


def _exact(v) -> ExactReal:
    out = _coerce(v)
    if out is None:
        raise TypeError(f"expected an exact value, got {type(v).__name__}")
    return out


@dataclass(frozen=True)
class JointState:
    """A point of the closed unit square plus how many steps produced it."""

    x: ExactReal
    y: ExactReal
    step: int = 0

    def __post_init__(self):
        object.__setattr__(self, "x", _exact(self.x))
        object.__setattr__(self, "y", _exact(self.y))
        for name in ("x", "y"):
            v = getattr(self, name)
            if not isinstance(v, Interval) and not (0 <= v and v <= 1):
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.step < 0:
            raise ValueError("step count cannot be negative")


@dataclass(frozen=True)
class CylinderAddress:
    """Digit pair (a, b) naming the open cell
    x in (a/(b+1), a/b), y in (1/(a+1), 1/a)."""

    a: int
    b: int

    def __post_init__(self):
        if not (1 <= self.a <= self.b):
            raise ValueError("cylinder needs b >= a >= 1")

    @property
    def area(self) -> Fraction:
        return Fraction(1, (self.a + 1) * self.b * (self.b + 1))

    def x_interval(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.a, self.b + 1), Fraction(self.a, self.b)

    def y_interval(self) -> tuple[Fraction, Fraction]:
        return Fraction(1, self.a + 1), Fraction(1, self.a)


def joint_step(state: JointState) -> tuple[JointState, CylinderAddress]:
    """One application of the map; also reports which cylinder was used.

    The inverse branch x_prev = a/(b + x), y_prev = 1/(a + y) recovers the
    input exactly.
    """
    x, y = state.x, state.y
    x_dead = not isinstance(x, Interval) and is_zero(x)
    y_dead = not isinstance(y, Interval) and is_zero(y)
    if x_dead or y_dead:
        raise ZeroCoordinate("both" if x_dead and y_dead else
                             "x" if x_dead else "y")
    inv_y = 1 / y
    a = floor_exact(inv_y)
    ratio = a / x
    b = floor_exact(ratio)
    nxt = JointState(ratio - b, inv_y - a, state.step + 1)
    return nxt, CylinderAddress(a, b)


def cylinder_of(state: JointState) -> CylinderAddress:
    """The open cell containing the point; gridline points are rejected."""
    x, y = state.x, state.y
    if is_zero(x) or is_zero(y):
        raise OnBoundary("a zero coordinate is on the partition boundary")
    inv_y = 1 / y
    a = floor_exact(inv_y)
    if is_zero(inv_y - a):
        raise OnBoundary(f"y = 1/{a} lies on a horizontal gridline")
    ratio = a / x
    b = floor_exact(ratio)
    if is_zero(ratio - b):
        raise OnBoundary(f"x = {a}/{b} lies on a vertical gridline")
    return CylinderAddress(a, b)


# ---------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class OrbitRecord:
    """Digits, convergents and growth samples of one orbit.

    ``terminated_by`` is None for a full-length run, otherwise one of
    "x_zero", "y_zero", "both_zero", "precision".
    """

    digits: tuple[tuple[int, int], ...]
    convergents: ConvergentSeq | None
    growth_samples: tuple[tuple[int, float], ...]
    requested: int
    terminated_by: str | None = None

    @property
    def steps(self) -> int:
        return len(self.digits)

    @property
    def truncated(self) -> bool:
        return self.steps < self.requested


def orbit(x0, y0, n: int) -> OrbitRecord:
    """n exact joint steps from (x0, y0), or as many as exist.

    Rational seeds can genuinely terminate (a coordinate's expansion is
    finite); interval seeds can exhaust their precision budget.  Both end
    the record early with the reason noted, never an exception.
    """
    if n < 0:
        raise ValueError("orbit length cannot be negative")
    x, y = _exact(x0), _exact(y0)
    for name, v in (("x0", x), ("y0", y)):
        if not isinstance(v, Interval) and not (Rational(0) < v < Rational(1)):
            raise ValueError(f"{name} must lie in (0, 1)")
    digits: list[tuple[int, int]] = []
    terminated_by = None
    for _ in range(n):
        try:
            x_dead = not isinstance(x, Interval) and is_zero(x)
            y_dead = not isinstance(y, Interval) and is_zero(y)
            if x_dead or y_dead:
                terminated_by = ("both_zero" if x_dead and y_dead else
                                 "x_zero" if x_dead else "y_zero")
                break
            inv_y = 1 / y
            a = floor_exact(inv_y)
            ratio = a / x
            b = floor_exact(ratio)
            x, y = ratio - b, inv_y - a
        except PrecisionExhausted:
            terminated_by = "precision"
            break
        digits.append((a, b))
    cs = ConvergentSeq(digits)
    samples = tuple((k, math.log(cs.q(k)) / k) for k in range(1, len(digits) + 1))
    return OrbitRecord(tuple(digits), cs, samples, n, terminated_by)


def float_orbit(x0: float, y0: float, n: int,
                track_convergents: bool = False) -> OrbitRecord:
    """Plain floating-point orbit for long statistical runs.

    Digits eventually decouple from the exact orbit of the same seed
    (floats forget), which is fine for frequency and growth statistics.
    Growth samples come from the denominator ratio recurrence
    r_k = b_k + a_k/r_{k-1}, so no big integers are built unless
    ``track_convergents`` asks for them.
    """
    if n < 0:
        raise ValueError("orbit length cannot be negative")
    x, y = float(x0), float(y0)
    if not (0.0 < x < 1.0 and 0.0 < y < 1.0):
        raise ValueError("seeds must lie in (0, 1)")
    digits: list[tuple[int, int]] = []
    samples: list[tuple[int, float]] = []
    terminated_by = None
    log_q = 0.0
    ratio_prev = math.inf  # q_0/q_{-1}
    for k in range(1, n + 1):
        if x == 0.0 or y == 0.0:
            terminated_by = ("both_zero" if x == 0.0 and y == 0.0 else
                             "x_zero" if x == 0.0 else "y_zero")
            break
        a = math.floor(1.0 / y)
        b = math.floor(a / x)
        x = a / x - b
        y = 1.0 / y - a
        digits.append((a, b))
        ratio = b + (a / ratio_prev if ratio_prev != math.inf else 0.0)
        log_q += math.log(ratio)
        samples.append((k, log_q / k))
        ratio_prev = ratio
    cs = ConvergentSeq(digits) if track_convergents else None
    return OrbitRecord(tuple(digits), cs, tuple(samples), n, terminated_by)


@dataclass(frozen=True)
class GrowthReport:
    """Estimate of the denominator growth rate lim q_n^(1/n).

    ``estimate`` is exp((log q_n)/n) at the last completed step;
    ``oscillation`` is the worst deviation of the same quantity over the
    final quarter of the orbit, and ``trend_slope`` the least-squares
    slope of (log q_k)/k over the final half — both near zero when the
    orbit has settled.
    """

    estimate: float
    trend_slope: float
    oscillation: float
    reliable: bool
    truncated: bool
    steps: int
    requested: int


_MIN_RELIABLE_STEPS = 16


def growth_exponent(x0, y0, n: int, record: OrbitRecord | None = None) -> GrowthReport:
    """Run an exact orbit (or reuse ``record``) and judge its growth rate.

    ``reliable`` demands a full-length untruncated orbit of at least 16
    steps whose final-quarter oscillation stays below 5% of the estimate.
    """
    if record is None:
        record = orbit(x0, y0, n)
    samples = record.growth_samples
    if not samples:
        return GrowthReport(math.nan, math.nan, math.nan, False,
                            record.truncated, 0, record.requested)
    estimate = math.exp(samples[-1][1])
    quarter = samples[(3 * len(samples)) // 4:]
    oscillation = max(abs(math.exp(v) - estimate) for _, v in quarter)
    half = samples[len(samples) // 2:]
    if len(half) >= 2:
        ks = np.array([k for k, _ in half], dtype=float)
        vs = np.array([v for _, v in half], dtype=float)
        trend_slope = float(np.polyfit(ks, vs, 1)[0])
    else:
        trend_slope = math.nan
    reliable = (not record.truncated and record.steps >= _MIN_RELIABLE_STEPS
                and oscillation < 0.05 * estimate)
    return GrowthReport(estimate, trend_slope, oscillation, reliable,
                        record.truncated, record.steps, record.requested)


def eigenvalues_of_digit_matrix(a: int, b: int) -> tuple[ExactReal, ExactReal]:
    """Exact eigenvalues (b +- sqrt(b^2+4a))/2 of the step matrix [[0,a],[1,b]].

    Their product is -a and their sum is b; the larger one drives the
    growth of denominators through repeated digit (a, b).
    """
    if a < 1 or b < 1:
        raise ValueError("need a, b >= 1")
    root = sqrt_exact(b * b + 4 * a)
    return (root + b) / 2, (b - root) / 2


def birkhoff_cylinder_frequencies(x0, y0, n: int) -> dict[CylinderAddress, Fraction]:
    """Empirical visit frequencies of the cylinders along one orbit.

    Float seeds run the float orbit (use that for large n); exact seeds
    run exactly.  Frequencies are exact counts over completed steps and
    sum to 1.
    """
    if isinstance(x0, float) or isinstance(y0, float):
        record = float_orbit(float(x0), float(y0), n)
    else:
        record = orbit(x0, y0, n)
    total = record.steps
    table: dict[CylinderAddress, int] = {}
    for a, b in record.digits:
        addr = CylinderAddress(a, b)
        table[addr] = table.get(addr, 0) + 1
    return {addr: Fraction(c, total) for addr, c in sorted(
        table.items(), key=lambda kv: (kv[0].a, kv[0].b))}


# ---------------------------------------------------------------------------
# scalar families


def varnum_step(x) -> tuple[int, int, ExactReal]:
    """One step with the numerator read off x itself: a = floor(1/x).

    The digit is then pinned to a <= b <= a^2 + a - 1.
    """
    x = _exact(x)
    if not (Rational(0) < x < Rational(1)):
        raise ValueError("varnum_step needs 0 < x < 1")
    a = floor_exact(1 / x)
    ratio = a / x
    b = floor_exact(ratio)
    if not (a <= b <= a * a + a - 1):
        raise ArithmeticError(f"digit bound broken: a={a}, b={b}")
    return a, b, ratio - b


def varnum_expand(x, depth: int) -> tuple[list[tuple[int, int]], ExactReal]:
    """Up to ``depth`` digit pairs of the self-driven expansion, plus the
    remainder where it stopped."""
    x = _exact(x)
    pairs: list[tuple[int, int]] = []
    while len(pairs) < depth and not is_zero(x):
        a, b, x = varnum_step(x)
        pairs.append((a, b))
    return pairs, x


def engel_step(x) -> tuple[int, ExactReal]:
    """One step of the scalar chained-digit map: digit floor(1/x), new
    state 1/(digit*x) - 1.  Digits never decrease along an orbit."""
    x = _exact(x)
    if not (Rational(0) < x < Rational(1)):
        raise ValueError("engel_step needs 0 < x < 1")
    b = floor_exact(1 / x)
    return b, 1 / (b * x) - 1


def engel_expand(x, depth: int) -> tuple[list[int], ExactReal]:
    """Up to ``depth`` digits of the chained-digit expansion of x."""
    x = _exact(x)
    digits: list[int] = []
    while len(digits) < depth and not is_zero(x):
        b, x = engel_step(x)
        digits.append(b)
    return digits, x


def engel_pairs(x, depth: int) -> tuple[list[tuple[int, int]], ExactReal]:
    """The same expansion as digit pairs, built the other way around:
    each digit becomes the next numerator (a_1 = 1, a_{i+1} = b_i).

    Independent of engel_step; the two routes must agree digit for digit,
    with the pair-route remainder equal to b_i times the scalar one.
    """
    rem = _exact(x)
    pairs: list[tuple[int, int]] = []
    a = 1
    while len(pairs) < depth and not is_zero(rem):
        b, rem = pcf_step(rem, a)
        pairs.append((a, b))
        a = b
    return pairs, rem


def greedy_y(n: int) -> Surd:
    """The y whose classical digits are all n: the positive root of
    y = 1/(n + y)."""
    if n < 1:
        raise ValueError("need n >= 1")
    return Surd(-n, 1, n * n + 4, 2)


_FAMILIES = ("varnum", "engel", "greedy")


def y_of_x(x, family: str, depth: int, n: int | None = None) -> list[int]:
    """First ``depth`` classical digits of the y that makes the joint map
    reproduce the family's expansion of x.

    Those digits are exactly the family's numerator sequence: the
    self-read numerators for varnum, (1, b_1, b_2, ...) for engel, and
    the constant n for greedy.  A terminating (rational) x gives a
    shorter list.
    """
    if family not in _FAMILIES:
        raise ValueError(f"family must be one of {_FAMILIES}")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    x = _exact(x)
    if not (Rational(0) < x < Rational(1)):
        raise ValueError("x must lie in (0, 1)")
    if family == "greedy":
        if n is None or n < 1:
            raise ValueError("greedy family needs the numerator n >= 1")
        return [n] * depth
    if family == "varnum":
        pairs, _ = varnum_expand(x, depth)
        return [a for a, _ in pairs]
    # every digit is also the next numerator, so a terminating x still
    # contributes its final digit to y
    digits, _ = engel_expand(x, depth)
    return ([1] + digits)[:depth]


def y_value_from_digits(digits, guard: int | None = None) -> Rational:
    """The exact rational with the given classical digit prefix.

    With ``guard`` set (any digit >= 2), the value keeps the listed
    digits as its genuine leading digits — append it when a truncation
    must survive re-expansion (a bare trailing 1 would otherwise fold
    into the digit before it).
    """
    tail = list(digits) + ([guard] if guard is not None else [])
    if guard is not None and guard < 2:
        raise ValueError("a guard digit below 2 can collapse")
    v = Rational(0)
    for d in reversed(tail):
        if d < 1:
            raise ValueError("classical digits are >= 1")
        v = 1 / (d + v)
    return v


def emit_y_scatter(family: str, grid: int, depth: int,
                   n: int | None = None) -> list[dict]:
    """Rows (x, y(x) to at most ``depth`` digits) on the uniform grid
    x = i/(grid+1), for external plotting.

    A rational x whose expansion completes before ``depth`` still gets a
    row — its y is then exact, and ``digits_used`` says how many digits
    there were.  Skip markers appear only for degenerate x with no digits
    at all.  For the varnum family each row carries the self-similarity
    residual |y(x) - (1/y(1/(1+x)) - 1)| with both sides cut at the same
    point (an exact fraction; 0 whenever both expansions completed).
    """
    if grid < 2:
        raise ValueError("need grid >= 2")
    rows = []
    for i in range(1, grid + 1):
        x = Rational(i, grid + 1)
        base = {"x_num": str(i), "x_den": str(grid + 1),
                "family": family, "depth": str(depth)}
        digits = y_of_x(x, family, depth, n)
        if not digits:
            rows.append({**base, "digits_used": "0", "y_num": "", "y_den": "",
                         "skip": "degenerate", "residual": ""})
            continue
        y = y_value_from_digits(digits)
        residual = ""
        if family == "varnum":
            shifted = y_of_x(1 / (1 + x), family, depth, n)
            other = 1 / y_value_from_digits(shifted) - 1
            residual = str(abs(y - other))
        rows.append({**base, "digits_used": str(len(digits)),
                     "y_num": str(y.num), "y_den": str(y.den),
                     "skip": "", "residual": residual})
    return rows


# ---------------------------------------------------------------------------
# seeds and measure checks


def bits_for_orbit_length(n: int) -> int:
    """Denominator size (bits) that keeps a random rational seed alive for
    n joint steps: each step spends about 1.7123 bits of the seed, plus
    generous headroom."""
    if n < 0:
        raise ValueError("orbit length cannot be negative")
    return math.ceil(1.7123 * n) + 1024


def random_unit_rational(rng: random.Random, bits: int) -> Rational:
    """A uniform random rational in (0, 1) drawn as num/den with den of
    exactly bits+1 bits (top bit forced); reduction to lowest terms may
    shave a few bits off the stored denominator."""
    if bits < 1:
        raise ValueError("need bits >= 1")
    den = (1 << bits) | rng.getrandbits(bits)
    num = rng.randrange(1, den)
    return Rational(num, den)


def leading_cylinders(count: int) -> list[tuple[int, int]]:
    """The ``count`` largest-area cylinder addresses, ties broken by (a, b)."""
    if count < 1:
        raise ValueError("need count >= 1")
    cells = []
    for a in range(1, count + 2):
        for b in range(a, a + count + 2):
            cells.append((-CylinderAddress(a, b).area, a, b))
    cells.sort()
    return [(a, b) for _, a, b in cells[:count]]


def cylinder_area_monte_carlo(samples: int, seed: int,
                              pairs: list[tuple[int, int]] | None = None) -> list[dict]:
    """Uniform sampling of the unit square against the cylinder areas.

    Draws x coordinates first, then y, from one seeded generator, so the
    table is reproducible bit for bit.  Each row carries the exact area,
    the empirical frequency and the relative error.
    """
    if samples < 1:
        raise ValueError("need samples >= 1")
    if pairs is None:
        pairs = leading_cylinders(9)
    rng = np.random.default_rng(seed)
    xs = rng.random(samples)
    ys = rng.random(samples)
    rows = []
    for a, b in pairs:
        addr = CylinderAddress(a, b)
        (x_lo, x_hi), (y_lo, y_hi) = addr.x_interval(), addr.y_interval()
        inside = ((xs > float(x_lo)) & (xs < float(x_hi))
                  & (ys > float(y_lo)) & (ys < float(y_hi)))
        count = int(np.count_nonzero(inside))
        freq = count / samples
        area = float(addr.area)
        rows.append({"a": a, "b": b, "count": count, "area": area,
                     "frequency": freq,
                     "relative_error": abs(freq - area) / area})
    return rows
