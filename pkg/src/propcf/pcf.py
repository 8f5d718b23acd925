"""Proper continued fractions: expansion, convergents, and digit algebra.

A proper continued fraction (PCF) writes x in (0,1) as

    x = a1/(b1 + a2/(b2 + a3/(b3 + ...)))

with integer numerators a_i >= 1 chosen freely step by step and digits
b_i = floor(a_i / x_{i-1}) >= a_i forced by the remainders
x_i = a_i/x_{i-1} - b_i.  Remainders stay in [0,1); hitting 0 terminates
the expansion (rationals always terminate, whatever the numerators).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .exactreal import (
    ExactReal,
    Interval,
    Rational,
    floor_exact,
    is_zero,
    parse_exact,
    to_text,
    _coerce,
)


class NotCoprime(ValueError):
    """A rational argument was not in lowest terms where required."""


class ImproperDigits(ValueError):
    """A digit pair with b < a, or a rewrite that would produce one."""


class MiddleCaseError(ValueError):
    """1-x has no digit-level rewrite when a1 < b1 < 2*a1."""


@dataclass(frozen=True)
class PartialQuotient:
    """One level a/b of the fraction; b >= a >= 1."""

    a: int
    b: int

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise TypeError("digit pair must be integers")
        if self.a < 1 or self.b < self.a:
            raise ImproperDigits(f"need b >= a >= 1, got {self.a}/{self.b}")

    def __str__(self):
        return f"{self.a}/{self.b}"


@dataclass(frozen=True)
class PCFExpansion:
    """A finite prefix of digit pairs plus the exact remainder after them.

    ``tail`` is the remainder x_n, always in [0,1); a zero tail means the
    expansion is complete (exactly the rational case).
    """

    quotients: tuple[PartialQuotient, ...]
    tail: ExactReal

    def __post_init__(self):
        object.__setattr__(self, "quotients", tuple(
            q if isinstance(q, PartialQuotient) else PartialQuotient(*q)
            for q in self.quotients))
        t = _coerce(self.tail)
        if t is None:
            raise TypeError("tail must be an exact value")
        object.__setattr__(self, "tail", t)
        if not isinstance(t, Interval):
            if t < 0 or t >= 1:
                raise ValueError("tail must lie in [0, 1)")

    @classmethod
    def from_pairs(cls, pairs, tail=Rational(0)) -> "PCFExpansion":
        return cls(tuple(PartialQuotient(a, b) for a, b in pairs), tail)

    def pairs(self) -> list[tuple[int, int]]:
        return [(q.a, q.b) for q in self.quotients]

    def numerators(self) -> list[int]:
        return [q.a for q in self.quotients]

    def digits(self) -> list[int]:
        return [q.b for q in self.quotients]

    def is_complete(self) -> bool:
        return not isinstance(self.tail, Interval) and is_zero(self.tail)

    def __len__(self):
        return len(self.quotients)

    def __str__(self):
        body = ", ".join(str(q) for q in self.quotients)
        if self.is_complete():
            return f"[{body}]"
        return f"[{body}; tail={self.tail}]"


def pcf_step(x: ExactReal, numerator: int) -> tuple[int, ExactReal]:
    """One expansion step: digit floor(numerator/x) and the next remainder.

    Requires 0 < x < 1 (the remainder domain) and numerator >= 1.
    """
    if not isinstance(numerator, int) or numerator < 1:
        raise ValueError(f"numerator must be a positive integer, got {numerator!r}")
    x = _coerce(x)
    if not isinstance(x, Interval) and not (Rational(0) < x < Rational(1)):
        raise ValueError("pcf_step needs 0 < x < 1")
    ratio = Rational(numerator) / x
    b = floor_exact(ratio)
    return b, ratio - b


def expand(x, numerators, max_len: int | None = None) -> PCFExpansion:
    """Expand x with the given numerator stream.

    Args:
        x: exact value in (0,1) (an Interval works too, but then pass
           max_len and make sure the value cannot terminate).
        numerators: iterable of positive ints, consumed one per digit.
        max_len: optional cap on the number of digits.

    Stops at the first zero remainder, when the stream runs out, or at
    max_len, whichever comes first; the remainder at the stop becomes the
    tail.
    """
    x = _coerce(x)
    if x is None:
        raise TypeError("x must be an exact value")
    quotients: list[PartialQuotient] = []
    for a in numerators:
        if max_len is not None and len(quotients) >= max_len:
            break
        if not isinstance(x, Interval) and is_zero(x):
            break
        b, x = pcf_step(x, a)
        quotients.append(PartialQuotient(a, b))
    return PCFExpansion(tuple(quotients), x)


class ConvergentSeq:
    """Numerators p_n and denominators q_n of the expansion prefixes.

    Seeded with p_{-1}=1, p_0=0, q_{-1}=0, q_0=1 and advanced by
    p_n = b_n p_{n-1} + a_n p_{n-2} (same for q).  These are the unreduced
    pairs; value(n) gives the reduced convergent c_n.
    """

    def __init__(self, expansion):
        if isinstance(expansion, PCFExpansion):
            pairs = [(quot.a, quot.b) for quot in expansion.quotients]
        else:
            pairs = [(q.a, q.b) if isinstance(q, PartialQuotient) else tuple(q)
                     for q in expansion]
        ps, qs = [1, 0], [0, 1]
        for a, b in pairs:
            ps.append(b * ps[-1] + a * ps[-2])
            qs.append(b * qs[-1] + a * qs[-2])
        self._p, self._q = ps, qs
        self.length = len(pairs)

    def _index(self, n: int) -> int:
        if n < -1 or n > self.length:
            raise IndexError(f"index {n} outside [-1, {self.length}]")
        return n + 1

    def p(self, n: int) -> int:
        return self._p[self._index(n)]

    def q(self, n: int) -> int:
        return self._q[self._index(n)]

    def pair(self, n: int) -> tuple[int, int]:
        i = self._index(n)
        return self._p[i], self._q[i]

    def value(self, n: int) -> Rational:
        i = self._index(n)
        return Rational(self._p[i], self._q[i])

    def last(self) -> tuple[int, int]:
        return self._p[-1], self._q[-1]

    def __len__(self):
        return self.length


def convergents(expansion: PCFExpansion) -> ConvergentSeq:
    return ConvergentSeq(expansion)


def moebius_product(expansion: PCFExpansion, n: int | None = None):
    """Product of the step matrices [[0, a_i], [1, b_i]] for i <= n.

    Returns ((m00, m01), (m10, m11)); the columns are the unreduced
    convergent pairs (p_{n-1}, q_{n-1}) and (p_n, q_n).
    """
    if n is None:
        n = len(expansion.quotients)
    if n < 0 or n > len(expansion.quotients):
        raise IndexError(f"prefix length {n} out of range")
    m00, m01, m10, m11 = 1, 0, 0, 1
    for quot in expansion.quotients[:n]:
        a, b = quot.a, quot.b
        m00, m01, m10, m11 = m01, m00 * a + m01 * b, m11, m10 * a + m11 * b
    return (m00, m01), (m10, m11)


def reconstruct(expansion: PCFExpansion) -> ExactReal:
    """Fold the digit pairs back around the tail; exact inverse of expand."""
    value = expansion.tail
    for quot in reversed(expansion.quotients):
        value = Rational(quot.a) / (value + quot.b)
    return value


# ---------------------------------------------------------------------------
# rationals under the fixed-numerator maps


def rational_images(t0: int, s0: int) -> dict[Fraction, int]:
    """All values {N*s0/t0 mod 1} = k/t0 reachable from t0/s0 in one step,
    each with the minimal numerator N in [1, t0] achieving it.

    The images of t0/s0 under x -> frac(N/x) over all N are exactly the
    fractions k/t0 for 0 <= k < t0, and they recur cyclically in N with
    period t0.
    """
    if not (isinstance(t0, int) and isinstance(s0, int)):
        raise TypeError("t0, s0 must be integers")
    if not 0 < t0 < s0:
        raise ValueError("need 0 < t0 < s0")
    if gcd(t0, s0) != 1:
        raise NotCoprime(f"{t0}/{s0} is not in lowest terms")
    inv = pow(s0, -1, t0)
    out: dict[Fraction, int] = {}
    for k in range(t0):
        n = (k * inv) % t0
        out[Fraction(k, t0)] = n if n >= 1 else t0
    return out


def enumerate_rational_expansions(value, length: int | None = None) -> list[PCFExpansion]:
    """Every complete expansion of a rational in (0,1), trying numerators
    1..t at each remainder t/s; optionally filtered to one exact length.

    The numerator at each level may not exceed the remainder's numerator
    (larger choices repeat the same images), so the tree is finite and the
    longest branch has exactly t0 digits.
    """
    v = _coerce(value)
    if isinstance(v, Rational):
        t0, s0 = v.num, v.den
    else:
        raise TypeError("enumeration works on rationals")
    if not 0 < t0 < s0:
        raise ValueError("need a value strictly between 0 and 1")
    results: list[PCFExpansion] = []
    prefix: list[PartialQuotient] = []

    def descend(t: int, s: int):
        for numerator in range(1, t + 1):
            digit = numerator * s // t
            rem = numerator * s - digit * t
            prefix.append(PartialQuotient(numerator, digit))
            if rem == 0:
                if length is None or len(prefix) == length:
                    results.append(PCFExpansion(tuple(prefix), Rational(0)))
            elif length is None or len(prefix) < length:
                g = gcd(rem, t)
                descend(rem // g, t // g)
            prefix.pop()

    descend(t0, s0)
    return results


def longest_chain(n: int) -> PCFExpansion:
    """The maximal-length expansion of (n-1)/n: digits
    (n-2)/(n-2), (n-3)/(n-3), ..., 1/1, 1/2 -- n-1 of them."""
    if n < 2:
        raise ValueError("need n >= 2")
    pairs = [(k, k) for k in range(n - 2, 0, -1)] + [(1, 2)]
    return PCFExpansion.from_pairs(pairs)


# ---------------------------------------------------------------------------
# the 1-x digit rewrite


def _extend_with_unit_steps(expansion: PCFExpansion, want: int) -> PCFExpansion:
    """Grow a too-short expansion by numerator-1 steps on its tail."""
    quotients = list(expansion.quotients)
    tail = expansion.tail
    while len(quotients) < want:
        if is_zero(tail):
            break
        b, tail = pcf_step(tail, 1)
        quotients.append(PartialQuotient(1, b))
    return PCFExpansion(tuple(quotients), tail)


def one_minus_transform(expansion: PCFExpansion) -> PCFExpansion:
    """Digit pairs of 1-x from the digit pairs of x, same tail behaviour.

    Two regimes exist.  With b1 >= 2*a1 the rewrite prepends a unit digit:
    [(1,1), (a1, b1-a1), rest...].  With b1 == a1 it contracts the head:
    [(a2, b1*b2+a2), (b1*a3, b3), rest...] (the second pair must stay
    proper, i.e. the second remainder of x may not exceed 1/b1, else
    ImproperDigits).  For a1 < b1 < 2*a1 no digit-level rewrite exists and
    MiddleCaseError is raised.
    """
    if len(expansion) == 0:
        raise ValueError("need at least one digit pair")
    first = expansion.quotients[0]
    a1, b1 = first.a, first.b

    if b1 >= 2 * a1:
        pairs = ((1, 1), (a1, b1 - a1)) + tuple(expansion.pairs()[1:])
        return PCFExpansion.from_pairs(pairs, expansion.tail)

    if b1 == a1:
        work = _extend_with_unit_steps(expansion, 3)
        quots = work.quotients
        if len(quots) == 1:  # x == a1/b1 == 1: outside the domain
            raise ValueError("expansion value must lie strictly inside (0,1)")
        a2, b2 = quots[1].a, quots[1].b
        head = (a2, b1 * b2 + a2)
        if len(quots) == 2:  # complete rational: single contracted digit
            return PCFExpansion.from_pairs((head,), work.tail)
        a3, b3 = quots[2].a, quots[2].b
        if b3 < b1 * a3:
            raise ImproperDigits(
                f"head contraction yields improper pair {b1 * a3}/{b3}; "
                "it needs the second remainder of x to stay below 1/b1")
        pairs = (head, (b1 * a3, b3)) + tuple((q.a, q.b) for q in quots[3:])
        return PCFExpansion.from_pairs(pairs, work.tail)

    raise MiddleCaseError(
        f"first digit pair {a1}/{b1} has a1 < b1 < 2*a1; 1-x has no "
        "digit-level rewrite there")


# ---------------------------------------------------------------------------
# serialization


def expansion_to_json(expansion: PCFExpansion) -> dict:
    """JSON-ready dict; exact tail as canonical text."""
    if isinstance(expansion.tail, Interval):
        raise TypeError("interval tails have no canonical text form")
    return {
        "schema": 1,
        "quotients": [[q.a, q.b] for q in expansion.quotients],
        "tail": to_text(expansion.tail),
    }


def expansion_from_json(doc: dict) -> PCFExpansion:
    if doc.get("schema") != 1:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    pairs = [(int(a), int(b)) for a, b in doc["quotients"]]
    return PCFExpansion.from_pairs(pairs, parse_exact(doc["tail"]))
