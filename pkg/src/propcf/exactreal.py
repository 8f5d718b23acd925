"""Exact real arithmetic: rationals, quadratic surds, and refinable intervals.

Three representations share one operator interface:

* ``Rational`` -- arbitrary-precision p/q in lowest terms.
* ``Surd`` -- (p + q*sqrt(d))/r with d square-free, kept in a unique
  canonical form; arithmetic stays inside a single quadratic field.
* ``Interval`` -- a dyadic enclosure of a computable number together with
  a refiner callable; refinement is pure (it returns a fresh, tighter
  interval) and bounded by a per-value bit budget.

Mixed expressions lift exact operands into intervals as needed.  Floors,
fractional parts, signs and comparisons are exact for rationals and surds;
for intervals they refine until decidable or raise ``PrecisionExhausted``.
Floats never mix in: convert out with ``float(v)`` at the edge.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, isqrt

_DEFAULT_PRECISION_BITS = 4096


def set_default_precision(bits: int) -> None:
    """Set the module-wide refinement budget (bits) for new intervals."""
    global _DEFAULT_PRECISION_BITS
    if bits < 64:
        raise ValueError("precision budget below 64 bits is not usable")
    _DEFAULT_PRECISION_BITS = int(bits)


def get_default_precision() -> int:
    return _DEFAULT_PRECISION_BITS


class PrecisionExhausted(ArithmeticError):
    """An interval's refinement budget ran out before a query was decidable."""


class IncompatibleSurds(ArithmeticError):
    """Arithmetic attempted between surds from different quadratic fields."""


class ParseError(ValueError):
    """Bad textual input; carries the offset where scanning failed."""

    def __init__(self, message, pos=None):
        super().__init__(message if pos is None else f"{message} (at position {pos})")
        self.pos = pos


_SQUAREFREE_CACHE: dict[int, tuple[int, int]] = {}


def _squarefree_decompose(n: int) -> tuple[int, int]:
    """Return (root, core) with n == root**2 * core and core square-free."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    hit = _SQUAREFREE_CACHE.get(n)
    if hit is not None:
        return hit
    if n < 1_000_000:
        root, core, m, f = 1, 1, n, 2
        while f * f <= m:
            e = 0
            while m % f == 0:
                m //= f
                e += 1
            if e:
                root *= f ** (e // 2)
                if e % 2:
                    core *= f
            f += 1 if f == 2 else 2
        core *= m  # leftover prime
    else:
        from sympy import factorint

        root, core = 1, 1
        for prime, exp in factorint(n).items():
            root *= prime ** (exp // 2)
            if exp % 2:
                core *= prime
    _SQUAREFREE_CACHE[n] = (root, core)
    return root, core


class ExactReal:
    """Common operator front-end; concrete types carry the dispatch data."""

    __slots__ = ()

    def floor(self) -> int:
        return floor_exact(self)

    def frac(self) -> "ExactReal":
        return frac_part(self)

    def __add__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else _add(self, o)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else _add(self, _neg(o))

    def __rsub__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else _add(o, _neg(self))

    def __mul__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else _mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else _mul(self, _recip(o))

    def __rtruediv__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else _mul(o, _recip(self))

    def __neg__(self):
        return _neg(self)

    def __pos__(self):
        return self

    def __abs__(self):
        return _neg(self) if _sign(self) < 0 else self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return _recip(self ** (-n))
        out, base, e = Rational(1), self, n
        while e:
            if e & 1:
                out = _mul(out, base)
            e >>= 1
            if e:
                base = _mul(base, base)
        return out

    def __lt__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else _diff_sign(self, o) < 0

    def __le__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else _diff_sign(self, o) <= 0

    def __gt__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else _diff_sign(self, o) > 0

    def __ge__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else _diff_sign(self, o) >= 0


class Rational(ExactReal):
    """Exact fraction num/den, always in lowest terms with den > 0."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if isinstance(num, Rational):
            num, den = num.num, num.den * den
        elif isinstance(num, Fraction):
            num, den = num.numerator, num.denominator * den
        if not isinstance(num, int) or not isinstance(den, int):
            raise TypeError("Rational takes integers, Fractions or Rationals")
        if den == 0:
            raise ZeroDivisionError("rational with zero denominator")
        if den < 0:
            num, den = -num, -den
        g = gcd(num, den)
        self.num = num // g
        self.den = den // g

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __repr__(self):
        return f"Rational({self.num}, {self.den})"

    def __str__(self):
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"

    def __hash__(self):
        return hash(Fraction(self.num, self.den))

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, Rational):
            return self.num == o.num and self.den == o.den
        if isinstance(o, Surd):
            return False  # a canonical surd is irrational
        return NotImplemented

    def __float__(self):
        return float(Fraction(self.num, self.den))


class Surd(ExactReal):
    """(p + q*sqrt(d))/r in canonical form: d square-free > 1, r > 0,
    gcd(p, q, r) == 1.

    The constructor normalizes, and returns a plain ``Rational`` when the
    irrational part cancels (q == 0, or d a perfect square), so the
    canonical form is unique across the two types.
    """

    __slots__ = ("p", "q", "d", "r")

    def __new__(cls, p: int, q: int, d: int, r: int = 1):
        if r == 0:
            raise ZeroDivisionError("surd with zero denominator")
        if d < 0:
            raise ValueError("negative radicand")
        if q == 0 or d == 0:
            return Rational(p, r)
        root, core = _squarefree_decompose(d)
        q, d = q * root, core
        if d == 1:
            return Rational(p + q, r)
        if r < 0:
            p, q, r = -p, -q, -r
        g = gcd(gcd(abs(p), abs(q)), r)
        self = object.__new__(cls)
        self.p, self.q, self.d, self.r = p // g, q // g, d, r // g
        return self

    def conjugate(self) -> ExactReal:
        return Surd(self.p, -self.q, self.d, self.r)

    def __repr__(self):
        return f"Surd({self.p}, {self.q}, {self.d}, {self.r})"

    def __str__(self):
        s = f"sqrt({self.d})" if abs(self.q) == 1 else f"{abs(self.q)}*sqrt({self.d})"
        if self.p == 0:
            core = ("-" if self.q < 0 else "") + s
            return core if self.r == 1 else f"{core}/{self.r}"
        core = f"{self.p}{'+' if self.q > 0 else '-'}{s}"
        return core if self.r == 1 else f"({core})/{self.r}"

    def __hash__(self):
        return hash((self.p, self.q, self.d, self.r))

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, Surd):
            return (self.p, self.q, self.d, self.r) == (o.p, o.q, o.d, o.r)
        if isinstance(o, Rational):
            return False
        return NotImplemented

    def __float__(self):
        lo, hi = _surd_refiner(self.p, self.q, self.d, self.r)(80)
        return float((lo + hi) / 2)


def sqrt_exact(n) -> ExactReal:
    """Exact square root of a non-negative int, Fraction or Rational."""
    if isinstance(n, Rational):
        n = n.as_fraction()
    if isinstance(n, int):
        n = Fraction(n)
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return Rational(0)
    m = n.numerator * n.denominator  # sqrt(a/b) = sqrt(a*b)/b
    root, core = _squarefree_decompose(m)
    if core == 1:
        return Rational(root, n.denominator)
    return Surd(0, root, core, n.denominator)


# the unit-interval golden number (sqrt(5)-1)/2, fixed point of x -> 1/x - 1
GOLDEN = Surd(-1, 1, 5, 2)


def _surd_refiner(p, q, d, r):
    n = q * q * d

    def refine(bits):
        s = isqrt(n << (2 * bits))
        lo_t = Fraction(s, 1 << bits)
        hi_t = Fraction(s + 1, 1 << bits)
        if q < 0:
            lo_t, hi_t = -hi_t, -lo_t
        return (p + lo_t) / r, (p + hi_t) / r

    return refine


class Interval(ExactReal):
    """Dyadic enclosure [lo, hi] of a number, with a pure ``refiner``.

    ``refiner(bits)`` must return an enclosure of width <= 2**-bits.
    ``refined(bits)`` re-evaluates it, enforcing this interval's bit budget.
    Composites built by arithmetic pad the precision they request from
    their operands, so an operand with a smaller budget raises
    ``PrecisionExhausted`` through the composite.
    """

    __slots__ = ("refiner", "budget", "bits", "lo", "hi")

    def __init__(self, refiner, budget=None, bits: int = 32):
        self.refiner = refiner
        self.budget = _DEFAULT_PRECISION_BITS if budget is None else budget
        self.bits = min(bits, self.budget)
        self.lo, self.hi = refiner(self.bits)
        if self.lo > self.hi:
            raise ValueError("refiner produced an empty interval")

    def refined(self, bits: int) -> "Interval":
        if bits > self.budget:
            raise PrecisionExhausted(f"needed {bits} bits, budget is {self.budget}")
        return Interval(self.refiner, self.budget, bits)

    def width(self) -> Fraction:
        return self.hi - self.lo

    def encloses(self, value) -> bool:
        """Exact containment check for a Rational/Surd/int/Fraction."""
        v = _coerce(value)
        lo = Rational(self.lo.numerator, self.lo.denominator)
        hi = Rational(self.hi.numerator, self.hi.denominator)
        return bool(lo <= v) and bool(v <= hi)

    def _mag_bits(self) -> int:
        m = max(abs(self.lo), abs(self.hi))
        return (m.numerator // m.denominator).bit_length() + 1

    def __repr__(self):
        mid = float((self.lo + self.hi) / 2)
        return f"Interval(~{mid:.6g}, bits={self.bits}, budget={self.budget})"

    __str__ = __repr__

    def __hash__(self):
        return object.__hash__(self)

    def __eq__(self, other):
        return NotImplemented

    def __float__(self):
        cur = self
        want = min(64, self.budget)
        if cur.bits < want:
            cur = self.refined(want)
        return float((cur.lo + cur.hi) / 2)


def exact_to_interval(v: ExactReal, budget=None) -> Interval:
    """Wrap a Rational or Surd as an interval (exact values get an
    unlimited budget; their enclosures cost nothing to tighten)."""
    if isinstance(v, Interval):
        return v
    if budget is None:
        budget = float("inf")
    if isinstance(v, Rational):
        f = v.as_fraction()
        return Interval(lambda bits: (f, f), budget=budget)
    if isinstance(v, Surd):
        return Interval(_surd_refiner(v.p, v.q, v.d, v.r), budget=budget)
    raise TypeError(f"not an exact value: {v!r}")


def _coerce(v):
    if isinstance(v, ExactReal):
        return v
    if isinstance(v, int):
        return Rational(v)
    if isinstance(v, Fraction):
        return Rational(v.numerator, v.denominator)
    return None


# ---------------------------------------------------------------------------
# central dispatch

class _Embedded:
    # a rational viewed as (p + 0*sqrt(d))/r, bypassing canonical demotion
    __slots__ = ("p", "q", "d", "r")

    def __init__(self, rat: Rational, d: int):
        self.p, self.q, self.d, self.r = rat.num, 0, d, rat.den


def _as_same_field(u, v):
    if isinstance(u, Rational):
        return _Embedded(u, v.d), v
    if isinstance(v, Rational):
        return u, _Embedded(v, u.d)
    if u.d != v.d:
        raise IncompatibleSurds(f"sqrt({u.d}) and sqrt({v.d}) do not mix exactly")
    return u, v


def _add(u, v):
    if isinstance(u, Rational) and isinstance(v, Rational):
        return Rational(u.num * v.den + v.num * u.den, u.den * v.den)
    if isinstance(u, Interval) or isinstance(v, Interval):
        return _interval_add(exact_to_interval(u), exact_to_interval(v))
    a, b = _as_same_field(u, v)
    return Surd(a.p * b.r + b.p * a.r, a.q * b.r + b.q * a.r, a.d, a.r * b.r)


def _mul(u, v):
    if isinstance(u, Rational) and isinstance(v, Rational):
        return Rational(u.num * v.num, u.den * v.den)
    if isinstance(u, Interval) or isinstance(v, Interval):
        return _interval_mul(exact_to_interval(u), exact_to_interval(v))
    a, b = _as_same_field(u, v)
    return Surd(a.p * b.p + a.q * b.q * a.d, a.p * b.q + a.q * b.p, a.d, a.r * b.r)


def _neg(u):
    if isinstance(u, Rational):
        return Rational(-u.num, u.den)
    if isinstance(u, Surd):
        return Surd(-u.p, -u.q, u.d, u.r)

    def refine(bits):
        c = u.refined(bits)
        return -c.hi, -c.lo

    return Interval(refine, budget=u.budget, bits=u.bits)


def _recip(u):
    if isinstance(u, Rational):
        if u.num == 0:
            raise ZeroDivisionError("division by exact zero")
        return Rational(u.den, u.num)
    if isinstance(u, Surd):
        # 1/((p + q sqrt d)/r) = r(p - q sqrt d)/(p^2 - q^2 d)
        norm = u.p * u.p - u.q * u.q * u.d
        return Surd(u.r * u.p, -u.r * u.q, u.d, norm)
    return _interval_recip(u)


def _sign(u) -> int:
    if isinstance(u, Rational):
        return (u.num > 0) - (u.num < 0)
    if isinstance(u, Surd):
        p, q = u.p, u.q
        if p == 0:
            return 1 if q > 0 else -1
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        pp, qq = p * p, q * q * u.d  # compare |p| with |q|sqrt(d)
        big = 1 if pp > qq else -1
        return big if p > 0 else -big
    return _interval_sign(u)


def sign_exact(v) -> int:
    return _sign(_coerce(v))


def _diff_sign(u, v) -> int:
    """Sign of u - v.  Surds from different fields compare through interval
    refinement: two distinct algebraic numbers always separate at some
    precision, and cross-field values are never equal."""
    try:
        return _sign(_add(u, _neg(v)))
    except IncompatibleSurds:
        a = exact_to_interval(u)
        b = exact_to_interval(_neg(v))
        return _interval_sign(_interval_add(a, b))


# ---------------------------------------------------------------------------
# interval arithmetic


def _interval_add(a: Interval, b: Interval) -> Interval:
    def refine(bits):
        ca, cb = a.refined(bits + 2), b.refined(bits + 2)
        return ca.lo + cb.lo, ca.hi + cb.hi

    return Interval(refine, budget=min(a.budget, b.budget), bits=min(a.bits, b.bits))


def _interval_mul(a: Interval, b: Interval) -> Interval:
    pad_a, pad_b = b._mag_bits() + 2, a._mag_bits() + 2

    def refine(bits):
        ca, cb = a.refined(bits + pad_a), b.refined(bits + pad_b)
        prods = (ca.lo * cb.lo, ca.lo * cb.hi, ca.hi * cb.lo, ca.hi * cb.hi)
        return min(prods), max(prods)

    return Interval(refine, budget=min(a.budget, b.budget), bits=min(a.bits, b.bits))


def _interval_separate_zero(a: Interval) -> Interval:
    cur, bits = a, a.bits
    while cur.lo <= 0 <= cur.hi:
        if cur.lo == cur.hi:  # degenerate exact zero can never separate
            raise ZeroDivisionError("division by exact zero")
        bits = max(2 * bits, 32)
        cur = a.refined(bits)  # raises PrecisionExhausted past the budget
    return cur


def _interval_recip(a: Interval) -> Interval:
    cur = _interval_separate_zero(a)
    low_mag = min(abs(cur.lo), abs(cur.hi))
    # m such that |value| >= 2^-m, taken from the verified-nonzero enclosure
    m = max(1, (low_mag.denominator // low_mag.numerator).bit_length() + 1)

    def refine(bits):
        c = a.refined(bits + 2 * m + 3)
        return 1 / c.hi, 1 / c.lo

    return Interval(refine, budget=a.budget, bits=cur.bits)


def _interval_sign(a: Interval) -> int:
    if a.lo > 0:
        return 1
    if a.hi < 0:
        return -1
    if a.lo == a.hi == 0:
        return 0
    cur = _interval_separate_zero(a)  # PrecisionExhausted if truly zero
    return 1 if cur.lo > 0 else -1


# ---------------------------------------------------------------------------
# floors and fractional parts


def floor_exact(v) -> int:
    """Exact floor; intervals refine until both endpoints agree."""
    v = _coerce(v)
    if isinstance(v, Rational):
        return v.num // v.den
    if isinstance(v, Surd):
        s = isqrt(v.q * v.q * v.d)
        root_floor = s if v.q > 0 else -s - 1  # q*sqrt(d) is irrational
        return (v.p + root_floor) // v.r
    cur, bits = v, v.bits
    while True:
        flo = cur.lo.numerator // cur.lo.denominator
        fhi = cur.hi.numerator // cur.hi.denominator
        if flo == fhi:
            return flo
        bits = max(2 * bits, 32)
        cur = v.refined(bits)


def frac_part(v) -> ExactReal:
    """v - floor(v), exactly; the value lies in [0, 1)."""
    v = _coerce(v)
    n = floor_exact(v)
    if isinstance(v, Interval):
        def refine(bits):
            c = v.refined(bits)
            return c.lo - n, c.hi - n

        return Interval(refine, budget=v.budget, bits=v.bits)
    return _add(v, Rational(-n))


def is_zero(v) -> bool:
    v = _coerce(v)
    if isinstance(v, Rational):
        return v.num == 0
    if isinstance(v, Surd):
        return False
    return _interval_sign(v) == 0


# ---------------------------------------------------------------------------
# parsing and printing


_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<dec>\d+\.\d+)|(?P<int>\d+)|(?P<name>[A-Za-z_]+)|(?P<op>[()+\-*/])")


def _tokenize(text):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    """Tiny recursive-descent evaluator over exact values.

    grammar:  expr := ['-'] term (('+'|'-') term)*
              term := factor (('*'|'/') factor)*
              factor := INT | DECIMAL | 'golden' | sqrt-form | '(' expr ')'
              sqrt-form := 'sqrt' (INT | '(' expr ')')   (also spelled sqrtN)
    """

    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        k, v, pos = self.toks[self.i]
        if (kind and k != kind) or (value and v != value):
            want = value or kind
            raise ParseError(f"expected {want}, found {v or 'end of input'!r}", pos)
        self.i += 1
        return v, pos

    def expr(self):
        negate = False
        k, v, _ = self.peek()
        if k == "op" and v == "-":
            self.take()
            negate = True
        node = self.term()
        if negate:
            node = -node
        while True:
            k, v, _ = self.peek()
            if k == "op" and v in "+-":
                self.take()
                rhs = self.term()
                node = node + rhs if v == "+" else node - rhs
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            k, v, _ = self.peek()
            if k == "op" and v in "*/":
                self.take()
                rhs = self.factor()
                node = node * rhs if v == "*" else node / rhs
            else:
                return node

    def factor(self):
        k, v, pos = self.peek()
        if k == "int":
            self.take()
            return Rational(int(v))
        if k == "dec":
            self.take()
            f = Fraction(v)
            return Rational(f.numerator, f.denominator)
        if k == "name":
            self.take()
            name = v.lower()
            if name == "golden":
                return GOLDEN
            if name.startswith("sqrt"):
                tail = name[4:]
                if tail:
                    if not tail.isdigit():
                        raise ParseError(f"unknown name {v!r}", pos)
                    return sqrt_exact(int(tail))
                nk, nv, npos = self.peek()
                if nk == "int":
                    self.take()
                    return sqrt_exact(int(nv))
                self.take("op", "(")
                inner = self.expr()
                self.take("op", ")")
                if not isinstance(inner, Rational):
                    raise ParseError("nested radicals are not supported", npos)
                return sqrt_exact(inner)
            raise ParseError(f"unknown name {v!r}", pos)
        if k == "op" and v == "(":
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        if k == "op" and v == "-":
            self.take()
            return -self.factor()
        raise ParseError(f"unexpected {v!r}" if v else "unexpected end of input", pos)


def parse_exact(text: str) -> ExactReal:
    """Parse "p/q", decimal literals, sqrt combinations like "(sqrt5-1)/2"
    or "(3-sqrt(17))/2", and the alias "golden"."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty input", 0)
    p = _Parser(text)
    value = p.expr()
    k, v, pos = p.peek()
    if k != "end":
        raise ParseError(f"trailing input {v!r}", pos)
    return value


def to_text(v: ExactReal) -> str:
    """Canonical text; parse_exact(to_text(v)) == v, bit for bit."""
    if isinstance(v, (Rational, Surd)):
        return str(v)
    raise TypeError("only rationals and surds have a canonical text form")
