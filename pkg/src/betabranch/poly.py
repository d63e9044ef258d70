"""Integer and rational polynomials, Sturm sequences and real root counting.

Coefficient sequences are stored constant term first.  Everything here is
exact: integers and :class:`fractions.Fraction`, no floating point.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Number = int | Fraction


def _trim(coeffs: Sequence) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class IntPolynomial:
    """A polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        c = _trim(int(a) for a in coeffs)
        self.coeffs: tuple[int, ...] = c

    @classmethod
    def from_rational(cls, coeffs: Sequence[Number]) -> IntPolynomial:
        """Clear denominators and return the primitive integer multiple."""
        c = [Fraction(a) for a in coeffs]
        den = 1
        for a in c:
            den = den * a.denominator // gcd(den, a.denominator)
        return cls(int(a * den) for a in c).primitive()

    @classmethod
    def parse(cls, text: str) -> IntPolynomial:
        return parse_polynomial(text)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: Number) -> Number:
        acc: Number = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        return IntPolynomial(poly_mul(self.coeffs, other.coeffs))

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        return IntPolynomial(poly_add(self.coeffs, other.coeffs))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return IntPolynomial(poly_sub(self.coeffs, other.coeffs))

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-a for a in self.coeffs)

    def content(self) -> int:
        g = 0
        for a in self.coeffs:
            g = gcd(g, a)
        return g

    def primitive(self) -> IntPolynomial:
        """Divide out the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPolynomial(a // g for a in self.coeffs)

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(i * a for i, a in enumerate(self.coeffs) if i)

    def reversed(self) -> IntPolynomial:
        """x^deg * p(1/x); maps roots r to 1/r (for nonzero constant term)."""
        return IntPolynomial(reversed(self.coeffs))

    def squarefree_part(self) -> IntPolynomial:
        if self.degree < 1:
            return self
        g = poly_gcd(self.coeffs, self.derivative().coeffs)
        if len(g) <= 1:
            return self.primitive()
        quo, rem = poly_divmod(self.coeffs, g)
        assert not rem
        return IntPolynomial.from_rational(quo)

    def is_squarefree(self) -> bool:
        if self.degree < 1:
            return True
        return len(poly_gcd(self.coeffs, self.derivative().coeffs)) <= 1

    def __repr__(self) -> str:
        return f"IntPolynomial({format_polynomial(self.coeffs)!r})"

    def __str__(self) -> str:
        return format_polynomial(self.coeffs)


# -- coefficient-list arithmetic (works for int or Fraction entries) ---------

def poly_add(a: Sequence, b: Sequence) -> tuple:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def poly_sub(a: Sequence, b: Sequence) -> tuple:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n))


def poly_mul(a: Sequence, b: Sequence) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_scale(a: Sequence, c: Number) -> tuple:
    return _trim(x * c for x in a)


def poly_divmod(a: Sequence, b: Sequence) -> tuple[tuple, tuple]:
    """Division over Q.  Returns (quotient, remainder) with Fraction entries."""
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(x) for x in _trim(a)]
    db = len(b) - 1
    lead = Fraction(b[-1])
    if len(rem) - 1 < db:
        return (), tuple(rem)
    quo = [Fraction(0)] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        t = rem[i] / lead
        if t:
            quo[i - db] = t
            for j in range(db + 1):
                rem[i - db + j] -= t * b[j]
    return _trim(quo), _trim(rem[:db])


def poly_rem(a: Sequence, b: Sequence) -> tuple:
    return poly_divmod(a, b)[1]


def poly_monic(a: Sequence) -> tuple:
    a = _trim(a)
    if not a:
        return a
    lead = Fraction(a[-1])
    return tuple(Fraction(x) / lead for x in a)


def poly_gcd(a: Sequence, b: Sequence) -> tuple:
    """Monic gcd over Q (empty tuple only if both inputs are zero)."""
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_rem(a, b)
    return poly_monic(a)


def poly_xgcd(a: Sequence, b: Sequence) -> tuple[tuple, tuple, tuple]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = _trim([Fraction(x) for x in a]), _trim([Fraction(x) for x in b])
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1))
    if not r0:
        return (), s0, t0
    lead = r0[-1]
    return poly_scale(r0, 1 / lead), poly_scale(s0, 1 / lead), poly_scale(t0, 1 / lead)


def poly_eval(a: Sequence, x: Number) -> Number:
    acc: Number = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_shift(a: Sequence, r: Number) -> tuple:
    """Coefficients of p(x + r)."""
    out: tuple = ()
    for c in reversed(a):
        # Horner step: out <- out * (x + r) + c
        times_x = (0,) + out if out else ()
        out = poly_add(poly_add(times_x, poly_scale(out, r)), (c,))
    return out


# -- Sturm sequences ---------------------------------------------------------

def sturm_sequence(p: Sequence) -> list[tuple]:
    p = _trim(p)
    seq = [p, _trim(i * c for i, c in enumerate(p) if i)]
    while seq[-1]:
        r = poly_rem(seq[-2], seq[-1])
        if not r:
            break
        den = 1
        for c in r:
            den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
        # positive rescaling keeps sign pattern; integerise to keep numbers small
        ints = [int(Fraction(c) * den) for c in r]
        g = 0
        for c in ints:
            g = gcd(g, c)
        seq.append(tuple(-c // g for c in ints))
    return [s for s in seq if s]


def sign_changes(seq: Sequence[Sequence], x: Number) -> int:
    last = 0
    count = 0
    for s in seq:
        v = poly_eval(s, x)
        if v == 0:
            continue
        sg = 1 if v > 0 else -1
        if last and sg != last:
            count += 1
        last = sg
    return count


def count_roots(p: Sequence, lo: Number, hi: Number, seq: list | None = None) -> int:
    """Distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    if seq is None:
        seq = sturm_sequence(p)
    return sign_changes(seq, lo) - sign_changes(seq, hi)


def count_roots_open(p: Sequence, lo: Number, hi: Number, seq: list | None = None) -> int:
    n = count_roots(p, lo, hi, seq)
    if poly_eval(p, hi) == 0:
        n -= 1
    return n


def isolate_intervals(p: Sequence, lo: Number, hi: Number) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals (a, b), each holding exactly one root of
    the squarefree polynomial ``p`` inside the open interval (lo, hi).

    Endpoints are never roots, so ``p`` changes sign across each interval.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    seq = sturm_sequence(p)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = count_roots_open(p, a, b, seq)
        if n == 0:
            continue
        if n == 1 and poly_eval(p, a) != 0 and poly_eval(p, b) != 0:
            out.append((a, b))
            continue
        if n == 1:
            # one root inside but an endpoint is itself a root: pull the endpoint in
            c = (a + b) / 2
            while poly_eval(p, c) == 0:
                c = (a + c) / 2
            if count_roots_open(p, a, c, seq) == 1:
                stack.append((a, c))
            else:
                stack.append((c, b))
            continue
        c = (a + b) / 2
        while poly_eval(p, c) == 0:
            c = (a + c) / 2
        stack.append((c, b))
        stack.append((a, c))
        # a root exactly at the split point is impossible by construction
    out.sort()
    return out


# -- text form -----------------------------------------------------------------

def parse_polynomial(text: str) -> IntPolynomial:
    """Parse strings like ``"x^4-2*x^2-x-1"`` (integer coefficients)."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    coeffs: dict[int, int] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = re.match(r"([+-]?)(\d*)(\*?x(\^(\d+))?)?", s[pos:])
        if not m or m.end() == 0 or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
        sign, digits, xpart, _, exp = m.groups()
        if not first and not sign:
            raise ValueError(f"missing operator in {text!r} at position {pos}")
        if xpart and xpart.startswith("*") and not digits:
            raise ValueError(f"dangling '*' in {text!r} at position {pos}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        e = (int(exp) if exp else 1) if xpart else 0
        coeffs[e] = coeffs.get(e, 0) + c
        pos += m.end()
        first = False
    deg = max(coeffs)
    return IntPolynomial(coeffs.get(i, 0) for i in range(deg + 1))


def format_polynomial(coeffs: Sequence) -> str:
    if not coeffs:
        return "0"
    parts = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = "x" if e == 1 else f"x^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f"{sign}{body}"
    return out
