"""Exact arithmetic in Q(q) for a real algebraic base q in (1, 2).

An :class:`AlgebraicBase` is a squarefree integer polynomial together with a
rational isolating interval.  Elements of Q(q) are :class:`FieldElement`
values: an integer coefficient vector over a positive common denominator,
reduced modulo the working modulus.  Signs are certified from dyadic
enclosures of the powers q^i; exact zero is detected symbolically.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import gcd
from typing import Sequence

from .poly import (
    IntPolynomial,
    count_roots,
    count_roots_open,
    isolate_intervals,
    parse_polynomial,
    poly_eval,
    poly_gcd,
    poly_xgcd,
    sturm_sequence,
)

Rational = int | Fraction

# Interval bisections tolerated before the gcd zero test is consulted.
ZERO_TEST_ROUNDS = 256


class ReducibleModulusError(ArithmeticError):
    """A divisor shares a factor with the working modulus but is nonzero at q.

    Only possible when a base was built with ``reduce=False`` from a reducible
    polynomial.  ``factor`` is the discovered common factor (monic, over Q).
    """

    def __init__(self, factor: Sequence[Fraction]):
        self.factor = tuple(factor)
        super().__init__(
            "divisor is not invertible modulo the (reducible) minimal polynomial; "
            f"common factor {IntPolynomial.from_rational(self.factor)}"
        )


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"expected an exact rational, got {type(v).__name__}")


def _irreducible_factor(p: IntPolynomial, lo: Fraction, hi: Fraction) -> IntPolynomial:
    """The irreducible factor of ``p`` over Q that vanishes inside (lo, hi)."""
    import sympy

    x = sympy.Symbol("x")
    expr = sum(int(c) * x**i for i, c in enumerate(p.coeffs))
    _, factors = sympy.factor_list(expr, x)
    for f, _mult in factors:
        coeffs = [int(c) for c in reversed(sympy.Poly(f, x).all_coeffs())]
        if len(coeffs) < 2:
            continue
        if count_roots_open(coeffs, lo, hi) > 0:
            return IntPolynomial(coeffs).primitive()
    raise ValueError("no factor vanishes in the isolating interval")


class AlgebraicBase:
    """A real root q in (1, 2) of a squarefree integer polynomial.

    ``minpoly`` is the defining polynomial as given (squarefree part taken).
    ``modulus`` is the polynomial elements are reduced by: by default the
    irreducible factor of ``minpoly`` vanishing at q, so that normal forms
    are canonical; with ``reduce=False`` it is ``minpoly`` itself and zero
    detection falls back on a gcd test.

    The isolating interval may be refined (it only ever shrinks); a lock
    keeps concurrent readers on a valid interval.
    """

    def __init__(self, minpoly: IntPolynomial | str | Sequence[int], lo: Rational | str,
                 hi: Rational | str, label: str | None = None, *, reduce: bool = True):
        if isinstance(minpoly, str):
            minpoly = parse_polynomial(minpoly)
        elif not isinstance(minpoly, IntPolynomial):
            minpoly = IntPolynomial(minpoly)
        if minpoly.degree < 1:
            raise ValueError("minimal polynomial must have positive degree")
        lo, hi = _as_fraction(lo), _as_fraction(hi)
        if not (1 < lo < hi < 2):
            raise ValueError(f"isolating interval ({lo}, {hi}) must satisfy 1 < lo < hi < 2")
        if not minpoly.is_squarefree():
            raise ValueError(f"{minpoly} is not squarefree")
        self.minpoly = minpoly.primitive()
        if count_roots_open(self.minpoly.coeffs, lo, hi) != 1:
            raise ValueError(f"{minpoly} does not have exactly one root in ({lo}, {hi})")
        self.label = label
        self.modulus = _irreducible_factor(self.minpoly, lo, hi) if reduce else self.minpoly
        self.irreducible = reduce
        self.degree = self.modulus.degree
        self._lock = threading.Lock()
        self._lo, self._hi = lo, hi
        self._pull_endpoints_off_roots()
        self._sturm = sturm_sequence(self.modulus.coeffs)
        self._power_cache: dict[int, tuple[list[int], list[int]]] = {}
        self._cache: dict = {}

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_json(cls, obj: dict) -> AlgebraicBase:
        return cls(obj["minpoly"], obj["lo"], obj["hi"], obj.get("label"))

    def to_json(self) -> dict:
        lo, hi = self.interval
        out = {"minpoly": str(self.minpoly), "lo": str(lo), "hi": str(hi)}
        if self.label is not None:
            out["label"] = self.label
        return out

    def _pull_endpoints_off_roots(self) -> None:
        p = self.modulus.coeffs
        lo, hi = self._lo, self._hi
        if poly_eval(p, lo) == 0 or poly_eval(p, hi) == 0 or count_roots_open(p, lo, hi) != 1:
            (lo, hi), = [iv for iv in isolate_intervals(p, lo, hi)]
        self._lo, self._hi = lo, hi
        self._sign_lo = 1 if poly_eval(p, lo) > 0 else -1

    # -- the isolating interval ------------------------------------------------

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        with self._lock:
            return self._lo, self._hi

    def refine(self, width: Rational) -> tuple[Fraction, Fraction]:
        """Bisect until the isolating interval is at most ``width`` wide."""
        width = _as_fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        with self._lock:
            lo, hi = self._lo, self._hi
            p = self.modulus.coeffs
            while hi - lo > width:
                mid = (lo + hi) / 2
                v = poly_eval(p, mid)
                if v == 0:
                    # rational root: keep a tiny interval strictly around it
                    eps = (hi - lo) / 4
                    while eps > width / 2:
                        eps /= 2
                    lo, hi = mid - eps, mid + eps
                    break
                if (v > 0) == (self._sign_lo > 0):
                    lo = mid
                else:
                    hi = mid
            self._lo, self._hi = lo, hi
            return lo, hi

    def _powers(self, prec: int) -> tuple[list[int], list[int]]:
        """Integer bounds L_i <= 2^prec q^i <= U_i for i < degree."""
        cached = self._power_cache.get(prec)
        if cached is not None:
            return cached
        d = self.degree
        lo, hi = self.refine(Fraction(1, 2 ** (prec + 2 * d + 2)))
        scale = 2**prec
        L, U = [], []
        plo, phi = Fraction(1), Fraction(1)
        for _ in range(d):
            L.append((plo * scale).__floor__())
            U.append((phi * scale).__ceil__())
            plo *= lo
            phi *= hi
        self._power_cache[prec] = (L, U)
        return L, U

    def contains_root_of(self, coeffs: Sequence) -> bool:
        """Whether the polynomial vanishes at q (checked through a gcd)."""
        g = poly_gcd(coeffs, self.modulus.coeffs)
        if len(g) <= 1:
            return False
        lo, hi = self.interval
        return count_roots(g, lo, hi) > 0

    # -- distinguished elements ------------------------------------------------

    def element(self, coeffs: Sequence[Rational]) -> FieldElement:
        """Element sum coeffs[i] * q^i (any length; reduced mod the modulus)."""
        fr = [_as_fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        return FieldElement._make(self, [int(c * den) for c in fr], den)

    def const(self, value: Rational) -> FieldElement:
        v = _as_fraction(value)
        return FieldElement._make(self, [v.numerator], v.denominator)

    def _cached(self, key, build):
        v = self._cache.get(key)
        if v is None:
            v = build()
            self._cache[key] = v
        return v

    @property
    def zero(self) -> FieldElement:
        return self._cached("zero", lambda: self.const(0))

    @property
    def one(self) -> FieldElement:
        return self._cached("one", lambda: self.const(1))

    @property
    def q(self) -> FieldElement:
        return self._cached("q", lambda: self.element([0, 1]))

    @property
    def lam(self) -> FieldElement:
        """lambda = 1/q."""
        return self._cached("lam", lambda: self.q.inverse())

    @property
    def upper(self) -> FieldElement:
        """Right end 1/(q-1) of the interval I_q."""
        return self._cached("upper", lambda: (self.q - 1).inverse())

    def lam_power(self, n: int) -> FieldElement:
        powers = self._cached("lam_powers", lambda: [self.one])
        while len(powers) <= n:
            powers.append(powers[-1] * self.lam)
        return powers[n]

    # -- comparisons between bases ----------------------------------------------

    def same_number(self, other: AlgebraicBase) -> bool:
        """Exact equality of the two algebraic numbers."""
        if other is self:
            return True
        return self.compare_number(other) == 0

    def compare_number(self, other: AlgebraicBase) -> int:
        """-1, 0, 1 as q_self <, =, > q_other."""
        if other is self:
            return 0
        # equal iff q_other is a root of our modulus lying in our isolating interval
        vanishes = other.element(self.modulus.coeffs).is_zero()
        width = Fraction(1, 2**20)
        while True:
            a_lo, a_hi = self.refine(width)
            # the other interval is refined much finer so that, when the numbers
            # coincide, it eventually nests inside ours
            b_lo, b_hi = other.refine(width / 2**8)
            if a_hi < b_lo:
                return -1
            if b_hi < a_lo:
                return 1
            if vanishes and a_lo <= b_lo and b_hi <= a_hi:
                return 0
            width /= 2**16

    def __lt__(self, other: AlgebraicBase) -> bool:
        return self.compare_number(other) < 0

    def __repr__(self) -> str:
        name = f"{self.label}: " if self.label else ""
        return f"AlgebraicBase({name}{self.minpoly} ~ {self.decimal(8)})"

    def decimal(self, places: int = 5) -> str:
        lo, hi = self.refine(Fraction(1, 10 ** (places + 3)))
        return _round_decimal((lo + hi) / 2, places)

    def enclosure(self, places: int = 5) -> tuple[Fraction, Fraction]:
        return self.refine(Fraction(1, 10 ** (places + 3)))


def _round_decimal(v: Fraction, places: int) -> str:
    scaled = v * 10**places
    n = (scaled + Fraction(1, 2)).__floor__()
    sign = "-" if n < 0 else ""
    n = abs(n)
    s = str(n).rjust(places + 1, "0")
    return f"{sign}{s[:-places]}.{s[-places:]}" if places else f"{sign}{s}"


class FieldElement:
    """An exact element of Q(q): (c_0 + c_1 q + ... ) / den."""

    __slots__ = ("base", "nums", "den", "_hash")

    def __init__(self, base: AlgebraicBase, nums: tuple[int, ...], den: int):
        # direct construction assumes a normalised representation; use _make
        self.base = base
        self.nums = nums
        self.den = den
        self._hash = None

    @classmethod
    def _make(cls, base: AlgebraicBase, nums: list[int], den: int) -> FieldElement:
        mod = base.modulus.coeffs
        d = len(mod) - 1
        lead = mod[-1]
        nums = list(nums)
        # reduce degree >= d terms using the integer modulus (pseudo-division)
        for i in range(len(nums) - 1, d - 1, -1):
            t = nums[i]
            if not t:
                continue
            if t % lead:
                m = lead // gcd(t, lead)
                if m < 0:
                    m = -m
                nums = [c * m for c in nums]
                den *= m
                t = nums[i]
            f = t // lead
            base_i = i - d
            for j in range(d + 1):
                nums[base_i + j] -= f * mod[j]
        while nums and nums[-1] == 0:
            nums.pop()
        if den < 0:
            den = -den
            nums = [-c for c in nums]
        g = den
        for c in nums:
            g = gcd(g, c)
            if g == 1:
                break
        if g != 1:
            nums = [c // g for c in nums]
            den //= g
        if not nums:
            den = 1
        return cls(base, tuple(nums), den)

    # -- coercion ---------------------------------------------------------------

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.base is not self.base:
                raise ValueError("field elements belong to different bases")
            return other
        if isinstance(other, (int, Fraction)):
            return self.base.const(other)
        return NotImplemented

    # -- ring operations --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.nums, o.nums
        da, db = self.den, o.den
        n = max(len(a), len(b))
        nums = [(a[i] * db if i < len(a) else 0) + (b[i] * da if i < len(b) else 0) for i in range(n)]
        return FieldElement._make(self.base, nums, da * db)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.base, tuple(-c for c in self.nums), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.nums, o.nums
        if not a or not b:
            return self.base.zero
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return FieldElement._make(self.base, out, self.den * o.den)

    __rmul__ = __mul__

    def times_q(self) -> FieldElement:
        """Multiply by q (a coefficient shift then one reduction step)."""
        if not self.nums:
            return self
        return FieldElement._make(self.base, [0, *self.nums], self.den)

    def inverse(self) -> FieldElement:
        if not self.nums:
            raise ZeroDivisionError("division by zero in Q(q)")
        mod = self.base.modulus.coeffs
        g, s, _t = poly_xgcd(self.nums, mod)
        if len(g) > 1:
            lo, hi = self.base.interval
            if count_roots(g, lo, hi) > 0:
                raise ZeroDivisionError("division by an element that vanishes at q")
            raise ReducibleModulusError(g)
        # s * nums = 1 (mod modulus), so inverse = den * s
        return self.base.element([c * self.den for c in s])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(q)")
            v = Fraction(other)
            return FieldElement._make(self.base, [c * v.denominator for c in self.nums],
                                      self.den * v.numerator)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.base.one
        acc = self
        while n:
            if n & 1:
                result = result * acc
            acc = acc * acc
            n >>= 1
        return result

    # -- equality, sign, ordering ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.base.const(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.base is not self.base:
            return False
        if self.nums == other.nums and self.den == other.den:
            return True
        if self.base.irreducible:
            return False
        return (self - other).sign() == 0

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((id(self.base), self.nums, self.den))
            self._hash = h
        return h

    def is_zero(self) -> bool:
        if not self.nums:
            return True
        if self.base.irreducible:
            return False
        return self.base.contains_root_of(self.nums)

    def sign(self) -> int:
        """Exact sign of the real value at the isolated root."""
        nums = self.nums
        if not nums:
            return 0
        if len(nums) == 1:
            return 1 if nums[0] > 0 else -1
        base = self.base
        prec = 64
        rounds = 0
        zero_checked = base.irreducible
        while True:
            L, U = base._powers(prec)
            lo_sum = 0
            hi_sum = 0
            for c, l, u in zip(nums, L, U):
                if c > 0:
                    lo_sum += c * l
                    hi_sum += c * u
                else:
                    lo_sum += c * u
                    hi_sum += c * l
            if lo_sum > 0:
                return 1
            if hi_sum < 0:
                return -1
            rounds += prec
            if not zero_checked and rounds >= ZERO_TEST_ROUNDS:
                if base.contains_root_of(nums):
                    return 0
                zero_checked = True
            prec *= 2

    def compare(self, other) -> int:
        """-1, 0 or 1 as self <, =, > other."""
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare with {type(other).__name__}")
        if self.nums == o.nums and self.den == o.den:
            return 0
        return (self - o).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    # -- numeric views ---------------------------------------------------------------

    def bounds(self, width: Rational = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
        """Rational (lo, hi) enclosing the value, hi - lo <= width."""
        width = _as_fraction(width)
        if len(self.nums) <= 1:
            v = Fraction(self.nums[0] if self.nums else 0, self.den)
            return v, v
        total = sum(abs(c) for c in self.nums) * len(self.nums)
        prec = 64
        while True:
            L, U = self.base._powers(prec)
            lo_sum = hi_sum = 0
            for c, l, u in zip(self.nums, L, U):
                if c > 0:
                    lo_sum += c * l
                    hi_sum += c * u
                else:
                    lo_sum += c * u
                    hi_sum += c * l
            lo = Fraction(lo_sum, self.den * 2**prec)
            hi = Fraction(hi_sum, self.den * 2**prec)
            if hi - lo <= width or prec > 4096 + total.bit_length():
                return lo, hi
            prec *= 2

    def decimal(self, places: int = 5) -> str:
        lo, hi = self.bounds(Fraction(1, 10 ** (places + 3)))
        return _round_decimal((lo + hi) / 2, places)

    def __float__(self) -> float:
        lo, hi = self.bounds(Fraction(1, 2**60))
        return float((lo + hi) / 2)

    def coefficients(self) -> tuple[Fraction, ...]:
        """Rational coefficients of the reduced polynomial representative."""
        return tuple(Fraction(c, self.den) for c in self.nums)

    def to_string(self) -> str:
        """Exact rational-vector form: ``[c0, c1, ...]`` in powers of q."""
        return "[" + (", ".join(str(c) for c in self.coefficients()) or "0") + "]"

    def __repr__(self) -> str:
        label = self.base.label or "q"
        return f"FieldElement({self.to_string()} @ {label} ~ {self.decimal(6)})"


# -- module-level operations ----------------------------------------------------------

def isolate_roots(p: IntPolynomial | str, lo: Rational = 1, hi: Rational = 2,
                  label: str | None = None) -> list[AlgebraicBase]:
    """One base per distinct real root of the squarefree part of ``p`` in (lo, hi)."""
    if isinstance(p, str):
        p = parse_polynomial(p)
    if p.is_zero():
        raise ValueError("cannot isolate the roots of the zero polynomial")
    lo, hi = _as_fraction(lo), _as_fraction(hi)
    if lo < 1 or hi > 2 or lo >= hi:
        raise ValueError("root isolation range must lie within [1, 2]")
    sf = p.squarefree_part()
    if sf.degree < 1:
        return []
    out = []
    for a, b in isolate_intervals(sf.coeffs, lo, hi):
        sa = poly_eval(sf.coeffs, a) > 0
        while a <= 1 or b >= 2:
            mid = (a + b) / 2
            v = poly_eval(sf.coeffs, mid)
            if v == 0:
                a, b = (a + mid) / 2, (mid + b) / 2
                break
            if (v > 0) == sa:
                a = mid
            else:
                b = mid
        out.append(AlgebraicBase(sf, a, b, label))
    return out


def refine(b: AlgebraicBase, width: Rational) -> tuple[Fraction, Fraction]:
    return b.refine(width)


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.base is not b.base:
        raise ValueError("operands belong to different bases")
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def compare(a: FieldElement, b) -> str:
    return {-1: "LT", 0: "EQ", 1: "GT"}[a.compare(b)]
