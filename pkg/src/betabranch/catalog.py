"""Named constants and parametric families of bases.

The algebraic constants are built once and shared (bases cache their
refined intervals).  The Komornik-Loreti constant is defined by a series,
not a polynomial, so it is only available as a certified bracket.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from .field import AlgebraicBase, isolate_roots
from .poly import IntPolynomial, parse_polynomial, poly_mul, poly_shift, poly_sub
from .words import DigitWord, thue_morse, value_of


@dataclass(frozen=True)
class ConstantEntry:
    name: str
    definition: str
    table_value: str
    base: AlgebraicBase | None = None
    bracket: tuple[Fraction, Fraction] | None = None

    def decimal(self, places: int = 5) -> str:
        if self.base is not None:
            return self.base.decimal(places)
        lo, hi = self.bracket
        return _round((lo + hi) / 2, places)

    def enclosure(self, places: int = 5) -> tuple[Fraction, Fraction]:
        if self.base is not None:
            return self.base.enclosure(places)
        return self.bracket


def _round(v: Fraction, places: int) -> str:
    from .field import _round_decimal
    return _round_decimal(v, places)


def _base(poly: str, lo: str, hi: str, label: str) -> AlgebraicBase:
    return AlgebraicBase(parse_polynomial(poly), Fraction(lo), Fraction(hi), label)


_ALGEBRAIC = {
    # name: (polynomial, definition text as tabulated, table value, rough bracket)
    "G": ("x^2-x-1", "x^2=x+1", "1.61803", ("1.6", "1.65")),
    "q_omega": ("x^5-x^4-x^3-x+1", "x^5=x^4+x^3+x-1", "1.68042", ("1.67", "1.69")),
    "q2": ("x^4-2*x^2-x-1", "x^4=2x^2+x+1", "1.71064", ("1.7", "1.72")),
    "qf": ("x^3-2*x^2+x-1", "x^3=2x^2-x+1", "1.75488", ("1.75", "1.76")),
    "T": ("x^3-x^2-x-1", "x^3=x^2+x+1", "1.83929", ("1.83", "1.85")),
}

CONSTANT_NAMES = ("G", "q_omega", "q2", "qf", "qKL", "T")

_ALIASES = {"qomega": "q_omega", "q_w": "q_omega", "qw": "q_omega", "q_2": "q2",
            "q_f": "qf", "q_kl": "qKL", "qkl": "qKL", "kl": "qKL"}


@cache
def base(name: str) -> AlgebraicBase:
    """The algebraic base with the given catalog name (not qKL)."""
    key = _ALIASES.get(name, name)
    if key in _ALGEBRAIC:
        poly, _defn, _val, (lo, hi) = _ALGEBRAIC[key]
        return _base(poly, lo, hi, key)
    if key == "qKL":
        raise ValueError("qKL is series-defined and cannot serve as an exact base")
    raise KeyError(f"unknown constant {name!r}")


def constant(name: str) -> ConstantEntry:
    key = _ALIASES.get(name, name)
    if key == "qKL":
        return ConstantEntry("qKL", "sum_{n>=1} m_n x^-n = 1 (Thue-Morse m)", "1.78723",
                             bracket=komornik_loreti(Fraction(1, 10**8)))
    if key not in _ALGEBRAIC:
        raise KeyError(f"unknown constant {name!r}")
    _poly, defn, val, _ = _ALGEBRAIC[key]
    return ConstantEntry(key, defn, val, base=base(key))


def constants() -> list[ConstantEntry]:
    return [constant(n) for n in CONSTANT_NAMES]


# -- Komornik-Loreti --------------------------------------------------------------

def _tm_partial(q: Fraction, n: int) -> Fraction:
    bits = thue_morse(n + 1)
    lam = 1 / q
    acc = Fraction(0)
    for m in reversed(bits[1:]):
        acc = (acc + m) * lam
    return acc


@cache
def komornik_loreti(eps: Fraction = Fraction(1, 10**5)) -> tuple[Fraction, Fraction]:
    """Bracket [lo, hi] of width <= eps around the root of sum m_n q^-n = 1.

    The series is decreasing in q.  ``lo`` is certified by its truncated sum
    already reaching 1; ``hi`` by the truncated sum plus the geometric tail
    bound q^-N/(q-1) staying at most 1.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    lo, hi = Fraction(17, 10), Fraction(19, 10)
    n = 64
    while hi - lo > eps:
        mid = (lo + hi) / 2
        s = _tm_partial(mid, n)
        if s >= 1:
            lo = mid
        elif s + (1 / mid) ** n / (mid - 1) <= 1:
            hi = mid
        else:
            n *= 2
    return lo, hi


def kl_bracket_valid(lo: Fraction, hi: Fraction, n: int = 256) -> bool:
    """Independent re-check of a bracket: S_n(lo) >= 1 >= S_n(hi) + tail."""
    return _tm_partial(lo, n) >= 1 and _tm_partial(hi, n) + (1 / hi) ** n / (hi - 1) <= 1


# -- families ------------------------------------------------------------------------

def _unique_root(p: IntPolynomial, lo: Fraction, hi: Fraction, label: str) -> AlgebraicBase:
    roots = isolate_roots(p, lo, hi, label)
    if len(roots) != 1:
        raise ValueError(f"expected one root of {p} in ({lo}, {hi}), found {len(roots)}")
    return roots[0]


@cache
def multinacci(k: int) -> AlgebraicBase:
    """T_k: the root in (1, 2) of x^k = x^(k-1) + ... + x + 1."""
    if k < 2:
        raise ValueError("k must be at least 2")
    p = IntPolynomial([-1] * k + [1])
    return _unique_root(p, Fraction(1), Fraction(2), f"T{k}")


@cache
def qf_family(n: int) -> AlgebraicBase:
    """The base in which 1 ~ (m_1 ... m_{2^n} 0^inf), m the Thue-Morse sequence."""
    if n < 1:
        raise ValueError("n must be at least 1")
    N = 2**n
    bits = thue_morse(N + 1)
    # q^N - sum_i m_i q^(N-i)
    coeffs = [0] * (N + 1)
    coeffs[N] = 1
    for i in range(1, N + 1):
        coeffs[N - i] -= bits[i]
    return _unique_root(IntPolynomial(coeffs), Fraction(1), Fraction(2), f"qf({n})")


def zn_words(n: int) -> tuple[DigitWord, DigitWord]:
    """(z_n, z_n + 1) as words in base qf_family(n)."""
    N = 2**n
    bits = thue_morse(N + 1)
    block = bits[N // 2 + 1: N + 1]
    z = DigitWord((0,) * N, block)
    z1 = DigitWord(bits[1: N // 2 + 1], block)
    return z, z1


def counterex_polynomial(n: int) -> IntPolynomial:
    """lambda^(2n+1)(1-l-l^2+l^5) - (1-l-2l^2+l^3+l^5), as a polynomial in q = 1/lambda.

    Obtained by clearing denominators in the two-word value identity; the
    factor (lambda - 1) it carries has no root in range.
    """
    a = (1, -1, -1, 0, 0, 1)
    b = (1, -1, -2, 1, 0, 1)
    lam_poly = poly_sub(poly_mul((0,) * (2 * n + 1) + (1,), a), b)
    return IntPolynomial(lam_poly).reversed().primitive()


def counterex_words(n: int) -> tuple[DigitWord, DigitWord]:
    """The two expansions 10000(10)^inf and 0 11 (01)^(n-1) 1 0000(10)^inf."""
    w1 = DigitWord((1, 0, 0, 0, 0), (1, 0))
    w2 = DigitWord((0, 1, 1) + (0, 1) * (n - 1) + (1, 0, 0, 0, 0), (1, 0))
    return w1, w2


@cache
def counterex_family(n: int) -> AlgebraicBase:
    """q^(n): the root above q2 of the defining relation, with the two-word
    value identity re-checked exactly.  q^(1) exceeds qf; q^(n) < qf for n >= 2."""
    if n < 1:
        raise ValueError("n must be at least 1")
    lo = base("q2").refine(Fraction(1, 2**80))[1]
    b = _unique_root(counterex_polynomial(n), lo, Fraction(19, 10), f"q({n})")
    w1, w2 = counterex_words(n)
    if value_of(w1, b) != value_of(w2, b):
        raise ArithmeticError(f"word identity fails at q({n})")
    return b


def shifted_base(b: AlgebraicBase, r: Fraction, label: str | None = None) -> AlgebraicBase:
    """The base q + r (r rational), e.g. T_5 + 1/1000."""
    r = Fraction(r)
    # q + r is a root of p(x - r)
    coeffs = poly_shift(b.modulus.coeffs, -r)
    p = IntPolynomial.from_rational(coeffs)
    lo, hi = b.refine(Fraction(1, 2**40))
    return AlgebraicBase(p, lo + r, hi + r, label)


NAMED_FAMILIES = {
    "multinacci": multinacci,
    "T": multinacci,
    "qf_family": qf_family,
    "qf": qf_family,
    "counterex": counterex_family,
    "q": counterex_family,
}


def resolve_base(text: str) -> AlgebraicBase:
    """Resolve a base from a catalog name, ``family:n``, or ``poly[@lo,hi]``."""
    s = text.strip()
    key = _ALIASES.get(s, s)
    if key in _ALGEBRAIC:
        return base(key)
    if ":" in s and "x" not in s:
        fam, _, arg = s.partition(":")
        if fam not in NAMED_FAMILIES:
            raise KeyError(f"unknown family {fam!r}")
        return NAMED_FAMILIES[fam](int(arg))
    if "x" in s:
        poly_text, _, rng = s.partition("@")
        p = parse_polynomial(poly_text)
        if rng:
            lo, _, hi = rng.partition(",")
            return AlgebraicBase(p.squarefree_part(), Fraction(lo), Fraction(hi))
        roots = isolate_roots(p, 1, 2)
        if len(roots) != 1:
            raise ValueError(f"{p} has {len(roots)} roots in (1, 2); give an interval with @lo,hi")
        return roots[0]
    raise KeyError(f"unknown base {text!r}")


def name_of(b: AlgebraicBase) -> str:
    """Catalog name of a base if it equals a tabulated constant, else its decimal."""
    for key in _ALGEBRAIC:
        if b.same_number(base(key)):
            return key
    return b.label or b.decimal(5)
