from fractions import Fraction

import mpmath
import pytest

from betabranch import catalog
from betabranch.catalog import (
    base, constant, counterex_family, counterex_polynomial, counterex_words, kl_bracket_valid,
    komornik_loreti, multinacci, qf_family, resolve_base, shifted_base, zn_words,
)
from betabranch.words import thue_morse, value_of

mpmath.mp.dps = 40


def mp_root(poly: str, guess: float) -> mpmath.mpf:
    x = mpmath.mpf
    return mpmath.findroot(lambda t: eval(poly.replace("^", "**"), {"x": t}), x(guess))


@pytest.mark.parametrize("name,poly,value", [
    ("G", "x^2-x-1", "1.61803"),
    ("q_omega", "x^5-x^4-x^3-x+1", "1.68042"),
    ("q2", "x^4-2*x^2-x-1", "1.71064"),
    ("qf", "x^3-2*x^2+x-1", "1.75488"),
    ("T", "x^3-x^2-x-1", "1.83929"),
])
def test_algebraic_constants(name, poly, value):
    e = constant(name)
    assert e.decimal() == value
    r = mp_root(poly, float(value))
    lo, hi = e.base.refine(Fraction(1, 10**20))
    assert mpmath.mpf(lo.numerator) / lo.denominator <= r <= mpmath.mpf(hi.numerator) / hi.denominator


def test_kl_constant():
    e = constant("qKL")
    assert e.decimal() == "1.78723"
    lo, hi = komornik_loreti(Fraction(1, 10**5))
    assert Fraction("1.78722") < lo < hi < Fraction("1.78724")
    assert hi - lo <= Fraction(1, 10**5)
    assert kl_bracket_valid(lo, hi)
    lo2, hi2 = komornik_loreti(Fraction(1, 100))
    assert lo2 < Fraction("1.787") < hi2
    # independent value: sum m_n x^-n = 1 solved in floating point
    m = thue_morse(400)
    f = lambda x: sum(m[n] * x ** -n for n in range(1, 400)) - 1
    r = mpmath.findroot(f, mpmath.mpf("1.787"))
    assert lo <= Fraction(str(r)) <= hi
    with pytest.raises(ValueError):
        komornik_loreti(Fraction(0))
    with pytest.raises(ValueError):
        base("qKL")


def test_unknown_name():
    with pytest.raises(KeyError):
        constant("nope")


def test_multinacci():
    assert multinacci(2).same_number(base("G"))
    assert multinacci(3).same_number(base("T"))
    Ts = [multinacci(k) for k in range(2, 9)]
    assert all(a < b for a, b in zip(Ts, Ts[1:]))


def test_qf_family():
    assert qf_family(1).same_number(base("G"))
    assert qf_family(2).same_number(base("qf"))
    # 1 = 1/q + 1/q^2 + 1/q^4 at qf
    qf = base("qf")
    assert value_of("1101", qf) == 1
    fam = [qf_family(n) for n in range(1, 6)]
    assert all(a < b for a, b in zip(fam, fam[1:]))
    _, kl_hi = komornik_loreti(Fraction(1, 10**8))
    assert all(b.refine(Fraction(1, 10**12))[1] < kl_hi for b in fam)


def test_zn_words():
    for n in (2, 3):
        b = qf_family(n)
        z, z1 = zn_words(n)
        assert value_of(z, b) + 1 == value_of(z1, b)
    assert str(zn_words(2)[0]) == "0000(01)*"


def test_counterex_family():
    q2, qf = base("q2"), base("qf")
    bases = [counterex_family(n) for n in range(1, 6)]
    for n, b in enumerate(bases, 1):
        w1, w2 = counterex_words(n)
        assert value_of(w1, b) == value_of(w2, b)
        assert q2 < b
        if n >= 2:
            assert b < qf
    assert all(b.compare_number(a) < 0 for a, b in zip(bases, bases[1:]))
    assert bases[0].decimal(5) == "1.76386"


def test_counterex_polynomial_matches_word_identity():
    """The cleared identity agrees with the two-word value difference as rational functions."""
    import sympy

    lam = sympy.Symbol("l")
    for n in range(1, 5):
        w1, w2 = counterex_words(n)

        def val(w):
            p, r = len(w.preperiod), len(w.period)
            s = sum(d * lam ** (i + 1) for i, d in enumerate(w.preperiod))
            per = sum(d * lam ** (j + 1) for j, d in enumerate(w.period))
            return s + lam**p * per / (1 - lam**r)

        num = sympy.numer(sympy.together(val(w1) - val(w2)))
        reduced = sympy.Poly(sympy.cancel(num / lam), lam)
        q = sympy.Symbol("x")
        reversed_ = sympy.Poly(sympy.expand(q ** reduced.degree() * reduced.as_expr().subs(lam, 1 / q)), q)
        ours = sympy.Poly(sum(c * q**i for i, c in enumerate(counterex_polynomial(n).coeffs)), q)
        assert reversed_ in (ours, -ours)


def test_shifted_base():
    T5 = multinacci(5)
    b = shifted_base(T5, Fraction(1, 1000))
    lo, hi = b.refine(Fraction(1, 10**10))
    t_lo, t_hi = T5.refine(Fraction(1, 10**10))
    assert abs((lo - t_lo) - Fraction(1, 1000)) < Fraction(1, 10**9)


@pytest.mark.parametrize("text,value", [
    ("q2", "1.71064"), ("q_f", "1.75488"), ("T:3", "1.83929"), ("qf:2", "1.75488"),
    ("q:2", "1.72732"), ("x^3-x^2-x-1", "1.83929"), ("x^2-3@1.7,1.8", "1.73205"),
])
def test_resolve_base(text, value):
    assert resolve_base(text).decimal(5) == value


def test_resolve_base_errors():
    with pytest.raises(KeyError):
        resolve_base("zzz")
    with pytest.raises(ValueError):
        resolve_base("x^2-2*x")        # no root in (1, 2)
    with pytest.raises(ValueError):
        resolve_base("x^2-3@1.1,1.2")  # no root in the given interval


def test_name_of():
    assert catalog.name_of(resolve_base("x^2-x-1")) == "G"
    assert catalog.name_of(multinacci(4)) == "T4"
