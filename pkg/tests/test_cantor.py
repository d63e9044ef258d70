from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from betabranch.catalog import base, multinacci, shifted_base
from betabranch.cantor import (
    IntervalSet, analytic_bridge_left, analytic_bridge_right, analytic_gap, avoiding_words,
    build_level, closed_form_gap_bridge, dim_lower_bound, dim_reference, ineq6, level_thickness,
    new_gaps, newhouse_sumset_cert, sum_cover, tauinf_ratio, thickness_report,
)

mpmath.mp.dps = 30


def strictly_below(a, c):
    """a < c for elements of possibly different fields, via certified bounds."""
    eps = Fraction(1, 10**15)
    return a.bounds(eps)[1] < c.bounds(eps)[0]


@pytest.fixture(scope="module")
def T():
    return base("T")


@pytest.fixture(scope="module")
def t_levels(T):
    return [build_level(T, 3, n) for n in range(10)]


def test_level_one_and_zero_are_the_interval(T):
    for n in (0, 1, 2, 3):
        s = build_level(T, 3, n)
        assert len(s.intervals) == 1
        assert s.hull.lo.is_zero() and s.hull.hi == T.upper


def test_first_gap_at_level_four(T):
    s = build_level(T, 3, 4)
    l = T.lam
    (g,) = s.gaps()
    assert g.lo == l**2 + l**3 + l**5 / (1 - l)
    assert g.hi == l + l**4
    # the endpoints are those of the cylinders [0110] and [1001]
    assert g.lo == l**2 + l**3 + T.lam_power(4) * T.upper
    assert g.lo < g.hi


def test_avoiding_words():
    ws = avoiding_words(4, 3)
    assert len(ws) == 14
    assert (0, 1, 1, 1) not in ws and (1, 0, 0, 0) not in ws
    assert (1, 1, 1, 1) in ws and (0, 0, 0, 0) in ws
    assert avoiding_words(0, 3) == [()]


def test_level_rejects_bad_arguments(T):
    with pytest.raises(ValueError):
        build_level(T, 2, 4)
    with pytest.raises(ValueError):
        build_level(T, 3, -1)


@pytest.mark.parametrize("name,k", [("T", 3), ("G", 3), ("T4", 4)])
def test_nesting(name, k):
    b = multinacci(4) if name == "T4" else base(name)
    levels = [build_level(b, k, n) for n in range(9)]
    for a, c in zip(levels, levels[1:]):
        assert c.subset_of(a)


def test_intervals_disjoint_and_sorted(t_levels):
    for s in t_levels:
        for a, c in zip(s.intervals, s.intervals[1:]):
            assert a.hi < c.lo
        for i in s.intervals:
            assert i.lo < i.hi


@pytest.mark.parametrize("n", [5, 6, 7, 8, 9])
def test_new_gap_lengths_are_prefix_independent(T, t_levels, n):
    recs = new_gaps(t_levels[n - 1], t_levels[n])
    assert recs
    g = analytic_gap(T, n)
    for r in recs:
        assert r.gap.length == g
        assert r.bridge_right.length >= analytic_bridge_right(T, n)


@pytest.mark.parametrize("n", [5, 8, 12])
def test_analytic_bridges_equal(T, n):
    assert analytic_bridge_left(T, n) == analytic_bridge_right(T, n)


def test_closed_form_and_ineq6(T):
    cf = closed_form_gap_bridge(T)
    assert cf < 1
    assert abs(float(cf) - 0.27) < 0.01
    assert ineq6(T.lam) > 0
    assert ineq6(Fraction(1, 2)) == Fraction(1, 16)
    # the closed form is below 1 exactly when ineq6 is positive
    for name in ["G", "q2", "qf", "T"]:
        b = base(name)
        assert (closed_form_gap_bridge(b) < 1) == (ineq6(b.lam) > 0)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=Fraction(2, 5), max_value=Fraction(7, 10), max_denominator=200))
def test_ineq6_threshold(lam):
    # 3l^4 - 3l^3 + l^2 + 2l - 1 changes sign once in (0.4, 0.7), near 0.48
    v = ineq6(lam)
    if lam > Fraction(49, 100):
        assert v > 0
    if lam < Fraction(47, 100):
        assert v < 0


def _middle_thirds(n_max):
    G = base("G")
    levels = []
    ivs = [(Fraction(0), Fraction(1))]
    for n in range(n_max + 1):
        levels.append(IntervalSet.from_intervals([(G.const(a), G.const(b)) for a, b in ivs], n))
        ivs = [p for a, b in ivs for p in ((a, a + (b - a) / 3), (b - (b - a) / 3, b))]
    return levels


def test_middle_thirds_thickness_is_one():
    per = level_thickness(_middle_thirds(6))
    ratios = {g.ratio.decimal(12) for lv in per for g in lv.gaps}
    assert ratios == {"1.000000000000"}
    assert all(g.ratio == 1 for lv in per[1:] for g in lv.gaps)
    assert per[0].min_ratio is None


def test_thickness_report_at_T(T):
    rep = thickness_report(T, 3, 10)
    assert rep.per_level_exceed_one()
    assert rep.global_min > 1
    mins = [lv.min_ratio for lv in rep.levels if lv.min_ratio is not None]
    assert rep.global_min == min(mins, key=float)
    for lv in rep.levels:
        if lv.gaps:
            assert lv.min_ratio == min((g.ratio for g in lv.gaps), key=float)
    assert rep.max_gap < rep.hull.length
    assert rep.closed_form < 1 and rep.ineq6_value > 0
    js = rep.to_json()
    assert js["k"] == 3 and len(js["levels"]) == 11


def test_sumset_granted_at_T(T):
    cert = newhouse_sumset_cert(T, 3, 10)
    assert cert.granted, cert.reasons
    a, c = cert.target_cover
    target = T.q * T.upper
    assert a.lo + c.lo <= target <= a.hi + c.hi
    js = cert.to_json()
    assert js["granted"] and js["conclusion"].startswith("C + C = [0, ")


def test_sumset_refused_at_golden():
    cert = newhouse_sumset_cert(base("G"), 3, 6)
    assert not cert.granted
    assert cert.reasons
    assert not cert.to_json()["granted"]


def test_sumset_granted_above_T5():
    b = shifted_base(multinacci(5), Fraction(1, 1000))
    cert = newhouse_sumset_cert(b, 5, 8)
    assert cert.granted, cert.reasons
    assert strictly_below(newhouse_sumset_cert(base("T"), 3, 8).report.global_min, cert.report.global_min)


def test_sum_cover_monotone(T, t_levels):
    target = T.q * T.upper
    covered = [sum_cover(s, target) is not None for s in t_levels]
    for n in range(len(covered)):
        if covered[n]:
            assert all(covered[:n])
    assert covered[-1]


def test_sum_cover_detects_miss():
    G = base("G")
    s = IntervalSet.from_intervals([(G.const(0), G.const(1)), (G.const(3), G.const(4))], 0)
    assert sum_cover(s, G.const(Fraction(5, 2))) is None
    assert sum_cover(s, G.const(4)) is not None


def test_tauinf_examples():
    T3, T5, T6 = multinacci(3), multinacci(5), multinacci(6)
    assert tauinf_ratio(T3, 3) > 1
    assert strictly_below(tauinf_ratio(T5, 5), tauinf_ratio(T6, 6))
    vals = [tauinf_ratio(multinacci(k), k) for k in range(3, 9)]
    assert all(strictly_below(a, b) for a, b in zip(vals, vals[1:]))


def test_tauinf_blows_up_near_half():
    # as l -> 1/2, the ratio behaves like l^2/(1 - 2l)
    from betabranch.field import AlgebraicBase
    for eps in (Fraction(1, 10**3), Fraction(1, 10**5)):
        q = 2 - eps
        b = AlgebraicBase(f"{q.denominator}*x-{q.numerator}", q - eps, q + eps / 2)
        r = tauinf_ratio(b, 40)
        l = 1 / q
        approx = l * l / (1 - 2 * l)
        assert abs(float(r) / float(approx) - 1) < 0.01


def test_dim_lower_bound_examples():
    e = dim_lower_bound(1)
    assert e.width <= Fraction(1, 10**6)
    assert e.lo <= Fraction(mpmath.nstr(mpmath.log(2) / mpmath.log(3), 25)) <= e.hi
    assert e.decimal(6) == "0.630930"
    assert dim_lower_bound(1000).lo >= Fraction(999, 1000)
    with pytest.raises(ValueError):
        dim_lower_bound(0)


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=Fraction(1, 10), max_value=100, max_denominator=50),
       st.fractions(min_value=Fraction(1, 100), max_value=10, max_denominator=100))
def test_dim_lower_bound_monotone(tau, step):
    a, c = dim_lower_bound(tau), dim_lower_bound(tau + step)
    assert a.lo <= c.hi
    exact = mpmath.log(2) / mpmath.log(2 + 1 / mpmath.mpf(tau.numerator) * tau.denominator)
    assert a.lo <= Fraction(mpmath.nstr(exact, 25)) <= a.hi


def test_dim_trend():
    bounds = [dim_lower_bound(tauinf_ratio(multinacci(k), k)) for k in range(3, 9)]
    assert all(a.lo <= b.hi for a, b in zip(bounds, bounds[1:]))
    assert bounds[-1].lo > Fraction(9, 10)


def test_dim_reference():
    e = dim_reference()
    ref = mpmath.log((1 + mpmath.sqrt(5)) / 2) / mpmath.log(mpmath.findroot(lambda x: x**3 - x**2 - x - 1, 1.8))
    assert e.lo <= Fraction(mpmath.nstr(ref, 25)) <= e.hi
    assert abs(float(e.lo) - 0.78968) < 1e-5


def test_json_shapes(T, t_levels):
    js = t_levels[4].to_json()
    assert js["level"] == 4 and len(js["intervals"]) == 2
    assert set(js["intervals"][0]) == {"lo", "hi", "decimal"}
    lv = level_thickness(t_levels[3:6])[1].to_json()
    assert lv["level"] == 4 and lv["new_gaps"] == 1
    assert set(dim_lower_bound(2).to_json()) == {"lo", "hi", "decimal"}
