"""Cantor sets of unique expansions: level sets, thickness and sumset certificates.

The level-n set is the union of the cylinder intervals
[pi(w 0^inf), pi(w 1^inf)] over 0-1 words w of length n avoiding the
factors 0 1^k and 1 0^k, with touching or overlapping cylinders merged.
All endpoints and lengths are exact field elements; floats only serve as
sort keys and are backed by exact comparison whenever two values are close.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

from .field import AlgebraicBase, FieldElement

_CLOSE = 1e-9


class _Pt:
    """A field element with a cached float for cheap ordering."""

    __slots__ = ("v", "f")

    def __init__(self, v: FieldElement):
        self.v = v
        self.f = float(v)

    def cmp(self, other: _Pt) -> int:
        if self.f < other.f - _CLOSE:
            return -1
        if self.f > other.f + _CLOSE:
            return 1
        return self.v.compare(other.v)


@dataclass(frozen=True)
class Interval:
    lo: FieldElement
    hi: FieldElement

    @property
    def length(self) -> FieldElement:
        return self.hi - self.lo

    def to_json(self) -> dict:
        return {"lo": self.lo.to_string(), "hi": self.hi.to_string(),
                "decimal": [self.lo.decimal(8), self.hi.decimal(8)]}


@dataclass(frozen=True)
class IntervalSet:
    """Sorted, pairwise disjoint closed intervals with positive gaps between them."""

    intervals: tuple[Interval, ...]
    level: int

    @classmethod
    def from_intervals(cls, raw: Sequence[tuple[FieldElement, FieldElement]], level: int) -> IntervalSet:
        pts = [(_Pt(a), _Pt(b)) for a, b in raw]
        pts.sort(key=cmp_to_key(lambda x, y: x[0].cmp(y[0])))
        merged: list[list[_Pt]] = []
        for a, b in pts:
            if merged and a.cmp(merged[-1][1]) <= 0:
                if b.cmp(merged[-1][1]) > 0:
                    merged[-1][1] = b
            else:
                merged.append([a, b])
        s = cls(tuple(Interval(a.v, b.v) for a, b in merged), level)
        object.__setattr__(s, "_floats", [(a.f, b.f) for a, b in merged])
        return s

    def _fl(self) -> list[tuple[float, float]]:
        fl = getattr(self, "_floats", None)
        if fl is None:
            fl = [(float(i.lo), float(i.hi)) for i in self.intervals]
            object.__setattr__(self, "_floats", fl)
        return fl

    @property
    def hull(self) -> Interval:
        return Interval(self.intervals[0].lo, self.intervals[-1].hi)

    def gaps(self) -> list[Interval]:
        iv = self.intervals
        return [Interval(iv[i].hi, iv[i + 1].lo) for i in range(len(iv) - 1)]

    def component_containing(self, x: FieldElement) -> int | None:
        """Index of the component containing x, if any."""
        fl = self._fl()
        fx = float(x)
        i = bisect.bisect_right([a for a, _ in fl], fx + _CLOSE) - 1
        for j in (i, i - 1, i + 1):
            if 0 <= j < len(self.intervals):
                c = self.intervals[j]
                if c.lo <= x <= c.hi:
                    return j
        return None

    def contains_interval(self, lo: FieldElement, hi: FieldElement) -> bool:
        j = self.component_containing(lo)
        return j is not None and hi <= self.intervals[j].hi

    def subset_of(self, other: IntervalSet) -> bool:
        return all(other.contains_interval(c.lo, c.hi) for c in self.intervals)

    def to_json(self) -> dict:
        return {"level": self.level, "intervals": [c.to_json() for c in self.intervals]}


def avoiding_words(n: int, k: int) -> list[tuple[int, ...]]:
    """0-1 words of length n with no factor 0 1^k nor 1 0^k."""
    words: list[tuple[int, ...]] = [()]
    for _ in range(n):
        nxt = []
        for w in words:
            for d in (0, 1):
                u = w + (d,)
                if len(u) > k and u[-k - 1] != d and all(x == d for x in u[-k:]):
                    continue
                nxt.append(u)
        words = nxt
    return words


def build_level(b: AlgebraicBase, k: int, n: int) -> IntervalSet:
    if k < 3:
        raise ValueError("k must be at least 3")
    if n < 0:
        raise ValueError("level must be non-negative")
    tail = b.lam_power(n) * b.upper  # lambda^(n+1)/(1-lambda) = lambda^n/(q-1)
    raw = []
    for w in avoiding_words(n, k):
        left = b.zero
        for i, d in enumerate(w, 1):
            if d:
                left = left + b.lam_power(i)
        raw.append((left, left + tail))
    return IntervalSet.from_intervals(raw, n)


# -- thickness ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GapRecord:
    gap: Interval
    bridge_left: Interval
    bridge_right: Interval

    @property
    def ratio(self) -> FieldElement:
        """min(|P|, |P'|)/|G|."""
        g = self.gap.length
        left, right = self.bridge_left.length, self.bridge_right.length
        return (left if left <= right else right) / g

    def to_json(self) -> dict:
        r = self.ratio
        return {"gap": self.gap.to_json(), "bridge_left": self.bridge_left.to_json(),
                "bridge_right": self.bridge_right.to_json(),
                "ratio": r.to_string(), "ratio_decimal": r.decimal(8)}


def new_gaps(prev: IntervalSet | None, cur: IntervalSet) -> list[GapRecord]:
    """Gaps of ``cur`` created inside a component of ``prev``, with their adjacent bridges."""
    out = []
    iv = cur.intervals
    for i in range(len(iv) - 1):
        lo, hi = iv[i].hi, iv[i + 1].lo
        if prev is not None and not prev.contains_interval(lo, hi):
            continue
        out.append(GapRecord(Interval(lo, hi), iv[i], iv[i + 1]))
    return out


@dataclass(frozen=True)
class LevelThickness:
    level: int
    gaps: tuple[GapRecord, ...]

    @property
    def min_ratio(self) -> FieldElement | None:
        best = None
        for g in self.gaps:
            r = g.ratio
            if best is None or r < best:
                best = r
        return best

    def to_json(self) -> dict:
        m = self.min_ratio
        return {"level": self.level, "new_gaps": len(self.gaps),
                "min_ratio": None if m is None else m.to_string(),
                "min_ratio_decimal": None if m is None else m.decimal(8),
                "gaps": [g.to_json() for g in self.gaps]}


def level_thickness(levels: Sequence[IntervalSet]) -> list[LevelThickness]:
    """Per-level new gaps and bridge/gap ratios for a nested sequence of sets."""
    out = []
    prev = None
    for cur in levels:
        out.append(LevelThickness(cur.level, tuple(new_gaps(prev, cur))))
        prev = cur
    return out


def closed_form_gap_bridge(b: AlgebraicBase) -> FieldElement:
    """(1 - 2l + 2l^3 - 2l^4)/(l^2 - l^3 + l^4): level-independent gap/bridge bound for k = 3."""
    l = b.lam
    l2, l3, l4 = l * l, b.lam_power(3), b.lam_power(4)
    return (1 - 2 * l + 2 * l3 - 2 * l4) / (l2 - l3 + l4)


def ineq6(lam: FieldElement | Fraction) -> FieldElement | Fraction:
    """3l^4 - 3l^3 + l^2 + 2l - 1; positive iff the closed-form ratio is below 1."""
    return 3 * lam**4 - 3 * lam**3 + lam**2 + 2 * lam - 1


def analytic_gap(b: AlgebraicBase, n: int) -> FieldElement:
    """Length of a new level-n gap (k = 3, n >= 5)."""
    l = b.lam
    return (b.lam_power(n - 3) + b.lam_power(n) - b.lam_power(n - 2) - b.lam_power(n - 1)
            - b.lam_power(n + 1) / (1 - l))


def analytic_bridge_right(b: AlgebraicBase, n: int) -> FieldElement:
    """Lower bound for the right bridge: the union of [a1001], [a1010], [a1011]."""
    return b.lam_power(n - 1) / (1 - b.lam) - b.lam_power(n)


def analytic_bridge_left(b: AlgebraicBase, n: int) -> FieldElement:
    """|[pi(a010^inf), pi(a01101^inf)]| computed term by term."""
    l = b.lam
    return (b.lam_power(n - 2) + b.lam_power(n - 1) + b.lam_power(n + 1) / (1 - l)
            - b.lam_power(n - 2))


@dataclass(frozen=True)
class ThicknessReport:
    base: AlgebraicBase
    k: int
    levels: tuple[LevelThickness, ...]
    hull: Interval
    max_gap: FieldElement | None
    closed_form: FieldElement  # gap/bridge bound, level independent
    ineq6_value: FieldElement | None

    @property
    def global_min(self) -> FieldElement | None:
        best = None
        for lv in self.levels:
            m = lv.min_ratio
            if m is not None and (best is None or m < best):
                best = m
        return best

    def per_level_exceed_one(self, first: int = 0) -> bool:
        return all(lv.min_ratio is None or lv.min_ratio > 1 for lv in self.levels if lv.level >= first)

    def to_json(self) -> dict:
        g = self.global_min
        return {
            "k": self.k,
            "levels": [{k: v for k, v in lv.to_json().items() if k != "gaps"}
                       | {"gaps": [{"gap": r.gap.length.decimal(8),
                                     "bridge_left": r.bridge_left.length.decimal(8),
                                     "bridge_right": r.bridge_right.length.decimal(8),
                                     "ratio": r.ratio.decimal(8)} for r in lv.gaps]}
                       for lv in self.levels],
            "global_min": None if g is None else g.decimal(8),
            "max_gap": None if self.max_gap is None else self.max_gap.decimal(8),
            "hull": self.hull.to_json(),
            "closed_form_gap_over_bridge": self.closed_form.decimal(8),
            "ineq6": None if self.ineq6_value is None else self.ineq6_value.decimal(8),
        }


def _level_bound(b: AlgebraicBase, k: int) -> FieldElement:
    """Gap/bridge bound valid at every level: the exact k = 3 closed form, else 1/tauinf."""
    if k == 3:
        return closed_form_gap_bridge(b)
    return 1 / tauinf_ratio(b, k)


def thickness_report(b: AlgebraicBase, k: int, n: int) -> ThicknessReport:
    levels = [build_level(b, k, i) for i in range(n + 1)]
    per_level = tuple(level_thickness(levels))
    top = levels[-1]
    gaps = top.gaps()
    max_gap = None
    for g in gaps:
        if max_gap is None or g.length > max_gap:
            max_gap = g.length
    return ThicknessReport(b, k, per_level, top.hull, max_gap, _level_bound(b, k),
                           ineq6(b.lam) if k == 3 else None)


# -- Newhouse sumset certificate ----------------------------------------------------------

@dataclass(frozen=True)
class SumsetCertificate:
    granted: bool
    reasons: tuple[str, ...]
    report: ThicknessReport
    target_cover: tuple[Interval, Interval] | None = None

    def to_json(self) -> dict:
        out = {"granted": self.granted, "reasons": list(self.reasons),
               "min_ratio": None if self.report.global_min is None else self.report.global_min.decimal(8),
               "closed_form_gap_over_bridge": self.report.closed_form.decimal(8)}
        if self.granted:
            lim = 2 * self.report.base.upper
            out["conclusion"] = f"C + C = [0, {lim.decimal(8)}]"
        if self.target_cover is not None:
            a, c = self.target_cover
            out["target"] = (self.report.base.q * self.report.base.upper).decimal(8)
            out["target_cover"] = [a.to_json(), c.to_json()]
        return out


def sum_cover(s: IntervalSet, t: FieldElement) -> tuple[Interval, Interval] | None:
    """Components A, B of s with t in A + B, if any."""
    fl = s._fl()
    los = [a for a, _ in fl]
    ft = float(t)
    for ia, (alo, ahi) in enumerate(fl):
        # need B with B.lo <= t - A.lo and B.hi >= t - A.hi
        i = bisect.bisect_right(los, ft - alo + _CLOSE) - 1
        A = s.intervals[ia]
        for j in (i, i - 1):
            if 0 <= j < len(s.intervals):
                B = s.intervals[j]
                if B.lo <= t - A.lo and B.hi >= t - A.hi:
                    return A, B
    return None


def newhouse_sumset_cert(b: AlgebraicBase, k: int, n: int) -> SumsetCertificate:
    """Certify C + C = 2 I_q from thickness > 1; refusals name the failing condition."""
    from .catalog import multinacci

    rep = thickness_report(b, k, n)
    reasons = []
    if b.compare_number(multinacci(k)) < 0:
        reasons.append(f"q < T_{k}: the set is not contained in the unique expansions")
    if (analytic_gap(b, max(n, 5)) if k == 3 else _analytic_gap_k(b, k, max(n, k + 2))).sign() <= 0:
        reasons.append("analytic gap length is not positive: cylinders overlap")
    for lv in rep.levels:
        for g in lv.gaps:
            if not g.ratio > 1:
                reasons.append(f"level {lv.level}: bridge/gap = {g.ratio.decimal(8)} <= 1 at gap "
                               f"({g.gap.lo.decimal(8)}, {g.gap.hi.decimal(8)})")
                break
    cf = rep.closed_form
    if not (cf < 1):
        reasons.append(f"closed-form gap/bridge bound {cf.decimal(8)} is not below 1")
    if not (rep.hull.lo.is_zero() and rep.hull.hi == b.upper):
        reasons.append("hull differs from I_q")
    if rep.max_gap is not None and not rep.max_gap < rep.hull.length:
        reasons.append("maximal gap is not shorter than the hull")
    cover = sum_cover(build_level(b, k, n), b.q * b.upper)
    if cover is None:
        reasons.append(f"q/(q-1) is not covered by the level-{n} pairwise sum")
    return SumsetCertificate(not reasons, tuple(reasons), rep, cover)


def _analytic_gap_k(b: AlgebraicBase, k: int, n: int) -> FieldElement:
    """|[pi(a01^(k-1)0) + l^(n+1)/(1-l), pi(a10^(k-1)1)]| with |a| = n - k - 1."""
    m = n - k - 1
    l = b.lam
    left = b.zero
    for i in range(2, k + 1):
        left = left + b.lam_power(m + i)
    right = b.lam_power(m + 1) + b.lam_power(m + k + 1)
    return right - left - b.lam_power(n + 1) / (1 - l)


def tauinf_ratio(b: AlgebraicBase, k: int) -> FieldElement:
    """(l^2 + l^k - l^(k+1))/(2l^k - l^(k+1) + 1 - 2l): bridge/gap bound for V^(k)."""
    l = b.lam
    lk, lk1 = b.lam_power(k), b.lam_power(k + 1)
    den = 2 * lk - lk1 + 1 - 2 * l
    if den.is_zero():
        raise ZeroDivisionError("tauinf denominator vanishes")
    return (l * l + lk - lk1) / den


@dataclass(frozen=True)
class Enclosure:
    """A real number known to lie in [lo, hi] (exact dyadic endpoints)."""

    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def decimal(self, places: int = 6) -> str:
        from .field import _round_decimal
        return _round_decimal((self.lo + self.hi) / 2, places)

    def to_json(self) -> dict:
        return {"lo": f"{float(self.lo):.12f}", "hi": f"{float(self.hi):.12f}",
                "decimal": self.decimal()}


def _iv_hull(iv, lo: Fraction, hi: Fraction):
    a = iv.mpf(lo.numerator) / lo.denominator
    b = iv.mpf(hi.numerator) / hi.denominator
    return iv.mpf([a.a, b.b])


def _to_enclosure(r) -> Enclosure:
    ends = []
    for sign, man, exp, _bc in r._mpi_:  # raw (sign, mantissa, exponent, bitcount)
        v = Fraction(int(man)) * Fraction(2) ** int(exp)
        ends.append(-v if sign else v)
    return Enclosure(*ends)


def dim_lower_bound(tau, width: float = 1e-6) -> Enclosure:
    """log 2 / log(2 + 1/tau) with outward rounding; the enclosure is at most ``width`` wide."""
    import mpmath

    if isinstance(tau, FieldElement):
        t_lo, t_hi = tau.bounds(Fraction(1, 10**15))
    else:
        t_lo = t_hi = Fraction(tau)
    if t_lo <= 0:
        raise ValueError("tau must be positive")
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = 80
        t = _iv_hull(iv, t_lo, t_hi)
        out = _to_enclosure(iv.log(2) / iv.log(2 + 1 / t))
    finally:
        iv.prec = old
    if out.width > Fraction(width):
        raise ArithmeticError("enclosure wider than requested")
    return out


def dim_reference() -> Enclosure:
    """Enclosure of log G / log T."""
    import mpmath

    from .catalog import base

    lo, hi = base("T").refine(Fraction(1, 10**20))
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = 80
        g = (1 + iv.sqrt(5)) / 2
        out = _to_enclosure(iv.log(g) / iv.log(_iv_hull(iv, lo, hi)))
    finally:
        iv.prec = old
    return out
