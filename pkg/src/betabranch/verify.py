"""The reproduction suite behind ``betabranch verify-paper``.

Each check is a pure function returning a :class:`CheckResult`; the suite
runs them in a fixed order so the output is byte-stable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import catalog
from .cantor import dim_lower_bound, dim_reference, newhouse_sumset_cert, tauinf_ratio, thickness_report
from .enumerator import (
    Budget, ExpansionCount, b2_witness, certify_ladder, classify, classify_graph, explore, is_forced,
    is_unique, list_expansions, lower_order_scan, trib_witness, uq_word_form, viable_prefix_counts,
)
from .field import AlgebraicBase
from .words import DigitWord, value_of

FINITE = ExpansionCount.finite
ALEPH0 = ExpansionCount.aleph0()
CONTINUUM = ExpansionCount.continuum()


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"

    def to_json(self) -> dict:
        return {"number": self.number, "name": self.name, "ok": self.ok, "detail": self.detail}


def _within(decimal: Fraction, target: str, tol: Fraction = Fraction(1, 10**5)) -> bool:
    return abs(decimal - Fraction(target)) <= tol


def _mid(lo_hi: tuple[Fraction, Fraction]) -> Fraction:
    return (lo_hi[0] + lo_hi[1]) / 2


TABLE = {"G": "1.61803", "q_omega": "1.68042", "q2": "1.71064", "qf": "1.75488",
         "qKL": "1.78723", "T": "1.83929"}


def check_constants() -> tuple[bool, str]:
    bad = []
    shown = []
    for entry in catalog.constants():
        v = _mid(entry.enclosure(8))
        shown.append(f"{entry.name}={entry.decimal()}")
        if not _within(v, TABLE[entry.name]):
            bad.append(entry.name)
    return not bad, " ".join(shown) + (f"; off: {bad}" if bad else "")


def check_b2_q2() -> tuple[bool, str]:
    q2 = catalog.base("q2")
    x = value_of("011(01)*", q2)
    c = classify(x, q2)
    listed = set(list_expansions(x, q2)) if c.is_finite else set()
    want = {DigitWord.parse("011(01)*"), DigitWord.parse("10000(10)*")}
    close = _within(_mid(x.bounds(Fraction(1, 10**10))), "0.64520")
    ok = c == FINITE(2) and listed == want and close
    return ok, f"{c}, expansions {sorted(map(str, listed))}, x = {x.decimal(5)}"


def check_lower_order_scan() -> tuple[bool, str]:
    scan = lower_order_scan(4, 6)
    sols = [(h.l, h.k, catalog.name_of(h.base)) for h in scan.solutions]
    bnd = sorted((h.l, h.k, h.status) for h in scan.hits if h.status != "interior")
    ok = (sols == [(3, 5, "q2")]
          and bnd == [(3, 4, "boundary_G"), (3, 6, "boundary_qf")]
          and scan.cutoffs_hold)
    return ok, f"interior {sols}, boundary {bnd}, cutoffs {'hold' if scan.cutoffs_hold else 'FAIL'}"


def check_qf_b2() -> tuple[bool, str]:
    qf = catalog.base("qf")
    y = value_of("0000(01)*", qf)
    cy, cy1 = classify(y, qf), classify(y + 1, qf)
    x = b2_witness(y, qf)
    cx = classify(x, qf) if x is not None else None
    ok = cy == FINITE(1) and cy1 == FINITE(1) and cx == FINITE(2)
    return ok, f"y {cy}, y+1 {cy1}, witness {cx}"


def check_tribonacci() -> tuple[bool, str]:
    T = catalog.base("T")
    bad = []
    for m in range(1, 9):
        w, expected = trib_witness(m)
        x = value_of(w, T)
        c = classify(x, T)
        if c != FINITE(m + 1) or list_expansions(x, T) != expected:
            bad.append(m)
    x_inf = value_of("10*", T)
    c = classify(x_inf, T)
    cert = certify_ladder(x_inf, T)
    ok = not bad and c == ALEPH0 and cert is not None
    return ok, (f"m=1..8 finite(m+1){' except ' + str(bad) if bad else ''}; "
                f"x_inf {c}, ladder {'found' if cert else 'missing'}")


def check_aleph0_families() -> tuple[bool, str]:
    qw = catalog.base("q_omega")
    c_w = classify(value_of("100(10)*", qw), qw)
    q2 = catalog.base("q2")
    problems = []
    prev = None
    bases = []
    for n in range(1, 6):
        b = catalog.counterex_family(n)
        bases.append(b)
        w1, w2 = catalog.counterex_words(n)
        x = value_of(w1, b)
        if x != value_of(w2, b):
            problems.append(f"identity n={n}")
        cert = certify_ladder(x, b)
        if cert is None or cert.loop != (0, 1, 1) + (0, 1) * (n - 1):
            problems.append(f"ladder n={n}")
        # forced digits of the second expansion after its first digit
        s = w2.shift()
        for _ in range(2 * n):
            if not is_forced(s, b):
                problems.append(f"forced n={n}")
                break
            s = s.shift()
        if classify(x, b) != ALEPH0:
            problems.append(f"classify n={n}")
        if prev is not None and not b.compare_number(prev) < 0:
            problems.append(f"not decreasing at n={n}")
        prev = b
    lo5 = bases[4].refine(Fraction(1, 10**30))[1] - q2.refine(Fraction(1, 10**30))[0]
    hi1 = bases[0].refine(Fraction(1, 10**30))[0] - q2.refine(Fraction(1, 10**30))[1]
    if not lo5 < hi1:
        problems.append("q(5) - q2 >= q(1) - q2")
    ok = c_w == ALEPH0 and not problems
    return ok, (f"q_omega {c_w}; q(n) = " + " ".join(b.decimal(5) for b in bases)
                + (f"; problems {problems}" if problems else ""))


def check_continuum() -> tuple[bool, str]:
    G = catalog.base("G")
    c = classify(value_of("(100)*", G), G)
    counts = viable_prefix_counts(G.one, G, 40)
    rises = sum(1 for a, b in zip(counts, counts[1:]) if b > a)
    ok = c == CONTINUUM and rises >= 5
    return ok, f"(100)* {c}; prefix counts of 1 rise at {rises} of 40 depths (count {counts[-1]})"


def random_word(rng: random.Random) -> DigitWord:
    pre = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 6)))
    per = tuple(rng.randint(0, 1) for _ in range(rng.randint(1, 4)))
    return DigitWord(pre, per)


# every closing graph in the sample has a few dozen states; orbits that do
# not close (non-Pisot bases) end unresolved whatever the budget
ORACLE_BUDGET = Budget(max_states=2_000)


def oracle_agreement(b: AlgebraicBase, w: DigitWord, depth: int = 40, cap: int = 256) -> str | None:
    """None if the graph classification and the prefix-count oracle agree."""
    x = value_of(w, b)
    g = explore(x, b, ORACLE_BUDGET)
    c, _ = classify_graph(g)
    counts = viable_prefix_counts(x, b, depth, cap=cap)
    if any(v < u for u, v in zip(counts, counts[1:])):
        return f"{w}: prefix counts decrease"
    if c.is_finite and g.closed:
        if counts[-1] != c.m:
            return f"{w}: classify {c}, oracle {counts[-1]} at depth {len(counts) - 1}"
    elif c.kind in ("aleph0", "continuum"):
        if counts[-1] < 2:
            return f"{w}: classify {c} but the oracle sees a single prefix"
    return None


def check_oracle(seed: int = 20240601, samples: int = 100) -> tuple[bool, str]:
    rng = random.Random(seed)
    names = ["G", "q_omega", "q2", "qf", "T"]
    bases = [catalog.base(n) for n in names]
    failures = []
    for _ in range(samples):
        w = random_word(rng)
        for name, b in zip(names, bases):
            msg = oracle_agreement(b, w)
            if msg is not None:
                failures.append(f"{name} {msg}")
    return not failures, (f"{samples} words x {len(bases)} bases"
                          + (f"; {failures[:3]}" if failures else ", no contradiction"))


def all_words(max_pre: int, max_per: int) -> list[DigitWord]:
    """Every distinct canonical word with preperiod <= max_pre and period <= max_per."""
    out = set()
    for p in range(max_pre + 1):
        for pre_bits in range(2**p):
            pre = tuple((pre_bits >> i) & 1 for i in range(p))
            for r in range(1, max_per + 1):
                for per_bits in range(2**r):
                    out.add(DigitWord(pre, tuple((per_bits >> i) & 1 for i in range(r))))
    return sorted(out, key=lambda w: (len(w.preperiod), len(w.period), w.preperiod, w.period))


def uq_sample_bases() -> list[AlgebraicBase]:
    """Three bases strictly between G and qf."""
    return [catalog.base("q_omega"), catalog.base("q2"), catalog.resolve_base("x^2-3")]


def check_uq_form(max_pre: int = 8, max_per: int = 6) -> tuple[bool, str]:
    words = all_words(max_pre, max_per)
    bad = []
    for b in uq_sample_bases():
        for w in words:
            if uq_word_form(w, b) != is_unique(value_of(w, b), b):
                bad.append(f"{w} at {catalog.name_of(b)}")
    return not bad, f"{len(words)} words x 3 bases" + (f"; disagree {bad[:3]}" if bad else ", all agree")


def check_thickness(level_cap: int = 12) -> tuple[bool, str]:
    T = catalog.base("T")
    rep = thickness_report(T, 3, level_cap)
    per = [lv for lv in rep.levels if 4 <= lv.level <= level_cap]
    per_ok = all(lv.min_ratio is not None and lv.min_ratio > 1 for lv in per)
    ineq_ok = rep.ineq6_value.sign() > 0
    cert = newhouse_sumset_cert(T, 3, min(10, level_cap))
    ok = per_ok and ineq_ok and cert.granted and cert.target_cover is not None
    mins = min((lv.min_ratio for lv in per), default=None, key=lambda r: float(r))
    return ok, (f"levels 4..{level_cap} min bridge/gap {mins.decimal(5) if mins else '-'}; "
                f"ineq6 {rep.ineq6_value.decimal(5)}; certificate "
                f"{'granted' if cert.granted else 'refused: ' + '; '.join(cert.reasons)}")


def check_dimension() -> tuple[bool, str]:
    bounds = [dim_lower_bound(tauinf_ratio(catalog.multinacci(k), k)) for k in range(3, 9)]
    nondecreasing = all(a.lo <= b.hi and a.hi <= b.hi for a, b in zip(bounds, bounds[1:]))
    ref = dim_reference()
    ok = (nondecreasing and bounds[-1].lo > Fraction(9, 10)
          and _within((ref.lo + ref.hi) / 2, "0.78968"))
    return ok, (f"k=3..8: {' '.join(b.decimal(4) for b in bounds)}; "
                f"log G/log T = {ref.decimal(5)}")


def check_thue_morse() -> tuple[bool, str]:
    G, qf = catalog.base("G"), catalog.base("qf")
    eq = catalog.qf_family(1).same_number(G) and catalog.qf_family(2).same_number(qf)
    kl_lo, kl_hi = catalog.komornik_loreti(Fraction(1, 10**8))
    fam = [catalog.qf_family(n) for n in range(1, 7)]
    below = all(b.refine(Fraction(1, 10**12))[1] < kl_hi for b in fam)
    increasing = all(a.compare_number(b) < 0 for a, b in zip(fam, fam[1:]))
    z_ok = True
    for n in (2, 3):
        b = catalog.qf_family(n)
        z, z1 = catalog.zn_words(n)
        zv, z1v = value_of(z, b), value_of(z1, b)
        z_ok &= zv + 1 == z1v and classify(zv, b) == FINITE(1) and classify(z1v, b) == FINITE(1)
    ok = eq and below and increasing and z_ok
    return ok, (f"qf(1)=G, qf(2)=qf: {eq}; qf(1..6) = {' '.join(b.decimal(5) for b in fam)} "
                f"< {float(kl_hi):.6f}; z_n unique for n=2,3: {z_ok}")


CHECKS: list[tuple[str, Callable[..., tuple[bool, str]]]] = [
    ("constants", check_constants),
    ("B2 witness at q2", check_b2_q2),
    ("lower-order scan", check_lower_order_scan),
    ("qf in B2", check_qf_b2),
    ("Tribonacci witnesses", check_tribonacci),
    ("aleph0 families", check_aleph0_families),
    ("continuum at G", check_continuum),
    ("oracle equivalence", check_oracle),
    ("uniqueness closed form", check_uq_form),
    ("thickness and sumset", check_thickness),
    ("dimension trend", check_dimension),
    ("Thue-Morse family", check_thue_morse),
]


def run_check(i: int, level_cap: int = 12) -> CheckResult:
    name, fn = CHECKS[i - 1]
    try:
        ok, detail = fn(level_cap) if fn is check_thickness else fn()
    except Exception as exc:  # a crash is a failed check, reported as such
        ok, detail = False, f"error: {type(exc).__name__}: {exc}"
    return CheckResult(i, name, ok, detail)


def run_all(level_cap: int = 12) -> list[CheckResult]:
    return [run_check(i, level_cap) for i in range(1, len(CHECKS) + 1)]
