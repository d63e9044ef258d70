"""0-1 digit words, their values in base q, greedy/lazy digits, Thue-Morse."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from math import lcm
from typing import Iterable, Sequence

from .field import AlgebraicBase, FieldElement


class WordSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        self.text = text
        self.pos = pos
        super().__init__(f"{msg} at position {pos} in {text!r}")


def _primitive_root(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for d in range(1, n + 1):
        if n % d == 0 and period[:d] * (n // d) == period:
            return period[:d]
    return period


@total_ordering
@dataclass(frozen=True)
class DigitWord:
    """An eventually periodic 0-1 word ``preperiod (period)^inf``.

    Always stored canonically: the period is primitive and the preperiod is
    as short as possible (its last digit differs from the period's last
    digit).  Finite words are represented with period ``(0,)``.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        pre = tuple(int(d) for d in self.preperiod)
        per = tuple(int(d) for d in self.period)
        if not per:
            raise ValueError("period must be nonempty (use (0,) for a finite word)")
        if any(d not in (0, 1) for d in pre + per):
            raise ValueError("digits must be 0 or 1")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def finite(cls, digits: Iterable[int]) -> DigitWord:
        return cls(tuple(digits), (0,))

    @classmethod
    def parse(cls, text: str) -> DigitWord:
        return parse_word(text)

    def digit(self, i: int) -> int:
        """The i-th digit, 1-indexed."""
        p = len(self.preperiod)
        if i <= p:
            return self.preperiod[i - 1]
        return self.period[(i - p - 1) % len(self.period)]

    def prefix(self, n: int) -> tuple[int, ...]:
        pre, per = self.preperiod, self.period
        if n <= len(pre):
            return pre[:n]
        k = n - len(pre)
        reps = -(-k // len(per))
        return pre + (per * reps)[:k]

    def shift(self) -> DigitWord:
        if self.preperiod:
            return DigitWord(self.preperiod[1:], self.period)
        return DigitWord((), self.period[1:] + self.period[:1])

    def complement(self) -> DigitWord:
        return DigitWord(tuple(1 - d for d in self.preperiod), tuple(1 - d for d in self.period))

    def concat(self, head: Sequence[int]) -> DigitWord:
        """The word ``head`` followed by this word."""
        return DigitWord(tuple(head) + self.preperiod, self.period)

    def _cmp_length(self, other: DigitWord) -> int:
        return (max(len(self.preperiod), len(other.preperiod))
                + lcm(len(self.period), len(other.period)))

    def __lt__(self, other: DigitWord) -> bool:
        if not isinstance(other, DigitWord):
            return NotImplemented
        n = self._cmp_length(other)
        return self.prefix(n) < other.prefix(n)

    def __str__(self) -> str:
        pre = "".join(map(str, self.preperiod))
        per = "".join(map(str, self.period))
        return f"{pre}{per}*" if len(per) == 1 else f"{pre}({per})*"

    def __repr__(self) -> str:
        return f"DigitWord({str(self)!r})"


_TOKEN = re.compile(r"\(([01]*)\)(\*|\^(\d+))?|([01])(\*|\^(\d+))?")


def parse_word(text: str) -> DigitWord:
    """Parse e.g. ``"10000(10)*"``, ``"1(000)^2(10)*"``, ``"1*"`` or ``"0110"``.

    Parenthesised groups without ``*`` are literal (optionally ``^k``
    repeated); the final ``(...)*`` or ``d*`` is the period.  With no
    period the word is padded by 0^inf.
    """
    s = text.strip()
    if not s:
        raise WordSyntaxError(text, 0, "empty word")
    pos = 0
    pre: list[int] = []
    period: tuple[int, ...] | None = None
    while pos < len(s):
        if period is not None:
            raise WordSyntaxError(text, pos, "digits after the periodic part")
        m = _TOKEN.match(s, pos)
        if not m:
            what = "unterminated group" if s[pos] == "(" else f"unexpected character {s[pos]!r}"
            raise WordSyntaxError(text, pos, what)
        group, gsuffix, gpow, digit, dsuffix, dpow = m.groups()
        if group is not None:
            if not group:
                raise WordSyntaxError(text, pos, "empty group")
            chunk = tuple(int(c) for c in group)
            suffix, power = gsuffix, gpow
        else:
            chunk = (int(digit),)
            suffix, power = dsuffix, dpow
        if suffix == "*":
            period = chunk
        elif power is not None:
            pre.extend(chunk * int(power))
        else:
            pre.extend(chunk)
        pos = m.end()
    return DigitWord(tuple(pre), period if period is not None else (0,))


def word(text: str | DigitWord) -> DigitWord:
    return text if isinstance(text, DigitWord) else parse_word(text)


def value_of(w: DigitWord | str, b: AlgebraicBase) -> FieldElement:
    """Exact value sum a_n q^-n of the word."""
    w = word(w)
    p, r = len(w.preperiod), len(w.period)
    total = b.zero
    for i, d in enumerate(w.preperiod, 1):
        if d:
            total = total + b.lam_power(i)
    per_val = b.zero
    for j, d in enumerate(w.period, 1):
        if d:
            per_val = per_val + b.lam_power(j)
    if per_val.nums:
        geo = b._cached(("geo", r), lambda: (1 - b.lam_power(r)).inverse())
        total = total + b.lam_power(p) * per_val * geo
    return total


def _check_in_interval(x: FieldElement, b: AlgebraicBase) -> None:
    if x.sign() < 0 or x.compare(b.upper) > 0:
        raise ValueError(f"x = {x.decimal(6)} lies outside I_q = [0, 1/(q-1)]")


def greedy(x: FieldElement, b: AlgebraicBase, n: int) -> tuple[int, ...]:
    """First n greedy digits: 1 whenever q*s - 1 >= 0."""
    _check_in_interval(x, b)
    out = []
    s = x
    for _ in range(n):
        t = s.times_q()
        if (t - 1).sign() >= 0:
            out.append(1)
            s = t - 1
        else:
            out.append(0)
            s = t
    return tuple(out)


def lazy(x: FieldElement, b: AlgebraicBase, n: int) -> tuple[int, ...]:
    """First n lazy digits: 0 whenever q*s <= 1/(q-1)."""
    _check_in_interval(x, b)
    out = []
    s = x
    upper = b.upper
    for _ in range(n):
        t = s.times_q()
        if t.compare(upper) <= 0:
            out.append(0)
            s = t
        else:
            out.append(1)
            s = t - 1
    return tuple(out)


def complement(w: DigitWord) -> DigitWord:
    return w.complement()


def shift(w: DigitWord) -> DigitWord:
    return w.shift()


def thue_morse(n: int) -> tuple[int, ...]:
    """First n terms of 0110 1001 ... (m_0 first)."""
    if n < 1:
        raise ValueError("n must be positive")
    return tuple(bin(i).count("1") & 1 for i in range(n))
