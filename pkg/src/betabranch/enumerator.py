"""Branching state graphs and exact classification of the number of expansions.

Every expansion of x in base q is an infinite path in the graph whose nodes
are the remainders s in I_q reached from x under s -> q*s - d.  Nodes are
exact field elements, so recurring orbits close into finite graphs and the
number of infinite paths can be read off the strongly connected components.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .field import AlgebraicBase, FieldElement
from .poly import IntPolynomial
from .words import DigitWord, value_of, word


class OutsideInterval(ValueError):
    """A point lies outside I_q = [0, 1/(q-1)]."""


class NotFinite(ValueError):
    """Expansions can only be listed when their number is finite."""


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Budget:
    max_states: int = 20_000
    max_depth: int = 5_000


def default_budget() -> Budget:
    """Default budget, overridable by ``BETABRANCH_BUDGET="states[,depth]"``."""
    env = os.environ.get("BETABRANCH_BUDGET")
    if not env:
        return Budget()
    parts = [p.strip() for p in env.split(",")]
    states = int(parts[0])
    depth = int(parts[1]) if len(parts) > 1 and parts[1] else Budget.max_depth
    return Budget(states, depth)


@dataclass(frozen=True)
class ExpansionCount:
    kind: str  # "finite" | "aleph0" | "continuum" | "unresolved"
    m: int | None = None
    lower_bound: int | None = None
    reason: str | None = None

    @classmethod
    def finite(cls, m: int) -> ExpansionCount:
        return cls("finite", m=m)

    @classmethod
    def aleph0(cls) -> ExpansionCount:
        return cls("aleph0")

    @classmethod
    def continuum(cls) -> ExpansionCount:
        return cls("continuum")

    @classmethod
    def unresolved(cls, lower_bound: int, reason: str) -> ExpansionCount:
        return cls("unresolved", lower_bound=lower_bound, reason=reason)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def to_json(self) -> dict:
        if self.kind == "finite":
            return {"kind": "finite", "m": self.m}
        if self.kind == "unresolved":
            return {"kind": "unresolved", "lower_bound": self.lower_bound}
        return {"kind": self.kind}

    def __str__(self) -> str:
        if self.kind == "finite":
            return f"finite({self.m})"
        if self.kind == "unresolved":
            return f"unresolved(>= {self.lower_bound}: {self.reason})"
        return self.kind


# -- switch region and digits ---------------------------------------------------------

def switch_region(b: AlgebraicBase) -> tuple[FieldElement, FieldElement]:
    """J_q = [1/q, 1/(q(q-1))]."""
    return b._cached("switch", lambda: (b.lam, b.lam * b.upper))


def in_interval(s: FieldElement, b: AlgebraicBase) -> bool:
    return s.sign() >= 0 and s.compare(b.upper) <= 0


def _check(x: FieldElement, b: AlgebraicBase) -> None:
    if not in_interval(x, b):
        raise OutsideInterval(f"x = {x.decimal(6)} lies outside I_q = [0, 1/(q-1)]")


def _successors(s: FieldElement, b: AlgebraicBase) -> list[tuple[int, FieldElement]]:
    # q*s >= 0 always and q*s - 1 <= 1/(q-1) always, for s in I_q
    t = s.times_q()
    out = []
    if t.compare(b.upper) <= 0:
        out.append((0, t))
    t1 = t - 1
    if t1.sign() >= 0:
        out.append((1, t1))
    return out


def admissible_digits(s: FieldElement, b: AlgebraicBase) -> frozenset[int]:
    _check(s, b)
    return frozenset(d for d, _ in _successors(s, b))


def is_forced(w: DigitWord | str, b: AlgebraicBase) -> bool:
    """Whether the first digit of w is the only admissible one at its value."""
    x = value_of(w, b)
    return len(admissible_digits(x, b)) == 1


def forced_one_closed_form(m: int, b: AlgebraicBase) -> bool:
    """Closed form: the first 1 of every x ~ 1(01)^m 1... is forced.

    1 - l - l^2 > l^(2m+1) - l^(2m+2) - l^(2m+3), l = 1/q.
    """
    lam = b.lam
    lhs = 1 - lam - lam * lam
    rhs = b.lam_power(2 * m + 1) - b.lam_power(2 * m + 2) - b.lam_power(2 * m + 3)
    return lhs > rhs


def forced_zero_closed_form(m: int, b: AlgebraicBase) -> bool:
    """Closed form: the first 0 of x ~ (01)^m 10000(10)^inf is forced.

    l^(2m) < (1 - l - l^2)/(1 - l - l^2 + l^5).
    """
    lam = b.lam
    u = 1 - lam - lam * lam
    return b.lam_power(2 * m) < u / (u + b.lam_power(5))


# -- the state graph -------------------------------------------------------------------

@dataclass
class StateGraph:
    base: AlgebraicBase
    root: FieldElement
    nodes: list[FieldElement]
    index: dict[FieldElement, int]
    edges: list[list[tuple[int, int]] | None]  # None: not expanded
    depth: list[int]
    parent: list[tuple[int, int] | None]
    closed: bool
    budget: Budget

    @property
    def budget_spent(self) -> dict:
        expanded = sum(1 for e in self.edges if e is not None)
        return {"states": len(self.nodes), "expanded": expanded, "depth": max(self.depth)}

    def successors(self, i: int) -> list[tuple[int, int]]:
        e = self.edges[i]
        return [] if e is None else e

    def path_to(self, i: int) -> list[int]:
        digits = []
        while self.parent[i] is not None:
            p, d = self.parent[i]
            digits.append(d)
            i = p
        return digits[::-1]

    def to_json(self) -> dict:
        return {
            "root": 0,
            "closed": self.closed,
            "nodes": [n.to_string() for n in self.nodes],
            "edges": [[i, d, j] for i, e in enumerate(self.edges) if e for d, j in e],
        }


def explore(x: FieldElement, b: AlgebraicBase, budget: Budget | None = None) -> StateGraph:
    """Breadth-first closure of the states reachable from x."""
    _check(x, b)
    budget = budget or default_budget()
    nodes = [x]
    index = {x: 0}
    edges: list = [None]
    depth = [0]
    parent: list = [None]
    queue = deque([0])
    closed = True
    while queue:
        i = queue[0]
        if depth[i] >= budget.max_depth or len(nodes) + 2 > budget.max_states:
            closed = False
            break
        queue.popleft()
        out = []
        for d, t in _successors(nodes[i], b):
            j = index.get(t)
            if j is None:
                j = len(nodes)
                nodes.append(t)
                index[t] = j
                edges.append(None)
                depth.append(depth[i] + 1)
                parent.append((i, d))
                queue.append(j)
            out.append((d, j))
        edges[i] = out
    return StateGraph(b, x, nodes, index, edges, depth, parent, closed, budget)


def _tarjan(g: StateGraph) -> list[list[int]]:
    """Strongly connected components, emitted in reverse topological order."""
    n = len(g.nodes)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for start in range(n):
        if index[start] != -1:
            continue
        work = [(start, 0)]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack[start] = True
        while work:
            v, k = work[-1]
            succ = g.successors(v)
            if k < len(succ):
                work[-1] = (v, k + 1)
                w = succ[k][1]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


@dataclass
class GraphAnalysis:
    graph: StateGraph
    components: list[list[int]]
    comp_of: list[int]
    cyclic: list[bool]
    two_cycles: list[bool]
    has_exit: list[bool]
    counts: list[int | None] = field(default_factory=list)

    def two_cycle_component(self) -> int | None:
        for c, flag in enumerate(self.two_cycles):
            if flag:
                return c
        return None


def analyze(g: StateGraph) -> GraphAnalysis:
    comps = _tarjan(g)
    comp_of = [0] * len(g.nodes)
    for c, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = c
    cyclic, two, exit_ = [], [], []
    for c, comp in enumerate(comps):
        inner = 0
        leaves = False
        for v in comp:
            for _d, w in g.successors(v):
                if comp_of[w] == c:
                    inner += 1
                else:
                    leaves = True
        cyc = inner >= 1 and (len(comp) > 1 or inner >= 1)
        cyclic.append(cyc)
        two.append(inner > len(comp))
        exit_.append(leaves)
    a = GraphAnalysis(g, comps, comp_of, cyclic, two, exit_)
    if g.closed and not any(two) and not any(cy and ex for cy, ex in zip(cyclic, exit_)):
        counts: list[int | None] = [None] * len(g.nodes)
        for c, comp in enumerate(comps):  # reverse topological: sinks first
            if cyclic[c]:
                for v in comp:
                    counts[v] = 1
            else:
                (v,) = comp
                counts[v] = sum(counts[w] for _d, w in g.successors(v))
        a.counts = counts
    return a


def _paths_of_length(g: StateGraph, n: int) -> int:
    current = {0: 1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for v, c in current.items():
            for _d, w in g.successors(v):
                nxt[w] = nxt.get(w, 0) + c
        current = nxt
    return sum(current.values())


def classify_graph(g: StateGraph) -> tuple[ExpansionCount, GraphAnalysis]:
    a = analyze(g)
    if any(a.two_cycles):
        return ExpansionCount.continuum(), a
    if not g.closed:
        frontier = [g.depth[i] for i, e in enumerate(g.edges) if e is None]
        d = min(min(frontier), 200)
        return ExpansionCount.unresolved(
            max(1, _paths_of_length(g, d)),
            f"state graph open after {len(g.nodes)} states"), a
    if any(cy and ex for cy, ex in zip(a.cyclic, a.has_exit)):
        return ExpansionCount.aleph0(), a
    return ExpansionCount.finite(a.counts[0]), a


def classify(x: FieldElement, b: AlgebraicBase, budget: Budget | None = None) -> ExpansionCount:
    """Number of expansions of x: finite(m), aleph0, continuum or unresolved."""
    return classify_graph(explore(x, b, budget))[0]


def classify_word(w: DigitWord | str, b: AlgebraicBase, budget: Budget | None = None) -> ExpansionCount:
    return classify(value_of(w, b), b, budget)


def list_expansions(x: FieldElement, b: AlgebraicBase, budget: Budget | None = None) -> list[DigitWord]:
    """All expansions of x (greedy first), when their number is finite."""
    g = explore(x, b, budget)
    count, a = classify_graph(g)
    if not count.is_finite:
        raise NotFinite(f"x has {count} expansions")
    out = []
    stack: list[tuple[int, tuple[int, ...]]] = [(0, ())]
    while stack:
        v, prefix = stack.pop()
        if a.cyclic[a.comp_of[v]]:
            cycle = []
            u = v
            while True:
                ((d, u),) = g.successors(u)
                cycle.append(d)
                if u == v:
                    break
            out.append(DigitWord(prefix, tuple(cycle)))
            continue
        for d, w in g.successors(v):
            stack.append((w, prefix + (d,)))
    for w in out:
        if value_of(w, b) != x:
            raise ArithmeticError(f"listed expansion {w} does not evaluate to x")
    out.sort(reverse=True)
    if len(out) != count.m:
        raise ArithmeticError("path enumeration disagrees with the path count")
    return out


# -- brute-force oracle ------------------------------------------------------------------

def viable_prefix_counts(x: FieldElement, b: AlgebraicBase, n: int,
                         cap: int | None = None) -> list[int]:
    """Counts of length-k words w (k = 0..n) with q^k x - sum w_i q^(k-i) in I_q.

    Exhaustive over words, no state merging.  With ``cap`` the search stops
    once a level exceeds it (the list is then shorter than n + 1).
    """
    _check(x, b)
    upper = b.upper
    level = [x]
    counts = [1]
    for _ in range(n):
        nxt = []
        for s in level:
            t = s.times_q()
            if t.compare(upper) <= 0:
                nxt.append(t)
            t1 = t - 1
            if t1.sign() >= 0:
                nxt.append(t1)
        level = nxt
        counts.append(len(level))
        if cap is not None and len(level) > cap:
            break
    return counts


def viable_prefix_count(x: FieldElement, b: AlgebraicBase, depth: int) -> int:
    return viable_prefix_counts(x, b, depth)[-1]


# -- uniqueness --------------------------------------------------------------------------

def is_unique(x: FieldElement, b: AlgebraicBase, max_steps: int | None = None) -> bool:
    """x has a unique expansion iff its forced orbit never meets J_q."""
    _check(x, b)
    limit = max_steps or default_budget().max_states
    seen = set()
    s = x
    for _ in range(limit):
        if s in seen:
            return True
        seen.add(s)
        succ = _successors(s, b)
        if len(succ) == 2:
            return False
        s = succ[0][1]
    raise BudgetExceeded("forced orbit did not recur within the step budget")


def _between_G_and_qf(b: AlgebraicBase) -> bool:
    from .catalog import base as catalog_base
    return catalog_base("G").compare_number(b) < 0 and b.compare_number(catalog_base("qf")) <= 0


def uq_word_form(w: DigitWord | str, b: AlgebraicBase) -> bool:
    """Membership in {0^k(10)^inf, 1^k(01)^inf, 0^inf, 1^inf}, valid for G < q <= qf."""
    if not _between_G_and_qf(b):
        raise ValueError("the closed form only describes unique expansions for G < q <= qf")
    w = word(w)
    if w == DigitWord((), (0,)) or w == DigitWord((), (1,)):
        return True
    if set(w.period) != {0, 1} or len(w.period) != 2:
        return False
    for k in range(len(w.preperiod) + 3):
        if w == DigitWord((0,) * k, (1, 0)) or w == DigitWord((1,) * k, (0, 1)):
            return True
    return False


# -- ladders ------------------------------------------------------------------------------

@dataclass(frozen=True)
class LadderCertificate:
    """x ~ prefix a and x ~ prefix b a, with b returning to the same state.

    Inserting ``b`` any number of times gives distinct expansions, so x has
    at least countably many.
    """

    prefix: tuple[int, ...]
    loop: tuple[int, ...]
    exit: DigitWord

    def words(self) -> tuple[DigitWord, DigitWord]:
        return self.exit.concat(self.prefix), self.exit.concat(self.prefix + self.loop)

    def verify(self, x: FieldElement, b: AlgebraicBase) -> bool:
        """Independent re-check using word values and the forced-digit test."""
        w1, w2 = self.words()
        if value_of(w1, b) != x or value_of(w2, b) != x:
            return False
        a, lp = self.exit, self.loop
        if a.digit(1) == lp[0]:
            return False
        w_loop = a.concat(lp)
        # b_2 .. b_k forced in the second expansion
        s = w_loop.shift()
        for _ in range(1, len(lp)):
            if not is_forced(s, b):
                return False
            s = s.shift()
        # every later digit of the exit branch is forced (one pass round the period)
        s = a.shift()
        for _ in range(len(a.preperiod) + len(a.period)):
            if not is_forced(s, b):
                return False
            s = s.shift()
        return True

    def to_json(self) -> dict:
        w1, w2 = self.words()
        return {"prefix": "".join(map(str, self.prefix)), "loop": "".join(map(str, self.loop)),
                "exit": str(self.exit), "expansions": [str(w1), str(w2)]}


def _forced_walk(g: StateGraph, start: int, stop: int) -> tuple[str, list[int], int]:
    """Follow single-edge nodes from ``start``.

    Returns ("loop", digits, _) on reaching ``stop``, ("tail", digits, k) when
    the walk closes on itself with the cycle starting after k digits, or
    ("fail", ...) at a branch or an unexplored node.
    """
    digits: list[int] = []
    seen: dict[int, int] = {}
    v = start
    while True:
        if v == stop:
            return "loop", digits, 0
        if v in seen:
            return "tail", digits, seen[v]
        e = g.edges[v]
        if e is None or len(e) != 1:
            return "fail", digits, 0
        seen[v] = len(digits)
        d, v = e[0]
        digits.append(d)


def find_ladder(g: StateGraph) -> LadderCertificate | None:
    for v in range(len(g.nodes)):
        e = g.edges[v]
        if e is None or len(e) != 2:
            continue
        for (d_loop, t_loop), (d_exit, t_exit) in (e, e[::-1]):
            kind, loop_digits, _ = _forced_walk(g, t_loop, v)
            if kind != "loop":
                continue
            kind, tail_digits, k = _forced_walk(g, t_exit, -1)
            if kind != "tail":
                continue
            exit_word = DigitWord((d_exit,) + tuple(tail_digits[:k]), tuple(tail_digits[k:]))
            return LadderCertificate(tuple(g.path_to(v)), (d_loop,) + tuple(loop_digits), exit_word)
    return None


def certify_ladder(x: FieldElement, b: AlgebraicBase,
                   budget: Budget | None = None) -> LadderCertificate | None:
    """A verified ladder certificate for x (at least aleph0 expansions), if one exists."""
    g = explore(x, b, budget)
    cert = find_ladder(g)
    if cert is not None and not cert.verify(x, b):
        raise ArithmeticError("ladder certificate failed re-verification")
    return cert


# -- the B2 criterion ---------------------------------------------------------------------

def b2_witness(y: FieldElement, b: AlgebraicBase, budget: Budget | None = None) -> FieldElement | None:
    """x = (y+1)/q with exactly two expansions, when y and y+1 are both unique."""
    _check(y, b)
    y1 = y + 1
    if not in_interval(y1, b):
        raise OutsideInterval(f"y + 1 = {y1.decimal(6)} lies outside I_q")
    if not (is_unique(y, b) and is_unique(y1, b)):
        return None
    x = y1 / b.q
    c = classify(x, b, budget)
    if c != ExpansionCount.finite(2):
        raise ArithmeticError(f"B2 witness classified as {c}")
    return x


# -- lower-order scan ------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanHit:
    l: int
    k: int
    base: AlgebraicBase
    status: str  # "interior" | "boundary_G" | "boundary_qf"

    def to_json(self) -> dict:
        from .catalog import name_of
        return {"l": self.l, "k": self.k, "q": name_of(self.base), "status": self.status,
                "decimal": self.base.decimal(5)}


@dataclass(frozen=True)
class ScanResult:
    hits: tuple[ScanHit, ...]
    cutoffs: tuple[dict, ...]

    @property
    def solutions(self) -> list[ScanHit]:
        return [h for h in self.hits if h.status == "interior"]

    @property
    def cutoffs_hold(self) -> bool:
        return all(c["holds"] for c in self.cutoffs)

    def to_json(self) -> dict:
        return {"solutions": [{k: v for k, v in h.to_json().items() if k in ("l", "k", "q")}
                              for h in self.solutions],
                "boundary": [h.to_json() for h in self.hits if h.status != "interior"],
                "cutoffs": [{**c, "holds": c["holds"]} for c in self.cutoffs]}


def scan_polynomial(l: int, k: int) -> IntPolynomial:
    """q^D (l^l + l^k - 2 l^2 - l + 1) at l = 1/q, D = max(k, 2)."""
    lam = [0] * (max(k, 2) + 1)
    lam[l] += 1
    lam[k] += 1
    lam[2] -= 2
    lam[1] -= 1
    lam[0] += 1
    return IntPolynomial(lam).reversed()


def _endpoint_cutoffs() -> list[dict]:
    """Exact inequalities excluding the (l, k) cases the scan does not enumerate."""
    from .catalog import base as catalog_base
    G, qf = catalog_base("G"), catalog_base("qf")
    g_lo, _ = G.refine(Fraction(1, 10**12))
    _, f_hi = qf.refine(Fraction(1, 10**12))
    lam_hi = 1 / g_lo   # > 1/G
    lam_lo = 1 / f_hi   # < 1/qf
    rhs_min = 2 * lam_lo**2 + lam_lo - 1   # RHS is increasing in lambda > 0
    out = []

    def record(name, lhs, rhs, holds):
        out.append({"case": name, "lhs": f"{float(lhs):.6f}", "rhs": f"{float(rhs):.6f}",
                    "holds": bool(holds)})

    record("l>=5,k>=5: l^l+l^k <= 2l^5 < 2l^2+l-1", 2 * lam_hi**5, rhs_min, 2 * lam_hi**5 < rhs_min)
    record("l=4,k>=6: l^4+l^6 < 2l^2+l-1", lam_hi**4 + lam_hi**6, rhs_min,
           lam_hi**4 + lam_hi**6 < rhs_min)
    record("2G^-5 < 0.2", 2 * lam_hi**5, Fraction(1, 5), 2 * lam_hi**5 < Fraction(1, 5))
    record("2qf^-2 + qf^-1 - 1 > 0.21", rhs_min, Fraction(21, 100), rhs_min > Fraction(21, 100))
    record("G^-4 + G^-6 < 0.202", lam_hi**4 + lam_hi**6, Fraction(202, 1000),
           lam_hi**4 + lam_hi**6 < Fraction(202, 1000))
    # l = 1, 2: the right side 2l^2 - 1 resp. l^2 + l - 1 is <= 0 up to l = 1/G
    lg = G.lam
    record("l=1: 2l^2-1 < 0 at l=1/G", 2 * float(lg * lg) - 1, 0, (2 * lg * lg - 1).sign() < 0)
    record("l=2: l^2+l-1 = 0 at l=1/G", float(lg * lg + lg - 1), 0, (lg * lg + lg - 1).sign() == 0)
    # l = 3, k >= 7: l^k - RHS < l^6 - RHS, negative at 1/G and rootless inside (scan of (3,6))
    f6 = lg**6 + lg**3 - 2 * lg * lg - lg + 1
    record("l=3,k>=7: l^6+l^3-2l^2-l+1 < 0 at l=1/G", float(f6), 0, f6.sign() < 0)
    return out


def lower_order_scan(lmax: int = 4, kmax: int = 6) -> ScanResult:
    """Roots of l^l + l^k = 2l^2 + l - 1 with 1/qf <= l <= 1/G, as bases q = 1/l."""
    from .catalog import base as catalog_base
    G, qf = catalog_base("G"), catalog_base("qf")
    hits = []
    for l in range(1, lmax + 1):
        for k in range(l, kmax + 1):
            p = scan_polynomial(l, k)
            for r in _roots_between(p, Fraction(8, 5), Fraction(9, 5)):
                cg = r.compare_number(G)
                cf = r.compare_number(qf)
                if cg == 0:
                    status = "boundary_G"
                elif cf == 0:
                    status = "boundary_qf"
                elif cg > 0 and cf < 0:
                    status = "interior"
                else:
                    continue
                r.label = r.label or f"root({l},{k})"
                hits.append(ScanHit(l, k, r, status))
    cutoffs = _endpoint_cutoffs()
    # the l = 3, k >= 7 argument needs (3, 6) to have no interior root
    if lmax >= 3 and kmax >= 6:
        clean = not any(h.l == 3 and h.k == 6 and h.status == "interior" for h in hits)
        cutoffs.append({"case": "(3,6) has no interior root", "lhs": "-", "rhs": "-", "holds": clean})
    return ScanResult(tuple(hits), tuple(cutoffs))


def _roots_between(p: IntPolynomial, lo: Fraction, hi: Fraction) -> list[AlgebraicBase]:
    from .field import isolate_roots
    return isolate_roots(p, lo, hi)


# -- Tribonacci witnesses ---------------------------------------------------------------------

def trib_witness(m: int) -> tuple[DigitWord, list[DigitWord]]:
    """x_m ~ 1(000)^m(10)^inf and its m+1 expected expansions (011)^j 1 (000)^(m-j) (10)^inf."""
    if m < 1:
        raise ValueError("m must be at least 1")
    x_word = DigitWord((1,) + (0, 0, 0) * m, (1, 0))
    expected = [DigitWord((0, 1, 1) * j + (1,) + (0, 0, 0) * (m - j), (1, 0)) for j in range(m + 1)]
    expected.sort(reverse=True)
    return x_word, expected
