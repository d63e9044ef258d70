"""Command line interface.

Exit codes: 0 success, 1 a verification or certificate failed, 2 bad usage
(including unparsable bases and words, or points outside I_q).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import catalog
from .cantor import newhouse_sumset_cert, thickness_report
from .enumerator import (
    Budget, NotFinite, OutsideInterval, b2_witness, certify_ladder, classify, default_budget,
    is_unique, list_expansions, lower_order_scan, uq_word_form, viable_prefix_counts,
)
from .words import WordSyntaxError, greedy, lazy, parse_word, value_of


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _base(args):
    try:
        return catalog.resolve_base(args.base)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad --base {args.base!r}: {exc}") from None


def _budget(args) -> Budget:
    b = default_budget()
    if getattr(args, "budget_states", None):
        b = Budget(args.budget_states, b.max_depth)
    return b


def _point(args, b):
    if args.word is not None and args.x is not None:
        raise UsageError("give either --word or --x, not both")
    if args.word is not None:
        try:
            w = parse_word(args.word)
        except WordSyntaxError as exc:
            raise UsageError(str(exc)) from None
        return value_of(w, b), str(w)
    if args.x is not None:
        try:
            return b.const(Fraction(args.x)), args.x
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad --x {args.x!r}: {exc}") from None
    raise UsageError("a point is required: --word or --x")


def cmd_constants(args, out):
    rows = catalog.constants()
    if args.json:
        out(_dump([{"name": e.name, "value": e.decimal(), "definition": e.definition,
                    "table": e.table_value} for e in rows]))
        return 0
    for e in rows:
        out(f"{e.name:8s} {e.decimal()}  {e.definition}")
    return 0


def cmd_expand(args, out):
    b = _base(args)
    x, label = _point(args, b)
    depth = args.depth or 20
    g = "".join(map(str, greedy(x, b, depth)))
    lz = "".join(map(str, lazy(x, b, depth)))
    count = classify(x, b, _budget(args))
    result = {"x": x.decimal(8), "greedy": g, "lazy": lz, "count": count.to_json()}
    if count.is_finite:
        result["expansions"] = [str(w) for w in list_expansions(x, b, _budget(args))]
    if args.json:
        out(_dump(result))
        return 0
    out(f"x = {result['x']}  ({label}) in base {catalog.name_of(b)}")
    out(f"greedy {g}")
    out(f"lazy   {lz}")
    out(f"count  {count}")
    for w in result.get("expansions", []):
        out(f"  {w}")
    return 0


def cmd_classify(args, out):
    b = _base(args)
    x, _label = _point(args, b)
    count = classify(x, b, _budget(args))
    if args.json:
        res = count.to_json()
        cert = None if count.kind != "aleph0" else certify_ladder(x, b, _budget(args))
        if cert is not None:
            res = {**res, "ladder": cert.to_json()}
        out(_dump(res))
    else:
        out(_dump(count.to_json()))
    return 0


def cmd_unique(args, out):
    b = _base(args)
    x, label = _point(args, b)
    u = is_unique(x, b, _budget(args).max_states)
    form = None
    if args.word is not None:
        try:
            form = uq_word_form(parse_word(args.word), b)
        except ValueError:
            form = None  # the closed form only applies for G < q <= qf
    if args.json:
        out(_dump({"unique": u, "word_form": form}))
    else:
        out(f"{label}: {'unique' if u else 'not unique'}"
            + ("" if form is None else f" (closed form: {'member' if form else 'not a member'})"))
    return 0


def cmd_b2_scan(args, out):
    if args.base is not None:
        b = _base(args)
        x_pt, label = _point(args, b)
        try:
            wit = b2_witness(x_pt, b, _budget(args))
        except OutsideInterval as exc:
            raise UsageError(str(exc)) from None
        res = {"y": label, "witness": None if wit is None else wit.decimal(8)}
        out(_dump(res) if args.json else
            (f"no witness: y or y+1 is not unique" if wit is None else f"x = (y+1)/q = {res['witness']}"))
        return 0
    scan = lower_order_scan(args.lmax, args.kmax)
    res = scan.to_json()
    # like classify, the default output is already the compact JSON answer
    out(_dump(res if args.json else {"solutions": res["solutions"]}))
    return 0 if scan.cutoffs_hold else 1


def cmd_thickness(args, out):
    b = _base(args)
    rep = thickness_report(b, args.k, args.level)
    if args.json:
        out(_dump(rep.to_json()))
        return 0
    for lv in rep.levels:
        m = lv.min_ratio
        out(f"level {lv.level:3d}  new gaps {len(lv.gaps):5d}  min bridge/gap "
            f"{'-' if m is None else m.decimal(6)}")
    out(f"closed-form gap/bridge bound {rep.closed_form.decimal(6)}")
    if rep.ineq6_value is not None:
        out(f"3l^4-3l^3+l^2+2l-1 at l=1/q: {rep.ineq6_value.decimal(6)}")
    return 0


def cmd_sumset_cert(args, out):
    b = _base(args)
    cert = newhouse_sumset_cert(b, args.k, args.level)
    if args.json:
        out(_dump(cert.to_json()))
    elif cert.granted:
        out(f"granted: C + C = [0, 2/(q-1)]; q/(q-1) covered at level {args.level}")
    else:
        out("refused:")
        for r in cert.reasons:
            out(f"  {r}")
    return 0 if cert.granted else 1


def cmd_verify_paper(args, out):
    from .verify import CHECKS, run_check

    results = []
    selected = args.only or list(range(1, len(CHECKS) + 1))
    for i in selected:
        if not 1 <= i <= len(CHECKS):
            raise UsageError(f"no check number {i}")
        r = run_check(i, args.level_cap)
        results.append(r)
        if not args.json:
            out(r.line())
    ok = all(r.ok for r in results)
    if args.json:
        out(_dump({"ok": ok, "checks": [r.to_json() for r in results]}))
    else:
        out(f"{sum(r.ok for r in results)}/{len(results)} passed")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="betabranch",
                                description="Exact expansions in non-integer bases q in (1, 2).")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, point=False, base=True):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if base:
            sp.add_argument("--base", required=base is True,
                            help="catalog name, family:n, or polynomial[@lo,hi]")
        if point:
            sp.add_argument("--word", help='eventually periodic word, e.g. "011(01)*"')
            sp.add_argument("--x", help="rational point, e.g. 1 or 1/2")
            sp.add_argument("--budget-states", type=int, help="state budget for the graph search")
        return sp

    add("constants", cmd_constants, "the table of constants", base=False)
    sp = add("expand", cmd_expand, "greedy/lazy digits and all expansions", point=True)
    sp.add_argument("--depth", type=int, help="number of greedy/lazy digits (default 20)")
    add("classify", cmd_classify, "number of expansions", point=True)
    add("unique", cmd_unique, "uniqueness of the expansion", point=True)
    sp = add("b2-scan", cmd_b2_scan, "lower-order scan, or a B2 witness from --base/--word",
             point=True, base="optional")
    sp.add_argument("--lmax", type=int, default=4)
    sp.add_argument("--kmax", type=int, default=6)
    for name, fn, help_ in (("thickness", cmd_thickness, "gap/bridge thickness ledger"),
                            ("sumset-cert", cmd_sumset_cert, "Newhouse sumset certificate")):
        sp = add(name, fn, help_)
        sp.add_argument("--k", type=int, default=3, help="forbidden run length")
        sp.add_argument("--level", type=int, default=10, help="construction depth")
    sp = add("verify-paper", cmd_verify_paper, "run the reproduction suite", base=False)
    sp.add_argument("--level-cap", type=int, default=12, help="deepest thickness level")
    sp.add_argument("--only", type=int, action="append", help="run only this check (repeatable)")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "b2-scan" and args.base is None and (args.word or args.x):
        parser.error("b2-scan with --word/--x needs --base")
    if hasattr(args, "k") and args.k < 3:
        parser.error("--k must be at least 3")

    def out(line: str) -> None:
        sys.stdout.write(line + "\n")

    try:
        return args.fn(args, out)
    except UsageError as exc:
        sys.stderr.write(f"betabranch: error: {exc}\n")
        return 2
    except (OutsideInterval, NotFinite) as exc:
        sys.stderr.write(f"betabranch: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
