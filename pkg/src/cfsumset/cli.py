"""Command line entry point: ``cfsumset {decompose,gaps,verify,scan}``.

Exit status: 0 on success, 1 when a check finds a counterexample or an
invariant fails, 2 on usage or domain errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import ceil
from pathlib import Path

from .cf import DomainError, format_cf, format_rational, parse_rational
from .decompose import (
    DEFAULT_MAX_STEPS,
    DecompositionResult,
    InvariantViolation,
    Termination,
    decompose,
    decompose_checked,
    decompose_mixed,
)
from .gaps import DEFAULT_N_MAX, Verdict, classify, gap, separator_decimal, verify_disjoint
from .oracle import cross_check_decomposition, enumerate_sk, gap_interior_empty, sumset_contains
from .sources import StreamSource, parse_source

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def decimal_exponent(x: Fraction) -> int:
    """``floor(log10(x))`` for ``x > 0``, from integer digit counts."""
    x = Fraction(x)
    if x <= 0:
        raise DomainError("decimal exponent needs x > 0")
    e = len(str(x.numerator)) - len(str(x.denominator))
    # now 10^(e-1) < x < 10^(e+1)
    if x < Fraction(10) ** e:
        e -= 1
    return e


def format_decimal(x: Fraction, digits: int = 20) -> str:
    """``x`` truncated towards zero to ``digits`` decimal places."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    scaled = abs(x.numerator) * 10**digits // x.denominator
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


def _rat(x: Fraction | None) -> str | None:
    return None if x is None else format_rational(x)


def _csv(text: str, convert):
    return [convert(t) for t in text.split(",") if t.strip()]


# decompose


def decomposition_report(literal: str, src, res: DecompositionResult, mode: dict) -> dict:
    p_over_q, s_over_t = res.c_value, res.b_value
    report = {
        "x": literal,
        "source": str(src),
        **mode,
        "c_digits": list(res.c_digits),
        "b_digits": list(res.b_digits),
        "p_over_q": format_rational(p_over_q),
        "s_over_t": format_rational(s_over_t),
        "termination": res.termination.value,
        "error_bound": _rat(res.achieved_error),
        "error_bound_exponent": decimal_exponent(res.achieved_error) if res.achieved_error else None,
        "steps": res.steps,
        "merged_nondecreasing": res.merged_nondecreasing,
        "diagnostics": [
            {
                "index": d.index,
                "bk_lower_bound": _rat(d.bk_lower_bound),
                "ck_lower_bound": _rat(d.ck_lower_bound),
                "error_bound": _rat(d.error_bound),
                "error_bound_exponent": decimal_exponent(d.error_bound),
            }
            for d in res.diagnostics
        ],
    }
    exact = src.exact_value()
    if exact is not None and res.termination is Termination.EXACT_FINITE:
        report["sum_equals_x"] = p_over_q + s_over_t == exact
    if isinstance(src, StreamSource) and src.provenance:
        report["provenance"] = src.provenance
    return report


def _text_decompose(r: dict) -> str:
    lines = [f"x = {r['x']}  ({r['source']})"]
    if r.get("provenance"):
        lines.append(f"digits: {r['provenance']}")
    if r.get("k") is not None:
        lines.append(f"k = {r['k']}")
    if r.get("m") is not None:
        lines.append(f"m = {r['m']}, n = {r['n']}")
    lines += [
        f"c = {format_cf(r['c_digits'])} = {r['p_over_q']}",
        f"b = {format_cf(r['b_digits'])} = {r['s_over_t']}",
        f"termination: {r['termination']} after {r['steps']} steps",
    ]
    if r["error_bound"] is not None:
        exp = r["error_bound_exponent"]
        mag = "exact" if exp is None else f"< 10^{exp + 1}"
        lines.append(f"error bound: {r['error_bound']} ({mag})")
    if "sum_equals_x" in r:
        lines.append(f"c + b == x: {r['sum_equals_x']}")
    lines.append(f"merged c1,b1,c2,... non-decreasing: {r['merged_nondecreasing']}")
    if r["diagnostics"]:
        lines.append("step  b_k bound              c_k+1 bound            error bound")
        for d in r["diagnostics"]:
            ck = d["ck_lower_bound"] or "-"
            lines.append(f"{d['index']:>4}  {_short(d['bk_lower_bound']):<22} {_short(ck):<22} 1e{d['error_bound_exponent']}")
    return "\n".join(lines)


def _short(s: str, width: int = 22) -> str:
    if s == "-" or len(s) <= width:
        return s
    return format_decimal(parse_rational(s), 3)


def cmd_decompose(args) -> tuple[int, dict]:
    src = parse_source(args.x)
    if args.m is not None or args.n is not None:
        if args.m is None or args.n is None:
            raise DomainError("--m and --n go together")
        res = decompose_mixed(src, args.m, args.n, args.max_steps)
        mode = {"mode": "mixed", "m": args.m, "n": args.n}
    elif args.k is not None:
        res = decompose_checked(src, args.k, args.max_steps)
        mode = {"mode": "checked", "k": args.k}
    else:
        res = decompose(src, args.max_steps, check=args.check)
        mode = {"mode": "plain"}
    report = decomposition_report(args.x, src, res, mode)
    ok = report.get("sum_equals_x", True)
    return (EXIT_OK if ok else EXIT_FAIL), report


# gaps


def cmd_gaps(args) -> tuple[int, dict]:
    rows = []
    for n in range(1, args.n_max + 1):
        g = gap(args.k, n)
        rows.append({
            "n": n,
            "lo": format_rational(g.lo),
            "hi": format_rational(g.hi),
            "lo_decimal": format_decimal(g.lo, args.digits),
            "hi_decimal": format_decimal(g.hi, args.digits),
        })
    cert = verify_disjoint(args.k, args.n_max)
    report = {
        "k": args.k,
        "separator": separator_decimal(args.k, args.digits),
        "separator_digits": args.digits,
        "gaps": rows,
        "disjoint": cert.ok,
    }
    return (EXIT_OK if cert.ok else EXIT_FAIL), report


def _text_gaps(r: dict) -> str:
    lines = [f"k = {r['k']}", f"2/S_k = sqrt(k^2+4) - k = {r['separator']}... (truncated to {r['separator_digits']} places)"]
    lines.append("n    lo / hi")
    for row in r["gaps"]:
        lines.append(f"{row['n']:<4} ({row['lo']}, {row['hi']})  ~ ({row['lo_decimal']}, {row['hi_decimal']})")
    lines.append(f"disjoint: {r['disjoint']}")
    return "\n".join(lines)


# verify


def cmd_verify(args) -> tuple[int, dict]:
    e = enumerate_sk(args.k, args.q_max)
    ok = True
    gap_rows = []
    for n in args.gaps:
        g = gap(args.k, n)
        empty, counter = gap_interior_empty(e, g)
        ok &= empty
        witnesses = {}
        for end in (g.lo, g.hi):
            w = sumset_contains(e, end)
            witnesses[format_rational(end)] = None if w is None else [format_rational(v) for v in w]
        gap_rows.append({
            "n": n,
            "lo": format_rational(g.lo),
            "hi": format_rational(g.hi),
            "interior_empty": empty,
            "counterexample": None if counter is None else [format_rational(v) for v in counter],
            "endpoint_witnesses": witnesses,
        })
    target_rows = []
    for t in args.targets:
        w = sumset_contains(e, t)
        target_rows.append({"target": format_rational(t), "witness": None if w is None else [format_rational(v) for v in w]})
    cross_rows = []
    for x in args.cross:
        try:
            rep = cross_check_decomposition(x, args.k, args.q_max, e)
            cross_rows.append({"x": format_rational(x), "c": format_rational(rep.c_value), "b": format_rational(rep.b_value), "agree": True})
        except InvariantViolation as exc:
            ok = False
            cross_rows.append({"x": format_rational(x), "agree": False, "error": str(exc)})
    report = {
        "k": args.k,
        "q_max": args.q_max,
        "elements": len(e),
        "gaps": gap_rows,
        "targets": target_rows,
        "cross_checks": cross_rows,
        "result": "PASS" if ok else "FAIL",
    }
    return (EXIT_OK if ok else EXIT_FAIL), report


def _text_verify(r: dict) -> str:
    lines = [f"S({r['k']}) with denominators <= {r['q_max']}: {r['elements']} elements"]
    for g in r["gaps"]:
        status = "empty" if g["interior_empty"] else f"COUNTEREXAMPLE {' + '.join(g['counterexample'])}"
        lines.append(f"G{g['n']} = ({g['lo']}, {g['hi']}): interior {status}")
        for end, w in g["endpoint_witnesses"].items():
            lines.append(f"  {end} = {' + '.join(w)}" if w else f"  {end}: no witness at this bound")
    for t in r["targets"]:
        w = t["witness"]
        lines.append(f"target {t['target']} = {' + '.join(w)}" if w else f"target {t['target']}: no witness at this bound")
    for c in r["cross_checks"]:
        lines.append(f"cross-check {c['x']} = {c['c']} + {c['b']}: agree" if c["agree"] else f"cross-check {c['x']}: {c['error']}")
    lines.append(r["result"])
    return "\n".join(lines)


# scan

_CATEGORY = {
    Verdict.COVERED: "Covered",
    Verdict.MAX_ENDPOINT: "Covered",
    Verdict.GAP_ENDPOINT: "Covered",
    Verdict.GAP: "Gap",
    Verdict.UNKNOWN: "Unknown",
}


def cmd_scan(args) -> tuple[int, dict]:
    if args.grid < 1:
        raise DomainError("--grid must be >= 1")
    top = Fraction(2, args.k)
    counts = {"Covered": 0, "Gap": 0, "Unknown": 0, "Outside": 0}
    rows = []
    for i in range(ceil(Fraction(2 * args.grid, args.k)) + 1):
        x = Fraction(i, args.grid)
        if x > top:
            cat, verdict, n = "Outside", "Outside", None
        else:
            c = classify(x, args.k, args.n_max)
            cat, verdict, n = _CATEGORY[c.verdict], c.verdict.value, c.n
        counts[cat] += 1
        rows.append({"x": format_rational(x), "decimal": format_decimal(x, 8), "category": cat, "verdict": verdict, "n": n})
    if args.out:
        lines = ["# x\tdecimal\tcategory\tverdict\tn"]
        lines += [f"{r['x']}\t{r['decimal']}\t{r['category']}\t{r['verdict']}\t{'' if r['n'] is None else r['n']}" for r in rows]
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    report = {"k": args.k, "grid": args.grid, "counts": counts, "points": rows if args.json else None}
    return EXIT_OK, report


def _text_scan(r: dict) -> str:
    c = r["counts"]
    return (f"k = {r['k']}, grid 1/{r['grid']}: Covered {c['Covered']}, Gap {c['Gap']}, "
            f"Unknown {c['Unknown']}, Outside {c['Outside']}")


# driver


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfsumset", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("decompose", help="split x into two continued fractions with large digits")
    p.add_argument("--x", required=True, help='p/q | "[a1,...]" | surd:a,b,d,c | stream:PATH | e-2 | pi-3')
    p.add_argument("--k", type=int, help="also require every digit >= k (x <= 1/(k-1))")
    p.add_argument("--m", type=int, help="with --n: require c digits >= m and b digits >= n")
    p.add_argument("--n", type=int)
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    p.add_argument("--no-check", dest="check", action="store_false", help="skip per-step invariant checks")
    common(p)
    p.set_defaults(func=cmd_decompose, text=_text_decompose)

    p = sub.add_parser("gaps", help="list the gap intervals G(k, n)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--digits", type=int, default=30, help="decimal places in approximations")
    common(p)
    p.set_defaults(func=cmd_gaps, text=_text_gaps)

    p = sub.add_parser("verify", help="brute-force checks at bounded denominators")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q-max", type=int, default=500)
    p.add_argument("--gaps", type=lambda s: _csv(s, int), default=[1, 2], help="gap indices, e.g. 1,2")
    p.add_argument("--targets", type=lambda s: _csv(s, parse_rational), default=[], help="rationals to witness")
    p.add_argument("--cross", type=lambda s: _csv(s, parse_rational), default=[], help="rationals to decompose and cross-check")
    common(p)
    p.set_defaults(func=cmd_verify, text=_text_verify)

    p = sub.add_parser("scan", help="classify the grid i/D of [0, 2/k]")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    p.add_argument("--out", help="write plot-ready columns to this file")
    common(p)
    p.set_defaults(func=cmd_scan, text=_text_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        code, report = args.func(args)
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(args.text(report))
    return code


def run() -> None:
    sys.exit(main())
