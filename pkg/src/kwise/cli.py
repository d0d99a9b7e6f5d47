"""Command-line interface.

    kwise construct extremal-pairwise --n 6 --out p6.json
    kwise verify p6.json --k 3
    kwise solve --n 8 --p 4 --k 2 --mode orbit
    kwise certify --n 6 --p 4
    kwise table --n 4..12:2 --p 4 --k 1,2,3 --format csv
    kwise decompose p6.json --a ones

Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 infeasible LP,
4 negative verdict (independence or certificate check failed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import comb
from typing import Any, Sequence

import mpmath

from . import __version__
from .constructions import CONSTRUCTORS
from .core import APPROX_PREC, GuardError, MeasureError, OrbitMeasure, is_kwise_independent, ones
from .extremal import (
    InfeasibleLPError,
    NotPairwiseIndependentError,
    khintchine_cell,
    paper_certificate,
    quartic_decompose,
    verify_certificate,
)
from .measure_io import MeasureFormatError, dumps, format_rational, load
from .simplex import IMPLEMENTATION

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_REFUTED = 4

SIG_DIGITS = 12
PRECISION_NOTE = "~80-bit"
TABLE_COLUMNS = [
    "n",
    "p",
    "k",
    "mode",
    "moment_exact",
    "constant_approx",
    "lower_bound_ref",
    "holder_ref",
    "optimizer_is_paper_measure",
    "is_vertex",
]


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def parse_int_list(text: str) -> list[int]:
    """'4,6,8', '4..12' or '4..12:2' (inclusive ranges, optional step)."""
    out: list[int] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            if ".." in item:
                lo, _, rest = item.partition("..")
                hi, _, step = rest.partition(":")
                out.extend(range(int(lo), int(hi) + 1, int(step) if step else 1))
            else:
                out.append(int(item))
        except ValueError as exc:
            raise UsageError(f"bad integer list item {item!r}") from exc
    if not out:
        raise UsageError(f"empty integer list {text!r}")
    return out


def parse_p(text: str):
    """Integer p stays an int (exact mode); anything else is approximate."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad moment order {text!r}") from exc


def parse_a_spec(text: str | None, n: int):
    if text is None or text == "ones":
        return ones(n)
    try:
        a = tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad coefficient list {text!r}") from exc
    if len(a) != n:
        raise UsageError(f"coefficient list has {len(a)} entries, expected {n}")
    return a


def fmt_real(x) -> str:
    text = mpmath.nstr(x, SIG_DIGITS, strip_zeros=True)
    return text[:-2] if text.endswith(".0") else text


def _approx(x: Fraction):
    with mpmath.workprec(APPROX_PREC):
        return mpmath.mpf(x.numerator) / x.denominator


def fmt_p(p) -> str:
    return str(p)


def reference_columns(n: int, p) -> tuple[Any, Any]:
    with mpmath.workprec(APPROX_PREC):
        pp = mpmath.mpf(p.numerator) / p.denominator if isinstance(p, Fraction) else mpmath.mpf(p)
        return mpmath.power(n, mpmath.mpf(1) / 2 - 1 / pp), mpmath.sqrt(n)


# ---------------------------------------------------------------------------
# output


def provenance(exact: bool = True) -> dict:
    return {
        "artifact": "kwise",
        "version": __version__,
        "exact": exact,
        "approximate_precision": PRECISION_NOTE,
        "kernel": IMPLEMENTATION,
    }


def report(command: str, parameters: dict, results, exact: bool = True) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "results": results,
        "provenance": provenance(exact),
    }


def csv_text(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: row.get(c, "") for c in columns})
    return buf.getvalue()


def emit(args, text: str) -> None:
    if args.out and args.command != "construct":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def as_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands


def independence_level(m, limit: int = 6) -> int:
    """Largest k <= min(N, limit) with k-wise independence (0 if none)."""
    level = 0
    for k in range(1, min(m.n, limit) + 1):
        if not is_kwise_independent(m, k).ok:
            break
        level = k
    return level


def cmd_construct(args) -> int:
    ctor = CONSTRUCTORS[args.kind]
    try:
        m = ctor(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = dumps(m)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        summary_stream = sys.stdout
    else:
        sys.stdout.write(text)
        summary_stream = sys.stderr
    level = independence_level(m)
    summary = {
        "kind": args.kind,
        "n": m.n,
        "support_orbits": list(m.support),
        "support_size": sum(comb(m.n, w) for w in m.support),
        "independence_level": level,
        "independence_scan_limit": min(m.n, 6),
    }
    if args.format == "json":
        summary_stream.write(as_json(report("construct", {"kind": args.kind, "n": args.n}, summary)))
    elif args.format == "csv":
        summary_stream.write(csv_text([summary], list(summary)))
    else:
        summary_stream.write(
            f"{args.kind} n={m.n}: support {summary['support_size']} vectors in orbits "
            f"{summary['support_orbits']}; k-wise independent up to k={level}"
            f" (scanned k <= {summary['independence_scan_limit']})\n"
        )
    return EXIT_OK


def _load_measure(path):
    try:
        return load(path)
    except (MeasureFormatError, MeasureError, GuardError) as exc:
        raise UsageError(f"invalid measure file {path}: {exc}") from exc


def cmd_verify(args) -> int:
    m = _load_measure(args.measure)
    try:
        rep = is_kwise_independent(m, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = {
        "ok": rep.ok,
        "k": args.k,
        "n": m.n,
        "witness": list(rep.witness) if rep.witness else None,
        "witness_correlation": format_rational(rep.witness_correlation)
        if rep.witness_correlation is not None
        else None,
    }
    if args.format == "json":
        emit(args, as_json(report("verify", {"measure": str(args.measure), "k": args.k}, result)))
    elif args.format == "csv":
        emit(args, csv_text([result], list(result)))
    elif rep.ok:
        emit(args, f"ok: {args.k}-wise independent\n")
    else:
        emit(
            args,
            f"fail: not {args.k}-wise independent; witness {set(rep.witness)} has correlation "
            f"{result['witness_correlation']}\n",
        )
    return EXIT_OK if rep.ok else EXIT_REFUTED


def cell_row(cell) -> dict:
    lower, holder = reference_columns(cell.n, cell.p)
    return {
        "n": cell.n,
        "p": fmt_p(cell.p),
        "k": cell.k,
        "mode": cell.mode,
        # non-integer p: the moment is only as good as the rounded |x|^p coefficients
        "moment_exact": "~" + fmt_real(_approx(cell.moment_value))
        if cell.approximate
        else format_rational(cell.moment_value),
        "moment_is_approximate": cell.approximate,
        "constant_approx": fmt_real(cell.constant),
        "lower_bound_ref": fmt_real(lower),
        "holder_ref": fmt_real(holder),
        "optimizer_is_paper_measure": cell.optimizer_is_paper_measure,
        "is_vertex": cell.is_vertex,
        "multiple_optima": cell.multiple_optima,
        "optimizer_support": _support(cell.optimizer),
        "outside_theorem": cell.n % 2 == 1,
    }


def _support(m) -> list:
    if isinstance(m, OrbitMeasure):
        return [{"weight": w, "mass": format_rational(m.weights[w])} for w in m.support]
    return [
        {"atom": "".join("+" if x == 1 else "-" for x in v), "mass": format_rational(x)}
        for v, x in m.atoms.items()
    ]


def cmd_solve(args) -> int:
    a = parse_a_spec(args.a, args.n)
    try:
        cell = khintchine_cell(args.n, args.p, args.k, args.mode, a)
    except InfeasibleLPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    row = cell_row(cell)
    params = {"n": args.n, "p": fmt_p(args.p), "k": args.k, "mode": args.mode, "a": args.a or "ones"}
    if args.format == "json":
        doc_row = dict(row)
        for key in ("constant_approx", "lower_bound_ref", "holder_ref"):
            doc_row[key] = {"approx": row[key], "precision": PRECISION_NOTE}
        emit(args, as_json(report("solve", params, [doc_row], exact=not cell.approximate)))
    elif args.format == "csv":
        emit(args, csv_text([row], TABLE_COLUMNS))
    else:
        tag = "approximate" if cell.approximate else "exact"
        lines = [
            f"N={cell.n} p={fmt_p(cell.p)} k={cell.k} mode={cell.mode}",
            f"moment ({tag}): {row['moment_exact']}",
            f"constant: {row['constant_approx']} ({PRECISION_NOTE})",
            f"reference N^(1/2-1/p): {row['lower_bound_ref']}   sqrt(N): {row['holder_ref']}",
            f"optimizer support: {_support_text(cell.optimizer)}",
            f"optimizer is extremal_pairwise(N): {cell.optimizer_is_paper_measure}",
            f"vertex: {cell.is_vertex}   multiple optima: {cell.multiple_optima}",
        ]
        if row["outside_theorem"]:
            lines.append("note: odd N lies outside the pairwise-independence theorem; value reported as computed")
        emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _support_text(m) -> str:
    return ", ".join(
        f"{item.get('weight', item.get('atom'))}:{item['mass']}" for item in _support(m)
    )


def cmd_certify(args) -> int:
    try:
        cert = paper_certificate(args.n, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = verify_certificate(cert)
    n, p = args.n, args.p
    slack_rows = [
        {
            "w": w,
            "lhs": format_rational(Fraction(abs(2 * w - n)) ** p),
            "rhs": format_rational(Fraction(abs(2 * w - n)) ** p + s),
            "slack": format_rational(s),
            "tight": s == 0,
        }
        for w, s in enumerate(rep.slacks)
    ]
    result = {
        "u11": format_rational(cert.u11),
        "u1m": format_rational(cert.u1m),
        "um1": format_rational(cert.um1),
        "umm": format_rational(cert.umm),
        "feasible": rep.feasible,
        "equality_weights": list(rep.equality_weights),
        "certified_value": format_rational(rep.certified_value),
        "primal_value": format_rational(rep.primal_value),
        "matches_primal": rep.matches_primal,
        "slacks": slack_rows,
    }
    if args.format == "json":
        emit(args, as_json(report("certify", {"n": n, "p": p}, result)))
    elif args.format == "csv":
        emit(args, csv_text(slack_rows, ["w", "lhs", "rhs", "slack", "tight"]))
    else:
        lines = [
            f"u(1,1) = u(-1,-1) = {result['u11']};  u(1,-1) = u(-1,1) = {result['u1m']}",
            f"{'w':>4} {'|2w-N|^p':>14} {'sum u':>14} {'slack':>14}",
        ]
        for r in slack_rows:
            mark = "  tight" if r["tight"] else ""
            lines.append(f"{r['w']:>4} {r['lhs']:>14} {r['rhs']:>14} {r['slack']:>14}{mark}")
        lines += [
            f"feasible: {rep.feasible}",
            f"equality weights: {{{', '.join(map(str, rep.equality_weights))}}}",
            f"certified value: {result['certified_value']}   orbit LP optimum: "
            f"{result['primal_value']}   match: {rep.matches_primal}",
        ]
        emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if rep.feasible and rep.matches_primal else EXIT_REFUTED


def _table_cell(job: tuple) -> dict:
    n, p, k, mode = job
    base = {"n": n, "p": fmt_p(p), "k": k, "mode": mode}
    try:
        return cell_row(khintchine_cell(n, p, k, mode))
    except (ValueError, InfeasibleLPError) as exc:
        return {**base, "moment_exact": "error", "error": str(exc)}


def cmd_table(args) -> int:
    ns = parse_int_list(args.n)
    ps = [parse_p(x) for x in args.p.split(",") if x.strip()]
    ks = parse_int_list(args.k)
    jobs = [(n, p, k, args.mode) for n in ns for p in ps for k in ks]
    workers = args.jobs or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_table_cell, jobs))
    else:
        rows = [_table_cell(j) for j in jobs]
    for row in rows:
        if "error" in row:
            print(f"cell n={row['n']} p={row['p']} k={row['k']}: {row['error']}", file=sys.stderr)
    params = {"n": ns, "p": [fmt_p(p) for p in ps], "k": ks, "mode": args.mode}
    exact = all(isinstance(p, int) for p in ps)
    if args.format == "json":
        doc_rows = []
        for row in rows:
            row = dict(row)
            for key in ("constant_approx", "lower_bound_ref", "holder_ref"):
                if key in row:
                    row[key] = {"approx": row[key], "precision": PRECISION_NOTE}
            doc_rows.append(row)
        emit(args, as_json(report("table", params, doc_rows, exact=exact)))
    elif args.format == "csv":
        emit(args, csv_text(rows, TABLE_COLUMNS))
    else:
        widths = [max(len(c), 8) for c in TABLE_COLUMNS]
        lines = ["  ".join(c.rjust(w) for c, w in zip(TABLE_COLUMNS, widths))]
        for row in rows:
            lines.append("  ".join(str(row.get(c, "")).rjust(w) for c, w in zip(TABLE_COLUMNS, widths)))
        emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_decompose(args) -> int:
    m = _load_measure(args.measure)
    if not isinstance(m, OrbitMeasure):
        raise UsageError("decompose needs an exchangeable (orbit) measure file")
    a = parse_a_spec(args.a, m.n)
    try:
        dec = quartic_decompose(m, a)
    except NotPairwiseIndependentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = {
        "independent_part": format_rational(dec.independent_part),
        "c": format_rational(dec.c),
        "cross_sum": format_rational(dec.cross_sum),
        "total": format_rational(dec.total),
        "direct_moment": format_rational(dec.direct_moment),
        "reconstruction_ok": dec.consistent,
    }
    if args.format == "json":
        emit(args, as_json(report("decompose", {"measure": str(args.measure), "a": args.a or "ones"}, result)))
    elif args.format == "csv":
        emit(args, csv_text([{"field": k, "value": v} for k, v in result.items()], ["field", "value"]))
    else:
        lines = [
            f"independent part E(sum a_i eps_i)^4 (independent signs): {result['independent_part']}",
            f"4-fold correlation c: {result['c']}",
            f"distinct-index cross sum: {result['cross_sum']}",
            f"total = independent part + c * cross sum: {result['total']}",
            f"direct E(sum a_i eps_i)^4: {result['direct_moment']}",
            f"reconstruction: {'ok' if dec.consistent else 'MISMATCH'}",
        ]
        emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument(
        "--format",
        choices=["json", "csv", "text"],
        default=default if suppress else "text",
        help="output format (default: text)",
    )
    parser.add_argument("--out", default=default, help="write output to PATH")
    parser.add_argument(
        "--jobs",
        type=int,
        default=default,
        help="worker processes for table sweeps (default: logical CPUs)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kwise",
        description="k-wise independent Rademacher measures and Khintchine-type constants",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="write a closed-form measure")
    p.add_argument("kind", choices=sorted(CONSTRUCTORS))
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="check k-wise independence")
    p.add_argument("measure")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", parents=[common], help="solve one Khintchine LP")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=parse_p, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=["orbit", "full"], default="orbit")
    p.add_argument("--a", default=None, help="'ones' or comma-separated rationals")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("certify", parents=[common], help="check the closed-form dual certificate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("table", parents=[common], help="sweep (n, p, k) cells")
    p.add_argument("--n", required=True, help="e.g. '4,6,8' or '4..12:2'")
    p.add_argument("--p", required=True, help="comma-separated moment orders")
    p.add_argument("--k", required=True, help="e.g. '2' or '1..4'")
    p.add_argument("--mode", choices=["orbit", "full"], default="orbit")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("decompose", parents=[common], help="quartic moment decomposition")
    p.add_argument("measure")
    p.add_argument("--a", default=None, help="'ones' or comma-separated rationals")
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
