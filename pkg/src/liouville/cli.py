"""Command-line front end.

Every subcommand sieves exactly the range it needs, runs one library
operation and writes a document as text, JSON or CSV.  Output depends only on
the arguments, never on the worker count or on timing (unless ``--timing``).

Exit status: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .arithmetic import CoverageError, MemoryCapError, SieveConfig, sieve_liouville, sieve_mobius
from .averages import (
    DEFAULT_C,
    DEFAULT_EPS,
    autocorr_log_average,
    diagnostics,
    first_positive_summatory,
    normalized_extremes,
    twisted_sum,
    twisted_sup,
)
from .checks import run_selftest
from .normality import (
    MODES,
    PrecisionSpec,
    base2k_digits,
    digits_needed,
    evaluate_constant,
    normality_report,
)
from .patterns import (
    PATTERN_KEYS,
    PatternSpec,
    autocorrelation,
    count_double,
    count_k_pattern,
    count_single,
    counts_csv_rows,
    counts_record,
    densities,
    sign_vectors,
)

DEFAULT_CHECKPOINTS = "1000,10000,100000,1000000,10000000"
# opt-in scan must go past the first sign change of L(x) at 906150257
LONG_RUN_THRESHOLD = 10**8


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing


def _int(text: str) -> int:
    """Integers written plainly, with underscores, or as 1e5."""
    text = text.replace("_", "")
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _positive(text: str) -> int:
    n = _int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return n


def _int_list(text: str) -> list[int]:
    return [_int(part) for part in text.split(",") if part.strip()]


def _alpha(text: str) -> Fraction | float:
    try:
        return Fraction(text) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", "-o", help="write to this file instead of standard output")
    common.add_argument("--segment-length", type=_positive, default=1 << 22)
    common.add_argument("--workers", type=_positive, default=1)

    p = argparse.ArgumentParser(prog="liouville", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("sieve", parents=[common], help="sieve lambda (or mu) over [lo, hi]")
    s.add_argument("--lo", type=_positive, default=1)
    s.add_argument("--hi", type=_positive, required=True)
    s.add_argument("--mobius", action="store_true", help="sieve mu instead of lambda")
    s.add_argument("--list", action="store_true", help="include every value")
    s.add_argument("--dump", help="write the binary SignTable to this path")

    s = sub.add_parser("patterns", parents=[common], help="sign-pattern counts over [1, x]")
    s.add_argument("--x", type=_positive, required=True)
    s.add_argument("--t", type=_int, default=1, help="shift for double patterns (0 = single)")
    s.add_argument("--offsets", help="k-pattern offsets, e.g. 0,1,2")
    s.add_argument("--signs", help="k-pattern signs, e.g. ++- or 1,1,-1; omit for all 2**k")
    s.add_argument("--places", type=_positive, default=6)

    s = sub.add_parser("autocorr", parents=[common], help="sum of lambda(n) lambda(n+t) for n <= x")
    s.add_argument("--x", type=_positive, required=True)
    s.add_argument("--t", type=_int, default=1)

    s = sub.add_parser("sums", parents=[common], help="L(x), M(x), log averages and reference curves")
    s.add_argument("--checkpoints", type=_int_list, default=_int_list(DEFAULT_CHECKPOINTS))
    s.add_argument("--t", type=_int, help="also emit the logarithmic autocorrelation at shift t")
    s.add_argument("--c", type=float, default=DEFAULT_C)
    s.add_argument("--eps", type=float, default=DEFAULT_EPS)
    s.add_argument("--extremes", action="store_true", help="running min/max of normalized L and M")
    s.add_argument("--first-positive", type=_positive, metavar="HI",
                   help="find the first n >= 2 with L(n) > 0 up to HI")
    s.add_argument("--long-running", action="store_true",
                   help=f"allow --first-positive beyond {LONG_RUN_THRESHOLD}")

    s = sub.add_parser("twisted", parents=[common], help="twisted exponential sums")
    s.add_argument("--x", type=_positive, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha", type=_alpha)
    g.add_argument("--grid", type=_int, help="scan alpha = j/GRID and report the maximum")

    s = sub.add_parser("constant", parents=[common], help="decimal digits of sum (1+lambda(n))/2**n")
    s.add_argument("--digits", type=_positive, required=True)
    s.add_argument("--guard-bits", type=_int, default=64)

    s = sub.add_parser("normality", parents=[common], help="digit frequencies in bases 2**k")
    s.add_argument("--x", type=_positive, required=True, help="digits per (base, mode)")
    s.add_argument("--bases", type=_int_list, default=[2, 4])
    s.add_argument("--modes", default="overlapping,paired")
    s.add_argument("--emit-digits", metavar="PATH", help="also write one digit stream to PATH")
    s.add_argument("--emit-base", type=_int, default=4)
    s.add_argument("--emit-mode", choices=MODES, default="overlapping")
    s.add_argument("--digit-format", choices=("raw", "packed"), default="raw")

    s = sub.add_parser("report", parents=[common], help="double-sign table with expected counts")
    s.add_argument("--x", type=_positive, default=100_000)
    s.add_argument("--t", type=_int, default=1)
    s.add_argument("--places", type=_positive, default=6)
    s.add_argument("--timing", action="store_true", help="add wall-clock seconds to the metadata")

    s = sub.add_parser("selftest", parents=[common], help="run the brute-force oracle checks")
    s.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return p


# ---------------------------------------------------------------------------
# rendering


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _text_kv(doc: dict) -> str:
    return "".join(f"{k}: {v}\n" for k, v in doc.items())


def _render(fmt: str, doc, rows=None, text=None) -> str:
    if fmt == "json":
        return _json(doc)
    if fmt == "csv":
        return _csv(rows if rows is not None else [list(doc), list(doc.values())])
    return text if text is not None else _text_kv(doc)


# ---------------------------------------------------------------------------
# commands


def _cfg(args) -> SieveConfig:
    return SieveConfig(segment_length=max(2, args.segment_length), worker_count=args.workers)


def _table(args, hi: int):
    return sieve_liouville(1, hi, _cfg(args))


def cmd_sieve(args) -> str:
    if args.lo > args.hi:
        raise UsageError(f"--lo {args.lo} exceeds --hi {args.hi}")
    cfg = _cfg(args)
    if args.mobius:
        if args.dump:
            raise UsageError("--dump is only available for lambda tables")
        values = sieve_mobius(args.lo, args.hi, cfg).values(args.lo, args.hi)
        tally = {"+1": int((values == 1).sum()), "0": int((values == 0).sum()), "-1": int((values == -1).sum())}
        name = "mobius"
    else:
        table = sieve_liouville(args.lo, args.hi, cfg)
        if args.dump:
            table.save(args.dump)
        values = table.signs(args.lo, args.hi)
        plus = table.popcount(args.lo, args.hi)
        tally = {"+1": plus, "-1": len(table) - plus}
        name = "liouville"
    doc = {"function": name, "lo": args.lo, "hi": args.hi, "counts": tally}
    if args.list:
        doc["values"] = values.tolist()
    if args.list:
        rows = [["n", "value"]] + [[args.lo + i, int(v)] for i, v in enumerate(values)]
    else:
        rows = [["function", "lo", "hi"] + [f"count{k}" for k in tally], [name, args.lo, args.hi, *tally.values()]]
    text = f"{name} on [{args.lo}, {args.hi}]: " + ", ".join(f"{k}: {v}" for k, v in tally.items()) + "\n"
    if args.list:
        text += " ".join(f"{int(v):+d}" for v in values) + "\n"
    return _render(args.format, doc, rows, text)


def cmd_patterns(args) -> str:
    if args.offsets is not None:
        offsets = tuple(_int_list(args.offsets))
        if args.signs:
            specs = [PatternSpec.parse(args.offsets, args.signs)]
        else:
            if not 1 <= len(offsets) <= 16:
                raise UsageError("enumerating all sign vectors needs 1 <= k <= 16; pass --signs")
            specs = [PatternSpec(offsets, sv) for sv in sign_vectors(len(offsets))]
        table = _table(args, args.x + max(offsets))
        results = {s.label: count_k_pattern(table, s, args.x) for s in specs}
        doc = {"x": args.x, "offsets": list(offsets), "counts": results}
        rows = [["pattern", "x", "count"]] + [[k, args.x, v] for k, v in results.items()]
        text = f"k-sign patterns at offsets {list(offsets)}, x={args.x}\n" + "".join(
            f"{k}  {v}\n" for k, v in results.items()
        )
        return _render(args.format, doc, rows, text)
    if args.t == 0:
        plus, minus = count_single(_table(args, args.x), args.x)
        doc = {"x": args.x, "t": 0, "counts": {"+": plus, "-": minus}}
        rows = [["pattern", "x", "count"], ["+", args.x, plus], ["-", args.x, minus]]
        return _render(args.format, doc, rows, f"x={args.x}\n+  {plus}\n-  {minus}\n")
    pc = count_double(_table(args, args.x + max(args.t, 0)), args.t, args.x)
    doc = counts_record(pc, args.places)
    text = f"double-sign patterns, t={pc.t}, x={pc.x}\n" + "".join(
        f"{k}  {pc.counts[k]}  {doc['densities'][k]}\n" for k in PATTERN_KEYS
    ) + f"autocorrelation {pc.autocorrelation}\n"
    return _render(args.format, doc, counts_csv_rows(pc, args.places), text)


def cmd_autocorr(args) -> str:
    value = autocorrelation(_table(args, args.x + max(args.t, 0)), args.t, args.x)
    doc = {"x": args.x, "t": args.t, "autocorrelation": value}
    return _render(args.format, doc, text=f"{value}\n")


def cmd_sums(args) -> str:
    if args.first_positive is not None:
        if args.first_positive > LONG_RUN_THRESHOLD and not args.long_running:
            raise UsageError(f"--first-positive above {LONG_RUN_THRESHOLD} requires --long-running")
        n = first_positive_summatory(args.first_positive, _cfg(args))
        doc = {"searched_up_to": args.first_positive, "first_positive_L": n}
        return _render(args.format, doc, text=f"first n >= 2 with L(n) > 0 up to {args.first_positive}: {n}\n")
    cps = args.checkpoints
    if not cps:
        raise UsageError("no checkpoints given")
    top = max(cps) + abs(args.t or 0)
    table = _table(args, top)
    mtable = sieve_mobius(1, top, _cfg(args))
    rows = diagnostics(table, mtable, cps, args.c, args.eps)
    if args.t is not None:
        series = autocorr_log_average(table, args.t, cps)
        for row, v in zip(rows, series.values):
            row[f"autocorr_log_avg_t{args.t}"] = v
    doc = {"c": args.c, "eps": args.eps, "rows": rows}
    if args.extremes:
        doc["extremes"] = normalized_extremes(table, mtable, max(cps))
    header = list(rows[0])
    csv_rows = [header] + [[r[h] for h in header] for r in rows]
    width = max(len(h) for h in header)
    text = "".join(
        f"x = {r['x']}\n" + "".join(f"  {h.ljust(width)}  {r[h]}\n" for h in header[1:]) for r in rows
    )
    if args.extremes:
        for name, e in doc["extremes"].items():
            text += f"{name}: min {e['min']} at {e['argmin']}, max {e['max']} at {e['argmax']}\n"
    return _render(args.format, doc, csv_rows, text)


def cmd_twisted(args) -> str:
    table = _table(args, args.x)
    if args.grid is not None:
        if args.grid < 2:
            raise UsageError("--grid must be at least 2")
        alpha, mag = twisted_sup(table, args.x, args.grid)
        doc = {"x": args.x, "grid": args.grid, "alpha_max": str(alpha), "alpha_max_float": float(alpha),
               "magnitude": mag}
        return _render(args.format, doc, text=f"max |S| on grid {args.grid}: {mag!r} at alpha = {alpha}\n")
    s = twisted_sum(table, args.alpha, args.x)
    doc = {"x": args.x, "alpha": str(args.alpha), "re": s.real, "im": s.imag, "abs": abs(s)}
    return _render(args.format, doc, text=f"S({args.alpha}, {args.x}) = {s.real!r} {s.imag:+.17g}i\n")


def cmd_constant(args) -> str:
    spec = PrecisionSpec(args.digits, args.guard_bits)
    value = evaluate_constant(_table(args, spec.bits_needed), spec)
    doc = {"digits": args.digits, "guard_bits": args.guard_bits, "value": value}
    return _render(args.format, doc, text=value + "\n")


def cmd_normality(args) -> str:
    modes = [m for m in args.modes.split(",") if m]
    for m in modes:
        if m not in MODES:
            raise UsageError(f"unknown mode {m!r}")
    need = max([digits_needed(b, m, args.x) for b in args.bases for m in modes], default=1)
    if args.emit_digits:
        need = max(need, digits_needed(args.emit_base, args.emit_mode, args.x))
    table = _table(args, need)
    report = normality_report(table, args.bases, modes, args.x)
    if args.emit_digits:
        k = args.emit_base.bit_length() - 1
        stream = base2k_digits(table, k, args.emit_mode, args.x)
        data = stream.to_packed_bits() if args.digit_format == "packed" else stream.to_raw_bytes()
        Path(args.emit_digits).write_bytes(data)
    rows = [["base", "mode", "sample_size", "chi_square", "critical_95", "passed", "counts"]]
    text = f"digit frequencies, {args.x} digits per stream\n"
    for e in report["entries"]:
        rows.append([e["base"], e["mode"], e["sample_size"], e["chi_square"], e["critical_95"], e["passed"],
                     " ".join(map(str, e["counts"]))])
        counts = " ".join(map(str, e["counts"])) if e["base"] <= 16 else f"{e['base']} cells"
        text += (f"base {e['base']:<3} {e['mode']:<11} chi2 {e['chi_square']:.6f} (dof {e['dof']}, "
                 f"95% {e['critical_95']}) {'pass' if e['passed'] else 'fail' if e['passed'] is False else 'n/a'}"
                 f"  [{counts}]\n")
    return _render(args.format, report, rows, text)


def expected_quarter(x: int) -> str:
    q, r = divmod(x, 4)
    return f"{x}/4 = {q}" + (f" rem {r}" if r else "")


def build_report(args) -> dict:
    started = time.perf_counter()
    pc = count_double(_table(args, args.x + max(args.t, 0)), args.t, args.x)
    dens = densities(pc, args.places)
    sign = {"+": "+1", "-": "-1"}
    table = [
        {"pattern": k, "lambda(n)": sign[k[0]], "lambda(n+t)": sign[k[1]], "actual": pc.counts[k],
         "expected": expected_quarter(args.x), "density": str(dens[k])}
        for k in PATTERN_KEYS
    ]
    doc = {
        "metadata": {"version": __version__, "config": {"x": args.x, "t": args.t, "places": args.places}},
        "table": table,
        "counted": pc.counted,
        "autocorrelation": pc.autocorrelation,
        "densities": {k: str(v) for k, v in dens.items()},
    }
    if args.timing:
        doc["metadata"]["wall_clock_seconds"] = round(time.perf_counter() - started, 6)
    return doc


def cmd_report(args) -> str:
    if args.t == 0:
        raise UsageError("report needs a nonzero --t")
    doc = build_report(args)
    rows = [["lambda(n)", "lambda(n+t)", "actual", "expected", "density"]] + [
        [r["lambda(n)"], r["lambda(n+t)"], r["actual"], r["expected"], r["density"]] for r in doc["table"]
    ]
    t = args.t
    lines = [
        f"Double-sign patterns of the Liouville function, t = {t}, x = {args.x}",
        f"{'lambda(n)':<10}{f'lambda(n{t:+d})':<14}{'actual':>8}   expected",
    ]
    for r in doc["table"]:
        lines.append(f"{r['lambda(n)']:<10}{r['lambda(n+t)']:<14}{r['actual']:>8}   {r['expected']}")
    lines.append(f"sum of lambda(n) lambda(n{t:+d}) over n <= {args.x}: {doc['autocorrelation']}")
    lines.append("densities: " + "  ".join(f"{k} {v}" for k, v in doc["densities"].items()))
    if args.timing:
        lines.append(f"wall clock: {doc['metadata']['wall_clock_seconds']} s")
    return _render(args.format, doc, rows, "\n".join(lines) + "\n")


def cmd_selftest(args) -> tuple[str, int]:
    results = run_selftest(inject_fault=args.inject_fault)
    ok = all(r.passed for r in results)
    doc = {"passed": ok, "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]}
    rows = [["check", "passed", "detail"]] + [[r.name, r.passed, r.detail] for r in results]
    text = "".join(f"{'PASS' if r.passed else 'FAIL'}  {r.name}{'  ' + r.detail if r.detail else ''}\n"
                   for r in results)
    text += f"{sum(r.passed for r in results)}/{len(results)} checks passed\n"
    return _render(args.format, doc, rows, text), 0 if ok else 1


COMMANDS = {
    "sieve": cmd_sieve,
    "patterns": cmd_patterns,
    "autocorr": cmd_autocorr,
    "sums": cmd_sums,
    "twisted": cmd_twisted,
    "constant": cmd_constant,
    "normality": cmd_normality,
    "report": cmd_report,
    "selftest": cmd_selftest,
}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = COMMANDS[args.command](args)
        out, status = result if isinstance(result, tuple) else (result, 0)
    except UsageError as exc:
        print(f"liouville: error: {exc}", file=sys.stderr)
        return 2
    except (MemoryCapError, CoverageError, OSError) as exc:
        print(f"liouville: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"liouville: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(out)
    else:
        stdout.write(out)
    return status


def main() -> None:
    sys.exit(run())
