"""Command line front end: ``verify``, ``table`` and ``report``."""

from __future__ import annotations

import argparse
import csv
import io
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from cdtorus.cayley_dickson import AlgebraTable, cayley_dickson
from cdtorus.report import Settings, VerificationReport, dumps_reports, verify_case
from cdtorus.tensor_algebra import DEFAULT_MAX_EXPONENT, build_B

DEFAULT_CASES = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1)]
DEFAULT_MAX_DIM = 2 ** (DEFAULT_MAX_EXPONENT + 1)

_B_SPEC = re.compile(r"^B\(\s*(\d+)\s*,\s*(\d+)\s*\)$")
_SIMPLE = {"R": 1, "C": 2, "H": 4, "O": 8}


class UnknownAlgebra(ValueError):
    pass


def parse_algebra(spec: str, max_exponent: int = DEFAULT_MAX_EXPONENT) -> AlgebraTable:
    """``R``, ``C``, ``H``, ``O`` or ``B(p,q)``."""
    key = spec.strip()
    if key.upper() in _SIMPLE:
        return cayley_dickson(_SIMPLE[key.upper()])
    m = _B_SPEC.match(key)
    if m:
        return build_B(int(m.group(1)), int(m.group(2)), max_exponent).table
    raise UnknownAlgebra(f"unknown algebra {spec!r}; expected R, C, H, O or B(p,q)")


def table_csv(table: AlgebraTable) -> str:
    """Header of column indices, then one row per ``j`` with cells ``+l``/``-l``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + list(range(table.dim)))
    for j in range(table.dim):
        cells = []
        for k in range(table.dim):
            sign, l = table.product(j, k)
            cells.append(f"{'+' if sign > 0 else '-'}{l}")
        w.writerow([j] + cells)
    return buf.getvalue()


def _parse_case(text: str) -> tuple[int, int]:
    try:
        p, q = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"case must look like 'p,q', got {text!r}")
    if p < 0 or q < 0:
        raise argparse.ArgumentTypeError("p and q must be non-negative")
    return p, q


def _max_exponent(max_dim: int) -> int:
    # real dimension 2^(2p+3q+1) <= max_dim
    if max_dim < 2:
        raise SystemExit("--max-dim must be at least 2")
    return int(math.floor(math.log2(max_dim))) - 1


def _add_run_flags(sp: argparse.ArgumentParser):
    sp.add_argument("--case", action="append", type=_parse_case, default=[], metavar="P,Q")
    sp.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM,
                    help="largest real dimension of B(1,p,q) allowed (default %(default)s)")
    sp.add_argument("--mod-prime", type=int, default=None,
                    help="force this prime (< 2**41) for modular ranks")
    sp.add_argument("--exact", action="store_true", help="rational elimination only")
    sp.add_argument("--no-timing", action="store_true", help="write 0 for every millis field")
    sp.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdtorus",
        description="Verify rank, splitting and j-invariant claims for tori built "
        "from C (x) H^p (x) O^q.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--p", type=int, default=None)
    v.add_argument("--q", type=int, default=None)
    _add_run_flags(v)
    v.add_argument("--json", default=None, metavar="PATH", help="also write the JSON report")

    t = sub.add_parser("table", help="dump a structure-constant table as CSV")
    t.add_argument("algebra", help="R, C, H, O or B(p,q)")
    t.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)

    r = sub.add_parser("report", help="write JSON reports for the given cases")
    _add_run_flags(r)
    r.add_argument("--out", required=True, metavar="PATH")
    return parser


def _settings(args) -> Settings:
    if args.mod_prime is not None and args.exact:
        raise SystemExit("--mod-prime and --exact are mutually exclusive")
    return Settings(
        max_exponent=_max_exponent(args.max_dim),
        method="exact" if args.exact else "auto",
        mod_prime=args.mod_prime,
        timing=not args.no_timing,
    )


def _verify_one(job) -> VerificationReport:
    (p, q), settings = job
    return verify_case(p, q, settings)


def run_cases(cases, settings: Settings, workers: int = 1) -> list[VerificationReport]:
    jobs = [(c, settings) for c in cases]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_verify_one, jobs))
    return [_verify_one(j) for j in jobs]


def format_report(report: VerificationReport, timing: bool = True) -> str:
    lines = [f"B(1,{report.p},{report.q})"]
    width = max(len(c.name) for c in report.checks) if report.checks else 0
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        line = f"  {status}  {c.name:<{width}}  expected {c.expected}  got {c.actual}"
        if timing:
            line += f"  [{c.millis:.0f} ms]"
        lines.append(line)
    return "\n".join(lines)


def cmd_verify(args) -> int:
    settings = _settings(args)
    if args.p is not None or args.q is not None:
        cases = [(args.p or 0, args.q or 0)] + args.case
    else:
        cases = args.case or DEFAULT_CASES
    reports = run_cases(cases, settings, args.workers)
    for rep in reports:
        print(format_report(rep, settings.timing))
    if args.json:
        _write(args.json, dumps_reports(reports))
    return _exit_code(reports)


def cmd_report(args) -> int:
    settings = _settings(args)
    reports = run_cases(args.case, settings, args.workers)
    _write(args.out, dumps_reports(reports))
    return _exit_code(reports)


def cmd_table(args) -> int:
    try:
        table = parse_algebra(args.algebra, _max_exponent(args.max_dim))
    except UnknownAlgebra as exc:
        print(exc, file=sys.stderr)
        return 2
    sys.stdout.write(table_csv(table))
    return 0


def _write(path: str, text: str):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise SystemExit(f"cannot write {path}: {exc}")


def _exit_code(reports: list[VerificationReport]) -> int:
    failed = [(r, name) for r in reports for name in r.failures()]
    for r, name in failed:
        print(f"FAILED B(1,{r.p},{r.q}): {name}", file=sys.stderr)
    return 1 if failed else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"verify": cmd_verify, "table": cmd_table, "report": cmd_report}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
