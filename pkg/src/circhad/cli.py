"""Command-line front end.

    chl verify  --row R
    chl audit   --row R [--mode strict|extended]
    chl search  --order N [--workers K] [--confirm-excluded] [--checkpoint FILE]
    chl barker  --length N [--workers K]
    chl catalog
    chl filter  --order N

Every verb takes ``--format human|json|csv``.  Rows are comma separated
(``1,-1,-1,-1``) or compact (``+---``).  Exit status: 0 success, 1 domain
error, 2 usage error.  ``CHL_LOG`` sets the diagnostic log level.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from .audit import full_audit
from .circulant import CirculantError
from .hadamard import catalog, is_hadamard, parse_row, regular_profile
from .search import (
    PartialResultError,
    SearchError,
    SearchOptions,
    pacf,
    search_barker,
    search_circulant_hadamard,
    theoretical_filter,
)

log = logging.getLogger("circhad")


class DomainError(Exception):
    pass


def _row_text(r):
    return "".join("+" if x > 0 else "-" for x in r)


def _csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _parse(text):
    try:
        return parse_row(text)
    except CirculantError as exc:
        raise DomainError(str(exc)) from None


def cmd_verify(args):
    row = _parse(args.row)
    had = is_hadamard(row)
    prof = regular_profile(row)
    corr = pacf(row)
    data = {
        "row": list(row),
        "order": len(row),
        "is_hadamard": had,
        "regular_profile": prof.as_dict() if prof else None,
        "pacf": list(corr.values),
    }
    if args.format == "json":
        return json.dumps(data, sort_keys=True)
    if args.format == "csv":
        p = prof.as_dict() if prof else {}
        return _csv([[_row_text(row), len(row), had, p.get("h", ""), p.get("sum_sign", ""),
                      p.get("positive_count", ""), p.get("negative_count", "")]],
                    ["row", "order", "is_hadamard", "h", "sum_sign", "positive_count", "negative_count"])
    lines = [f"row {_row_text(row)} (order {len(row)})", f"is_hadamard: {str(had).lower()}"]
    if prof:
        lines.append(f"profile: h={prof.h}, row sum {prof.row_sum:+d}, "
                     f"{prof.positive_count} positive / {prof.negative_count} negative")
    else:
        lines.append("profile: none")
    lines.append("pacf: " + " ".join(str(v) for v in corr.values))
    return "\n".join(lines)


def cmd_audit(args):
    row = _parse(args.row)
    try:
        report = full_audit(row, mode=args.mode)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    if args.format == "json":
        return report.to_json()
    if args.format == "csv":
        return _csv([[s.step_id, s.verdict, json.dumps(s.witness, sort_keys=True) if s.witness else ""]
                     for s in report.steps], ["step_id", "verdict", "witness"])
    lines = [f"audit of {_row_text(row)}  h={report.h}  mode={report.mode}"]
    for s in report.steps:
        extra = f"  {json.dumps(s.witness, sort_keys=True)}" if s.witness else ""
        lines.append(f"  {s.step_id:<15} {s.verdict}{extra}")
    lines.append(report.conclusion)
    return "\n".join(lines)


def _emit_report(report, fmt):
    # duration stays out of stdout so identical runs print identical bytes
    print(json.dumps({"metadata": {"duration_ms": round(report.duration, 3)}}), file=sys.stderr)
    if fmt == "json":
        return report.to_json(include_duration=False)
    if fmt == "csv":
        return _csv([[report.order, report.mode, _row_text(r)] for r in report.survivors],
                    ["order", "mode", "survivor"])
    c = report.counters
    lines = [f"{report.mode} search, order {report.order}"]
    if report.filter_verdict is not None:
        v = report.filter_verdict
        lines.append(f"filter: {v.status} ({v.reason})")
    lines.append(f"raw_count: {report.raw_count}, classes: {len(report.survivors)}, "
                 f"empirically confirmed: {str(report.confirmed).lower()}")
    lines.append("nodes {nodes_visited}, pruned by weight {pruned_by_weight}, "
                 "pruned by partial correlation {pruned_by_partial_pacf}".format(**c))
    lines += [f"  {_row_text(r)}" for r in report.survivors]
    return "\n".join(lines)


def cmd_search(args):
    opts = SearchOptions(worker_count=args.workers, confirm_excluded_orders=args.confirm_excluded,
                         checkpoint_path=args.checkpoint)
    try:
        report = search_circulant_hadamard(args.order, opts)
    except (SearchError, PartialResultError) as exc:
        raise DomainError(str(exc)) from None
    return _emit_report(report, args.format)


def cmd_barker(args):
    try:
        report = search_barker(args.length, SearchOptions(worker_count=args.workers))
    except (SearchError, PartialResultError) as exc:
        raise DomainError(str(exc)) from None
    return _emit_report(report, args.format)


def cmd_catalog(args):
    entries = catalog()
    if args.format == "json":
        return json.dumps([e.as_dict() for e in entries])
    if args.format == "csv":
        return _csv([[e.name, e.order, _row_text(e.row)] for e in entries], ["name", "order", "first_row"])
    return "\n".join(f"{e.name:<4} order {e.order}  circ({', '.join(map(str, e.row))})" for e in entries)


def cmd_filter(args):
    try:
        v = theoretical_filter(args.order)
    except SearchError as exc:
        raise DomainError(str(exc)) from None
    if args.format == "json":
        return json.dumps(v.as_dict(), sort_keys=True)
    if args.format == "csv":
        return _csv([[v.order, v.status, v.h if v.h is not None else "", v.reason]],
                    ["order", "status", "h", "reason"])
    return f"order {v.order}: {v.status} ({v.reason})"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chl", description="Circulant Hadamard toolkit")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=("human", "json", "csv"), default="human")
        p.set_defaults(func=func)
        return p

    p = add("verify", cmd_verify, "check whether circ(R) is Hadamard")
    p.add_argument("--row", required=True)
    p = add("audit", cmd_audit, "replay the stochastic-matrix identities on a row")
    p.add_argument("--row", required=True)
    p.add_argument("--mode", choices=("strict", "extended"), default="strict")
    p = add("search", cmd_search, "exhaustive circulant Hadamard search")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--confirm-excluded", action="store_true")
    p.add_argument("--checkpoint")
    p = add("barker", cmd_barker, "exhaustive Barker sequence search")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    add("catalog", cmd_catalog, "list the ten known circulant Hadamard matrices")
    p = add("filter", cmd_filter, "classify an order before searching")
    p.add_argument("--order", type=int, required=True)
    return parser


def _glue_row_values(argv):
    # "--row -1,1,1,1" would otherwise be read as an option
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--row":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--row={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    level = os.environ.get("CHL_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_row_values(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
