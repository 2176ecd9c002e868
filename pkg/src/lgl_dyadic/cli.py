"""Command-line front end: ``lgl-dyadic {lgl,cgl,dyadic,verify,sizes}``.

Output goes to stdout unless ``--out`` is given.  Floats are written with
``repr`` so every value reads back bit-exactly.  ``verify`` exits with 0
iff every asserted property holds; 1 if one fails; 2 on usage errors and
3 on I/O errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from collections import Counter
from pathlib import Path

from . import __version__
from .campaign import SELECTORS, CampaignConfig, check_alpha_monotone, run_campaign, size_table
from .cgl import cgl_grid, cgl_quotients
from .dyadic import DyadicGrid, nested_dyadic_family, standalone_dyadic
from .errors import DomainError, RangeError
from .lgl import lgl_grid, lgl_quotients
from .report import format_value, to_csv, to_json

logger = logging.getLogger("lgl_dyadic")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
FULL_DEGREE = 2000


class UsageError(Exception):
    pass


def _parse_interval(text):
    try:
        a, b = (float(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}") from None
    if not a < b:
        raise argparse.ArgumentTypeError(f"empty interval {text!r}")
    return a, b


def _parse_alphas(text):
    try:
        values = tuple(float(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("no alpha given")
    return values


def _parse_properties(text):
    names = [s.strip() for s in text.split(",") if s.strip()]
    if names == ["all"]:
        return SELECTORS
    unknown = [n for n in names if n not in SELECTORS]
    if unknown or not names:
        raise argparse.ArgumentTypeError(f"unknown properties {unknown}; choose from {', '.join(SELECTORS)} or all")
    return tuple(names)


def _write(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _floats(a):
    return [float(v) for v in a]


# --- grid output ---------------------------------------------------------------


def _grid_table(grid, quotients, args):
    n = grid.order
    columns = {"k": list(range(n + 1)), "node": _floats(grid.nodes)}
    if args.angles:
        columns["angle"] = _floats(grid.angles)
    if args.lengths:
        columns["length"] = _floats(grid.lengths) + [None]
    if args.quotients:
        q = _floats(quotients(grid)) if n >= 2 else []
        columns["quotient"] = [None] + q + [None] * (n - len(q))
    return columns


def _emit_grid(kind, grid, quotients, args):
    table = _grid_table(grid, quotients, args)
    if args.format == "json":
        doc = {"grid": kind, "order": grid.order, "interval": list(grid.interval)}
        for name, col in table.items():
            if name == "k":
                continue
            doc[name + "s"] = [v for v in col if v is not None]
        _write(json.dumps(doc, indent=1) + "\n", args.out)
    else:
        names = list(table)
        rows = zip(*(table[c] for c in names))
        _write(_csv_text(names, rows), args.out)
    return EXIT_OK


def cmd_lgl(args) -> int:
    return _emit_grid("lgl", lgl_grid(args.N, args.interval), lgl_quotients, args)


def cmd_cgl(args) -> int:
    return _emit_grid("cgl", cgl_grid(args.N, args.interval), cgl_quotients, args)


# --- dyadic --------------------------------------------------------------------


def build_dyadic(order, alpha, nested, interval) -> DyadicGrid:
    if nested:
        return nested_dyadic_family(order, alpha, interval)[-1]
    return standalone_dyadic(order, alpha, interval)


def cmd_dyadic(args) -> int:
    if not args.alpha > 0.0:
        raise UsageError(f"--alpha must be positive, got {args.alpha}")
    d = build_dyadic(args.N, args.alpha, args.nested, args.interval)
    keys = d.node_keys()
    nodes = _floats(d.nodes())
    if args.format == "json":
        doc = {
            "order": args.N,
            "alpha": args.alpha,
            "nested": bool(args.nested),
            **d.to_dict(),
            "nodes": nodes,
        }
        _write(json.dumps(doc, indent=1) + "\n", args.out)
    else:
        rows = [(j, i, x) for (j, i), x in zip(keys, nodes)]
        _write(_csv_text(("level", "index", "node"), rows), args.out)
    return EXIT_OK


# --- verify --------------------------------------------------------------------


def _summary(result):
    counts = Counter((r.property, r.subject, r.verdict) for r in result.reports)
    lines = []
    for (prop, subject, verdict), n in sorted(counts.items()):
        lines.append(f"{prop:20s} {subject:22s} {verdict:8s} {n}")
    for r in result.failures[:20]:
        lines.append(f"FAIL {r.property} {r.subject} degree={r.degree} alpha={r.alpha} witness={r.witness}")
    return "\n".join(lines) + "\n"


def _write_reports(reports, fmt, out):
    if fmt == "json":
        _write(to_json(reports), out)
        return
    kinds = sorted({r.property for r in reports})
    if len(kinds) <= 1:
        _write(to_csv(reports), out)
        return
    groups = {k: [r for r in reports if r.property == k] for k in kinds}
    if out is None:
        sys.stdout.write("\n".join(to_csv(groups[k]) for k in kinds))
        return
    folder = Path(out)
    folder.mkdir(parents=True, exist_ok=True)
    for k in kinds:
        (folder / f"{k}.csv").write_text(to_csv(groups[k]))


def cmd_verify(args) -> int:
    cfg = CampaignConfig(
        max_degree=FULL_DEGREE if args.full else args.max_degree,
        alphas=args.alphas,
        properties=args.properties,
        interval=args.interval,
        str_boundary_mode="strict" if args.str_boundary == "strict" else "include_boundary_interval",
        timings=args.timings,
    )
    result = run_campaign(cfg)
    _write_reports(result.reports, args.format, args.out)
    if not args.quiet:
        sys.stderr.write(_summary(result))
    return EXIT_OK if result.ok else EXIT_FAIL


def cmd_sizes(args) -> int:
    max_degree = FULL_DEGREE if args.full else args.max_degree
    rows = size_table(max_degree, args.alphas, args.interval)
    cols = ("alpha", "N", "lgl_nodes", "dyadic_nodes", "nested_nodes")
    if args.format == "json":
        _write(json.dumps({"rows": rows}, indent=1) + "\n", args.out)
    else:
        _write(_csv_text(cols, ([r[c] for c in cols] for r in rows)), args.out)
    bad = check_alpha_monotone(rows)
    if bad:
        sys.stderr.write(f"node counts not monotone in alpha at {len(bad)} places, first: {bad[0]}\n")
        return EXIT_FAIL
    return EXIT_OK


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lgl-dyadic", description="LGL, CGL and dyadic grids and their properties.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", metavar="PATH", help="write here instead of stdout")
        sp.add_argument("--interval", type=_parse_interval, default=(-1.0, 1.0), metavar="a,b")

    for name, func in (("lgl", cmd_lgl), ("cgl", cmd_cgl)):
        sp = sub.add_parser(name, help=f"print the {name.upper()} grid of order N")
        sp.add_argument("N", type=int)
        sp.add_argument("--angles", action="store_true", help="add the angles eta_k")
        sp.add_argument("--lengths", action="store_true", help="add the cell lengths")
        sp.add_argument("--quotients", action="store_true", help="add the quotients of adjacent lengths")
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("dyadic", help="print the dyadic grid refined against the LGL grid of order N")
    sp.add_argument("N", type=int)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--nested", action="store_true", help="take D_N from the nested family")
    common(sp)
    sp.set_defaults(func=cmd_dyadic)

    def campaign(sp):
        sp.add_argument("--alpha", "--alphas", dest="alphas", type=_parse_alphas, default=(1.0,), metavar="A[,A...]")
        sp.add_argument("--max-degree", type=int, default=500)
        sp.add_argument("--full", action="store_true", help=f"use max degree {FULL_DEGREE}")
        common(sp)

    sp = sub.add_parser("verify", help="check grid properties over a range of degrees")
    campaign(sp)
    sp.add_argument("--properties", type=_parse_properties, default=SELECTORS, metavar="P[,P...]",
                    help="comma separated, or 'all' (default)")
    sp.add_argument("--str-boundary", choices=("include", "strict"), default="strict")
    sp.add_argument("--timings", action="store_true", help="record wall-clock times in the reports")
    sp.add_argument("-q", "--quiet", action="store_true", help="no summary on stderr")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sizes", help="node counts of LGL, standalone and nested dyadic grids")
    campaign(sp)
    sp.set_defaults(func=cmd_sizes)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, DomainError, RangeError, TypeError) as exc:
        sys.stderr.write(f"lgl-dyadic {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"lgl-dyadic {args.command}: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
