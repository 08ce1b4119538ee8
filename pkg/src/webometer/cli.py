"""Command-line entry point.

Exit codes: 0 success, 1 usage/config error, 2 partial or empty result,
3 quota exhausted.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys

from . import analytics, backend as be, coverage as cov, plots, timeseries
from .config import ENV_CONFIG, Runtime, load_config
from .errors import (
    ConfigurationError,
    LoadError,
    QuotaError,
    WebometerError,
)
from .model import parse_query
from .timeseries import SampleStore

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARTIAL = 2
EXIT_QUOTA = 3


def _load_queries(path: str) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or not doc:
        raise LoadError(f"{path}: expected a non-empty JSON object of id -> query")
    return {str(k): str(v) for k, v in doc.items()}


def cmd_collect(args, runtime: Runtime) -> int:
    day = datetime.date.fromisoformat(args.day) if args.day else datetime.date.today()
    raw = _load_queries(args.queries)
    queries = {qid: parse_query(text) for qid, text in raw.items()}
    store = SampleStore(args.store or runtime.config.store_path)
    result = timeseries.collect(runtime.backends, queries, day, store)
    for name in runtime.backends:
        for qid in queries:
            s = store.series(qid, name).as_dict().get(day)
            marker = "updated" if result.updated else "added"
            if s is not None:
                print(f"{day} {qid} {name}: {s} ({marker})")
    for qid, name, reason in result.gaps:
        print(f"{day} {qid} {name}: GAP ({reason})", file=sys.stderr)
    return EXIT_PARTIAL if result.gaps else EXIT_OK


def cmd_compare(args, runtime: Runtime) -> int:
    store = SampleStore(args.store or runtime.config.store_path)
    names = list(runtime.backends)
    x_name = args.x or names[0]
    y_name = args.y or (names[1] if len(names) > 1 else names[0])
    x = store.series(args.query, x_name)
    y = store.series(args.query, y_name)
    if not x.points or not y.points:
        print(f"no stored series for query {args.query!r}", file=sys.stderr)
        return EXIT_USAGE
    report = timeseries.lag_correlate(x, y, args.max_lag)
    ratios = timeseries.ratio_summary(x, y)
    print(f"query: {args.query} ({x_name} vs {y_name})")
    for k, r in report.correlations:
        print(f"  lag {k:2d}: r = {r:+.4f}")
    print(f"best_lag: {report.best_lag} (r = {report.best_r:.4f})")
    print(
        f"ratio {y_name}/{x_name}: mean {ratios.mean_ratio:.4f} "
        f"min {ratios.min_ratio:.4f} max {ratios.max_ratio:.4f} "
        f"over {ratios.aligned_days} days"
    )
    if args.plot:
        epoch = min(x.days + y.days)
        svg = plots.line_chart(
            [
                (name, [((d - epoch).days, h) for d, h in s.points])
                for name, s in ((x_name, x), (y_name, y))
            ],
            title=f"Daily hits: {args.query}",
        )
        with open(args.plot, "w", encoding="utf-8") as fh:
            fh.write(svg)
        print(f"plot written to {args.plot}")
    return EXIT_OK


def cmd_tld(args, runtime: Runtime) -> int:
    backend = runtime.backends.get(args.backend or next(iter(runtime.backends)))
    if backend is None:
        print(f"unknown backend {args.backend!r}", file=sys.stderr)
        return EXIT_USAGE
    query = parse_query(args.query)
    urls = be.fetch_top(backend, query, args.n)
    dist = analytics.tld_distribution(list(urls))
    if dist.total_urls == 0:
        print("empty distribution (query returned no URLs)")
        return EXIT_PARTIAL
    fit = None
    if len(dist.ranked) >= 3:
        fit = analytics.fit_power_law(dist, args.fit)
    print(f"{'rank':>4}  {'tld':<8} count")
    for rank, tld, count in dist.ranked:
        print(f"{rank:>4}  {tld:<8} {count}")
    print(f"total: {dist.total_urls} urls, skipped: {dist.skipped}")
    if fit is not None:
        print(
            f"fit [{fit.method}]: a = {fit.exponent_a:.4f}, "
            f"C = {fit.c:.2f}, r2 = {fit.r_squared:.4f}"
        )
    else:
        print("fit: not enough distinct TLDs (need >= 3)")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(analytics.report_json(dist, fit))
    if args.plot:
        svg = plots.loglog_scatter(
            [(r, c) for r, _, c in dist.ranked],
            fit_line=(-fit.exponent_a, fit.log_c) if fit else None,
            title=f"TLD rank-frequency: {args.query}",
        )
        with open(args.plot, "w", encoding="utf-8") as fh:
            fh.write(svg)
        print(f"plot written to {args.plot}")
    return EXIT_OK


def cmd_formats(args, runtime: Runtime) -> int:
    backend = runtime.backends.get(args.backend or next(iter(runtime.backends)))
    if backend is None:
        print(f"unknown backend {args.backend!r}", file=sys.stderr)
        return EXIT_USAGE
    query = parse_query(args.query)
    extensions = None
    if args.mode == analytics.FACET_QUERY:
        extensions = [e for e, _ in runtime.config.sim.filetype_weights]
    dist = analytics.format_distribution(
        backend, query, extensions=extensions, mode=args.mode, k=args.n
    )
    if dist.empty:
        print("no matching documents")
        return EXIT_PARTIAL
    print(f"{'format':<8} {'count':>8} fraction")
    for ext, (count, fraction) in dist.shares.items():
        print(f"{ext:<8} {count:>8} {fraction:.4f}")
    if args.plot:
        svg = plots.bar_chart(
            [(ext, frac) for ext, (_, frac) in dist.shares.items()],
            title=f"File formats: {args.query}",
        )
        with open(args.plot, "w", encoding="utf-8") as fh:
            fh.write(svg)
        print(f"plot written to {args.plot}")
    return EXIT_OK


def cmd_coverage(args, runtime: Runtime) -> int:
    backend = runtime.backends.get(args.backend or next(iter(runtime.backends)))
    if backend is None:
        print(f"unknown backend {args.backend!r}", file=sys.stderr)
        return EXIT_USAGE
    journals = cov.load_journal_list(args.journals)
    checkpoint = cov.Checkpoint(args.checkpoint) if args.checkpoint else None
    report = cov.assess_coverage(
        backend,
        journals,
        do_backlinks=args.backlinks,
        max_journals=args.max,
        checkpoint=checkpoint,
    )
    text, csv_body = cov.summarize(report)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_body)
        print(f"report written to {args.out}")
    if any(r.status == cov.STATUS_QUOTA for r in report.rows):
        print("quota exhausted; resume later with the same --checkpoint", file=sys.stderr)
        return EXIT_QUOTA
    return EXIT_OK


def cmd_serve(args, runtime: Runtime) -> int:
    from .live_service import serve

    try:
        serve(runtime.config, port=args.port)
    except OSError as exc:
        print(f"cannot bind port {args.port}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="webometer",
        description="Search-engine hit-count analyses over a simulated or HTTP backend",
    )
    parser.add_argument(
        "--config",
        help=f"config JSON path (or set ${ENV_CONFIG})",
        default=None,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("collect", help="record daily hit counts for a query set")
    p.add_argument("--queries", required=True, help="JSON file of id -> query string")
    p.add_argument("--day", help="ISO date (default: today)")
    p.add_argument("--store", help="sample store path override")
    p.set_defaults(func=cmd_collect)

    p = sub.add_parser("compare", help="lag correlation and ratio of two series")
    p.add_argument("--query", required=True, help="query id in the store")
    p.add_argument("--max-lag", type=int, default=7, dest="max_lag")
    p.add_argument("--x", help="reference backend name (default: first)")
    p.add_argument("--y", help="comparison backend name (default: second)")
    p.add_argument("--store", help="sample store path override")
    p.add_argument("--plot", help="write an SVG line chart here")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("tld", help="TLD rank-frequency distribution and power-law fit")
    p.add_argument("--query", required=True)
    p.add_argument("--n", type=int, default=250, help="URLs to analyze (default 250)")
    p.add_argument("--backend")
    p.add_argument("--fit", choices=analytics.FIT_METHODS, default=analytics.OLS_LOGLOG)
    p.add_argument("--plot", help="write a log-log SVG scatter here")
    p.add_argument("--json", help="write the JSON report here")
    p.set_defaults(func=cmd_tld)

    p = sub.add_parser("formats", help="file-format distribution for a query")
    p.add_argument("--query", required=True)
    p.add_argument("--mode", choices=analytics.FORMAT_MODES, default=analytics.FACET_QUERY)
    p.add_argument("--backend")
    p.add_argument("--n", type=int, default=100, help="URLs to classify (url-extension mode)")
    p.add_argument("--plot", help="write an SVG bar chart here")
    p.set_defaults(func=cmd_formats)

    p = sub.add_parser("coverage", help="journal web-coverage report")
    p.add_argument("--journals", required=True, help="CSV with a title[,issn] header")
    p.add_argument("--backlinks", action="store_true")
    p.add_argument("--backend")
    p.add_argument("--max", type=int, help="stop after this many journals")
    p.add_argument("--checkpoint", help="JSONL checkpoint path for resumable runs")
    p.add_argument("--out", help="write the CSV report here")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("serve", help="start the live analysis HTTP service")
    p.add_argument("--port", type=int, default=8077)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        runtime = Runtime(config)
        return args.func(args, runtime)
    except QuotaError as exc:
        print(f"quota error: {exc}", file=sys.stderr)
        return EXIT_QUOTA
    except (ConfigurationError, LoadError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WebometerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
