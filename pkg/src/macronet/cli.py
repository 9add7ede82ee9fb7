"""Command-line front end.

Commands: ingest, snapshot, report, series, growth. Exit codes: 0 on
success, 1 on data/validation errors, 2 on usage errors. Outputs go to
stdout unless --out is given, and are byte-identical for identical
store + flags; --stamp adds a wall-clock timestamp to JSON provenance.
The MACRONET_STORE environment variable supplies the default --store.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import date, datetime, timezone
from pathlib import Path

from .amounts import fmt_amount, fmt_pct
from .analysis import (
    BaselineRule,
    DEFAULT_EVENT_DATE,
    event_window,
    growth_since,
    paper_report,
    render_report_text,
    report_to_doc,
    series_table,
)
from .errors import MacronetError
from .network import (
    aggregate_to_macro,
    build_snapshot,
    export_snapshot,
    node_key,
    normalize_shares,
    snapshot_to_doc,
)
from .periods import Quarter
from .series import (
    APP_PROGRAMMES,
    IngestOptions,
    Instrument,
    SeriesStore,
    ingest_csv,
    load_store,
    parse_series_key,
    save_store,
)

ENV_STORE = "MACRONET_STORE"

_KNOWN_TOKENS = {"loans": "LOANS", "app": "APP"}


class UsageError(Exception):
    """Bad invocation (exit code 2), as opposed to bad data (exit 1)."""


def entrypoint() -> None:
    sys.exit(main())


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except MacronetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="macronet",
        description="Euro-area macro-network of sector exposures: ingest "
                    "who-to-whom CSVs, emit snapshots and event-study reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="ingest CSV files into a store file")
    p.add_argument("files", nargs="+", help="input CSV files (merged in order)")
    p.add_argument("--out", required=True, help="store file to write")
    p.add_argument("--allow-gaps", action="store_true",
                   help="downgrade interior series gaps to warnings")
    p.add_argument("--last-wins", action="store_true",
                   help="resolve duplicate (key, period) rows by keeping the later one")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("snapshot", help="build one quarter's exposure network")
    _add_store(p)
    p.add_argument("--quarter", required=True, help="e.g. 2017Q2")
    p.add_argument("--instruments", default="loans,app",
                   help="comma list of instrument tokens (default loans,app)")
    _add_app_programmes(p)
    p.add_argument("--shares", action="store_true",
                   help="annotate edges with shares of banking total assets")
    p.add_argument("--macro", action="store_true",
                   help="aggregate sectors to the three macro sectors")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    _add_out_stamp(p)
    p.set_defaults(func=cmd_snapshot)

    p = sub.add_parser("report", help="event-study growth and share report")
    _add_store(p)
    p.add_argument("--event", default=DEFAULT_EVENT_DATE.isoformat(),
                   help="event date YYYY-MM-DD (default %(default)s)")
    p.add_argument("--baseline-rule", choices=[r.value for r in BaselineRule],
                   default=BaselineRule.LAST_FULL_QUARTER_BEFORE.value)
    p.add_argument("--end", help="end quarter (default: latest common quarter)")
    _add_app_programmes(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--allow-partial", action="store_true",
                   help="mark missing cells instead of failing")
    _add_out_stamp(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("series", help="columnar quarter-by-key table")
    _add_store(p)
    p.add_argument("--keys", required=True,
                   help="comma list of series keys, e.g. GDP,LOANS:MFI_EXCL->MFI")
    p.add_argument("--from", dest="start", help="first quarter (default: common span)")
    p.add_argument("--to", dest="end", help="last quarter (default: common span)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--allow-partial", action="store_true",
                   help="emit empty cells instead of failing")
    _add_out_stamp(p)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("growth", help="growth of one series between two quarters")
    _add_store(p)
    p.add_argument("--key", required=True)
    p.add_argument("--baseline", required=True, help="baseline quarter, e.g. 2014Q3")
    p.add_argument("--end", required=True, help="end quarter, e.g. 2017Q2")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_out_stamp(p)
    p.set_defaults(func=cmd_growth)

    return parser


def _add_store(p: argparse.ArgumentParser) -> None:
    p.add_argument("--store", default=os.environ.get(ENV_STORE),
                   help=f"store file (default: ${ENV_STORE})")


def _add_app_programmes(p: argparse.ArgumentParser) -> None:
    p.add_argument("--app-programmes",
                   help="comma subset of cbpp3,abspp,pspp,cspp "
                        "(default: all four)")


def _add_out_stamp(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write output to a file instead of stdout")
    p.add_argument("--stamp", action="store_true",
                   help="include a wall-clock timestamp in JSON provenance")


# ---------------------------------------------------------------- helpers

def _load(args) -> SeriesStore:
    if not args.store:
        raise UsageError(f"no store given; pass --store or set ${ENV_STORE}")
    path = Path(args.store)
    if not path.exists():
        raise UsageError(f"store file not found: {path}")
    return load_store(path)


def _quarter(text: str) -> Quarter:
    try:
        return Quarter.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _event_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _instruments(text: str, store: SeriesStore) -> list[Instrument]:
    store_kinds = {k.instrument.kind for k in store.exposure_keys()}
    out = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        kind = _KNOWN_TOKENS.get(token.lower(), token.upper())
        if kind not in set(_KNOWN_TOKENS.values()) | store_kinds:
            raise UsageError(f"unknown instrument token {token!r}")
        out.append(Instrument(kind))
    if not out:
        raise UsageError("empty --instruments list")
    return out


def _app_programmes(text: str | None) -> tuple[str, ...] | None:
    if text is None:
        return None
    progs = []
    for token in text.split(","):
        token = token.strip().upper()
        if not token:
            continue
        if token not in APP_PROGRAMMES:
            raise UsageError(f"unknown APP programme {token!r}")
        progs.append(token)
    if not progs:
        raise UsageError("empty --app-programmes list")
    return tuple(progs)


def _keys(text: str) -> list:
    try:
        return [parse_series_key(t) for t in text.split(",") if t.strip()]
    except (ValueError, MacronetError) as exc:
        raise UsageError(f"bad series key: {exc}") from None


def _config(args, **extra) -> dict:
    config = {"command": args.command, "store": args.store}
    config.update(extra)
    if getattr(args, "stamp", False):
        config["generated_at"] = datetime.now(timezone.utc).isoformat()
    return config


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _emit_json(args, doc: dict, config: dict) -> None:
    doc = dict(doc)
    doc["config"] = config
    _emit(args, json.dumps(doc, indent=2) + "\n")


# ---------------------------------------------------------------- commands

def cmd_ingest(args) -> int:
    options = IngestOptions(allow_gaps=args.allow_gaps, last_wins=args.last_wins)
    store = None
    rejected = 0
    for name in args.files:
        path = Path(name)
        if not path.exists():
            raise UsageError(f"input file not found: {path}")
        store, report = ingest_csv(path, options, into=store)
        for warning in report.warnings:
            print(f"warning: {report.source}: {warning}", file=sys.stderr)
        rejected += report.rows_rejected
        print(f"{report.source}: {report.rows_read} rows read, "
              f"{report.rows_rejected} rejected")
    span = store.span()
    span_text = f"{span[0]}..{span[1]}" if span else "empty"
    print(f"{len(store)} series, {span_text}")
    save_store(store, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_snapshot(args) -> int:
    store = _load(args)
    quarter = _quarter(args.quarter)
    instruments = _instruments(args.instruments, store)
    programmes = _app_programmes(args.app_programmes)

    snapshot = build_snapshot(store, quarter, instruments, programmes)
    if args.shares:
        snapshot = normalize_shares(snapshot, store)
    if args.macro:
        snapshot = aggregate_to_macro(snapshot)
    for diag in snapshot.diagnostics:
        print(f"note: {diag}", file=sys.stderr)

    if args.format == "json":
        _emit_json(args, snapshot_to_doc(snapshot), _config(
            args, quarter=str(quarter), instruments=args.instruments,
            app_programmes=list(programmes) if programmes else None,
            shares=args.shares, macro=args.macro,
        ))
    elif args.format == "dot":
        _emit(args, export_snapshot(snapshot, "dot"))
    else:
        _emit(args, _snapshot_text(snapshot))
    return 0


def _snapshot_text(snapshot) -> str:
    lines = [f"snapshot {snapshot.quarter}  level={snapshot.level}  "
             f"edges={len(snapshot.edges)}"]
    if snapshot.denominator is not None:
        lines.append(f"denominator {snapshot.denominator[0]} = "
                     f"{fmt_amount(snapshot.denominator[1])}")
    for e in snapshot.edges:
        share = f"  {fmt_pct(e.share_pct)}%" if e.share_pct is not None else ""
        tag = f"  [{'+'.join(e.programmes)}]" if e.programmes else ""
        lines.append(f"  {node_key(e.creditor):<10} -> {node_key(e.debtor):<10} "
                     f"{str(e.instrument):<8} {fmt_amount(e.weight):>15}{share}{tag}")
    return "\n".join(lines) + "\n"


def cmd_report(args) -> int:
    store = _load(args)
    rule = BaselineRule(args.baseline_rule)
    window = event_window(store, _event_date(args.event), rule,
                          _quarter(args.end) if args.end else None)
    report = paper_report(store, window, rule=rule,
                          app_programmes=_app_programmes(args.app_programmes),
                          allow_partial=args.allow_partial)
    if args.format == "json":
        _emit_json(args, report_to_doc(report), _config(
            args, event=args.event, baseline_rule=rule.value,
            end=str(window.end), allow_partial=args.allow_partial,
            app_programmes=args.app_programmes,
        ))
    else:
        _emit(args, render_report_text(report))
    return 0


def cmd_series(args) -> int:
    store = _load(args)
    table = series_table(
        store, _keys(args.keys),
        _quarter(args.start) if args.start else None,
        _quarter(args.end) if args.end else None,
        allow_partial=args.allow_partial,
    )
    if args.format == "json":
        doc = {
            "macronet_series": 1,
            "keys": [str(k) for k in table.keys],
            "quarters": [str(q) for q in table.quarters],
            "rows": [list(row) for row in table.rows],
        }
        _emit_json(args, doc, _config(args, keys=args.keys,
                                      allow_partial=args.allow_partial))
    else:
        _emit(args, table.to_csv())
    return 0


def cmd_growth(args) -> int:
    store = _load(args)
    keys = _keys(args.key)
    if len(keys) != 1:
        raise UsageError("--key takes exactly one series key")
    result = growth_since(store, keys[0], _quarter(args.baseline), _quarter(args.end))
    if args.format == "json":
        doc = {
            "macronet_growth": 1,
            "key": str(result.key),
            "baseline": str(result.baseline),
            "end": str(result.end),
            "baseline_value": fmt_amount(result.baseline_value),
            "end_value": fmt_amount(result.end_value),
            "growth_pct": fmt_pct(result.growth_pct),
        }
        _emit_json(args, doc, _config(args))
    else:
        _emit(args, f"{result.key} {result.baseline}->{result.end}: "
                    f"{fmt_pct(result.growth_pct)}%  "
                    f"({fmt_amount(result.baseline_value)} -> "
                    f"{fmt_amount(result.end_value)})\n")
    return 0
