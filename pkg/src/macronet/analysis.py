"""Event-study growth rates around a policy date, and report assembly.

Growth is cumulative simple percent change between the baseline and end
quarters (not log-difference, not annualized). The default baseline is
the last quarter that ended strictly before the event date; the default
event date is the start of the first asset-purchase programme.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import date
from decimal import Decimal
from enum import Enum
from typing import Iterable

from .amounts import fmt_amount, fmt_pct, growth_rate
from .errors import (
    EmptySnapshot,
    InvertedWindow,
    MissingQuarter,
    MissingSeries,
    NonPositiveBaseline,
    ZeroDenominator,
)
from .network import (
    MacroNetSnapshot,
    build_snapshot,
    normalize_shares,
    sum_outgoing,
)
from .periods import Quarter, quarter_range
from .sectors import SectorCode
from .series import (
    APP,
    APP_CREDITOR,
    APP_DEBTOR,
    ExposureKey,
    IndicatorKey,
    Instrument,
    LOANS,
    SeriesKey,
    SeriesStore,
)

DEFAULT_EVENT_DATE = date(2014, 10, 20)

# Legend order of the loan breakdown, also the report row order.
REPORT_LOAN_DEBTORS = (
    SectorCode.MFI, SectorCode.HH, SectorCode.NFC,
    SectorCode.GG, SectorCode.ICPF, SectorCode.FC_EXCL,
)
INTRA_FINANCIAL_DEBTORS = (SectorCode.MFI, SectorCode.ICPF, SectorCode.FC_EXCL)
REAL_SECTOR_DEBTORS = (SectorCode.HH, SectorCode.NFC)

GDP = IndicatorKey("GDP")
HICP = IndicatorKey("HICP")


class BaselineRule(Enum):
    LAST_FULL_QUARTER_BEFORE = "last-full-quarter-before"
    QUARTER_OF_EVENT = "quarter-of-event"


def baseline_for(event_date: date, rule: BaselineRule) -> Quarter:
    """Baseline quarter for an event date under the given rule."""
    if rule is BaselineRule.QUARTER_OF_EVENT:
        return Quarter.of_date(event_date)
    q = Quarter.of_date(event_date)
    while not q.end_date() < event_date:
        q = q.prev()
    return q


@dataclass(frozen=True)
class EventWindow:
    event_date: date
    baseline: Quarter
    end: Quarter

    def __post_init__(self):
        if not self.baseline < self.end:
            raise InvertedWindow(self.baseline, self.end)


def event_window(store: SeriesStore, event_date: date = DEFAULT_EVENT_DATE,
                 rule: BaselineRule = BaselineRule.LAST_FULL_QUARTER_BEFORE,
                 end: Quarter | None = None) -> EventWindow:
    """Window from the rule-derived baseline to `end` (default: the
    latest quarter covered by every series in the store)."""
    if end is None:
        end = store.latest_common_quarter()
    return EventWindow(event_date, baseline_for(event_date, rule), end)


@dataclass(frozen=True)
class GrowthResult:
    key: SeriesKey
    baseline: Quarter
    end: Quarter
    baseline_value: Decimal
    end_value: Decimal
    growth_pct: Decimal  # unrounded; round half-up to 2 decimals to report

    def display(self) -> str:
        return fmt_pct(self.growth_pct)


def growth_since(store: SeriesStore, key: SeriesKey,
                 baseline: Quarter, end: Quarter) -> GrowthResult:
    """Simple percent change of a series between two stored quarters."""
    if not baseline < end:
        raise InvertedWindow(baseline, end)
    baseline_value = store.get(key, baseline)
    end_value = store.get(key, end)
    if baseline_value <= 0:
        raise NonPositiveBaseline(key, baseline, baseline_value)
    return GrowthResult(key, baseline, end, baseline_value, end_value,
                        growth_rate(end_value, baseline_value))


# ---------------------------------------------------------------- report

@dataclass(frozen=True)
class GrowthCell:
    key: SeriesKey
    result: GrowthResult | None
    note: str | None = None  # set when the cell is missing


@dataclass(frozen=True)
class LoanShare:
    debtor: SectorCode
    weight: Decimal | None
    share_pct: Decimal | None


@dataclass(frozen=True)
class ShareBlock:
    quarter: Quarter
    denominator_key: str
    denominator: Decimal
    app_weight: Decimal | None
    app_share_pct: Decimal | None
    app_programmes: tuple[str, ...]
    loans: tuple[LoanShare, ...]
    intra_financial_pct: Decimal | None
    real_sector_pct: Decimal | None


@dataclass(frozen=True)
class Report:
    window: EventWindow
    rule: BaselineRule
    growth: tuple[GrowthCell, ...]
    shares: ShareBlock | None
    notes: tuple[str, ...] = ()


def _report_growth_keys() -> list[SeriesKey]:
    keys: list[SeriesKey] = [
        ExposureKey(LOANS, SectorCode.MFI_EXCL, debtor)
        for debtor in REPORT_LOAN_DEBTORS
    ]
    keys.extend([GDP, HICP])
    return keys


def paper_report(store: SeriesStore, window: EventWindow, *,
                 app_programmes: Iterable[str] | None = None,
                 rule: BaselineRule = BaselineRule.LAST_FULL_QUARTER_BEFORE,
                 allow_partial: bool = False) -> Report:
    """Assemble the full event-study report: growth of the six loan
    series plus GDP and HICP over the window, and the normalized
    end-quarter snapshot shares (APP, per-debtor loans, intra-financial
    and real-sector aggregates).

    Without allow_partial any missing constituent raises; with it the
    affected cells carry MISSING notes instead.
    """
    cells: list[GrowthCell] = []
    for key in _report_growth_keys():
        try:
            cells.append(GrowthCell(key, growth_since(store, key, window.baseline, window.end)))
        except (MissingSeries, MissingQuarter, NonPositiveBaseline) as exc:
            if not allow_partial:
                raise
            cells.append(GrowthCell(key, None, str(exc)))

    notes: list[str] = []
    shares: ShareBlock | None = None
    try:
        snapshot = build_snapshot(store, window.end, {LOANS, APP}, app_programmes)
        snapshot = normalize_shares(snapshot, store)
        shares = _share_block(snapshot, allow_partial)
    except (MissingSeries, MissingQuarter, EmptySnapshot, ZeroDenominator) as exc:
        if not allow_partial:
            raise
        notes.append(f"shares unavailable: {exc}")

    return Report(window, rule, tuple(cells), shares, tuple(notes))


def _share_block(snapshot: MacroNetSnapshot, allow_partial: bool) -> ShareBlock:
    assert snapshot.denominator is not None
    app_edge = snapshot.edge(APP_CREDITOR, APP_DEBTOR, Instrument("APP"))
    if app_edge is None and not allow_partial:
        raise MissingQuarter(ExposureKey(APP, APP_CREDITOR, APP_DEBTOR), snapshot.quarter)

    loans = []
    for debtor in REPORT_LOAN_DEBTORS:
        edge = snapshot.edge(SectorCode.MFI_EXCL, debtor, LOANS)
        if edge is None:
            if not allow_partial:
                raise MissingQuarter(ExposureKey(LOANS, SectorCode.MFI_EXCL, debtor),
                                     snapshot.quarter)
            loans.append(LoanShare(debtor, None, None))
        else:
            loans.append(LoanShare(debtor, edge.weight, edge.share_pct))

    _, intra = sum_outgoing(snapshot, SectorCode.MFI_EXCL, LOANS, INTRA_FINANCIAL_DEBTORS)
    _, real = sum_outgoing(snapshot, SectorCode.MFI_EXCL, LOANS, REAL_SECTOR_DEBTORS)
    return ShareBlock(
        quarter=snapshot.quarter,
        denominator_key=snapshot.denominator[0],
        denominator=snapshot.denominator[1],
        app_weight=app_edge.weight if app_edge is not None else None,
        app_share_pct=app_edge.share_pct if app_edge is not None else None,
        app_programmes=app_edge.programmes or () if app_edge is not None else (),
        loans=tuple(loans),
        intra_financial_pct=intra,
        real_sector_pct=real,
    )


def report_to_doc(report: Report) -> dict:
    """JSON-able report document; percentages as 2-decimal strings."""
    growth = []
    for cell in report.growth:
        if cell.result is None:
            growth.append({"key": str(cell.key), "missing": True, "note": cell.note})
        else:
            r = cell.result
            growth.append({
                "key": str(r.key),
                "baseline_value": fmt_amount(r.baseline_value),
                "end_value": fmt_amount(r.end_value),
                "growth_pct": fmt_pct(r.growth_pct),
            })
    shares = None
    if report.shares is not None:
        b = report.shares
        shares = {
            "quarter": str(b.quarter),
            "denominator": {"key": b.denominator_key, "amount": fmt_amount(b.denominator)},
            "app": {
                "weight": fmt_amount(b.app_weight) if b.app_weight is not None else None,
                "share_pct": fmt_pct(b.app_share_pct) if b.app_share_pct is not None else None,
                "programmes": list(b.app_programmes),
            },
            "loans": [
                {
                    "debtor": ls.debtor.name,
                    "weight": fmt_amount(ls.weight) if ls.weight is not None else None,
                    "share_pct": fmt_pct(ls.share_pct) if ls.share_pct is not None else None,
                }
                for ls in b.loans
            ],
            "intra_financial_pct": fmt_pct(b.intra_financial_pct)
            if b.intra_financial_pct is not None else None,
            "real_sector_pct": fmt_pct(b.real_sector_pct)
            if b.real_sector_pct is not None else None,
        }
    return {
        "macronet_report": 1,
        "event": {
            "date": report.window.event_date.isoformat(),
            "rule": report.rule.value,
            "baseline": str(report.window.baseline),
            "end": str(report.window.end),
        },
        "growth": growth,
        "shares": shares,
        "notes": list(report.notes),
    }


def _signed(value: Decimal) -> str:
    text = fmt_pct(value)
    return text if text.startswith("-") else "+" + text


def render_report_text(report: Report) -> str:
    """Aligned text table: growth annotations first, then the share
    breakdown of the end-quarter snapshot."""
    w = report.window
    lines = [
        f"event {w.event_date.isoformat()}  baseline {w.baseline}  end {w.end}"
        f"  (rule {report.rule.value})",
        "",
        "growth since baseline (%)",
    ]
    for cell in report.growth:
        label = str(cell.key)
        if cell.result is None:
            lines.append(f"  {label:<28} MISSING")
        else:
            lines.append(f"  {label:<28} {_signed(cell.result.growth_pct):>9}")

    b = report.shares
    lines.append("")
    if b is None:
        lines.append("shares of banking total assets: MISSING")
    else:
        lines.append(f"shares of banking total assets at {b.quarter} (%)")
        app_label = "APP " + ("+".join(b.app_programmes) if b.app_programmes else "")
        app = fmt_pct(b.app_share_pct) if b.app_share_pct is not None else "MISSING"
        lines.append(f"  {app_label:<28} {app:>9}")
        for ls in b.loans:
            share = fmt_pct(ls.share_pct) if ls.share_pct is not None else "MISSING"
            lines.append(f"  {'loans ' + ls.debtor.name:<28} {share:>9}")
        intra = fmt_pct(b.intra_financial_pct) if b.intra_financial_pct is not None else "MISSING"
        real = fmt_pct(b.real_sector_pct) if b.real_sector_pct is not None else "MISSING"
        lines.append(f"  {'intra-financial loans':<28} {intra:>9}")
        lines.append(f"  {'real-sector loans':<28} {real:>9}")
        lines.append(f"  denominator {b.denominator_key} = {fmt_amount(b.denominator)}")
    for note in report.notes:
        lines.append(f"  note: {note}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- tables

@dataclass(frozen=True)
class SeriesTable:
    keys: tuple[SeriesKey, ...]
    quarters: tuple[Quarter, ...]
    rows: tuple[tuple[str, ...], ...]  # formatted amounts, "" when absent

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["quarter"] + [str(k) for k in self.keys])
        for quarter, row in zip(self.quarters, self.rows):
            writer.writerow([str(quarter)] + list(row))
        return out.getvalue()


def series_table(store: SeriesStore, keys: Iterable[SeriesKey],
                 start: Quarter | None = None, end: Quarter | None = None,
                 allow_partial: bool = False) -> SeriesTable:
    """One row per quarter, one column per key. The default range is the
    span jointly covered by the requested keys; in strict mode a missing
    cell raises MissingQuarter."""
    key_list = list(keys)
    series = []
    for key in key_list:
        s = store.series.get(key)
        if s is None:
            raise MissingSeries(key)
        series.append(s)
    if start is None:
        start = max(s.first_quarter() for s in series)
    if end is None:
        end = min(s.last_quarter() for s in series)
    if end < start:
        raise InvertedWindow(start, end)

    rows = []
    for quarter in quarter_range(start, end):
        row = []
        for s in series:
            value = s.values.get(quarter)
            if value is None:
                if not allow_partial:
                    raise MissingQuarter(s.key, quarter)
                row.append("")
            else:
                row.append(fmt_amount(value))
        rows.append(tuple(row))
    return SeriesTable(tuple(key_list), tuple(quarter_range(start, end)), tuple(rows))
