"""Quarterly series store: CSV ingestion, monthly reduction, lookups and
JSON persistence.

Input CSV schema (UTF-8, comma separator, `.` decimal point, header
required, exactly these columns):

    series_id,kind,programme,creditor,debtor,unit,adjustment,freq,period,value

kind        LOANS | APP | INDICATOR | <opaque label, e.g. BONDS>
programme   empty, or one of CBPP3 ABSPP PSPP CSPP (APP rows only)
creditor/   sector acronym aliases (see macronet.sectors); both empty
debtor      for INDICATOR rows
unit        EUR_MILLIONS | INDEX_2015_100 | CHAIN_LINKED_VOLUME
adjustment  SWDA | NSA | UNKNOWN
freq        M | Q
period      YYYY-MM for monthly rows, YYYYQn for quarterly rows
value       decimal with at most two fraction digits

INDICATOR rows take their key from series_id (GDP, HICP,
TOTAL_ASSETS:MFI_EXCL); exposure rows take it from
(kind, programme, creditor, debtor) and series_id is an informational
label. Monthly rows reduce to quarterly end-of-quarter values.

Canonical key strings, used in the store file, CLI --keys and
diagnostics:

    exposure    KIND[.PROGRAMME]:CREDITOR->DEBTOR   e.g. LOANS:MFI_EXCL->MFI
    indicator   the name itself                     e.g. TOTAL_ASSETS:MFI_EXCL
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import Iterable, Mapping, Union

from .amounts import fmt_amount, parse_amount
from .errors import (
    CorruptStore,
    DuplicatePoint,
    FormatVersionError,
    GapError,
    MacronetError,
    MissingQuarter,
    MissingSeries,
    NegativeStock,
    SchemaError,
)
from .periods import Month, Quarter, quarter_range
from .sectors import SectorCode, constituents, parse_sector

CSV_HEADER = (
    "series_id", "kind", "programme", "creditor", "debtor",
    "unit", "adjustment", "freq", "period", "value",
)

UNITS = ("EUR_MILLIONS", "INDEX_2015_100", "CHAIN_LINKED_VOLUME")
ADJUSTMENTS = ("SWDA", "NSA", "UNKNOWN")

APP_PROGRAMMES = ("CBPP3", "ABSPP", "PSPP", "CSPP")
VALID_PROGRAMMES = frozenset(APP_PROGRAMMES) | {"TOTAL"}

STORE_VERSION = 1

_KIND_RE = re.compile(r"^[A-Z][A-Z0-9_]*$")


# ---------------------------------------------------------------- keys

@dataclass(frozen=True)
class Instrument:
    """Financial instrument layer; APP series carry a programme tag."""

    kind: str
    programme: str | None = None

    def __post_init__(self):
        if not _KIND_RE.match(self.kind):
            raise ValueError(f"invalid instrument kind: {self.kind!r}")
        if self.programme is not None:
            if self.kind != "APP":
                raise ValueError("programme tags are only valid on APP")
            if self.programme not in VALID_PROGRAMMES:
                raise ValueError(f"unknown APP programme: {self.programme!r}")

    @classmethod
    def parse(cls, text: str) -> "Instrument":
        kind, dot, programme = text.partition(".")
        return cls(kind, programme if dot else None)

    def __str__(self) -> str:
        if self.programme is None:
            return self.kind
        return f"{self.kind}.{self.programme}"


LOANS = Instrument("LOANS")
APP = Instrument("APP")


@dataclass(frozen=True)
class ExposureKey:
    instrument: Instrument
    creditor: SectorCode
    debtor: SectorCode

    def __str__(self) -> str:
        return f"{self.instrument}:{self.creditor.name}->{self.debtor.name}"


@dataclass(frozen=True)
class IndicatorKey:
    name: str

    def __post_init__(self):
        if not self.name or "->" in self.name:
            raise ValueError(f"invalid indicator name: {self.name!r}")

    def __str__(self) -> str:
        return self.name


SeriesKey = Union[ExposureKey, IndicatorKey]

TOTAL_ASSETS_BANKS = IndicatorKey("TOTAL_ASSETS:MFI_EXCL")

# The single aggregated liquidity-injection edge runs Eurosystem -> banks.
APP_CREDITOR = SectorCode.ECB_NCB
APP_DEBTOR = SectorCode.MFI_EXCL


def parse_series_key(text: str) -> SeriesKey:
    """Parse a canonical key string (see module docstring)."""
    token = text.strip()
    if "->" not in token:
        return IndicatorKey(token)
    left, _, debtor = token.partition("->")
    inst_part, sep, creditor = left.rpartition(":")
    if not sep:
        raise ValueError(f"malformed exposure key: {text!r}")
    return ExposureKey(
        Instrument.parse(inst_part), parse_sector(creditor), parse_sector(debtor)
    )


def is_stock_key(key: SeriesKey) -> bool:
    """Stocks (exposures, total assets) must never be negative."""
    if isinstance(key, ExposureKey):
        return True
    return key.name.startswith("TOTAL_ASSETS")


# ---------------------------------------------------------------- series

@dataclass
class QuarterlySeries:
    """One key's ordered quarter -> amount map plus unit metadata."""

    key: SeriesKey
    unit: str
    adjustment: str
    values: dict[Quarter, Decimal]
    gappy: bool = False

    def first_quarter(self) -> Quarter:
        return min(self.values)

    def last_quarter(self) -> Quarter:
        return max(self.values)

    def sorted_values(self) -> list[tuple[Quarter, Decimal]]:
        return sorted(self.values.items())


def end_of_quarter(
    monthly: Mapping[Month, Decimal],
) -> tuple[dict[Quarter, Decimal], list[str]]:
    """Reduce monthly observations to end-of-quarter values.

    Each quarter covered by at least one month takes the value of its
    latest present month; quarters with no months are absent. A warning
    is returned for every quarter whose final calendar month is missing.
    """
    latest: dict[Quarter, Month] = {}
    for month in monthly:
        q = month.quarter()
        if q not in latest or month > latest[q]:
            latest[q] = month
    values: dict[Quarter, Decimal] = {}
    warnings: list[str] = []
    for q in sorted(latest):
        m = latest[q]
        values[q] = monthly[m]
        if not m.is_quarter_end:
            warnings.append(f"{q}: quarter-end month absent, used {m}")
    return values, warnings


# ---------------------------------------------------------------- store

@dataclass
class SourceInfo:
    name: str
    rows: int


@dataclass
class Manifest:
    sources: list[SourceInfo] = field(default_factory=list)
    ingested_at: str | None = None


class SeriesStore:
    """Immutable-after-ingestion map of series keys to quarterly series."""

    def __init__(self, series: dict[SeriesKey, QuarterlySeries] | None = None,
                 manifest: Manifest | None = None):
        self.series: dict[SeriesKey, QuarterlySeries] = dict(series or {})
        self.manifest = manifest or Manifest()

    def __len__(self) -> int:
        return len(self.series)

    def __contains__(self, key: SeriesKey) -> bool:
        return key in self.series

    def get(self, key: SeriesKey, quarter: Quarter) -> Decimal:
        s = self.series.get(key)
        if s is None:
            raise MissingSeries(key)
        value = s.values.get(quarter)
        if value is None:
            raise MissingQuarter(key, quarter)
        return value

    def exposure_keys(self, kind: str | None = None) -> list[ExposureKey]:
        keys = [k for k in self.series if isinstance(k, ExposureKey)]
        if kind is not None:
            keys = [k for k in keys if k.instrument.kind == kind]
        return sorted(keys, key=str)

    def app_total(self, quarter: Quarter,
                  programmes: Iterable[str] | None = None) -> Decimal:
        """Sum of APP programme holdings at a quarter.

        Programmes whose series is absent at the quarter contribute
        nothing; raises MissingSeries only when the store has no APP
        programme series at all.
        """
        if not self.exposure_keys("APP"):
            raise MissingSeries(ExposureKey(APP, APP_CREDITOR, APP_DEBTOR))
        progs = tuple(programmes) if programmes is not None else APP_PROGRAMMES
        total = Decimal("0.00")
        for p in progs:
            key = ExposureKey(Instrument("APP", p), APP_CREDITOR, APP_DEBTOR)
            s = self.series.get(key)
            if s is not None and quarter in s.values:
                total += s.values[quarter]
        return total

    def span(self) -> tuple[Quarter, Quarter] | None:
        if not self.series:
            return None
        firsts = [s.first_quarter() for s in self.series.values()]
        lasts = [s.last_quarter() for s in self.series.values()]
        return min(firsts), max(lasts)

    def latest_common_quarter(self) -> Quarter:
        if not self.series:
            raise MissingSeries("<empty store>")
        return min(s.last_quarter() for s in self.series.values())


# ---------------------------------------------------------------- ingest

@dataclass(frozen=True)
class IngestOptions:
    allow_gaps: bool = False
    last_wins: bool = False


@dataclass
class IngestReport:
    source: str
    rows_read: int = 0
    rows_rejected: int = 0
    warnings: list[str] = field(default_factory=list)


@dataclass
class _Pending:
    unit: str
    adjustment: str
    freq: str
    first_line: int
    rows: list  # (period, value, line)


def _slurp(source) -> tuple[str, str]:
    """Return (name, text) for a path, text or byte stream."""
    if isinstance(source, (str, Path)):
        p = Path(source)
        return p.name, p.read_text(encoding="utf-8")
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return getattr(source, "name", "<stream>"), data


def _parse_row(row: list[str], lineno: int):
    if len(row) != len(CSV_HEADER):
        raise SchemaError(lineno, f"expected {len(CSV_HEADER)} fields, got {len(row)}")
    series_id, kind, programme, creditor, debtor, unit, adjustment, freq, period, value = (
        f.strip() for f in row
    )
    if not series_id:
        raise SchemaError(lineno, "empty series_id")
    if unit not in UNITS:
        raise SchemaError(lineno, f"unknown unit {unit!r}")
    if adjustment not in ADJUSTMENTS:
        raise SchemaError(lineno, f"unknown adjustment {adjustment!r}")
    if freq not in ("M", "Q"):
        raise SchemaError(lineno, f"freq must be M or Q, got {freq!r}")

    if kind == "INDICATOR":
        if creditor or debtor or programme:
            raise SchemaError(lineno, "INDICATOR rows must leave programme/creditor/debtor empty")
        try:
            key: SeriesKey = IndicatorKey(series_id)
        except ValueError as exc:
            raise SchemaError(lineno, str(exc)) from None
    else:
        if not creditor or not debtor:
            raise SchemaError(lineno, "exposure rows need creditor and debtor")
        try:
            instrument = Instrument(kind, programme or None)
            key = ExposureKey(instrument, parse_sector(creditor), parse_sector(debtor))
        except (ValueError, MacronetError) as exc:
            raise SchemaError(lineno, str(exc)) from None

    try:
        period_obj = Month.parse(period) if freq == "M" else Quarter.parse(period)
        amount = parse_amount(value)
    except ValueError as exc:
        raise SchemaError(lineno, str(exc)) from None

    if amount < 0 and is_stock_key(key):
        raise NegativeStock(key, period, lineno)
    return key, unit, adjustment, freq, period_obj, amount


def _resolve_duplicates(key, rows, options: IngestOptions, report: IngestReport):
    """Collapse rows sharing a period per the duplicate policy."""
    chosen: dict[object, tuple[Decimal, int]] = {}
    for period, value, line in rows:
        if period in chosen:
            if not options.last_wins:
                raise DuplicatePoint(key, period, line)
            report.rows_rejected += 1
            report.warnings.append(
                f"line {line}: duplicate {key} at {period}, last row wins"
            )
        chosen[period] = (value, line)
    return {period: value for period, (value, _) in chosen.items()}


def _check_gaps(series: QuarterlySeries, options: IngestOptions,
                report: IngestReport) -> None:
    quarters = sorted(series.values)
    missing = [q for q in quarter_range(quarters[0], quarters[-1])
               if q not in series.values]
    if not missing:
        return
    if not options.allow_gaps:
        raise GapError(series.key, missing)
    series.gappy = True
    gaps = ", ".join(str(q) for q in missing)
    report.warnings.append(f"series {series.key} has interior gaps: {gaps}")


def _check_composite_overlap(series_map: dict[SeriesKey, QuarterlySeries]) -> None:
    """A debtor breakdown may use the composite MFI or its leaves, not both."""
    groups: dict[tuple, set[SectorCode]] = {}
    for key in series_map:
        if isinstance(key, ExposureKey):
            groups.setdefault((key.instrument, key.creditor), set()).add(key.debtor)
    for (instrument, creditor), debtors in groups.items():
        if SectorCode.MFI in debtors:
            leaves = debtors & constituents(SectorCode.MFI)
            if leaves:
                names = ", ".join(sorted(c.name for c in leaves))
                raise SchemaError(
                    None,
                    f"{instrument} from {creditor.name}: debtor MFI overlaps its "
                    f"constituents ({names})",
                )


def ingest_csv(source, options: IngestOptions = IngestOptions(),
               into: SeriesStore | None = None) -> tuple[SeriesStore, IngestReport]:
    """Ingest one CSV document, optionally merging into an existing store.

    Returns a new store (the input store is not modified) plus a report
    with row counts and warning diagnostics. Validation failures raise
    SchemaError / NegativeStock / DuplicatePoint / GapError.
    """
    name, text = _slurp(source)
    report = IngestReport(source=name)
    reader = csv.reader(io.StringIO(text))

    header = next(reader, None)
    if header is None or tuple(f.strip() for f in header) != CSV_HEADER:
        raise SchemaError(1, f"header must be exactly: {','.join(CSV_HEADER)}")

    pending: dict[SeriesKey, _Pending] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not f.strip() for f in row):
            continue
        key, unit, adjustment, freq, period_obj, amount = _parse_row(row, lineno)
        report.rows_read += 1
        p = pending.get(key)
        if p is None:
            pending[key] = _Pending(unit, adjustment, freq, lineno,
                                    [(period_obj, amount, lineno)])
        else:
            if (unit, adjustment, freq) != (p.unit, p.adjustment, p.freq):
                raise SchemaError(
                    lineno, f"inconsistent unit/adjustment/freq for {key}"
                )
            p.rows.append((period_obj, amount, lineno))

    series_map = dict(into.series) if into is not None else {}
    for key, p in pending.items():
        points = _resolve_duplicates(key, p.rows, options, report)
        if p.freq == "M":
            quarters, warns = end_of_quarter(points)
            report.warnings.extend(f"series {key}: {w}" for w in warns)
        else:
            quarters = dict(sorted(points.items()))

        existing = series_map.get(key)
        if existing is None:
            series_map[key] = QuarterlySeries(key, p.unit, p.adjustment, quarters)
        else:
            if (existing.unit, existing.adjustment) != (p.unit, p.adjustment):
                raise SchemaError(p.first_line, f"metadata conflict for existing series {key}")
            merged = dict(existing.values)
            for q, v in quarters.items():
                if q in merged:
                    if not options.last_wins:
                        raise DuplicatePoint(key, q, p.first_line)
                    report.rows_rejected += 1
                    report.warnings.append(f"{key} at {q}: merged value wins over stored one")
                merged[q] = v
            series_map[key] = QuarterlySeries(
                key, existing.unit, existing.adjustment, dict(sorted(merged.items()))
            )

    for key in pending:
        _check_gaps(series_map[key], options, report)
    _check_composite_overlap(series_map)

    manifest = Manifest(
        sources=list(into.manifest.sources) if into is not None else [],
        ingested_at=into.manifest.ingested_at if into is not None else None,
    )
    manifest.sources.append(SourceInfo(name, report.rows_read))
    return SeriesStore(series_map, manifest), report


# ---------------------------------------------------------------- persistence

def store_to_json(store: SeriesStore) -> str:
    """Canonical single-document serialization; stable byte-for-byte."""
    span = store.span()
    doc = {
        "macronet_store": STORE_VERSION,
        "manifest": {
            "sources": [{"name": s.name, "rows": s.rows}
                        for s in store.manifest.sources],
            "reference_period": (
                {"start": str(span[0]), "end": str(span[1])} if span else None
            ),
            "ingested_at": store.manifest.ingested_at,
        },
        "series": [
            {
                "key": str(s.key),
                "unit": s.unit,
                "adjustment": s.adjustment,
                "gappy": s.gappy,
                "points": {str(q): fmt_amount(v) for q, v in s.sorted_values()},
            }
            for s in sorted(store.series.values(), key=lambda s: str(s.key))
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def save_store(store: SeriesStore, sink) -> None:
    text = store_to_json(store)
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text, encoding="utf-8")
    else:
        sink.write(text)


def load_store(source) -> SeriesStore:
    """Load a store document produced by save_store."""
    _, text = _slurp(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptStore(f"invalid JSON ({exc.msg})") from None
    if not isinstance(doc, dict) or "macronet_store" not in doc:
        raise FormatVersionError(None)
    if doc["macronet_store"] != STORE_VERSION:
        raise FormatVersionError(doc["macronet_store"])
    try:
        series_map: dict[SeriesKey, QuarterlySeries] = {}
        for entry in doc["series"]:
            key = parse_series_key(entry["key"])
            if entry["unit"] not in UNITS or entry["adjustment"] not in ADJUSTMENTS:
                raise ValueError(f"bad metadata for {entry['key']}")
            values = {
                Quarter.parse(q): parse_amount(v)
                for q, v in entry["points"].items()
            }
            if key in series_map:
                raise ValueError(f"duplicate key {entry['key']}")
            series_map[key] = QuarterlySeries(
                key, entry["unit"], entry["adjustment"],
                dict(sorted(values.items())), bool(entry["gappy"]),
            )
        m = doc["manifest"]
        manifest = Manifest(
            sources=[SourceInfo(s["name"], int(s["rows"])) for s in m["sources"]],
            ingested_at=m["ingested_at"],
        )
    except (KeyError, TypeError, ValueError, MacronetError) as exc:
        raise CorruptStore(str(exc)) from None
    return SeriesStore(series_map, manifest)
