"""Euro-area macro-network toolkit.

Builds the quarterly who-to-whom exposure network among institutional
sectors (loans granted by banks, securities absorbed by the Eurosystem
under its purchase programmes), expresses exposures as shares of banking
total assets, and computes event-study growth rates around a policy
date. See the CLI (`macronet --help`) for the batch interface.
"""

from .amounts import fmt_amount, fmt_pct, growth_rate, parse_amount, pct
from .analysis import (
    BaselineRule,
    DEFAULT_EVENT_DATE,
    EventWindow,
    GrowthResult,
    Report,
    SeriesTable,
    baseline_for,
    event_window,
    growth_since,
    paper_report,
    render_report_text,
    report_to_doc,
    series_table,
)
from .errors import (
    AlreadyAggregated,
    CorruptStore,
    DuplicatePoint,
    EmptySnapshot,
    FormatVersionError,
    GapError,
    InvertedWindow,
    MacronetError,
    MissingQuarter,
    MissingSeries,
    NegativeStock,
    NonPositiveBaseline,
    SchemaError,
    UnknownSector,
    ZeroDenominator,
)
from .network import (
    Edge,
    MacroNetSnapshot,
    aggregate_to_macro,
    build_snapshot,
    export_snapshot,
    import_snapshot,
    normalize_shares,
    snapshot_to_dot,
    sum_outgoing,
)
from .periods import Month, Quarter, quarter_range
from .sectors import (
    LEAF_SECTORS,
    MacroSector,
    SectorCode,
    constituents,
    macro_leaves,
    macro_sector_of,
    parse_sector,
)
from .series import (
    APP,
    APP_PROGRAMMES,
    ExposureKey,
    IndicatorKey,
    IngestOptions,
    IngestReport,
    Instrument,
    LOANS,
    QuarterlySeries,
    SeriesStore,
    TOTAL_ASSETS_BANKS,
    end_of_quarter,
    ingest_csv,
    load_store,
    parse_series_key,
    save_store,
    store_to_json,
)

__version__ = "0.1.0"
