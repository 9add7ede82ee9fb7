"""Per-quarter multiplex weighted directed exposure networks.

Nodes are institutional sectors (or macro sectors after aggregation),
one link layer per financial instrument, edge direction follows the
money, and weights are end-of-quarter outstanding stocks. Snapshots are
immutable values; normalization and aggregation return new snapshots.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from decimal import Decimal
from typing import Iterable, Mapping, Union

from .amounts import fmt_amount, fmt_pct, parse_amount, pct
from .errors import (
    AlreadyAggregated,
    CorruptStore,
    EmptySnapshot,
    FormatVersionError,
    MacronetError,
    ZeroDenominator,
)
from .periods import Quarter
from .sectors import MacroSector, SectorCode, macro_sector_of, parse_sector
from .series import (
    APP_CREDITOR,
    APP_DEBTOR,
    APP_PROGRAMMES,
    ExposureKey,
    IndicatorKey,
    Instrument,
    SeriesKey,
    SeriesStore,
    TOTAL_ASSETS_BANKS,
)

SNAPSHOT_VERSION = 1

SECTOR_LEVEL = "SECTOR"
MACRO_LEVEL = "MACRO"

Node = Union[SectorCode, MacroSector]


def node_key(node: Node) -> str:
    """Stable machine name (sector alias or macro sector name)."""
    return node.name


def node_display(node: Node) -> str:
    """Human acronym for DOT labels."""
    return node.value if isinstance(node, SectorCode) else node.name


@dataclass(frozen=True)
class Edge:
    creditor: Node
    debtor: Node
    instrument: Instrument
    weight: Decimal
    share_pct: Decimal | None = None
    programmes: tuple[str, ...] | None = None

    def triple(self) -> tuple[str, str, str]:
        return node_key(self.creditor), node_key(self.debtor), str(self.instrument)


@dataclass(frozen=True)
class MacroNetSnapshot:
    """One quarter's exposure network, optionally annotated with shares
    of the banking system's total assets."""

    quarter: Quarter
    level: str
    edges: tuple[Edge, ...]
    node_attrs: Mapping[Node, Decimal | None]
    denominator: tuple[str, Decimal] | None = None
    diagnostics: tuple[str, ...] = ()

    def __post_init__(self):
        triples = [e.triple() for e in self.edges]
        if len(set(triples)) != len(triples):
            raise ValueError("duplicate (creditor, debtor, instrument) edge")
        if any(e.weight < 0 for e in self.edges):
            raise ValueError("edge weights must be nonnegative")
        if self.denominator is None and any(e.share_pct is not None for e in self.edges):
            raise ValueError("shares present without a denominator")

    def nodes(self) -> list[Node]:
        seen = {e.creditor for e in self.edges} | {e.debtor for e in self.edges}
        return sorted(seen, key=node_key)

    def edge(self, creditor: Node, debtor: Node, instrument: Instrument) -> Edge | None:
        for e in self.edges:
            if (e.creditor, e.debtor, e.instrument) == (creditor, debtor, instrument):
                return e
        return None


def _sorted_edges(edges: Iterable[Edge]) -> tuple[Edge, ...]:
    return tuple(sorted(edges, key=Edge.triple))


# ---------------------------------------------------------------- build

def build_snapshot(store: SeriesStore, quarter: Quarter,
                   instruments: Iterable[Instrument],
                   app_programmes: Iterable[str] | None = None) -> MacroNetSnapshot:
    """Assemble the SECTOR-level snapshot for one quarter.

    Every exposure series of a requested instrument that covers the
    quarter contributes one edge; a series present with value zero gives
    an explicit zero-weight edge, a series absent at the quarter gives a
    diagnostic instead. The APP instrument collapses to the single
    Eurosystem -> banks injection edge, summing the requested programme
    holdings (all four by default).
    """
    edges: list[Edge] = []
    diagnostics: list[str] = []

    for instrument in sorted(set(instruments), key=str):
        if instrument.kind == "APP" and instrument.programme is None:
            progs = tuple(app_programmes) if app_programmes is not None else APP_PROGRAMMES
            contributing: list[str] = []
            total = Decimal("0.00")
            known = {k.instrument.programme for k in store.exposure_keys("APP")}
            for p in progs:
                key = ExposureKey(Instrument("APP", p), APP_CREDITOR, APP_DEBTOR)
                s = store.series.get(key)
                if s is None:
                    continue
                if quarter in s.values:
                    total += s.values[quarter]
                    contributing.append(p)
                else:
                    diagnostics.append(f"{key} has no value at {quarter}; edge omitted")
            if contributing:
                edges.append(Edge(APP_CREDITOR, APP_DEBTOR, Instrument("APP"),
                                  total, programmes=tuple(contributing)))
            elif not known:
                diagnostics.append("no APP programme series in store; edge omitted")
        else:
            matches = [
                k for k in store.exposure_keys(instrument.kind)
                if instrument.programme is None
                or k.instrument.programme == instrument.programme
            ]
            if not matches:
                diagnostics.append(f"no {instrument} series in store")
            for key in matches:
                s = store.series[key]
                if quarter in s.values:
                    edges.append(Edge(key.creditor, key.debtor, key.instrument,
                                      s.values[quarter]))
                else:
                    diagnostics.append(f"{key} has no value at {quarter}; edge omitted")

    if not edges:
        raise EmptySnapshot(quarter)

    node_attrs: dict[Node, Decimal | None] = {}
    for edge in edges:
        for node in (edge.creditor, edge.debtor):
            if node not in node_attrs:
                node_attrs[node] = _total_assets(store, node, quarter)
    return MacroNetSnapshot(quarter, SECTOR_LEVEL, _sorted_edges(edges),
                            node_attrs, None, tuple(diagnostics))


def _total_assets(store: SeriesStore, node: Node, quarter: Quarter) -> Decimal | None:
    if not isinstance(node, SectorCode):
        return None
    s = store.series.get(IndicatorKey(f"TOTAL_ASSETS:{node.name}"))
    if s is None:
        return None
    return s.values.get(quarter)


# ---------------------------------------------------------------- shares

def normalize_shares(snapshot: MacroNetSnapshot, store: SeriesStore,
                     denominator_key: SeriesKey = TOTAL_ASSETS_BANKS) -> MacroNetSnapshot:
    """Annotate every edge with its weight as a percentage of the
    denominator series (the banking system's total assets by default)."""
    denominator = store.get(denominator_key, snapshot.quarter)
    if denominator <= 0:
        raise ZeroDenominator(denominator_key, snapshot.quarter)
    edges = tuple(
        replace(e, share_pct=pct(e.weight, denominator)) for e in snapshot.edges
    )
    return replace(snapshot, edges=edges,
                   denominator=(str(denominator_key), denominator))


def aggregate_to_macro(snapshot: MacroNetSnapshot) -> MacroNetSnapshot:
    """Fold sector nodes into their macro sectors, summing coinciding
    edges; self-loops (e.g. intra-financial exposures) are retained."""
    if snapshot.level == MACRO_LEVEL:
        raise AlreadyAggregated()

    weights: dict[tuple[MacroSector, MacroSector, Instrument], Decimal] = {}
    programmes: dict[tuple, tuple[str, ...] | None] = {}
    for e in snapshot.edges:
        group = (macro_sector_of(e.creditor), macro_sector_of(e.debtor), e.instrument)
        weights[group] = weights.get(group, Decimal("0.00")) + e.weight
        if e.programmes is not None:
            merged = set(programmes.get(group) or ()) | set(e.programmes)
            programmes[group] = tuple(p for p in APP_PROGRAMMES + ("TOTAL",) if p in merged)

    denominator = snapshot.denominator
    edges = []
    for (creditor, debtor, instrument), weight in weights.items():
        share = pct(weight, denominator[1]) if denominator is not None else None
        edges.append(Edge(creditor, debtor, instrument, weight, share,
                          programmes.get((creditor, debtor, instrument))))

    attrs: dict[Node, Decimal | None] = {}
    for node, assets in snapshot.node_attrs.items():
        macro = macro_sector_of(node)
        if assets is not None:
            attrs[macro] = (attrs.get(macro) or Decimal("0.00")) + assets
        else:
            attrs.setdefault(macro, None)
    return MacroNetSnapshot(snapshot.quarter, MACRO_LEVEL, _sorted_edges(edges),
                            attrs, denominator, snapshot.diagnostics)


def sum_outgoing(snapshot: MacroNetSnapshot, creditor: Node,
                 instrument: Instrument,
                 debtors: Iterable[Node]) -> tuple[Decimal, Decimal | None]:
    """Total weight (and share, when normalized) from a creditor into a
    debtor set on one instrument layer; absent edges contribute zero."""
    debtor_set = set(debtors)
    total = Decimal("0.00")
    for e in snapshot.edges:
        if (e.creditor == creditor and e.instrument == instrument
                and e.debtor in debtor_set):
            total += e.weight
    if snapshot.denominator is None:
        return total, None
    return total, pct(total, snapshot.denominator[1])


# ---------------------------------------------------------------- export

def snapshot_to_doc(snapshot: MacroNetSnapshot) -> dict:
    denominator = None
    if snapshot.denominator is not None:
        denominator = {"key": snapshot.denominator[0],
                       "amount": fmt_amount(snapshot.denominator[1])}
    return {
        "macronet_snapshot": SNAPSHOT_VERSION,
        "quarter": str(snapshot.quarter),
        "level": snapshot.level,
        "denominator": denominator,
        "nodes": [
            {
                "sector": node_key(n),
                "total_assets": (
                    fmt_amount(assets) if (assets := snapshot.node_attrs.get(n)) is not None
                    else None
                ),
            }
            for n in snapshot.nodes()
        ],
        "edges": [
            {
                "creditor": node_key(e.creditor),
                "debtor": node_key(e.debtor),
                "instrument": str(e.instrument),
                "programmes": list(e.programmes) if e.programmes is not None else None,
                "weight": fmt_amount(e.weight),
                "share_pct": fmt_pct(e.share_pct) if e.share_pct is not None else None,
            }
            for e in snapshot.edges
        ],
    }


def export_snapshot(snapshot: MacroNetSnapshot, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(snapshot_to_doc(snapshot), indent=2) + "\n"
    if fmt == "dot":
        return snapshot_to_dot(snapshot)
    raise ValueError(f"unknown export format: {fmt!r}")


_EDGE_COLORS = {"APP": "blue", "LOANS": "red"}


def snapshot_to_dot(snapshot: MacroNetSnapshot) -> str:
    """Graphviz rendering; one edge statement per link, labeled with the
    weight and, when normalized, the share of the denominator."""
    lines = [f"digraph macronet_{snapshot.quarter} {{", "  rankdir=LR;"]
    for node in snapshot.nodes():
        lines.append(f'  "{node_display(node)}";')
    for e in snapshot.edges:
        label = fmt_amount(e.weight)
        if e.share_pct is not None:
            label += f" ({fmt_pct(e.share_pct)}%)"
        color = _EDGE_COLORS.get(e.instrument.kind, "black")
        lines.append(
            f'  "{node_display(e.creditor)}" -> "{node_display(e.debtor)}"'
            f' [label="{label}", color={color}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _parse_node(name: str, level: str) -> Node:
    if level == MACRO_LEVEL:
        return MacroSector[name]
    return parse_sector(name)


def import_snapshot(text: str) -> MacroNetSnapshot:
    """Parse a JSON snapshot document back into a snapshot value."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptStore(f"invalid JSON ({exc.msg})") from None
    if not isinstance(doc, dict) or "macronet_snapshot" not in doc:
        raise FormatVersionError(None)
    if doc["macronet_snapshot"] != SNAPSHOT_VERSION:
        raise FormatVersionError(doc["macronet_snapshot"])
    try:
        level = doc["level"]
        if level not in (SECTOR_LEVEL, MACRO_LEVEL):
            raise ValueError(f"unknown level {level!r}")
        quarter = Quarter.parse(doc["quarter"])
        denominator = None
        if doc["denominator"] is not None:
            denominator = (doc["denominator"]["key"],
                           parse_amount(doc["denominator"]["amount"]))
        node_attrs: dict[Node, Decimal | None] = {}
        for n in doc["nodes"]:
            assets = n["total_assets"]
            node_attrs[_parse_node(n["sector"], level)] = (
                parse_amount(assets) if assets is not None else None
            )
        edges = tuple(
            Edge(
                _parse_node(e["creditor"], level),
                _parse_node(e["debtor"], level),
                Instrument.parse(e["instrument"]),
                parse_amount(e["weight"]),
                parse_amount(e["share_pct"]) if e["share_pct"] is not None else None,
                tuple(e["programmes"]) if e["programmes"] is not None else None,
            )
            for e in doc["edges"]
        )
        return MacroNetSnapshot(quarter, level, edges, node_attrs, denominator)
    except (KeyError, TypeError, ValueError, MacronetError) as exc:
        raise CorruptStore(str(exc)) from None
