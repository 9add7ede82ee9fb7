import io
from decimal import Decimal

import pytest

from macronet import (
    APP,
    AlreadyAggregated,
    Edge,
    EmptySnapshot,
    ExposureKey,
    IndicatorKey,
    IngestOptions,
    Instrument,
    LOANS,
    MacroNetSnapshot,
    MacroSector,
    MissingSeries,
    Quarter,
    QuarterlySeries,
    SectorCode,
    SeriesStore,
    TOTAL_ASSETS_BANKS,
    ZeroDenominator,
    aggregate_to_macro,
    build_snapshot,
    export_snapshot,
    fmt_pct,
    import_snapshot,
    ingest_csv,
    normalize_shares,
    sum_outgoing,
)

import oracle

Q2_2017 = Quarter(2017, 2)
BANKS = SectorCode.MFI_EXCL

LOAN_DEBTORS = {SectorCode.MFI, SectorCode.ICPF, SectorCode.FC_EXCL,
                SectorCode.HH, SectorCode.NFC, SectorCode.GG}


def make_store(series_list):
    return SeriesStore({s.key: s for s in series_list})


def indicator_series(name, quarter, value):
    key = IndicatorKey(name)
    return QuarterlySeries(key, "EUR_MILLIONS", "NSA", {quarter: Decimal(value)})


# ------------------------------------------------------------- build

def test_fixture_snapshot_has_seven_edges(store):
    snapshot = build_snapshot(store, Q2_2017, {LOANS, APP})
    assert len(snapshot.edges) == 7
    loan_edges = [e for e in snapshot.edges if e.instrument == LOANS]
    assert {e.debtor for e in loan_edges} == LOAN_DEBTORS
    assert all(e.creditor is BANKS for e in loan_edges)
    app_edge = snapshot.edge(SectorCode.ECB_NCB, BANKS, Instrument("APP"))
    assert app_edge is not None
    assert app_edge.weight == store.app_total(Q2_2017)
    assert app_edge.programmes == ("CBPP3", "ABSPP", "PSPP", "CSPP")


def test_fixture_snapshot_loans_only_2010(store, points):
    snapshot = build_snapshot(store, Quarter(2010, 1), {LOANS})
    covering = [k for k in points
                if k[0] == "EXP" and k[1] == "LOANS" and "2010Q1" in points[k]]
    assert len(snapshot.edges) == len(covering) == 6


def test_snapshot_app_only_before_programmes_is_empty(store):
    with pytest.raises(EmptySnapshot):
        build_snapshot(store, Quarter(2003, 1), {APP})


def test_snapshot_app_absent_quarter_gives_diagnostic(store):
    snapshot = build_snapshot(store, Quarter(2010, 1), {LOANS, APP})
    assert len(snapshot.edges) == 6
    assert any("APP" in d for d in snapshot.diagnostics)


def test_snapshot_app_programme_subset(store, points):
    snapshot = build_snapshot(store, Q2_2017, {APP},
                              app_programmes=("CBPP3", "ABSPP", "PSPP"))
    edge = snapshot.edges[0]
    assert edge.programmes == ("CBPP3", "ABSPP", "PSPP")
    assert edge.weight == oracle.app_total(points, "2017Q2",
                                           ("CBPP3", "ABSPP", "PSPP"))


def test_zero_stock_yields_explicit_zero_edge():
    text = ("series_id,kind,programme,creditor,debtor,unit,adjustment,freq,period,value\n"
            "A,APP,CBPP3,ECB_NCB,MFI_EXCL,EUR_MILLIONS,NSA,Q,2014Q3,0.00\n")
    store, _ = ingest_csv(io.StringIO(text), IngestOptions())
    snapshot = build_snapshot(store, Quarter(2014, 3), {APP})
    assert snapshot.edges[0].weight == Decimal("0.00")


def test_snapshot_rejects_duplicate_edge_triples():
    edge = Edge(BANKS, SectorCode.NFC, LOANS, Decimal("1.00"))
    with pytest.raises(ValueError):
        MacroNetSnapshot(Q2_2017, "SECTOR", (edge, edge), {})


# ------------------------------------------------------------- shares

def test_normalize_share_arithmetic():
    loans = QuarterlySeries(ExposureKey(LOANS, BANKS, SectorCode.NFC),
                            "EUR_MILLIONS", "SWDA", {Q2_2017: Decimal("60.00")})
    store = make_store([loans, indicator_series("TOTAL_ASSETS:MFI_EXCL",
                                                Q2_2017, "1000.00")])
    snapshot = normalize_shares(build_snapshot(store, Q2_2017, {LOANS}), store)
    assert fmt_pct(snapshot.edges[0].share_pct) == "6.00"
    assert snapshot.denominator == ("TOTAL_ASSETS:MFI_EXCL", Decimal("1000.00"))


def test_normalize_zero_denominator():
    loans = QuarterlySeries(ExposureKey(LOANS, BANKS, SectorCode.NFC),
                            "EUR_MILLIONS", "SWDA", {Q2_2017: Decimal("60.00")})
    store = make_store([loans, indicator_series("TOTAL_ASSETS:MFI_EXCL",
                                                Q2_2017, "0.00")])
    with pytest.raises(ZeroDenominator):
        normalize_shares(build_snapshot(store, Q2_2017, {LOANS}), store)


def test_normalize_missing_denominator(store):
    snapshot = build_snapshot(store, Q2_2017, {LOANS})
    with pytest.raises(MissingSeries):
        normalize_shares(snapshot, store, IndicatorKey("TOTAL_ASSETS:NFC"))
    early = build_snapshot(store, Quarter(2003, 1), {LOANS})
    lacking = SeriesStore({k: v for k, v in store.series.items()
                           if k != TOTAL_ASSETS_BANKS})
    with pytest.raises(MissingSeries):
        normalize_shares(early, lacking)


def test_normalize_returns_new_snapshot(store):
    snapshot = build_snapshot(store, Q2_2017, {LOANS, APP})
    normalized = normalize_shares(snapshot, store)
    assert normalized is not snapshot
    assert all(e.share_pct is None for e in snapshot.edges)
    assert all(e.share_pct is not None for e in normalized.edges)


def test_fixture_aggregate_shares(store):
    snapshot = normalize_shares(build_snapshot(store, Q2_2017, {LOANS, APP}), store)
    _, intra = sum_outgoing(snapshot, BANKS, LOANS,
                            {SectorCode.MFI, SectorCode.ICPF, SectorCode.FC_EXCL})
    _, real = sum_outgoing(snapshot, BANKS, LOANS, {SectorCode.HH, SectorCode.NFC})
    assert fmt_pct(intra) == "23.38"
    assert fmt_pct(real) == "31.56"
    app_edge = snapshot.edge(SectorCode.ECB_NCB, BANKS, Instrument("APP"))
    assert fmt_pct(app_edge.share_pct) == "6.00"


def test_sum_outgoing_empty_and_disjoint(store):
    snapshot = normalize_shares(build_snapshot(store, Q2_2017, {LOANS}), store)
    weight, share = sum_outgoing(snapshot, BANKS, LOANS, set())
    assert weight == Decimal("0.00") and share == Decimal("0")
    intra = {SectorCode.MFI, SectorCode.ICPF, SectorCode.FC_EXCL}
    real = {SectorCode.HH, SectorCode.NFC}
    w1, _ = sum_outgoing(snapshot, BANKS, LOANS, intra)
    w2, _ = sum_outgoing(snapshot, BANKS, LOANS, real)
    w12, _ = sum_outgoing(snapshot, BANKS, LOANS, intra | real)
    assert w12 == w1 + w2


def test_sum_outgoing_without_normalization(store):
    snapshot = build_snapshot(store, Q2_2017, {LOANS})
    weight, share = sum_outgoing(snapshot, BANKS, LOANS, {SectorCode.NFC})
    assert weight > 0 and share is None


# ------------------------------------------------------------- aggregation

def test_aggregate_sums_real_sector():
    w1, w2 = Decimal("5.00"), Decimal("7.00")
    edges = (Edge(BANKS, SectorCode.HH, LOANS, w1),
             Edge(BANKS, SectorCode.NFC, LOANS, w2))
    macro = aggregate_to_macro(MacroNetSnapshot(Q2_2017, "SECTOR", edges, {}))
    assert macro.level == "MACRO"
    assert len(macro.edges) == 1
    edge = macro.edges[0]
    assert (edge.creditor, edge.debtor) == (MacroSector.FINANCIAL, MacroSector.REAL)
    assert edge.weight == w1 + w2


def test_aggregate_keeps_intra_financial_self_loop():
    edges = (Edge(BANKS, SectorCode.MFI, LOANS, Decimal("1.00")),
             Edge(BANKS, SectorCode.ICPF, LOANS, Decimal("2.00")),
             Edge(BANKS, SectorCode.FC_EXCL, LOANS, Decimal("3.00")))
    macro = aggregate_to_macro(MacroNetSnapshot(Q2_2017, "SECTOR", edges, {}))
    assert len(macro.edges) == 1
    edge = macro.edges[0]
    assert edge.creditor is MacroSector.FINANCIAL
    assert edge.debtor is MacroSector.FINANCIAL
    assert edge.weight == Decimal("6.00")


def test_aggregate_share_linearity(store):
    snapshot = normalize_shares(build_snapshot(store, Q2_2017, {LOANS, APP}), store)
    macro = aggregate_to_macro(snapshot)
    fin_real = macro.edge(MacroSector.FINANCIAL, MacroSector.REAL, LOANS)
    member_sum = sum(e.share_pct for e in snapshot.edges
                     if e.instrument == LOANS
                     and e.debtor in (SectorCode.HH, SectorCode.NFC))
    assert fmt_pct(fin_real.share_pct) == fmt_pct(member_sum) == "31.56"


def test_aggregate_conserves_weight_per_instrument(store):
    snapshot = build_snapshot(store, Q2_2017, {LOANS, APP})
    macro = aggregate_to_macro(snapshot)
    for instrument in (LOANS, Instrument("APP")):
        before = sum(e.weight for e in snapshot.edges if e.instrument == instrument)
        after = sum(e.weight for e in macro.edges if e.instrument == instrument)
        assert before == after


def test_aggregate_is_multiplex(store):
    macro = aggregate_to_macro(build_snapshot(store, Q2_2017, {LOANS, APP}))
    self_loops = [e for e in macro.edges
                  if e.creditor is MacroSector.FINANCIAL
                  and e.debtor is MacroSector.FINANCIAL]
    assert {str(e.instrument) for e in self_loops} == {"LOANS", "APP"}
    assert len(macro.nodes()) == 3


def test_aggregate_twice_rejected(store):
    macro = aggregate_to_macro(build_snapshot(store, Q2_2017, {LOANS}))
    with pytest.raises(AlreadyAggregated):
        aggregate_to_macro(macro)


# ------------------------------------------------------------- export

def test_export_json_round_trip_is_byte_stable(store):
    snapshot = normalize_shares(build_snapshot(store, Q2_2017, {LOANS, APP}), store)
    text = export_snapshot(snapshot)
    assert export_snapshot(import_snapshot(text)) == text
    macro_text = export_snapshot(aggregate_to_macro(snapshot))
    assert export_snapshot(import_snapshot(macro_text)) == macro_text


def test_export_dot_has_one_statement_per_edge(store):
    snapshot = normalize_shares(build_snapshot(store, Q2_2017, {LOANS, APP}), store)
    dot = export_snapshot(snapshot, "dot")
    arrows = [line for line in dot.splitlines() if "->" in line]
    assert len(arrows) == 7
    assert dot.startswith("digraph macronet_2017Q2 {")
    assert '"ECB&NCB" -> "MFI excl. ECB&NCB"' in dot
    assert "(6.00%)" in dot


def test_export_empty_edge_snapshot():
    snapshot = MacroNetSnapshot(Q2_2017, "SECTOR", (), {})
    text = export_snapshot(snapshot)
    assert '"edges": []' in text
    assert export_snapshot(import_snapshot(text)) == text


def test_import_snapshot_version_and_corruption():
    from macronet import CorruptStore, FormatVersionError

    with pytest.raises(FormatVersionError):
        import_snapshot('{"macronet_snapshot": 99}')
    with pytest.raises(CorruptStore):
        import_snapshot('{"macronet_snapshot": 1, "quarter": "20')
