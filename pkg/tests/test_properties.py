"""Property suites backing the library's stated invariants, 1000 cases
each: growth scale-invariance and chaining, share additivity, macro
aggregation weight conservation, end-of-quarter idempotence, and store /
snapshot round-trip byte-stability.

Each example derives its case data from one generated seed; that keeps a
thousand cases per suite well inside the suite's wall-clock budget.
"""

import io
import random
from decimal import Decimal, localcontext

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from macronet import (
    Edge,
    ExposureKey,
    IndicatorKey,
    Instrument,
    LEAF_SECTORS,
    LOANS,
    MacroNetSnapshot,
    Month,
    Quarter,
    QuarterlySeries,
    SectorCode,
    SeriesStore,
    TOTAL_ASSETS_BANKS,
    aggregate_to_macro,
    end_of_quarter,
    export_snapshot,
    fmt_pct,
    growth_since,
    import_snapshot,
    load_store,
    normalize_shares,
    store_to_json,
    sum_outgoing,
)
from macronet.series import ADJUSTMENTS, UNITS

PROPERTY_EXAMPLES = 1000

suite = settings(
    max_examples=PROPERTY_EXAMPLES,
    deadline=None,
    derandomize=True,
    database=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)

seeds = st.integers(0, 2**48 - 1)

Q0 = Quarter(2014, 3)
Q1 = Quarter(2014, 4)

ALL_SECTORS = sorted(SectorCode, key=lambda c: c.name)
LEAVES = sorted(LEAF_SECTORS, key=lambda c: c.name)
INSTRUMENTS = (LOANS, Instrument("APP"), Instrument("BONDS"))
ALL_TRIPLES = [(c, d, i) for c in ALL_SECTORS for d in ALL_SECTORS
               for i in INSTRUMENTS]
ALL_MONTHS = [Month(y, m) for y in range(2000, 2031) for m in range(1, 13)]
KEY_POOL = (
    [IndicatorKey(n) for n in ("GDP", "HICP", "TOTAL_ASSETS:MFI_EXCL", "X1")]
    + [ExposureKey(i, c, d)
       for i in (LOANS, Instrument("APP", "PSPP"), Instrument("BONDS"))
       for c, d in ((SectorCode.MFI_EXCL, SectorCode.NFC),
                    (SectorCode.ECB_NCB, SectorCode.MFI_EXCL),
                    (SectorCode.NFC, SectorCode.GG))]
)


def _amount(rng: random.Random, allow_zero: bool = False) -> Decimal:
    if allow_zero and rng.random() < 0.08:
        return Decimal("0.00")
    return Decimal(rng.randint(1, 10**10)).scaleb(-2)


def _two_point_store(key, baseline, end):
    return SeriesStore({key: QuarterlySeries(
        key, "EUR_MILLIONS", "UNKNOWN", {Q0: baseline, Q1: end})})


def _growth(baseline, end) -> Decimal:
    key = IndicatorKey("GDP")
    return growth_since(_two_point_store(key, baseline, end), key, Q0, Q1).growth_pct


# ------------------------------------------------------------- growth

@suite
@given(seeds)
def test_growth_scale_invariance(seed):
    rng = random.Random(seed)
    baseline = _amount(rng)
    end = _amount(rng, allow_zero=True)
    scale = Decimal(rng.randint(1, 10**8)).scaleb(-2)
    key = IndicatorKey("GDP")
    plain = growth_since(_two_point_store(key, baseline, end), key, Q0, Q1)
    scaled = growth_since(
        _two_point_store(key, baseline * scale, end * scale), key, Q0, Q1)
    assert scaled.growth_pct == plain.growth_pct
    assert scaled.display() == plain.display()


@suite
@given(seeds)
def test_growth_chaining_ratio_identity(seed):
    rng = random.Random(seed)
    a, b, c = (_amount(rng) for _ in range(3))
    g_ab, g_bc, g_ac = _growth(a, b), _growth(b, c), _growth(a, c)
    with localcontext() as ctx:
        ctx.prec = 60
        lhs = (1 + g_ab / 100) * (1 + g_bc / 100)
        rhs = 1 + g_ac / 100
        assert abs(lhs - rhs) <= Decimal("1e-12") * max(Decimal(1), abs(rhs))


# ------------------------------------------------------------- shares

@suite
@given(seeds)
def test_share_additivity_over_disjoint_debtor_sets(seed):
    rng = random.Random(seed)
    debtors = rng.sample(LEAVES, rng.randint(2, 6))
    edges = tuple(Edge(SectorCode.MFI_EXCL, d, LOANS, _amount(rng, True))
                  for d in debtors)
    store = SeriesStore({TOTAL_ASSETS_BANKS: QuarterlySeries(
        TOTAL_ASSETS_BANKS, "EUR_MILLIONS", "NSA", {Q0: _amount(rng)})})
    snapshot = normalize_shares(
        MacroNetSnapshot(Q0, "SECTOR", edges, {}), store)

    part_a = {d for d in debtors if rng.random() < 0.5}
    part_b = set(debtors) - part_a
    weight_a, share_a = sum_outgoing(snapshot, SectorCode.MFI_EXCL, LOANS, part_a)
    weight_b, share_b = sum_outgoing(snapshot, SectorCode.MFI_EXCL, LOANS, part_b)
    weight_ab, share_ab = sum_outgoing(snapshot, SectorCode.MFI_EXCL, LOANS,
                                       part_a | part_b)
    assert weight_ab == weight_a + weight_b  # exact on weights
    assert abs(share_ab - (share_a + share_b)) < Decimal("0.005")


# ------------------------------------------------------------- aggregation

def _sector_snapshot(rng: random.Random) -> MacroNetSnapshot:
    triples = rng.sample(ALL_TRIPLES, rng.randint(1, 8))
    edges = tuple(Edge(c, d, i, _amount(rng, True)) for c, d, i in triples)
    return MacroNetSnapshot(Q0, "SECTOR", edges, {})


@suite
@given(seeds)
def test_aggregation_conserves_weight_per_instrument(seed):
    rng = random.Random(seed)
    snapshot = _sector_snapshot(rng)
    macro = aggregate_to_macro(snapshot)
    assert macro.level == "MACRO"
    for instrument in INSTRUMENTS:
        before = sum((e.weight for e in snapshot.edges
                      if e.instrument == instrument), Decimal(0))
        after = sum((e.weight for e in macro.edges
                     if e.instrument == instrument), Decimal(0))
        assert before == after
    assert len(macro.nodes()) <= 3


# ------------------------------------------------------------- reduction

@suite
@given(seeds)
def test_end_of_quarter_idempotent(seed):
    rng = random.Random(seed)
    monthly = {m: _amount(rng, True)
               for m in rng.sample(ALL_MONTHS, rng.randint(1, 10))}
    reduced, _ = end_of_quarter(monthly)
    requarterized = {q.last_month(): v for q, v in reduced.items()}
    again, warnings = end_of_quarter(requarterized)
    assert again == reduced
    assert warnings == []


# ------------------------------------------------------------- round trips

@suite
@given(seeds)
def test_store_round_trip_byte_stability(seed):
    rng = random.Random(seed)
    series = {}
    for key in rng.sample(KEY_POOL, rng.randint(1, 3)):
        run = [Quarter(rng.randint(2000, 2030), rng.randint(1, 4))]
        for _ in range(rng.randint(0, 4)):
            run.append(run[-1].next())
        series[key] = QuarterlySeries(
            key, rng.choice(UNITS), rng.choice(ADJUSTMENTS),
            {q: _amount(rng, True) for q in run}, gappy=rng.random() < 0.2)
    store = SeriesStore(series)
    text = store_to_json(store)
    assert store_to_json(load_store(io.StringIO(text))) == text


@suite
@given(seeds)
def test_snapshot_round_trip_byte_stability(seed):
    rng = random.Random(seed)
    snapshot = _sector_snapshot(rng)
    if rng.random() < 0.5:
        store = SeriesStore({TOTAL_ASSETS_BANKS: QuarterlySeries(
            TOTAL_ASSETS_BANKS, "EUR_MILLIONS", "NSA", {Q0: _amount(rng)})})
        snapshot = normalize_shares(snapshot, store)
    text = export_snapshot(snapshot)
    assert export_snapshot(import_snapshot(text)) == text


# ------------------------------------------------------------- rounding

@suite
@given(seeds)
def test_fmt_pct_half_up_at_three_decimals(seed):
    rng = random.Random(seed)
    value = Decimal(rng.randint(-(10**7), 10**7)).scaleb(-3)
    text = fmt_pct(value)
    assert Decimal(text) * 1000 % 10 == 0
    delta = (Decimal(text) - value) * 1000
    if value >= 0:
        assert -5 < delta <= 5  # x.xx5 rounds away from zero, upward
    else:
        assert -5 <= delta < 5