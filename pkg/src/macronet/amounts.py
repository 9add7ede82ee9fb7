"""Fixed-point amounts and ratio formatting.

Amounts carry exactly two fraction digits (EUR millions for stocks) and
are kept in decimal arithmetic end to end, so additivity and round-trip
checks are exact. Ratios (shares, growth rates) are taken at decimal
context precision and rounded half-up to two decimals only at the
reporting boundary.
"""

from __future__ import annotations

from decimal import Decimal, InvalidOperation, ROUND_HALF_UP

CENT = Decimal("0.01")
HUNDRED = Decimal(100)


def parse_amount(text: str) -> Decimal:
    """Parse a plain decimal literal with at most two fraction digits."""
    token = text.strip()
    if not token or "e" in token or "E" in token:
        raise ValueError(f"not a plain decimal amount: {text!r}")
    try:
        value = Decimal(token)
    except InvalidOperation:
        raise ValueError(f"not a plain decimal amount: {text!r}") from None
    if not value.is_finite():
        raise ValueError(f"not a plain decimal amount: {text!r}")
    if -value.as_tuple().exponent > 2:
        raise ValueError(f"more than 2 fraction digits: {text!r}")
    return value.quantize(CENT)


def fmt_amount(value: Decimal) -> str:
    return str(value.quantize(CENT))


def pct(numerator: Decimal, denominator: Decimal) -> Decimal:
    """numerator / denominator as an unrounded percentage."""
    return numerator / denominator * HUNDRED


def growth_rate(end: Decimal, baseline: Decimal) -> Decimal:
    """Cumulative simple percent change from baseline to end, unrounded."""
    return (end / baseline - 1) * HUNDRED


def fmt_pct(value: Decimal) -> str:
    """Render a percentage rounded half-up to two decimals."""
    return str(value.quantize(CENT, rounding=ROUND_HALF_UP))
