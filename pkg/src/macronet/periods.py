"""Calendar quarters and months with total ordering and the string forms
used throughout the CSV and JSON formats ("2017Q2", "2017-04")."""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date

_QUARTER_RE = re.compile(r"^(\d{4})Q([1-4])$")
_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")

_QUARTER_END_DAY = {1: (3, 31), 2: (6, 30), 3: (9, 30), 4: (12, 31)}


@dataclass(frozen=True, order=True)
class Quarter:
    year: int
    index: int

    def __post_init__(self):
        if not 1 <= self.index <= 4:
            raise ValueError(f"quarter index out of range: {self.index}")

    @classmethod
    def parse(cls, text: str) -> "Quarter":
        m = _QUARTER_RE.match(text.strip())
        if not m:
            raise ValueError(f"not a quarter (expected YYYYQn): {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def of_date(cls, day: date) -> "Quarter":
        return cls(day.year, (day.month - 1) // 3 + 1)

    def next(self) -> "Quarter":
        if self.index == 4:
            return Quarter(self.year + 1, 1)
        return Quarter(self.year, self.index + 1)

    def prev(self) -> "Quarter":
        if self.index == 1:
            return Quarter(self.year - 1, 4)
        return Quarter(self.year, self.index - 1)

    def end_date(self) -> date:
        month, day = _QUARTER_END_DAY[self.index]
        return date(self.year, month, day)

    def last_month(self) -> "Month":
        return Month(self.year, 3 * self.index)

    def __str__(self) -> str:
        return f"{self.year}Q{self.index}"


def quarter_range(start: Quarter, end: Quarter) -> list[Quarter]:
    """All quarters from start to end, both included."""
    if end < start:
        raise ValueError(f"inverted quarter range {start}..{end}")
    out = []
    q = start
    while q <= end:
        out.append(q)
        q = q.next()
    return out


@dataclass(frozen=True, order=True)
class Month:
    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")

    @classmethod
    def parse(cls, text: str) -> "Month":
        m = _MONTH_RE.match(text.strip())
        if not m:
            raise ValueError(f"not a month (expected YYYY-MM): {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    def quarter(self) -> Quarter:
        return Quarter(self.year, (self.month - 1) // 3 + 1)

    @property
    def is_quarter_end(self) -> bool:
        return self.month in (3, 6, 9, 12)

    def __str__(self) -> str:
        return f"{self.year}-{self.month:02d}"
