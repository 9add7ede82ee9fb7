"""Exception types raised by the library.

Everything data- or validation-shaped derives from MacronetError so the
CLI can map it to exit code 1; usage problems are handled separately.
"""

from __future__ import annotations


class MacronetError(Exception):
    """Base class for data and validation errors."""


class UnknownSector(MacronetError):
    def __init__(self, text: str):
        super().__init__(f"unknown sector acronym {text!r}")
        self.text = text


class SchemaError(MacronetError):
    """Malformed ingest header or row."""

    def __init__(self, line: int | None, message: str):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


class NegativeStock(MacronetError):
    def __init__(self, key, period, line: int | None = None):
        at = f"line {line}: " if line is not None else ""
        super().__init__(f"{at}negative stock value for {key} at {period}")
        self.key = key
        self.period = period
        self.line = line


class DuplicatePoint(MacronetError):
    def __init__(self, key, period, line: int | None = None):
        at = f"line {line}: " if line is not None else ""
        super().__init__(f"{at}duplicate observation for {key} at {period}")
        self.key = key
        self.period = period
        self.line = line


class GapError(MacronetError):
    def __init__(self, key, missing):
        gaps = ", ".join(str(q) for q in missing)
        super().__init__(f"series {key} has interior gaps: {gaps}")
        self.key = key
        self.missing = tuple(missing)


class MissingSeries(MacronetError):
    def __init__(self, key):
        super().__init__(f"no series stored under key {key}")
        self.key = key


class MissingQuarter(MacronetError):
    def __init__(self, key, quarter):
        super().__init__(f"series {key} has no value at {quarter}")
        self.key = key
        self.quarter = quarter


class FormatVersionError(MacronetError):
    def __init__(self, found):
        super().__init__(f"unsupported format version: {found!r}")
        self.found = found


class CorruptStore(MacronetError):
    def __init__(self, reason: str):
        super().__init__(f"corrupt document: {reason}")


class EmptySnapshot(MacronetError):
    def __init__(self, quarter):
        super().__init__(f"no requested series covers {quarter}")
        self.quarter = quarter


class ZeroDenominator(MacronetError):
    def __init__(self, key, quarter):
        super().__init__(f"denominator {key} is not positive at {quarter}")


class AlreadyAggregated(MacronetError):
    def __init__(self):
        super().__init__("snapshot is already at MACRO level")


class NonPositiveBaseline(MacronetError):
    def __init__(self, key, quarter, value):
        super().__init__(
            f"baseline value for {key} at {quarter} is {value}; growth undefined"
        )
        self.key = key
        self.quarter = quarter


class InvertedWindow(MacronetError):
    def __init__(self, baseline, end):
        super().__init__(f"window end {end} must come after baseline {baseline}")
