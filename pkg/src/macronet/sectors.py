"""Euro-area institutional sector taxonomy and macro-sector aggregation.

Seven leaf sectors plus the composite MFI (Eurosystem + banks excluding
the Eurosystem). Each code carries the display acronym used in published
who-to-whom tables; parsing also accepts ASCII aliases, because "&", "."
and spaces are hostile inside CSV keys and shell arguments.

Alias table (input -> code):

    ECB_NCB                          ECB&NCB
    MFI_EXCL, MFI_EXCL_ECB_NCB       MFI excl. ECB&NCB
    ICPF, IC_PF                      IC&PF
    FC_EXCL                          FC excl. MFI and IC&PF
    HH, HH_NPISH                     HH&NPISH
    NFC                              NFC
    GG                               GG
    MFI                              MFI (composite)

Machine-readable output always uses the member name (left column, first
entry), which round-trips through parse_sector.
"""

from __future__ import annotations

from enum import Enum

from .errors import UnknownSector


class SectorCode(Enum):
    """Institutional sector, identified by its display acronym."""

    ECB_NCB = "ECB&NCB"
    MFI_EXCL = "MFI excl. ECB&NCB"
    ICPF = "IC&PF"
    FC_EXCL = "FC excl. MFI and IC&PF"
    HH = "HH&NPISH"
    NFC = "NFC"
    GG = "GG"
    MFI = "MFI"  # composite: ECB_NCB + MFI_EXCL

    @property
    def acronym(self) -> str:
        return self.value

    @property
    def is_composite(self) -> bool:
        return self is SectorCode.MFI


LEAF_SECTORS = frozenset(c for c in SectorCode if not c.is_composite)

_ALIASES = {
    "MFI_EXCL_ECB_NCB": SectorCode.MFI_EXCL,
    "IC_PF": SectorCode.ICPF,
    "HH_NPISH": SectorCode.HH,
}
_ALIASES.update({c.name: c for c in SectorCode})

_BY_ACRONYM = {c.value: c for c in SectorCode}


class MacroSector(Enum):
    FINANCIAL = "FINANCIAL"
    REAL = "REAL"
    PUBLIC = "PUBLIC"


_MACRO_OF = {
    SectorCode.ECB_NCB: MacroSector.FINANCIAL,
    SectorCode.MFI_EXCL: MacroSector.FINANCIAL,
    SectorCode.MFI: MacroSector.FINANCIAL,
    SectorCode.ICPF: MacroSector.FINANCIAL,
    SectorCode.FC_EXCL: MacroSector.FINANCIAL,
    SectorCode.HH: MacroSector.REAL,
    SectorCode.NFC: MacroSector.REAL,
    SectorCode.GG: MacroSector.PUBLIC,
}


def parse_sector(text: str) -> SectorCode:
    """Resolve a display acronym or ASCII alias to a sector code.

    Matching is case-sensitive after trimming surrounding whitespace.
    Raises UnknownSector for anything else.
    """
    token = text.strip()
    code = _BY_ACRONYM.get(token) or _ALIASES.get(token)
    if code is None:
        raise UnknownSector(text)
    return code


def macro_sector_of(code: SectorCode) -> MacroSector:
    """Macro sector a code belongs to; the composite MFI is financial."""
    return _MACRO_OF[code]


def constituents(code: SectorCode) -> frozenset[SectorCode]:
    """Leaf sectors making up a code; a leaf maps to itself."""
    if code is SectorCode.MFI:
        return frozenset({SectorCode.ECB_NCB, SectorCode.MFI_EXCL})
    return frozenset({code})


def macro_leaves(macro: MacroSector) -> frozenset[SectorCode]:
    """All leaf sectors belonging to a macro sector."""
    return frozenset(c for c in LEAF_SECTORS if _MACRO_OF[c] is macro)
