"""Modulation-and-coding lookup for one radio unit and link capacity rules."""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from .channel import MimoMode

_BITS = {"QPSK": 2, "16QAM": 4, "64QAM": 6}


@dataclass(frozen=True)
class McsEntry:
    modulation: str
    code_rate: float
    min_sinr_db: float  # lowest SINR at which the target bit error rate holds
    rate_mbps: float    # net rate through one mobile radio unit

    def __post_init__(self):
        if self.modulation not in _BITS:
            raise ValueError(f"unsupported modulation {self.modulation!r}")
        if not 0 < self.code_rate <= 1:
            raise ValueError("code_rate must lie in (0, 1]")
        if self.rate_mbps <= 0:
            raise ValueError("rate_mbps must be positive")

    @property
    def bits_per_symbol(self) -> int:
        return _BITS[self.modulation]

    @property
    def label(self) -> str:
        return f"{self.modulation} {self.code_rate:g}"


class McsTable:
    """Ordered MCS ladder: thresholds and rates must both strictly increase."""

    def __init__(self, entries):
        entries = tuple(entries)
        if not entries:
            raise ValueError("MCS table may not be empty")
        for prev, cur in zip(entries, entries[1:]):
            if cur.min_sinr_db <= prev.min_sinr_db:
                raise ValueError("MCS thresholds must strictly increase")
            if cur.rate_mbps <= prev.rate_mbps:
                raise ValueError("MCS rates must strictly increase")
        self.entries = entries
        self._thresholds = [e.min_sinr_db for e in entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def select(self, sinr_db: float) -> McsEntry | None:
        """Highest-rate entry usable at ``sinr_db``; None below the ladder."""
        if not math.isfinite(sinr_db):
            raise ValueError("sinr_db must be finite")
        i = bisect_right(self._thresholds, sinr_db)
        return self.entries[i - 1] if i else None


# Operating points meeting a 1e-5 target bit error rate, per mobile radio unit.
DEFAULT_MCS_TABLE = McsTable([
    McsEntry("QPSK", 1 / 2, 2.1, 18.637),
    McsEntry("QPSK", 3 / 4, 3.0, 27.956),
    McsEntry("QPSK", 7 / 8, 4.7, 32.615),
    McsEntry("16QAM", 1 / 2, 6.8, 37.274),
    McsEntry("16QAM", 3 / 4, 7.0, 55.911),
    McsEntry("64QAM", 3 / 4, 10.6, 83.867),
])


def select_mcs(sinr_db: float, table: McsTable = DEFAULT_MCS_TABLE) -> McsEntry | None:
    return table.select(sinr_db)


def link_capacity(mode: MimoMode, entry: McsEntry) -> float:
    """Aggregate link rate in Mbps: two parallel radio units in multiplex
    mode, a single combined stream in diversity mode."""
    streams = 2 if mode is MimoMode.MULTIPLEX else 1
    return streams * entry.rate_mbps
