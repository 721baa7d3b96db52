"""Call admission control for a train crossing periodic cells.

Three cooperating mechanisms decide whether a call enters the system:

* a distance-adaptive reservation factor that squeezes new calls out of the
  cell-boundary region so handover calls keep headroom there,
* a strict service priority (handover before new; voice before video before
  data) used when several requests contend in the same decision epoch, and
* an optional per-bit signalling overhead that inflates each call's
  bandwidth demand before the capacity check.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

MBPS_PER_KBPS = 1e-3


class ServiceKind(enum.Enum):
    VOICE = "voice"
    VIDEO = "video"
    DATA = "data"


class Origin(enum.Enum):
    HANDOVER = "handover"
    NEW = "new"


class SchemeKind(enum.Enum):
    """Admission policy variants exercised by the experiments."""

    ADAPTIVE_RESERVATION = "reservation"
    PRIORITY = "priority"
    PRIORITY_OVERHEAD = "priority-overhead"
    BASELINE = "baseline"


@dataclass(frozen=True)
class ServiceClass:
    """Traffic description of one service type."""

    kind: ServiceKind
    rate_kbps: float
    arrival_rate_per_s: float
    mean_holding_s: float

    def __post_init__(self):
        if self.rate_kbps <= 0 or self.arrival_rate_per_s < 0 or self.mean_holding_s <= 0:
            raise ValueError("service class parameters must be positive")

    @property
    def demand_mbps(self) -> float:
        return self.rate_kbps * MBPS_PER_KBPS


DEFAULT_SERVICE_CLASSES = (
    ServiceClass(ServiceKind.VOICE, 64.0, 2.0, 60.0),
    ServiceClass(ServiceKind.DATA, 128.0, 0.5, 300.0),
    ServiceClass(ServiceKind.VIDEO, 512.0, 0.1, 600.0),
)


@dataclass(frozen=True)
class CallRequest:
    """One admission request (a new arrival or a handover re-presentation)."""

    id: int
    kind: ServiceKind
    origin: Origin
    demand_mbps: float
    arrival_s: float = 0.0
    holding_s: float = 0.0

    def __post_init__(self):
        if self.demand_mbps <= 0 or not math.isfinite(self.demand_mbps):
            raise ValueError("demand_mbps must be positive and finite")


def access_ratio(accepted: int, total: int) -> float:
    """Fraction of requests admitted; defined as 0 when nothing arrived."""
    if accepted < 0 or total < 0 or accepted > total:
        raise ValueError("need 0 <= accepted <= total")
    if total == 0:
        return 0.0
    return accepted / total


@dataclass(frozen=True)
class ReservationPolicy:
    """Distance-adaptive reservation over a cell-boundary band.

    ``d1_m``/``d2_m`` default to a quarter and three quarters of the band.
    The reservation factor ramps 0 -> 1 over [0, d1], holds 1 on [d1, d2]
    and ramps back to 0 at the far edge.
    """

    overlap_m: float = 1000.0
    d1_m: float | None = None
    d2_m: float | None = None

    def __post_init__(self):
        if self.overlap_m <= 0 or not math.isfinite(self.overlap_m):
            raise ValueError("overlap_m must be positive and finite")
        if self.d1_m is None:
            object.__setattr__(self, "d1_m", 0.25 * self.overlap_m)
        if self.d2_m is None:
            object.__setattr__(self, "d2_m", 0.75 * self.overlap_m)
        if not 0 < self.d1_m <= self.d2_m < self.overlap_m:
            raise ValueError("need 0 < d1 <= d2 < overlap")

    def reservation_factor(self, position_m: float) -> float:
        """Fraction of the handover threshold withheld from new calls at
        ``position_m`` metres into the band."""
        x = float(position_m)
        if not 0 <= x <= self.overlap_m:
            raise ValueError(f"position {x} outside [0, {self.overlap_m}]")
        if x < self.d1_m:
            return x / self.d1_m
        if x <= self.d2_m:
            return 1.0
        return (self.overlap_m - x) / (self.overlap_m - self.d2_m)


def reservation_factor(position_m: float,
                       policy: ReservationPolicy | None = None) -> float:
    return (policy or ReservationPolicy()).reservation_factor(position_m)


def admit(used_mbps: float, demand_mbps: float, origin: Origin,
          threshold_mbps: float, beta: float = 0.0) -> bool:
    """Single-call capacity check.

    Handover calls may fill the full threshold; new calls only its
    ``(1 - beta)`` share.
    """
    if used_mbps < 0 or demand_mbps <= 0 or threshold_mbps < 0:
        raise ValueError("capacities must be non-negative, demand positive")
    if not 0 <= beta <= 1:
        raise ValueError("beta must lie in [0, 1]")
    limit = threshold_mbps if origin is Origin.HANDOVER else (1.0 - beta) * threshold_mbps
    return used_mbps + demand_mbps <= limit


_PRIORITY = {
    (ServiceKind.VOICE, Origin.HANDOVER): 0,
    (ServiceKind.VIDEO, Origin.HANDOVER): 1,
    (ServiceKind.DATA, Origin.HANDOVER): 2,
    (ServiceKind.VOICE, Origin.NEW): 3,
    (ServiceKind.VIDEO, Origin.NEW): 4,
    (ServiceKind.DATA, Origin.NEW): 5,
}


def priority_rank(kind: ServiceKind, origin: Origin) -> int:
    """Lower rank is served first: handovers before new calls, and voice
    before video before data within each origin."""
    return _PRIORITY[(kind, origin)]


@dataclass(frozen=True)
class OverheadModel:
    """Per-bit signalling overhead of one packetized service.

    A packet of ``symbols_per_packet`` symbols at ``bits_per_symbol`` bits
    carries a fixed header and, in expectation, ``check_factor`` retransmitted
    symbols per erroneous symbol; dividing by the payload gives the extra
    bandwidth fraction a call of that service must reserve.
    """

    header_bits: float = 48.0
    check_factor: float = 2.0
    symbols_per_packet: int = 2048
    bits_per_symbol: int = 4
    ber: float = 1e-5

    def __post_init__(self):
        if self.header_bits < 0 or self.check_factor < 0:
            raise ValueError("header_bits and check_factor must be >= 0")
        if self.symbols_per_packet < 1:
            raise ValueError("symbols_per_packet must be >= 1")
        if self.bits_per_symbol not in (0, 2, 4, 6):
            raise ValueError("bits_per_symbol must be one of 0, 2, 4, 6")
        if not 0 <= self.ber < 1:
            raise ValueError("ber must lie in [0, 1)")


def overhead_per_bit(model: OverheadModel) -> float:
    """Extra signalling bits carried per payload bit; 0 for a silent link."""
    b = model.bits_per_symbol
    if b == 0:
        return 0.0
    symbol_error = 1.0 - (1.0 - model.ber) ** b
    check_symbols = model.check_factor * model.symbols_per_packet * symbol_error
    return (model.header_bits + b * check_symbols) / (b * model.symbols_per_packet)


def adjusted_demand(demand_mbps: float, model: OverheadModel | None) -> float:
    """Bandwidth demand inflated by the signalling overhead."""
    if demand_mbps <= 0:
        raise ValueError("demand_mbps must be positive")
    if model is None:
        return demand_mbps
    return (1.0 + overhead_per_bit(model)) * demand_mbps


@dataclass
class BatchOutcome:
    """Decisions in processing order plus the capacity left afterwards."""

    decisions: list
    remaining_mbps: float

    @property
    def accepted(self) -> list:
        return [r for r, ok in self.decisions if ok]

    @property
    def rejected(self) -> list:
        return [r for r, ok in self.decisions if not ok]


def batch_admit_priority(requests: Iterable[CallRequest], remaining_mbps: float,
                         overhead=None, stop_on_reject: bool = False) -> BatchOutcome:
    """Admit a batch of contending requests in strict priority order.

    Requests are ordered by :func:`priority_rank` (ties by id), each is
    granted iff the residual capacity covers its (overhead-adjusted) demand,
    and by default processing continues past rejections so smaller
    lower-priority requests may still fit; ``stop_on_reject`` turns the
    batch into a prefix-acceptance instead.

    ``overhead`` may be None, one :class:`OverheadModel` for all requests,
    or a mapping from :class:`ServiceKind` to models.
    """
    if remaining_mbps < 0:
        raise ValueError("remaining_mbps must be non-negative")
    ordered = sorted(requests, key=lambda r: (priority_rank(r.kind, r.origin), r.id))
    decisions = []
    remaining = float(remaining_mbps)
    rejected_any = False
    for req in ordered:
        model = overhead.get(req.kind) if isinstance(overhead, Mapping) else overhead
        demand = adjusted_demand(req.demand_mbps, model)
        if not (stop_on_reject and rejected_any) and remaining - demand >= 0:
            decisions.append((req, True))
            remaining -= demand
        else:
            decisions.append((req, False))
            rejected_any = True
    return BatchOutcome(decisions=decisions, remaining_mbps=remaining)


@dataclass
class AccessStats:
    """Accepted/total counters per (service kind, origin) category."""

    counts: dict = field(default_factory=dict)

    def record(self, kind: ServiceKind, origin: Origin, accepted: bool) -> None:
        acc, tot = self.counts.get((kind, origin), (0, 0))
        self.counts[(kind, origin)] = (acc + (1 if accepted else 0), tot + 1)

    def accepted(self, kind: ServiceKind, origin: Origin) -> int:
        return self.counts.get((kind, origin), (0, 0))[0]

    def total(self, kind: ServiceKind, origin: Origin) -> int:
        return self.counts.get((kind, origin), (0, 0))[1]

    def ratio(self, kind: ServiceKind, origin: Origin) -> float:
        acc, tot = self.counts.get((kind, origin), (0, 0))
        return access_ratio(acc, tot)

    def merge(self, other: "AccessStats") -> "AccessStats":
        merged = AccessStats(dict(self.counts))
        for key, (acc, tot) in other.counts.items():
            a0, t0 = merged.counts.get(key, (0, 0))
            merged.counts[key] = (a0 + acc, t0 + tot)
        return merged
