"""Discrete-event simulation of service calls on a train crossing cells.

The train moves at constant speed through an endless row of equal cells
whose coverage areas overlap near each boundary.  Inside an overlap band
the link drops to its robust diversity mode (half the multiplex capacity)
and every active call must be re-admitted into the next cell — the
handover.  New calls arrive as Poisson streams per service class and are
admitted by one of the policy variants in :mod:`hsrsim.admission`.

Event ordering at equal timestamps is fixed (zone transition, then
departures, then arrivals, then the epoch tick; ties broken by insertion
order), so runs are reproducible byte for byte given a seed.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .admission import (DEFAULT_SERVICE_CLASSES, AccessStats, CallRequest,
                        Origin, OverheadModel, ReservationPolicy, SchemeKind,
                        ServiceKind, adjusted_demand, admit,
                        batch_admit_priority)
from .allocation import (AllocatorScenario, SolverLimitError, solve_exact,
                         solve_greedy)
from .channel import (DEFAULT_NOISE_PSD_W_PER_HZ, DEFAULT_TX_POWER_W,
                      LinkQuality, MimoConfig, MimoMode, OfdmConfig,
                      STANDARD_CONFIGS)
from .mcs import DEFAULT_MCS_TABLE, McsTable, link_capacity, select_mcs

KMH_TO_MPS = 1.0 / 3.6

# Default target bit error rate of the loading rule and overhead model.
DEFAULT_TARGET_BER = 1e-5


class ScenarioError(RuntimeError):
    """A scenario is configured beyond what its components can deliver."""


class Zone(enum.Enum):
    NORMAL = "normal"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class ZonePosition:
    zone: Zone
    into_overlap_m: float | None = None  # metres into the band, if inside


def train_zone(position_m: float, cell_radius_m: float,
               overlap_m: float) -> ZonePosition:
    """Classify a track position as open-cell or boundary-overlap.

    Cells are centred every ``2 * cell_radius_m`` with an overlap band of
    width ``overlap_m`` straddling each boundary.  A position exactly on a
    boundary is halfway through the band.
    """
    if cell_radius_m <= 0 or not math.isfinite(cell_radius_m):
        raise ValueError("cell_radius_m must be positive and finite")
    if not 0 < overlap_m < 2 * cell_radius_m:
        raise ValueError("overlap_m must lie in (0, cell diameter)")
    if position_m < 0 or not math.isfinite(position_m):
        raise ValueError("position_m must be non-negative and finite")
    pitch = 2.0 * cell_radius_m
    x = (position_m - (cell_radius_m - overlap_m / 2.0)) % pitch
    if 0 <= x < overlap_m:
        return ZonePosition(Zone.OVERLAP, x)
    return ZonePosition(Zone.NORMAL, None)


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one simulation run depends on."""

    speed_kmh: float = 300.0
    duration_s: float = 300.0
    epoch_s: float = 1.0
    cell_radius_m: float = 4000.0
    overlap_m: float = 1000.0
    carrier_hz: float = 2.3e9
    ofdm: OfdmConfig = field(default_factory=OfdmConfig)
    tx_power_w: float = DEFAULT_TX_POWER_W
    noise_psd: float = DEFAULT_NOISE_PSD_W_PER_HZ
    services: tuple = DEFAULT_SERVICE_CLASSES
    traffic_scale: float = 1.0
    scheme: SchemeKind = SchemeKind.ADAPTIVE_RESERVATION
    reservation: ReservationPolicy | None = None
    allocator: str = "greedy"
    allocator_scenario: AllocatorScenario = field(default_factory=AllocatorScenario)
    mcs_table: McsTable = DEFAULT_MCS_TABLE
    link_draws: int = 10_000
    ho_threshold_mbps: float | None = None  # None: track the live capacity
    stop_on_reject: bool = False
    record_batches: bool = False  # keep per-batch decision states in the report
    seed: int = 1

    def __post_init__(self):
        if self.speed_kmh < 0:
            raise ValueError("speed_kmh must be non-negative")
        if self.duration_s < 0 or self.epoch_s <= 0:
            raise ValueError("duration_s must be >= 0 and epoch_s positive")
        if self.traffic_scale < 0:
            raise ValueError("traffic_scale must be non-negative")
        if self.allocator not in ("greedy", "exact"):
            raise ValueError("allocator must be 'greedy' or 'exact'")
        if not self.services:
            raise ValueError("at least one service class is required")
        if self.reservation is None:
            object.__setattr__(self, "reservation",
                               ReservationPolicy(overlap_m=self.overlap_m))
        # fail fast on bad geometry
        train_zone(0.0, self.cell_radius_m, self.overlap_m)


def generate_traffic(config: ScenarioConfig) -> list:
    """Poisson arrivals with exponential holding times for every service.

    Each class draws from its own seeded stream, so adding a class never
    perturbs the others; ids are assigned in arrival order.
    """
    pending = []
    for idx, svc in enumerate(config.services):
        rate = svc.arrival_rate_per_s * config.traffic_scale
        if rate <= 0:
            continue
        rng = np.random.default_rng([config.seed, 0x7AF, idx])
        t = 0.0
        while True:
            t += rng.exponential(1.0 / rate)
            if t > config.duration_s:
                break
            holding = rng.exponential(svc.mean_holding_s)
            pending.append((t, idx, svc, holding))
    pending.sort(key=lambda item: (item[0], item[1]))
    calls = []
    for call_id, (t, _idx, svc, holding) in enumerate(pending):
        calls.append(CallRequest(
            id=call_id, kind=svc.kind, origin=Origin.NEW,
            demand_mbps=svc.demand_mbps, arrival_s=t, holding_s=holding))
    return calls


@dataclass
class ActiveCall:
    """A call currently occupying link capacity."""

    id: int
    kind: ServiceKind
    demand_mbps: float     # nominal service rate
    accounted_mbps: float  # rate actually reserved (include overhead)
    arrival_s: float
    depart_s: float


def mark_handover(call: ActiveCall, now: float) -> CallRequest:
    """Re-present an active call to the next cell as a handover request."""
    return CallRequest(
        id=call.id, kind=call.kind, origin=Origin.HANDOVER,
        demand_mbps=call.demand_mbps, arrival_s=now,
        holding_s=max(call.depart_s - now, 0.0))


@dataclass
class SimulationReport:
    """Aggregated outcome of one run."""

    scheme: SchemeKind
    speed_kmh: float
    seed: int
    stats: AccessStats
    normal_capacity_mbps: float
    overlap_capacity_mbps: float
    mean_sinr_db: dict
    power_samples: list        # (epoch time, allocator total power in W)
    total_calls: int
    handover_presentations: int
    dropped_handovers: int
    # (remaining budget, ordered requests, per-service symbol bits) for each
    # batch decision, when the scenario asked for recording.
    batch_log: list | None = None

    def mean_power_w(self) -> float:
        if not self.power_samples:
            return 0.0
        return float(np.mean([p for _, p in self.power_samples]))


# Event kinds in tie-break order at equal timestamps.
_TRANSITION, _DEPARTURE, _ARRIVAL, _EPOCH = 0, 1, 2, 3


@lru_cache(maxsize=64)
def _link_quality(mimo: MimoConfig, ofdm: OfdmConfig, carrier_hz: float,
                  tx_power_w: float, noise_psd: float, draws: int,
                  interferer_power_w: float = 0.0) -> LinkQuality:
    return LinkQuality(mimo, ofdm, carrier_hz=carrier_hz,
                       tx_power_w=tx_power_w, noise_psd=noise_psd,
                       draws=draws, interferer_power_w=interferer_power_w)


class Simulator:
    """One scenario run.  Create, call :meth:`run`, read the report."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.now = 0.0
        self.used_mbps = 0.0
        self.active: dict[int, ActiveCall] = {}
        self.stats = AccessStats()
        self.pending_batch: list[CallRequest] = []
        self.power_samples: list = []
        self.handover_presentations = 0
        self.dropped_handovers = 0
        self.total_calls = 0
        self._events: list = []
        self._seq = 0
        self._alloc_rng_base = [config.seed, 0xA110]
        self._overhead_bits = {svc.kind: 4 for svc in config.services}
        self.batch_log: list | None = [] if config.record_batches else None
        self._setup_link()
        zone = train_zone(0.0, config.cell_radius_m, config.overlap_m)
        self.zone = zone.zone

    # -- link quality and capacity -------------------------------------

    def _setup_link(self):
        cfg = self.config
        speed_mps = cfg.speed_kmh * KMH_TO_MPS

        def quality(label, interferer_w=0.0):
            return _link_quality(STANDARD_CONFIGS[label], cfg.ofdm,
                                 cfg.carrier_hz, cfg.tx_power_w,
                                 cfg.noise_psd, cfg.link_draws, interferer_w)

        self.mean_sinr_db = {
            label: quality(label).mean_sinr_db(speed_mps)
            for label in ("2x4", "2x2", "1x1")
        }

        def capacity(label, mode):
            entry = select_mcs(self.mean_sinr_db[label], cfg.mcs_table)
            if entry is None:
                return 0.0
            return link_capacity(mode, entry)

        if cfg.scheme is SchemeKind.BASELINE:
            # Single antenna, no mode switch.  On the open track the lone
            # stream keeps its modest rate; in the boundary band the
            # neighbouring cell — which the antenna-rich modes fold into a
            # combined diversity link — is raw co-channel interference, and
            # the link usually falls below the lowest MCS (outage).
            entry = select_mcs(self.mean_sinr_db["1x1"], cfg.mcs_table)
            self.normal_capacity = entry.rate_mbps if entry is not None else 0.0
            boundary = quality("1x1", interferer_w=cfg.tx_power_w)
            self.mean_sinr_db["1x1-boundary"] = boundary.mean_sinr_db(speed_mps)
            entry = select_mcs(self.mean_sinr_db["1x1-boundary"], cfg.mcs_table)
            self.overlap_capacity = entry.rate_mbps if entry is not None else 0.0
        else:
            self.normal_capacity = capacity("2x4", MimoMode.MULTIPLEX)
            self.overlap_capacity = capacity("2x2", MimoMode.DIVERSITY)

    @property
    def capacity_mbps(self) -> float:
        return (self.overlap_capacity if self.zone is Zone.OVERLAP
                else self.normal_capacity)

    def _ho_threshold(self) -> float:
        if self.config.ho_threshold_mbps is not None:
            return self.config.ho_threshold_mbps
        return self.capacity_mbps

    def _position(self) -> float:
        return self.config.speed_kmh * KMH_TO_MPS * self.now

    def _beta(self) -> float:
        if self.zone is not Zone.OVERLAP:
            return 0.0
        zone = train_zone(self._position(), self.config.cell_radius_m,
                          self.config.overlap_m)
        if zone.zone is not Zone.OVERLAP:  # numerical edge of the band
            return 0.0
        return self.config.reservation.reservation_factor(zone.into_overlap_m)

    def _overhead_models(self):
        """Per-service overhead models, or None for schemes without them."""
        if self.config.scheme not in (SchemeKind.PRIORITY_OVERHEAD,
                                      SchemeKind.BASELINE):
            return None
        return {kind: OverheadModel(bits_per_symbol=bits,
                                    ber=DEFAULT_TARGET_BER)
                for kind, bits in self._overhead_bits.items()}

    # -- event plumbing ------------------------------------------------

    def _push(self, time: float, order: int, payload) -> None:
        heapq.heappush(self._events, (time, order, self._seq, payload))
        self._seq += 1

    def _schedule_all(self):
        cfg = self.config
        for call in generate_traffic(cfg):
            self._push(call.arrival_s, _ARRIVAL, call)
            self.total_calls += 1
        # epoch ticks, with a final flush at the horizon
        ticks = int(cfg.duration_s / cfg.epoch_s)
        times = [cfg.epoch_s * (i + 1) for i in range(ticks)]
        if not times or times[-1] < cfg.duration_s:
            times.append(cfg.duration_s)
        for i, t in enumerate(times):
            self._push(min(t, cfg.duration_s), _EPOCH, i)
        # zone boundary crossings
        speed_mps = cfg.speed_kmh * KMH_TO_MPS
        if speed_mps > 0:
            pitch = 2.0 * cfg.cell_radius_m
            entry = cfg.cell_radius_m - cfg.overlap_m / 2.0
            k = 0
            while True:
                t_in = (entry + k * pitch) / speed_mps
                t_out = (entry + k * pitch + cfg.overlap_m) / speed_mps
                if t_in > cfg.duration_s:
                    break
                self._push(t_in, _TRANSITION, "enter")
                if t_out <= cfg.duration_s:
                    self._push(t_out, _TRANSITION, "leave")
                k += 1

    # -- admission paths -----------------------------------------------

    def _activate(self, req: CallRequest, accounted: float) -> None:
        call = ActiveCall(id=req.id, kind=req.kind,
                          demand_mbps=req.demand_mbps,
                          accounted_mbps=accounted,
                          arrival_s=req.arrival_s,
                          depart_s=req.arrival_s + req.holding_s)
        self.active[req.id] = call
        self.used_mbps += accounted
        self._push(max(call.depart_s, self.now), _DEPARTURE, req.id)

    def _admit_single(self, req: CallRequest) -> bool:
        """Immediate reservation-scheme decision for one request."""
        threshold = self._ho_threshold()
        beta = self._beta() if req.origin is Origin.NEW else 0.0
        ok = admit(self.used_mbps, req.demand_mbps, req.origin, threshold,
                   beta)
        self.stats.record(req.kind, req.origin, ok)
        if ok:
            self._activate(req, req.demand_mbps)
        return ok

    def _admit_batch(self, requests: list, fresh_cell: bool) -> None:
        """Priority-ordered batch decision (epoch queue or handover bulk)."""
        models = self._overhead_models()
        remaining = self._ho_threshold() - (0.0 if fresh_cell else self.used_mbps)
        remaining = max(remaining, 0.0)
        if self.batch_log is not None:
            self.batch_log.append((remaining, tuple(requests),
                                   dict(self._overhead_bits)))
        outcome = batch_admit_priority(requests, remaining,
                                       overhead=models,
                                       stop_on_reject=self.config.stop_on_reject)
        if fresh_cell:
            # every occupant was re-presented; survivors re-book below
            self.active = {}
            self.used_mbps = 0.0
        for req, ok in outcome.decisions:
            self.stats.record(req.kind, req.origin, ok)
            if req.origin is Origin.HANDOVER and not ok:
                self.dropped_handovers += 1
            if ok:
                accounted = req.demand_mbps
                if models is not None:
                    accounted = adjusted_demand(req.demand_mbps,
                                                models.get(req.kind))
                self._activate(req, accounted)

    def _bulk_handover(self) -> None:
        """Re-admit every active call into the next cell at overlap entry."""
        requests = [mark_handover(call, self.now)
                    for _, call in sorted(self.active.items())]
        requests = [r for r in requests if r.holding_s > 0]
        self.handover_presentations += len(requests)
        if not requests:
            for call in list(self.active.values()):
                self.used_mbps -= call.accounted_mbps
            self.active.clear()
            return
        if self.config.scheme is SchemeKind.ADAPTIVE_RESERVATION:
            self.active = {}
            self.used_mbps = 0.0
            threshold = self._ho_threshold()
            for req in requests:
                ok = admit(self.used_mbps, req.demand_mbps, Origin.HANDOVER,
                           threshold)
                self.stats.record(req.kind, Origin.HANDOVER, ok)
                if ok:
                    self._activate(req, req.demand_mbps)
                else:
                    self.dropped_handovers += 1
        else:
            self._admit_batch(requests, fresh_cell=True)

    # -- allocator sampling --------------------------------------------

    def _sample_allocator(self, epoch_index: int) -> None:
        """Solve the frame-loading problem for the currently active classes.

        Classes with no live call place no demand; with nothing active the
        transmitter spends no allocation power at all.
        """
        scn = self.config.allocator_scenario
        active_kinds = {call.kind for call in self.active.values()}
        demands = np.array(scn.demand_bits, dtype=np.int64)
        for k, svc in enumerate(self.config.services[:scn.users]):
            if svc.kind not in active_kinds:
                demands[k] = 0
        if not demands.any():
            self.power_samples.append((self.now, 0.0))
            return
        rng = np.random.default_rng(self._alloc_rng_base + [epoch_index])
        prob = scn.problem(self.config.speed_kmh,
                           int(rng.integers(0, 2 ** 31)), demand_bits=demands)
        solve = solve_exact if self.config.allocator == "exact" else solve_greedy
        try:
            sol = solve(prob)
        except SolverLimitError as exc:
            raise ScenarioError(
                "the exact allocator exceeded its search limits for this "
                "scenario; configure allocator='greedy'") from exc
        self.power_samples.append((self.now, sol.total_power_w))
        if sol.feasible:
            per_user = sol.bits.reshape(scn.users, -1)
            for k, svc in enumerate(self.config.services):
                if k >= scn.users:
                    break
                loaded = per_user[k][per_user[k] > 0]
                if loaded.size:
                    values, counts = np.unique(loaded, return_counts=True)
                    self._overhead_bits[svc.kind] = int(values[np.argmax(counts)])

    # -- event handlers ------------------------------------------------

    def _on_transition(self, direction: str) -> None:
        if direction == "enter":
            self.zone = Zone.OVERLAP
            self._bulk_handover()
        else:
            self.zone = Zone.NORMAL

    def _on_departure(self, call_id: int) -> None:
        call = self.active.pop(call_id, None)
        if call is not None:
            self.used_mbps -= call.accounted_mbps

    def _on_arrival(self, req: CallRequest) -> None:
        if self.config.scheme is SchemeKind.ADAPTIVE_RESERVATION:
            self._admit_single(req)
        else:
            self.pending_batch.append(req)

    def _on_epoch(self, epoch_index: int) -> None:
        if self.pending_batch:
            batch, self.pending_batch = self.pending_batch, []
            self._admit_batch(batch, fresh_cell=False)
        self._sample_allocator(epoch_index)

    # -- main loop -----------------------------------------------------

    def run(self) -> SimulationReport:
        self._schedule_all()
        while self._events:
            time, order, _seq, payload = heapq.heappop(self._events)
            if time > self.config.duration_s:
                break
            self.now = time
            if order == _TRANSITION:
                self._on_transition(payload)
            elif order == _DEPARTURE:
                self._on_departure(payload)
            elif order == _ARRIVAL:
                self._on_arrival(payload)
            else:
                self._on_epoch(payload)
            assert self.used_mbps <= self._ho_threshold() + 1e-9, \
                "admitted load exceeds the admission threshold"
        return SimulationReport(
            scheme=self.config.scheme,
            speed_kmh=self.config.speed_kmh,
            seed=self.config.seed,
            stats=self.stats,
            normal_capacity_mbps=self.normal_capacity,
            overlap_capacity_mbps=self.overlap_capacity,
            mean_sinr_db=dict(self.mean_sinr_db),
            power_samples=self.power_samples,
            total_calls=self.total_calls,
            handover_presentations=self.handover_presentations,
            dropped_handovers=self.dropped_handovers,
            batch_log=self.batch_log,
        )


def run(config: ScenarioConfig) -> SimulationReport:
    """Convenience wrapper: simulate one scenario and return its report."""
    return Simulator(config).run()
