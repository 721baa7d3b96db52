"""Transmit-power-vs-speed sweeps over the allocation solvers.

Each seed draws one set of fading gains, shared across every speed in the
sweep; speed enters only through the noise-plus-interference floor.  With
uniform per-chunk floors every candidate solution's power scales by the
same factor as speed grows, so per-seed curves are exactly monotone and the
greedy-minus-exact gap cannot shrink with speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..channel import (DEFAULT_NOISE_PSD_W_PER_HZ, DEFAULT_TX_POWER_W,
                       OfdmConfig, doppler_shift, ici_power,
                       sample_eigenchannel_gains)
from .exact import solve_exact
from .greedy import solve_greedy
from .problem import AllocationProblem, AllocationSolution

KMH_TO_MPS = 1.0 / 3.6


@dataclass(frozen=True)
class AllocatorScenario:
    """Desk-scale allocation instance family for the speed sweeps."""

    users: int = 3
    chunks: int = 4
    antennas: int = 2
    slots: int = 2
    demand_bits: tuple = (2, 4, 6)  # per-frame minimum bits per user
    target_ber: float = 1e-5
    carrier_hz: float = 2.3e9
    ofdm: OfdmConfig = field(default_factory=OfdmConfig)
    tx_power_w: float = DEFAULT_TX_POWER_W
    noise_psd: float = DEFAULT_NOISE_PSD_W_PER_HZ
    mean_gain_power: float = 400.0  # mean eigenchannel power gain (absorbs path loss)
    nakagami_m: float = 1.0

    def __post_init__(self):
        if len(self.demand_bits) != self.users:
            raise ValueError("demand_bits must list one demand per user")

    def floor_w(self, speed_kmh: float) -> float:
        """Uniform noise-plus-interference floor at the given train speed."""
        fd = doppler_shift(speed_kmh * KMH_TO_MPS, self.carrier_hz)
        centre = self.ofdm.n_subcarriers // 2
        ici_ratio = ici_power(centre, self.ofdm, fd)
        interference = ici_ratio * self.mean_gain_power * self.tx_power_w
        return interference + self.noise_psd * self.ofdm.noise_bandwidth_hz

    def draw_gains(self, seed: int) -> np.ndarray:
        rng = np.random.default_rng([int(seed), 0x0A11])
        count = self.users * self.chunks * self.antennas * self.slots
        amp = sample_eigenchannel_gains(count, self.nakagami_m,
                                        self.mean_gain_power, rng)
        return amp.reshape(self.users, self.chunks, self.antennas, self.slots)

    def problem(self, speed_kmh: float, seed: int,
                demand_bits=None) -> AllocationProblem:
        demands = self.demand_bits if demand_bits is None else demand_bits
        return AllocationProblem(
            gains=self.draw_gains(seed),
            min_rate_bits=np.asarray(demands, dtype=np.int64),
            target_ber=np.full(self.users, self.target_ber),
            floors_w=np.full(self.chunks, self.floor_w(speed_kmh)),
        )


@dataclass(frozen=True)
class PowerSample:
    speed_kmh: float
    solver: str
    seed: int
    total_power_w: float


_SOLVERS = {"exact": solve_exact, "greedy": solve_greedy}


def power_speed_curve(scenario: AllocatorScenario, speeds_kmh: Iterable[float],
                      solver: str = "greedy",
                      seeds: Iterable[int] = range(20)) -> list[PowerSample]:
    """Solve the scenario at every (speed, seed); gains are common across
    speeds within a seed."""
    if solver not in _SOLVERS:
        raise ValueError(f"solver must be one of {sorted(_SOLVERS)}")
    solve = _SOLVERS[solver]
    samples = []
    for seed in seeds:
        gains = scenario.draw_gains(seed)
        for speed in speeds_kmh:
            prob = AllocationProblem(
                gains=gains,
                min_rate_bits=np.array(scenario.demand_bits, dtype=np.int64),
                target_ber=np.full(scenario.users, scenario.target_ber),
                floors_w=np.full(scenario.chunks, scenario.floor_w(speed)),
            )
            sol: AllocationSolution = solve(prob)
            samples.append(PowerSample(float(speed), solver, int(seed),
                                       sol.total_power_w))
    return samples
