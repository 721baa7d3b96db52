"""Problem and solution containers for minimum-power bit allocation.

An instance asks for each service flow ("user") to receive at least its
requested number of bits per scheduling frame, where a frame offers
``N`` subcarrier chunks x ``T`` slots and each (chunk, slot) cell may carry
one QAM symbol (0/2/4/6 bits) from exactly one (user, antenna) pair.  The
objective is the total transmit power implied by the per-allocation loading
rule in :mod:`hsrsim.allocation.power`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .power import BIT_ALPHABET, per_allocation_power, q_inverse

MAX_CELLS = 16      # search guard: refuse exact solves beyond this many cells
MAX_USER_ANT = 8    # ... or beyond this many (user, antenna) pairs
DEFAULT_NODE_BUDGET = 100_000_000

_LOADED_BITS = BIT_ALPHABET[1:]  # (2, 4, 6)


class SolveStatus(enum.Enum):
    OPTIMAL = "optimal"
    SUBOPTIMAL = "suboptimal"
    INFEASIBLE = "infeasible"


class SolverLimitError(RuntimeError):
    """Raised when an instance exceeds the exact solver's resource guard."""


@dataclass(frozen=True)
class AllocationProblem:
    """One frame's allocation instance.

    ``gains`` has shape (users, chunks, antennas, slots) and holds strictly
    positive eigenchannel amplitude gains; ``floors_w`` holds the per-chunk
    noise-plus-interference floor in watts.
    """

    gains: np.ndarray
    min_rate_bits: np.ndarray
    target_ber: np.ndarray
    floors_w: np.ndarray

    def __post_init__(self):
        gains = np.asarray(self.gains, dtype=float)
        if gains.ndim != 4 or gains.size == 0:
            raise ValueError("gains must be a non-empty 4-D array (K, N, I, T)")
        if not np.all(np.isfinite(gains)) or np.any(gains <= 0):
            raise ValueError("gains must be finite and strictly positive")
        rates = np.asarray(self.min_rate_bits, dtype=np.int64)
        if rates.shape != (gains.shape[0],) or np.any(rates < 0):
            raise ValueError("min_rate_bits must be K non-negative integers")
        ber = np.asarray(self.target_ber, dtype=float)
        if ber.shape != (gains.shape[0],) or np.any(ber <= 0) or np.any(ber >= 0.5):
            raise ValueError("target_ber must be K values in (0, 0.5)")
        floors = np.asarray(self.floors_w, dtype=float)
        if floors.shape != (gains.shape[1],) or np.any(floors <= 0) \
                or not np.all(np.isfinite(floors)):
            raise ValueError("floors_w must be N positive finite values")
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "min_rate_bits", rates)
        object.__setattr__(self, "target_ber", ber)
        object.__setattr__(self, "floors_w", floors)

    @property
    def n_users(self) -> int:
        return self.gains.shape[0]

    @property
    def n_chunks(self) -> int:
        return self.gains.shape[1]

    @property
    def n_antennas(self) -> int:
        return self.gains.shape[2]

    @property
    def n_slots(self) -> int:
        return self.gains.shape[3]

    @property
    def n_cells(self) -> int:
        return self.n_chunks * self.n_slots

    def rate_capacity_ok(self) -> bool:
        """Necessary feasibility condition: enough exclusive cells exist for
        everyone's minimum rate at the densest constellation."""
        demand_cells = sum(-(-int(r) // _LOADED_BITS[-1]) for r in self.min_rate_bits)
        return demand_cells <= self.n_cells


@dataclass
class AllocationSolution:
    """Outcome of a solver run.

    ``assignment`` maps every (chunk, slot) cell to its owning
    (user, antenna) pair; silent cells are canonically parked on (0, 0) with
    zero bits.  ``total_power_w`` is ``inf`` for infeasible outcomes.
    """

    status: SolveStatus
    assignment: dict
    bits: np.ndarray
    power_w: np.ndarray
    total_power_w: float
    nodes: int = 0
    backend: str = ""

    @property
    def feasible(self) -> bool:
        return self.status is not SolveStatus.INFEASIBLE

    def user_bits(self, problem: AllocationProblem) -> np.ndarray:
        """Bits delivered to each user."""
        return self.bits.reshape(problem.n_users, -1).sum(axis=1)

    def validate(self, problem: AllocationProblem) -> None:
        """Assert structural invariants against the originating problem."""
        if not self.feasible:
            if self.assignment or self.bits.any():
                raise AssertionError("infeasible solutions must be empty")
            return
        cells = {(n, t) for n in range(problem.n_chunks)
                 for t in range(problem.n_slots)}
        if set(self.assignment) != cells:
            raise AssertionError("assignment must cover every cell exactly once")
        for (n, t), (k, i) in self.assignment.items():
            owners = np.nonzero(self.bits[:, n, :, t])
            pairs = set(zip(owners[0].tolist(), owners[1].tolist()))
            if pairs - {(k, i)}:
                raise AssertionError(f"cell ({n},{t}) loaded by a non-owner")
        for b in self.bits.flat:
            if int(b) not in BIT_ALPHABET:
                raise AssertionError("bits outside the allowed alphabet")
        delivered = self.user_bits(problem)
        if np.any(delivered < problem.min_rate_bits):
            raise AssertionError("minimum rate constraint violated")
        total = float(self.power_w.sum())
        if not math.isclose(total, self.total_power_w, rel_tol=1e-9, abs_tol=1e-12):
            raise AssertionError("total power does not match the power table")


def infeasible_solution(problem: AllocationProblem, status=SolveStatus.INFEASIBLE,
                        nodes: int = 0, backend: str = "") -> AllocationSolution:
    shape = problem.gains.shape
    return AllocationSolution(
        status=status,
        assignment={},
        bits=np.zeros(shape, dtype=np.int64),
        power_w=np.zeros(shape, dtype=float),
        total_power_w=math.inf,
        nodes=nodes,
        backend=backend,
    )


def power_table(problem: AllocationProblem) -> np.ndarray:
    """Power for every (user, chunk, antenna, slot, loaded-bit) choice.

    Shape (K, N, I, T, 3), matching :func:`per_allocation_power` entrywise.
    """
    qinv = np.array([q_inverse(b / 4.0) for b in problem.target_ber])
    scale = (qinv ** 2)[:, None, None, None]                 # (K,1,1,1)
    floors = problem.floors_w[None, :, None, None]           # (1,N,1,1)
    base = floors / (3.0 * problem.gains ** 2) * scale       # (K,N,I,T)
    levels = np.array([2.0 ** b - 1.0 for b in _LOADED_BITS])
    return base[..., None] * levels


@dataclass(frozen=True)
class PreparedSearch:
    """Flattened search-ready view of a problem for the exact kernels."""

    cells: list            # (n, t) in search order: best gain first
    opt_power: np.ndarray  # (M, O) power of option o at cell d; option 0 = silent
    opt_bits: np.ndarray   # (M, O) int64 bits
    opt_user: np.ndarray   # (M, O) int64 user, -1 for silent
    opt_ant: np.ndarray    # (M, O) int64 antenna, -1 for silent
    suffix_cost: np.ndarray  # (M+1, K) cheapest per-bit power over cells >= d
    need: np.ndarray       # (K,) int64


def prepare_search(problem: AllocationProblem,
                   powers: np.ndarray | None = None) -> PreparedSearch:
    if powers is None:
        powers = power_table(problem)
    K, N, I, T = problem.gains.shape
    cell_gain = problem.gains.max(axis=(0, 2))  # (N, T)
    cells = sorted(((n, t) for n in range(N) for t in range(T)),
                   key=lambda c: (-cell_gain[c], c))
    M = len(cells)
    O = 1 + K * I * len(_LOADED_BITS)
    opt_power = np.zeros((M, O))
    opt_bits = np.zeros((M, O), dtype=np.int64)
    opt_user = np.full((M, O), -1, dtype=np.int64)
    opt_ant = np.full((M, O), -1, dtype=np.int64)
    cell_user_per_bit = np.full((M, K), np.inf)
    for d, (n, t) in enumerate(cells):
        rows = [(0.0, 0, -1, -1)]
        for k in range(K):
            for i in range(I):
                for bi, b in enumerate(_LOADED_BITS):
                    p = powers[k, n, i, t, bi]
                    rows.append((p, b, k, i))
                    ppb = p / b
                    if ppb < cell_user_per_bit[d, k]:
                        cell_user_per_bit[d, k] = ppb
        # Cheap options first gives the search good incumbents early; the
        # original (user, antenna, bits) order breaks power ties, keeping the
        # expansion order deterministic.
        order = sorted(range(len(rows)), key=lambda r: (rows[r][0], r))
        for o, r in enumerate(order):
            opt_power[d, o], opt_bits[d, o], opt_user[d, o], opt_ant[d, o] = rows[r]
    suffix = np.full((M + 1, K), np.inf)
    for d in range(M - 1, -1, -1):
        suffix[d] = np.minimum(suffix[d + 1], cell_user_per_bit[d])
    return PreparedSearch(
        cells=cells,
        opt_power=np.ascontiguousarray(opt_power),
        opt_bits=np.ascontiguousarray(opt_bits),
        opt_user=np.ascontiguousarray(opt_user),
        opt_ant=np.ascontiguousarray(opt_ant),
        suffix_cost=np.ascontiguousarray(suffix),
        need=problem.min_rate_bits.copy(),
    )


def solution_from_choices(problem: AllocationProblem, prep: PreparedSearch,
                          choice: np.ndarray, status: SolveStatus,
                          nodes: int = 0, backend: str = "") -> AllocationSolution:
    """Materialize a solution from per-cell option indices."""
    powers = power_table(problem)
    bits = np.zeros(problem.gains.shape, dtype=np.int64)
    power_w = np.zeros(problem.gains.shape, dtype=float)
    assignment = {}
    bit_index = {b: j for j, b in enumerate(_LOADED_BITS)}
    for d, (n, t) in enumerate(prep.cells):
        o = int(choice[d])
        b = int(prep.opt_bits[d, o])
        k = int(prep.opt_user[d, o])
        i = int(prep.opt_ant[d, o])
        if b == 0:
            assignment[(n, t)] = (0, 0)
            continue
        assignment[(n, t)] = (k, i)
        bits[k, n, i, t] = b
        power_w[k, n, i, t] = powers[k, n, i, t, bit_index[b]]
    return AllocationSolution(
        status=status,
        assignment=assignment,
        bits=bits,
        power_w=power_w,
        total_power_w=float(power_w.sum()),
        nodes=nodes,
        backend=backend,
    )
