"""Minimum-power bit and subcarrier allocation."""

from .backend import solver_backend
from .curves import AllocatorScenario, PowerSample, power_speed_curve
from .exact import solve_exact
from .greedy import solve_greedy
from .power import (BIT_ALPHABET, mqam_ber_bound, per_allocation_power,
                    q_function, q_inverse)
from .problem import (AllocationProblem, AllocationSolution, SolveStatus,
                      SolverLimitError, power_table)

__all__ = [
    "AllocationProblem",
    "AllocationSolution",
    "AllocatorScenario",
    "BIT_ALPHABET",
    "PowerSample",
    "SolveStatus",
    "SolverLimitError",
    "mqam_ber_bound",
    "per_allocation_power",
    "power_speed_curve",
    "power_table",
    "q_function",
    "q_inverse",
    "solve_exact",
    "solve_greedy",
    "solver_backend",
]
