"""Shared plumbing for the test suite (instance generators, tiny helpers)."""

import numpy as np

from hsrsim.allocation import AllocationProblem


def random_problem(rng: np.random.Generator, max_chunks: int = 3,
                   max_slots: int = 2, max_users: int = 2,
                   max_antennas: int = 2) -> AllocationProblem:
    """Small random allocation instance; demands occasionally exceed the
    frame capacity so infeasible verdicts get exercised too."""
    K = int(rng.integers(1, max_users + 1))
    I = int(rng.integers(1, max_antennas + 1))
    N = int(rng.integers(1, max_chunks + 1))
    T = int(rng.integers(1, max_slots + 1))
    gains = rng.gamma(2.0, 1.0, size=(K, N, I, T)) + 0.05
    floors = rng.uniform(0.5, 2.0, size=N)
    bers = rng.uniform(1e-6, 1e-3, size=K)
    per_user_cap = 6 * N * T // K
    demands = 2 * rng.integers(0, per_user_cap // 2 + 3, size=K)
    return AllocationProblem(gains=gains, min_rate_bits=demands,
                             target_ber=bers, floors_w=floors)
