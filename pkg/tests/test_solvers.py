import math

import numpy as np
import pytest

from hsrsim.allocation import (AllocationProblem, SolveStatus,
                               SolverLimitError, solve_exact, solve_greedy)
from hsrsim.allocation.power import q_inverse

from .oracles.enumeration import enumerate_reference
from .util import random_problem


def tiny_problem(gains, rates, ber=1e-5, floors=None):
    gains = np.asarray(gains, dtype=float)
    K, N = gains.shape[0], gains.shape[1]
    return AllocationProblem(
        gains=gains,
        min_rate_bits=np.asarray(rates, dtype=np.int64),
        target_ber=np.full(K, ber),
        floors_w=np.ones(N) if floors is None else np.asarray(floors, float),
    )


# ---------------------------------------------------------------- edges

def test_exact_zero_demand_is_free():
    prob = tiny_problem(np.ones((1, 2, 1, 2)), [0])
    sol = solve_exact(prob)
    assert sol.status is SolveStatus.OPTIMAL
    assert sol.total_power_w == 0.0
    assert not sol.bits.any()
    sol.validate(prob)


def test_exact_over_capacity_is_infeasible():
    prob = tiny_problem(np.ones((1, 1, 1, 1)), [8])
    sol = solve_exact(prob)
    assert sol.status is SolveStatus.INFEASIBLE
    assert math.isinf(sol.total_power_w)
    assert not sol.feasible
    sol.validate(prob)


def test_exact_two_user_hand_instance():
    # each user gets its strong subcarrier at the lightest loading; the
    # optimum is two 2-bit allocations on gain-2 channels
    gains = np.zeros((2, 2, 1, 1))
    gains[0, :, 0, 0] = (2.0, 1.0)
    gains[1, :, 0, 0] = (1.0, 2.0)
    prob = tiny_problem(gains, [2, 2])
    sol = solve_exact(prob)
    assert sol.status is SolveStatus.OPTIMAL
    q = q_inverse(2.5e-6)
    want = 2.0 * (1.0 * 3.0 / (3.0 * 4.0)) * q * q
    assert sol.total_power_w == pytest.approx(want, rel=1e-9)
    assert sol.total_power_w == pytest.approx(10.4186435, abs=1e-6)
    assert sol.assignment[(0, 0)] == (0, 0)
    assert sol.assignment[(1, 0)] == (1, 0)
    assert sol.bits[0, 0, 0, 0] == 2 and sol.bits[1, 1, 0, 0] == 2
    feas, best = enumerate_reference(prob.gains, prob.min_rate_bits,
                                     prob.target_ber, prob.floors_w)
    assert feas and sol.total_power_w == pytest.approx(best, rel=1e-9)


def test_greedy_zero_demand_matches_exact():
    prob = tiny_problem(np.random.default_rng(3).gamma(2, 1, (2, 2, 2, 1)) + .1,
                        [0, 0])
    sol = solve_greedy(prob)
    assert sol.total_power_w == 0.0
    assert sol.status is SolveStatus.SUBOPTIMAL


def test_greedy_never_beats_exact_on_hand_instance():
    gains = np.zeros((2, 2, 1, 1))
    gains[0, :, 0, 0] = (2.0, 1.0)
    gains[1, :, 0, 0] = (1.0, 2.0)
    prob = tiny_problem(gains, [2, 2])
    greedy = solve_greedy(prob)
    exact = solve_exact(prob)
    greedy.validate(prob)
    assert greedy.total_power_w >= exact.total_power_w - 1e-12


# ---------------------------------------------------------------- guards

def test_exact_cell_guard():
    prob = tiny_problem(np.ones((1, 9, 1, 2)), [2])  # 18 cells
    with pytest.raises(SolverLimitError):
        solve_exact(prob)


def test_exact_pair_guard():
    prob = tiny_problem(np.ones((3, 2, 3, 2)), [2, 2, 2])  # 9 pairs
    with pytest.raises(SolverLimitError):
        solve_exact(prob)


def test_exact_node_budget():
    rng = np.random.default_rng(9)
    prob = tiny_problem(rng.gamma(2, 1, (2, 3, 2, 2)) + 0.1, [6, 6])
    with pytest.raises(SolverLimitError):
        solve_exact(prob, node_budget=1)


# ---------------------------------------------------------------- fuzzing

def test_exact_matches_enumeration_on_200_instances():
    rng = np.random.default_rng(20240817)
    checked = feasible_count = 0
    while checked < 200:
        prob = random_problem(rng)
        sol = solve_exact(prob)
        feas, best = enumerate_reference(prob.gains, prob.min_rate_bits,
                                         prob.target_ber, prob.floors_w)
        assert sol.feasible == feas
        if feas:
            feasible_count += 1
            sol.validate(prob)
            assert sol.status is SolveStatus.OPTIMAL
            assert sol.total_power_w == pytest.approx(best, rel=1e-9)

            greedy = solve_greedy(prob)
            assert greedy.feasible
            greedy.validate(prob)
            assert greedy.total_power_w >= best - abs(best) * 1e-9
        else:
            assert not solve_greedy(prob).feasible
        checked += 1
    # the generator must exercise both verdicts
    assert 20 < feasible_count < 200


def test_scale_equivariance():
    rng = np.random.default_rng(55)
    for _ in range(10):
        prob = random_problem(rng)
        sol = solve_exact(prob)
        if not sol.feasible:
            continue
        lam = 3.7
        scaled = AllocationProblem(gains=prob.gains,
                                   min_rate_bits=prob.min_rate_bits,
                                   target_ber=prob.target_ber,
                                   floors_w=prob.floors_w * lam)
        sol2 = solve_exact(scaled)
        assert sol2.total_power_w == pytest.approx(lam * sol.total_power_w,
                                                   rel=1e-9)
        assert sol2.assignment == sol.assignment
        g1, g2 = solve_greedy(prob), solve_greedy(scaled)
        assert g2.total_power_w == pytest.approx(lam * g1.total_power_w,
                                                 rel=1e-9)


def test_solution_bookkeeping():
    rng = np.random.default_rng(77)
    prob = random_problem(rng, max_users=2, max_chunks=2)
    sol = solve_exact(prob)
    if sol.feasible:
        assert np.all(sol.user_bits(prob) >= prob.min_rate_bits)
        assert sol.total_power_w == pytest.approx(float(sol.power_w.sum()))
        assert sol.backend in ("cython", "python")


def test_problem_validation():
    with pytest.raises(ValueError):
        tiny_problem(np.zeros((1, 1, 1, 1)), [2])  # non-positive gain
    with pytest.raises(ValueError):
        tiny_problem(np.ones((2, 1, 1, 1)), [2])  # rate shape mismatch
    with pytest.raises(ValueError):
        tiny_problem(np.ones((1, 1, 1, 1)), [2], ber=0.7)
    with pytest.raises(ValueError):
        tiny_problem(np.ones((1, 1, 1, 1)), [2], floors=[-1.0])
    with pytest.raises(ValueError):
        tiny_problem(np.ones((1, 1, 1, 1)), [-2])
