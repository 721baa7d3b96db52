"""Two-stage polynomial heuristic for the allocation problem.

Stage one treats all users as equally weighted: each user in round-robin
order claims its best-gain free cell until it holds enough cells for its
minimum rate, bits are then loaded cheapest-marginal-first within each
user's cells, and leftover cells are handed to whichever user saves the
most power by re-spreading.  Stage two re-scores everything with the true
power law and makes a single improvement pass moving one allocation to a
free cell when that lowers power.
"""

from __future__ import annotations

import numpy as np

from .problem import (AllocationProblem, AllocationSolution, SolveStatus,
                      _LOADED_BITS, infeasible_solution, power_table)

_EPS = 1e-15


def _marginal(powers, k, cell, b):
    """Power increment for raising cell ``(n, i, t)`` from b to b+2 bits."""
    n, i, t = cell
    j = _LOADED_BITS.index(b + 2)
    step = powers[k, n, i, t, j]
    if b:
        step -= powers[k, n, i, t, j - 1]
    return step


def _load_bits(powers, k, cells, rate):
    """Greedy bit filling over ``cells``; returns ({cell: bits}, power)."""
    loads = {c: 0 for c in cells}
    total = 0.0
    loaded = 0
    while loaded < rate:
        best = None
        for c in sorted(loads):
            b = loads[c]
            if b >= _LOADED_BITS[-1]:
                continue
            step = _marginal(powers, k, c, b)
            if best is None or step < best[0] - _EPS:
                best = (step, c)
        if best is None:
            return None, np.inf  # every cell saturated
        loads[best[1]] += 2
        loaded += 2
        total += best[0]
    return loads, total


def solve_greedy(problem: AllocationProblem) -> AllocationSolution:
    """Deterministic heuristic solve; status is always Suboptimal when
    feasible.  Finds a feasible loading whenever one exists."""
    if not problem.rate_capacity_ok():
        return infeasible_solution(problem)
    K, N, I, T = problem.gains.shape
    powers = power_table(problem)
    rates = [int(r) for r in problem.min_rate_bits]
    quotas = [-(-r // _LOADED_BITS[-1]) for r in rates]
    free = {(n, t) for n in range(N) for t in range(T)}
    claimed: dict[int, list] = {k: [] for k in range(K)}

    def best_cell_for(k):
        best = None
        for (n, t) in sorted(free):
            for i in range(I):
                g = problem.gains[k, n, i, t]
                if best is None or g > best[0] + _EPS:
                    best = (g, n, i, t)
        return best

    # Claim phase: minimum cell quotas, one cell per unmet user per round.
    while True:
        progressed = False
        for k in range(K):
            if len(claimed[k]) < quotas[k] and free:
                _, n, i, t = best_cell_for(k)
                free.discard((n, t))
                claimed[k].append((n, i, t))
                progressed = True
        if all(len(claimed[k]) >= quotas[k] for k in range(K)):
            break
        if not progressed:
            return infeasible_solution(problem)

    loads = {}
    user_power = {}
    for k in range(K):
        loads[k], user_power[k] = _load_bits(powers, k, claimed[k], rates[k])

    # Hand spare cells to whoever profits most from re-spreading onto them.
    def spare_order():
        gain = problem.gains.max(axis=(0, 2))
        return sorted(free, key=lambda c: (-gain[c], c))

    for (n, t) in spare_order():
        best = None
        for k in range(K):
            if rates[k] == 0:
                continue
            i = int(np.argmax(problem.gains[k, n, :, t]))
            trial_cells = claimed[k] + [(n, i, t)]
            trial_loads, trial_power = _load_bits(powers, k, trial_cells, rates[k])
            saving = user_power[k] - trial_power
            if saving > _EPS and (best is None or saving > best[0] + _EPS):
                best = (saving, k, i, trial_loads, trial_power)
        if best is not None:
            _, k, i, trial_loads, trial_power = best
            free.discard((n, t))
            claimed[k].append((n, i, t))
            loads[k] = trial_loads
            user_power[k] = trial_power

    # Improvement pass: relocate one loaded cell to a free cell if cheaper.
    def cell_power(k, cell, b):
        n, i, t = cell
        return powers[k, n, i, t, _LOADED_BITS.index(b)] if b else 0.0

    for k in range(K):
        for cell in sorted(loads[k]):
            b = loads[k][cell]
            if b == 0 or not free:
                continue
            here = cell_power(k, cell, b)
            best = None
            for (n, t) in sorted(free):
                i = int(np.argmax(problem.gains[k, n, :, t]))
                there = cell_power(k, (n, i, t), b)
                if there < here - _EPS and (best is None or there < best[0] - _EPS):
                    best = (there, n, i, t)
            if best is not None:
                there, n, i, t = best
                free.add((cell[0], cell[2]))
                free.discard((n, t))
                del loads[k][cell]
                claimed[k].remove(cell)
                claimed[k].append((n, i, t))
                loads[k][(n, i, t)] = b
                user_power[k] = user_power[k] - here + there

    bits = np.zeros(problem.gains.shape, dtype=np.int64)
    power_w = np.zeros(problem.gains.shape, dtype=float)
    assignment = {(n, t): (0, 0) for n in range(N) for t in range(T)}
    for k in range(K):
        for (n, i, t), b in loads[k].items():
            if b:
                assignment[(n, t)] = (k, i)
                bits[k, n, i, t] = b
                power_w[k, n, i, t] = cell_power(k, (n, i, t), b)
    return AllocationSolution(
        status=SolveStatus.SUBOPTIMAL,
        assignment=assignment,
        bits=bits,
        power_w=power_w,
        total_power_w=float(power_w.sum()),
        backend="",
    )
