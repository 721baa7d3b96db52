"""Exact minimum-power allocation via branch-and-bound.

The search walks cells best-gain-first, expands per-cell loading options
cheapest-first, prunes with an admissible completion bound (cheapest
remaining per-bit price per user plus an exclusive-cell count), and is
seeded with the greedy heuristic's value so only strict improvements are
explored.  The inner loop runs in the compiled kernel when available.
"""

from __future__ import annotations

import math
from dataclasses import replace

from . import backend
from .greedy import solve_greedy
from .problem import (DEFAULT_NODE_BUDGET, MAX_CELLS, MAX_USER_ANT,
                      AllocationProblem, AllocationSolution, SolveStatus,
                      SolverLimitError, infeasible_solution, prepare_search,
                      solution_from_choices)


def solve_exact(problem: AllocationProblem,
                node_budget: int = DEFAULT_NODE_BUDGET) -> AllocationSolution:
    """Provably minimum-power solution, or Infeasible, or a guard error.

    Raises :class:`SolverLimitError` when the instance exceeds the
    documented size guard (more than ``MAX_CELLS`` cells or ``MAX_USER_ANT``
    user-antenna pairs) or when the node budget runs out mid-search.
    Deterministic: among equal-power optima the result follows the fixed
    search order (cells by descending best gain, options cheapest-first).
    """
    if problem.n_cells > MAX_CELLS or problem.n_users * problem.n_antennas > MAX_USER_ANT:
        raise SolverLimitError(
            f"instance too large for exact search: {problem.n_cells} cells, "
            f"{problem.n_users * problem.n_antennas} user-antenna pairs "
            f"(limits {MAX_CELLS}/{MAX_USER_ANT})")
    name = backend.solver_backend()
    if not problem.rate_capacity_ok():
        return infeasible_solution(problem, backend=name)
    incumbent = solve_greedy(problem)
    prep = prepare_search(problem)
    bound = incumbent.total_power_w if incumbent.feasible else math.inf
    found, best, choice, nodes, aborted = backend.kernel.search(
        prep.opt_power, prep.opt_bits, prep.opt_user, prep.suffix_cost,
        prep.need, bound, node_budget)
    if aborted:
        raise SolverLimitError(
            f"node budget {node_budget} exhausted after {nodes} nodes")
    if found:
        solution = solution_from_choices(problem, prep, choice,
                                         SolveStatus.OPTIMAL, nodes, name)
        solution.validate(problem)
        return solution
    if incumbent.feasible:
        # Nothing beat the heuristic, so its value is the optimum.
        return replace(incumbent, status=SolveStatus.OPTIMAL, nodes=nodes,
                       backend=name)
    return infeasible_solution(problem, nodes=nodes, backend=name)
