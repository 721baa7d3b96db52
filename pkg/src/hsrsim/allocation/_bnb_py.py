"""Pure-Python depth-first branch-and-bound kernel.

Reference implementation of the exact allocation search; the compiled
extension in ``_bnb.pyx`` mirrors this logic statement for statement so both
backends visit the same nodes and return identical results.
"""

from __future__ import annotations

import math

BACKEND_NAME = "python"


def search(opt_power, opt_bits, opt_user, suffix_cost, need, initial_bound,
           node_budget):
    """Search all per-cell option choices for the cheapest feasible loading.

    Parameters mirror :class:`hsrsim.allocation.problem.PreparedSearch`:
    ``opt_power``/``opt_bits``/``opt_user`` are (M, O) per-cell option
    tables sorted cheapest-first with option 0 silent, ``suffix_cost`` is the
    (M+1, K) cheapest per-bit power over the remaining cells, and ``need``
    the per-user bit demands.  Only strict improvements over
    ``initial_bound`` are reported.

    Returns ``(found, best_total, best_choice, nodes, aborted)``.
    """
    M, O = opt_power.shape
    K = suffix_cost.shape[1]
    power = [list(row) for row in opt_power]
    bits = [[int(b) for b in row] for row in opt_bits]
    user = [[int(u) for u in row] for row in opt_user]
    suffix = [list(row) for row in suffix_cost]
    need = [int(r) for r in need]
    choice = [0] * M
    state = {
        "best": float(initial_bound),
        "best_choice": None,
        "nodes": 0,
        "aborted": False,
    }
    budget = int(node_budget)

    def dfs(d, cost):
        state["nodes"] += 1
        if state["nodes"] > budget:
            state["aborted"] = True
            return
        if d == M:
            if cost < state["best"] and all(r <= 0 for r in need):
                state["best"] = cost
                state["best_choice"] = choice.copy()
            return
        # Admissible completion bound: every unserved user pays at least its
        # cheapest remaining per-bit price, and needs ceil(r/6) exclusive
        # cells at the densest constellation.
        lb = 0.0
        cells_needed = 0
        srow = suffix[d]
        for k in range(K):
            r = need[k]
            if r > 0:
                cells_needed += (r + 5) // 6
                lb += r * srow[k]
        if cells_needed > M - d:
            return
        if cost + lb >= state["best"]:
            return
        prow = power[d]
        brow = bits[d]
        urow = user[d]
        for o in range(O):
            p = prow[o]
            if cost + p >= state["best"]:
                break  # options are sorted cheapest-first
            k = urow[o]
            if k >= 0:
                need[k] -= brow[o]
            choice[d] = o
            dfs(d + 1, cost + p)
            if k >= 0:
                need[k] += brow[o]
            if state["aborted"]:
                return

    dfs(0, 0.0)
    found = state["best_choice"] is not None
    best = state["best"] if found else math.inf
    return found, best, state["best_choice"], state["nodes"], state["aborted"]
