# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled depth-first branch-and-bound kernel.

Mirrors ``_bnb_py.py`` statement for statement: same traversal order, same
pruning rules, same node accounting, so the two backends are interchangeable
down to the returned floats.
"""

import numpy as np

BACKEND_NAME = "cython"


cdef class _Search:
    cdef double[:, ::1] power
    cdef long long[:, ::1] bits
    cdef long long[:, ::1] user
    cdef double[:, ::1] suffix
    cdef long long[::1] need
    cdef long long[::1] choice
    cdef long long[::1] best_choice
    cdef double best
    cdef bint found, aborted
    cdef long long nodes, budget
    cdef Py_ssize_t M, O, K

    cdef void dfs(self, Py_ssize_t d, double cost):
        cdef Py_ssize_t k, o
        cdef long long r, cells_needed
        cdef double lb, p

        self.nodes += 1
        if self.nodes > self.budget:
            self.aborted = True
            return
        if d == self.M:
            if cost < self.best:
                for k in range(self.K):
                    if self.need[k] > 0:
                        return
                self.best = cost
                self.found = True
                for o in range(self.M):
                    self.best_choice[o] = self.choice[o]
            return
        lb = 0.0
        cells_needed = 0
        for k in range(self.K):
            r = self.need[k]
            if r > 0:
                cells_needed += (r + 5) // 6
                lb += r * self.suffix[d, k]
        if cells_needed > self.M - d:
            return
        if cost + lb >= self.best:
            return
        for o in range(self.O):
            p = self.power[d, o]
            if cost + p >= self.best:
                break  # options are sorted cheapest-first
            k = self.user[d, o]
            if k >= 0:
                self.need[k] -= self.bits[d, o]
            self.choice[d] = o
            self.dfs(d + 1, cost + p)
            if k >= 0:
                self.need[k] += self.bits[d, o]
            if self.aborted:
                return


def search(opt_power, opt_bits, opt_user, suffix_cost, need, initial_bound,
           node_budget):
    """Compiled counterpart of :func:`hsrsim.allocation._bnb_py.search`."""
    cdef _Search s = _Search()
    s.power = np.ascontiguousarray(opt_power, dtype=np.float64)
    s.bits = np.ascontiguousarray(opt_bits, dtype=np.int64)
    s.user = np.ascontiguousarray(opt_user, dtype=np.int64)
    s.suffix = np.ascontiguousarray(suffix_cost, dtype=np.float64)
    s.need = np.ascontiguousarray(need, dtype=np.int64).copy()
    s.M = s.power.shape[0]
    s.O = s.power.shape[1]
    s.K = s.suffix.shape[1]
    s.choice = np.zeros(s.M, dtype=np.int64)
    s.best_choice = np.zeros(s.M, dtype=np.int64)
    s.best = float(initial_bound)
    s.found = False
    s.aborted = False
    s.nodes = 0
    s.budget = int(node_budget)
    s.dfs(0, 0.0)
    if s.found:
        best_choice = np.asarray(s.best_choice).tolist()
        return True, s.best, best_choice, s.nodes, s.aborted
    return False, float("inf"), None, s.nodes, s.aborted
