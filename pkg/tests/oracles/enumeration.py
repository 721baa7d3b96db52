"""Exhaustive reference solver for tiny bit-allocation instances.

Every (chunk, slot) cell independently picks one option — silent, or a
(user, antenna, bits) triple — so the whole search space is a mixed-radix
counter.  Combination indices are decoded in chunks with plain numpy
arithmetic and the cheapest feasible combination wins.  Prices are computed
from scratch here (probit-based tail inverse, explicit formula), not taken
from the package's power tables.
"""

import itertools

import numpy as np

from .gaussian import q_inverse_reference

_LOADS = (2, 4, 6)
_MAX_COMBOS = 50_000_000


def enumerate_reference(gains, min_rate_bits, target_ber, floors_w,
                        chunk: int = 1 << 17):
    """Return (feasible, best_total_power_w) by full enumeration."""
    gains = np.asarray(gains, dtype=float)
    K, N, I, T = gains.shape
    rates = np.asarray(min_rate_bits, dtype=np.int64)
    bers = np.asarray(target_ber, dtype=float)
    floors = np.asarray(floors_w, dtype=float)
    cells = [(n, t) for n in range(N) for t in range(T)]
    M = len(cells)
    options = [(None, None, 0)] + [
        (k, i, b) for k, i, b in itertools.product(range(K), range(I), _LOADS)]
    O = len(options)
    if O ** M > _MAX_COMBOS:
        raise ValueError(f"instance too large to enumerate: {O}^{M} combos")

    qinv_sq = np.array([q_inverse_reference(p / 4.0) ** 2 for p in bers])
    opt_power = np.zeros((M, O))
    opt_bits = np.zeros((M, O, K), dtype=np.int64)
    for d, (n, t) in enumerate(cells):
        for o, (k, i, b) in enumerate(options):
            if b == 0:
                continue
            sigma = gains[k, n, i, t]
            opt_power[d, o] = (floors[n] * (2.0 ** b - 1.0)
                               / (3.0 * sigma * sigma) * qinv_sq[k])
            opt_bits[d, o, k] = b

    best = np.inf
    feasible = False
    total_combos = O ** M
    for start in range(0, total_combos, chunk):
        idx = np.arange(start, min(start + chunk, total_combos), dtype=np.int64)
        power = np.zeros(len(idx))
        delivered = np.zeros((len(idx), K), dtype=np.int64)
        rem = idx.copy()
        for d in range(M):
            o = rem % O
            rem //= O
            power += opt_power[d][o]
            delivered += opt_bits[d][o]
        ok = np.all(delivered >= rates, axis=1)
        if ok.any():
            feasible = True
            best = min(best, float(power[ok].min()))
    return feasible, best
