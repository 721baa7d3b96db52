"""Per-allocation transmit power and the BER relations behind it.

The adaptive QAM loading rule inverts a square-constellation BER bound: to
hold a target bit error rate ``ber`` with ``b`` bits on an eigenchannel of
amplitude gain ``sigma`` over a noise-plus-interference floor ``floor_w``,
the transmitter spends

    floor_w * (2**b - 1) / (3 * sigma**2) * Qinv(ber / 4)**2  watts.
"""

from __future__ import annotations

import math
from functools import lru_cache

BIT_ALPHABET = (0, 2, 4, 6)  # bits per symbol: none, QPSK, 16QAM, 64QAM

_Q_BRACKET_HI = 40.0
_Q_TOL = 1e-12


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x) = P(Z > x) for standard normal Z."""
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    return 0.5 * math.erfc(x / math.sqrt(2.0))


@lru_cache(maxsize=4096)
def q_inverse(p: float) -> float:
    """Inverse of :func:`q_function` on (0, 1).

    Solved by bisection against the implemented Q so that round-trips agree
    to the bracket tolerance; the negative branch follows by symmetry.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly inside (0, 1)")
    if p > 0.5:
        return -q_inverse(1.0 - p)
    if p == 0.5:
        return 0.0
    lo, hi = 0.0, _Q_BRACKET_HI
    # Q is strictly decreasing: Q(lo) = 0.5 >= p >= Q(hi) ~ 0.
    while hi - lo > _Q_TOL:
        mid = 0.5 * (lo + hi)
        if q_function(mid) > p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def mqam_ber_bound(m_ary: int, sinr: float) -> float:
    """Upper bound on the bit error rate of square M-QAM at linear ``sinr``.

    Clamped to [0, 1]; the bound dominates the exact Gray-coded expression.
    """
    if m_ary not in (4, 16, 64):
        raise ValueError("m_ary must be one of 4, 16, 64")
    if sinr < 0 or not math.isfinite(sinr):
        raise ValueError("sinr must be non-negative and finite")
    value = 4.0 * q_function(math.sqrt(3.0 * sinr / (m_ary - 1)))
    return min(1.0, max(0.0, value))


def per_allocation_power(bits: int, sigma: float, floor_w: float,
                         target_ber: float) -> float:
    """Transmit power (W) for one subcarrier/antenna/slot allocation.

    ``bits`` of 0 means the resource is left silent and costs nothing.
    """
    if bits not in BIT_ALPHABET:
        raise ValueError(f"bits must be one of {BIT_ALPHABET}")
    if bits == 0:
        return 0.0
    if sigma <= 0 or not math.isfinite(sigma):
        raise ValueError("sigma must be positive and finite")
    if floor_w <= 0 or not math.isfinite(floor_w):
        raise ValueError("floor_w must be positive and finite")
    if not 0.0 < target_ber < 0.5:
        raise ValueError("target_ber must lie in (0, 0.5)")
    q = q_inverse(target_ber / 4.0)
    return floor_w * (2.0 ** bits - 1.0) / (3.0 * sigma * sigma) * q * q
