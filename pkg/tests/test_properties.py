"""Invariant fuzzing with hypothesis.

The deterministic sweeps in the acceptance suite pin these same invariants
on fixed grids; here the framework hunts for corners instead (odd band
geometries, near-boundary positions, extreme tail arguments, degenerate
allocation instances).
"""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hsrsim.admission import (Origin, ReservationPolicy, access_ratio, admit,
                              reservation_factor)
from hsrsim.allocation import solve_exact, solve_greedy
from hsrsim.allocation.power import q_function, q_inverse
from hsrsim.channel import OfdmConfig, ici_power

from .test_power import round_trip_tolerance
from .util import random_problem

# ---------------------------------------------------------------------------
# reservation band


@given(ov=st.floats(1.0, 1e4), f1=st.floats(0.01, 0.95),
       f2=st.floats(0.0, 1.0), xf=st.floats(0.0, 1.0))
def test_reservation_factor_bounds_and_branches(ov, f1, f2, xf):
    d1 = f1 * ov
    d2 = d1 + f2 * (0.98 * ov - d1)
    assume(0.0 < d1 <= d2 < ov)
    pol = ReservationPolicy(overlap_m=ov, d1_m=d1, d2_m=d2)
    x = xf * ov
    b = pol.reservation_factor(x)
    assert 0.0 <= b <= 1.0
    if x < d1:
        assert b == x / d1
    elif x <= d2:
        assert b == 1.0
    else:
        assert b == (ov - x) / (ov - d2)


@given(xf=st.floats(0.0, 1.0))
def test_reservation_factor_default_policy(xf):
    x = 1000.0 * xf
    b = reservation_factor(x)
    assert 0.0 <= b <= 1.0
    if 250.0 <= x <= 750.0:
        assert b == 1.0


# ---------------------------------------------------------------------------
# admission


@given(acc=st.integers(0, 10 ** 6), extra=st.integers(0, 10 ** 6))
def test_access_ratio_bounds(acc, extra):
    tot = acc + extra
    r = access_ratio(acc, tot)
    assert 0.0 <= r <= 1.0
    if tot:
        assert r == acc / tot
    else:
        assert r == 0.0


@given(used=st.floats(0.0, 100.0), demand=st.floats(1e-3, 50.0),
       thr=st.floats(0.0, 100.0), beta=st.floats(0.0, 1.0))
def test_new_calls_never_outrank_handover(used, demand, thr, beta):
    """The reserved share only ever shrinks the budget for fresh calls."""
    new = admit(used, demand, Origin.NEW, thr, beta)
    ho = admit(used, demand, Origin.HANDOVER, thr, beta)
    if new:
        assert ho
    if beta == 0.0:
        assert new == ho
    if beta == 1.0:
        assert not new


# ---------------------------------------------------------------------------
# inter-carrier interference


@given(n_sub=st.integers(2, 256), idx=st.integers(1, 256),
       fd=st.floats(0.1, 2000.0))
def test_ici_mirror_symmetry(n_sub, idx, fd):
    assume(idx <= n_sub)
    ofdm = OfdmConfig(n_subcarriers=n_sub)
    a = ici_power(idx, ofdm, fd)
    b = ici_power(n_sub + 1 - idx, ofdm, fd)
    assert a >= 0.0
    assert a == pytest.approx(b, rel=1e-12)


@given(n_sub=st.integers(2, 64), idx=st.integers(1, 64),
       fd=st.floats(1.0, 500.0))
def test_ici_quadratic_in_doppler(n_sub, idx, fd):
    assume(idx <= n_sub)
    ofdm = OfdmConfig(n_subcarriers=n_sub)
    # doubling the shift exactly quadruples the ratio (scaling by powers of
    # two commutes with rounding)
    assert ici_power(idx, ofdm, 2.0 * fd) == 4.0 * ici_power(idx, ofdm, fd)


# ---------------------------------------------------------------------------
# allocation solvers


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_solver_bookkeeping_fuzz(seed):
    rng = np.random.default_rng(seed)
    prob = random_problem(rng)
    exact = solve_exact(prob)
    greedy = solve_greedy(prob)
    for sol in (exact, greedy):
        if sol.feasible:
            sol.validate(prob)
            assert np.all(sol.user_bits(prob) >= prob.min_rate_bits)
    if greedy.feasible:
        assert exact.feasible
        assert exact.total_power_w <= greedy.total_power_w + 1e-9


# ---------------------------------------------------------------------------
# Gaussian tail pair


@given(x=st.floats(-8.0, 8.0))
def test_q_round_trip_fuzz(x):
    err = abs(q_inverse(q_function(x)) - x)
    assert err <= round_trip_tolerance(x)


@given(x=st.floats(-5.0, 8.0))
def test_q_round_trip_strict_region(x):
    assert abs(q_inverse(q_function(x)) - x) <= 1e-9


@given(x=st.floats(-8.0, 8.0), y=st.floats(-8.0, 8.0))
def test_q_function_monotone(x, y):
    lo, hi = sorted((x, y))
    assert q_function(hi) <= q_function(lo)
