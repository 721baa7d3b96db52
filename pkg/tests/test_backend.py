import math
import subprocess
import sys

import numpy as np
import pytest

from hsrsim.allocation import _bnb_py, solver_backend
from hsrsim.allocation.greedy import solve_greedy
from hsrsim.allocation.problem import prepare_search

from .util import random_problem

try:
    from hsrsim.allocation import _bnb
except ImportError:
    _bnb = None


def test_backend_name_is_known():
    assert solver_backend() in ("cython", "python")


def test_env_override_forces_python():
    code = ("import hsrsim.allocation as a; "
            "print(a.solver_backend())")
    out = subprocess.run([sys.executable, "-c", code],
                         env={"HSRSIM_PURE_PYTHON": "1", "PATH": "/usr/bin:/bin"},
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.skipif(_bnb is None, reason="compiled kernel not built")
def test_kernels_agree_on_random_instances():
    rng = np.random.default_rng(314159)
    compared = 0
    for _ in range(60):
        prob = random_problem(rng)
        prep = prepare_search(prob)
        incumbent = solve_greedy(prob)
        greedy_bound = incumbent.total_power_w if incumbent.feasible else math.inf
        for bound in (greedy_bound, math.inf):
            args = (prep.opt_power, prep.opt_bits, prep.opt_user,
                    prep.suffix_cost, prep.need, bound, 10_000_000)
            f_c, best_c, choice_c, nodes_c, abort_c = _bnb.search(*args)
            f_p, best_p, choice_p, nodes_p, abort_p = _bnb_py.search(*args)
            assert (f_c, nodes_c, abort_c) == (f_p, nodes_p, abort_p)
            assert list(choice_c or []) == list(choice_p or [])
            if f_c:
                assert best_c == pytest.approx(best_p, rel=1e-14)
                compared += 1
    assert compared > 30  # unbounded searches must land on every optimum


@pytest.mark.skipif(_bnb is None, reason="compiled kernel not built")
def test_kernels_agree_on_abort():
    rng = np.random.default_rng(2718)
    prob = random_problem(rng, max_chunks=3, max_slots=2)
    prep = prepare_search(prob)
    args = (prep.opt_power, prep.opt_bits, prep.opt_user,
            prep.suffix_cost, prep.need, math.inf, 3)
    res_c = _bnb.search(*args)
    res_p = _bnb_py.search(*args)
    assert res_c[3] == res_p[3] and res_c[4] == res_p[4]
