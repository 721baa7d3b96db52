"""Throughput shoot-out between the two exact-search kernels.

Runs the compiled extension and its pure-Python twin over the same
prepared instances (full search, no warm start) and reports nodes/s.

    python3 benchmarks/bench_solver.py --count 12 --repeat 3
"""

import argparse
import math
import statistics
import time

from hsrsim.allocation import _bnb_py
from hsrsim.allocation.curves import AllocatorScenario
from hsrsim.allocation.problem import prepare_search

try:
    from hsrsim.allocation import _bnb
except ImportError:
    _bnb = None

NODE_BUDGET = 200_000_000
SPEEDS_KMH = (50.0, 150.0, 250.0, 350.0)


def _prepared_instances(count, seed0):
    scen = AllocatorScenario()
    out = []
    for k in range(count):
        speed = SPEEDS_KMH[k % len(SPEEDS_KMH)]
        prob = scen.problem(speed, seed0 + k)
        out.append((f"{speed:.0f}km/h#{seed0 + k}", prepare_search(prob),
                    prob))
    return out


def _time_kernel(kernel, prep, repeat):
    best = math.inf
    nodes = 0
    for _ in range(repeat):
        t0 = time.perf_counter()
        found, _, _, nodes, aborted = kernel.search(
            prep.opt_power, prep.opt_bits, prep.opt_user, prep.suffix_cost,
            prep.need, math.inf, NODE_BUDGET)
        best = min(best, time.perf_counter() - t0)
        assert not aborted
    return best, nodes


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=12,
                    help="number of instances (default 12)")
    ap.add_argument("--repeat", type=int, default=3,
                    help="timing repeats per instance, best-of (default 3)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    kernels = [("python", _bnb_py)]
    if _bnb is not None:
        kernels.append(("cython", _bnb))
    else:
        print("compiled kernel unavailable; timing the pure twin only")

    inst = _prepared_instances(args.count, args.seed)
    width = max(len(name) for name, _, _ in inst)
    header = f"{'instance':<{width}}  {'nodes':>9}"
    for name, _ in kernels:
        header += f"  {name + ' ms':>10}"
    if len(kernels) == 2:
        header += f"  {'speedup':>7}"
    print(header)

    totals = {name: 0.0 for name, _ in kernels}
    ratios = []
    for label, prep, _prob in inst:
        times = {}
        nodes = 0
        for name, kernel in kernels:
            dt, nodes = _time_kernel(kernel, prep, args.repeat)
            times[name] = dt
            totals[name] += dt
        line = f"{label:<{width}}  {nodes:>9d}"
        for name, _ in kernels:
            line += f"  {times[name] * 1e3:>10.3f}"
        if len(kernels) == 2:
            ratio = times["python"] / times["cython"]
            ratios.append(ratio)
            line += f"  {ratio:>6.1f}x"
        print(line)

    print()
    for name, _ in kernels:
        print(f"total {name:>7}: {totals[name] * 1e3:9.3f} ms")
    if ratios:
        print(f"median speedup: {statistics.median(ratios):.1f}x")


if __name__ == "__main__":
    main()
