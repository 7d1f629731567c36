"""Time the numba kernels against their numpy fallbacks on real skeleton inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--graph-code 357]

Both implementations are called directly, so HOLOPERC_NO_NUMBA has no effect
here. The first numba call (JIT compile or cache load) is reported separately.
"""

import argparse
import time

import numpy as np

from holoperc import kernels
from holoperc._accel import USE_NUMBA
from holoperc.analysis import SCENARIO_SETS
from holoperc.holonomy import Skeleton
from holoperc.netmodel import Graph, PercParams, Scenario, build_generators


def _best(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def workloads(code: int):
    scen = Scenario(Graph.from_code(5, code), PercParams(1, 1), SCENARIO_SETS[2])
    gens = build_generators(scen)
    skel = Skeleton(gens)
    nbr = scen.graph.neighbor_matrix()
    deg = nbr.sum(axis=1).astype(np.int64)
    masks = np.array(skel.masks, dtype=np.uint64)
    return {
        "step_table": (nbr, deg, 1, 1, True),
        "mask_images": (masks, skel.tables),
        "reachability": (skel.succ,),
        "subduction_matrix": (masks, skel.reach),
    }, len(skel.masks), len(gens)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--graph-code", type=int, default=357)
    args = ap.parse_args(argv)

    if not USE_NUMBA:
        print("numba disabled or missing: the 'numba' column runs the same loops interpreted")
    work, m, g = workloads(args.graph_code)
    print(f"graph code {args.graph_code}, scenario 2 at (1,1): |I*| = {m}, {g} generators")
    print(f"{'kernel':<18}{'first nb call':>14}{'numba':>12}{'numpy':>12}{'speedup':>10}  match")
    for name, inputs in work.items():
        nb, npf = kernels.NUMBA_KERNELS[name], kernels.NUMPY_KERNELS[name]
        t0 = time.perf_counter()
        nb(*inputs)
        first = time.perf_counter() - t0
        t_nb, out_nb = _best(nb, inputs, args.repeat)
        t_np, out_np = _best(npf, inputs, args.repeat)
        same = np.array_equal(np.asarray(out_nb), np.asarray(out_np))
        print(f"{name:<18}{first:>13.4f}s{t_nb:>11.5f}s{t_np:>11.5f}s{t_np / max(t_nb, 1e-9):>9.1f}x  {same}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
