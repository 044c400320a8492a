"""Compare the numba kernels against the numpy/scipy fallback.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --repeat 5 --json results.json
"""

import argparse
import json
import os
import random
import time

import numpy as np

from powergraph_lab import _kernels
from powergraph_lab.connectivity import brute_force_ckappa, edge_connectivity, vertex_connectivity
from powergraph_lab.families import DEFAULT_BOUNDS, build, catalog, cyclic, product
from powergraph_lab.graph import Graph
from powergraph_lab.powergraph import power_graph


def _random_graphs(count, n, seed=0):
    rng = random.Random(seed)
    return [
        Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5])
        for _ in range(count)
    ]


def workloads():
    graphs = [power_graph(e.group).graph for e in catalog(DEFAULT_BOUNDS)]
    small = _random_graphs(40, 14)
    table = build(product(cyclic(8), cyclic(8), cyclic(4))).table.astype(np.int64)
    return {
        "associativity (order 256)": lambda: _kernels.first_nonassociative(table),
        "vertex connectivity (catalog)": lambda: [vertex_connectivity(g) for g in graphs],
        "edge connectivity (catalog)": lambda: [edge_connectivity(g) for g in graphs],
        "subset search (40 graphs, n=14)": lambda: [brute_force_ckappa(g) for g in small],
    }


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", metavar="FILE")
    args = ap.parse_args()

    if not _kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    results = {}
    for name, fn in workloads().items():
        os.environ["POWERGRAPH_LAB_NO_NUMBA"] = "0"
        fn()  # compile / warm caches
        t_nb = timed(fn, args.repeat)
        os.environ["POWERGRAPH_LAB_NO_NUMBA"] = "1"
        t_np = timed(fn, args.repeat)
        results[name] = {"numba_s": t_nb, "fallback_s": t_np, "speedup": t_np / t_nb if t_nb else None}
        print(f"{name:<34} numba {t_nb * 1e3:9.2f} ms   fallback {t_np * 1e3:9.2f} ms   x{t_np / t_nb:6.1f}")
    os.environ.pop("POWERGRAPH_LAB_NO_NUMBA", None)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2)


if __name__ == "__main__":
    main()
