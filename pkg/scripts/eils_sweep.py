"""Median search nodes of the LLL and CLLL pipelines over a noise sweep.

    python scripts/eils_sweep.py --n 8 --runs 20 --sigmas 0.5,1,2,4 --half-widths 1,10
"""
import argparse
import csv
import io

import numpy as np

from ils.bench import EilsBenchConfig, run_eils_bench


def sweep(n, runs, seed, sigma, half_width, max_nodes):
    buf = io.StringIO()
    run_eils_bench(EilsBenchConfig(sigma=sigma, ns=[n], runs=runs, seed=seed,
                                   max_nodes=max_nodes, half_width=half_width), buf)
    buf.seek(0)
    rows = list(csv.DictReader(buf))
    nodes = {m: [int(r["nodes"]) for r in rows if r["method"] == m] for m in ("lll", "clll")}
    wins = sum(c < l for l, c in zip(nodes["lll"], nodes["clll"]))
    return np.median(nodes["lll"]), np.median(nodes["clll"]), wins


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--runs", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--sigmas", default="0.5,1,2,4")
    ap.add_argument("--half-widths", default="1")
    ap.add_argument("--max-nodes", type=int, default=10 ** 6)
    a = ap.parse_args()
    print("sigma  h   median_lll  median_clll  clll_wins/%d" % a.runs)
    for h in [int(t) for t in a.half_widths.split(",")]:
        for s in [float(t) for t in a.sigmas.split(",")]:
            ml, mc, w = sweep(a.n, a.runs, a.seed, s, h, a.max_nodes)
            print("%5g %3d %11.1f %12.1f %8d" % (s, h, ml, mc, w))


if __name__ == "__main__":
    main()
