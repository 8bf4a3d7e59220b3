"""Per-case summary of the quadratic-form reductions: worst backward error,
median search nodes and how often each method misses the common optimum.

    python scripts/reduction_study.py --cases 1,2,3,4,5,6,7,8,9 --ns 5,10,15,20 --runs 10
"""
import argparse
import csv
import io
from collections import defaultdict

import numpy as np

from ils.bench import QUAD_METHODS, BenchConfig, run_bench


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cases", default="1,2,3,4,5,6,7,8,9")
    ap.add_argument("--ns", default="5,10")
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--methods", default=",".join(QUAD_METHODS))
    ap.add_argument("--max-nodes", type=int, default=200000)
    a = ap.parse_args()
    cfg = BenchConfig(cases=[int(c) for c in a.cases.split(",")],
                      ns=[int(n) for n in a.ns.split(",")], runs=a.runs, seed=a.seed,
                      methods=a.methods.split(","), max_nodes=a.max_nodes)
    buf = io.StringIO()
    run_bench(cfg, buf)
    buf.seek(0)
    rows = list(csv.DictReader(buf))

    best = {}
    for r in rows:
        if r["objective"] and r["status"] == "ok":
            key = (r["case"], r["n"], r["seed"])
            best[key] = min(best.get(key, np.inf), float(r["objective"]))
    stats = defaultdict(lambda: {"rbe": 0.0, "nodes": [], "miss": 0, "cap": 0})
    for r in rows:
        s = stats[(r["case"], r["method"])]
        if r["rbe"]:
            s["rbe"] = max(s["rbe"], float(r["rbe"]))
        s["nodes"].append(int(r["nodes"]))
        s["cap"] += r["status"] == "node_cap"
        key = (r["case"], r["n"], r["seed"])
        if r["objective"] and key in best and float(r["objective"]) > best[key] * (1 + 1e-9):
            s["miss"] += 1
    print("case method        worst_rbe  median_nodes  misses  capped")
    for (case, m), s in sorted(stats.items(), key=lambda t: (int(t[0][0]), t[0][1])):
        print("%4s %-12s %10.2e %13.1f %7d %7d" % (case, m, s["rbe"], np.median(s["nodes"]),
                                                 s["miss"], s["cap"]))


if __name__ == "__main__":
    main()
