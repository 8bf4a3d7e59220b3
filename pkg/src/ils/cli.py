"""Command line entry point: reduce, solve, bench, eils-bench."""
import argparse
import csv
import math
import sys

import numpy as np

from . import bench as bh
from .eils import EilsProblem, clll_reduce
from .errors import IlsError
from .matcore import int_identity, int_inverse, int_matvec, qr_householder
from .matio import read_matrix, read_vector, write_matrix
from .quadratic import REDUCTIONS
from .search import search_eils, search_quadratic, search_standard, trace_rows
from .standard import QrzReduction, lll_reduce, plll_reduce, sorted_qr


def _qr_only(A, y):
    R, ybar = qr_householder(A, y)
    return QrzReduction(R, int_identity(R.shape[0]), ybar)


STANDARD = {"lll": lll_reduce, "plll": plll_reduce, "sqrd": sorted_qr, "none": _qr_only}


def _vec(v) -> str:
    return "[" + " ".join(str(int(t)) for t in v) + "]"


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise SystemExit("missing --" + ", --".join(missing))


def _standard_reduction(args, A, y):
    if args.method == "clll":
        _need(args, "alpha")
        return clll_reduce(EilsProblem(A, y, args.alpha))
    if args.method not in STANDARD:
        raise SystemExit("unknown standard-form method %r" % args.method)
    return STANDARD[args.method](A, y)


def cmd_reduce(args):
    if args.form == "standard":
        _need(args, "a", "y")
        st = _standard_reduction(args, read_matrix(args.a), read_vector(args.y))
        write_matrix(args.out + "_R.txt", st.R)
        write_matrix(args.out + "_Z.txt", st.Z)
        write_matrix(args.out + "_ybar.txt", st.ybar)
        print("igts=%d swaps=%d" % (st.igts, st.swaps))
    else:
        _need(args, "w", "xhat")
        if args.method not in REDUCTIONS:
            raise SystemExit("unknown quadratic-form method %r" % args.method)
        W, xhat = read_matrix(args.w), read_vector(args.xhat)
        st = REDUCTIONS[args.method](W, xhat)
        write_matrix(args.out + "_L.txt", st.L)
        write_matrix(args.out + "_D.txt", st.D)
        write_matrix(args.out + "_Z.txt", st.Z)
        write_matrix(args.out + "_zhat.txt", st.zhat)
        rbe = bh.relative_backward_error(W, st.Z, st.L, st.D)
        print("igts=%d perms=%d rbe=%.3e" % (st.igts, st.perms, rbe))
    return 0


def _write_trace(path, trace, n):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["seq", "kind", "level", "value", "accepted"])
        for i, (kind, level, value, acc) in enumerate(trace):
            w.writerow([i, kind, level, "" if value is None else value, int(acc)])
    with open(path + ".rows.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["z%d" % (k + 1) for k in range(n)])
        for row in trace_rows(trace, n):
            w.writerow(["-" if v is None else v for v in row])


def cmd_solve(args):
    trace = [] if args.trace else None
    beta0 = math.inf if args.beta0 is None else args.beta0
    if args.form == "quadratic":
        _need(args, "w", "xhat")
        if args.method not in REDUCTIONS:
            raise SystemExit("unknown quadratic-form method %r" % args.method)
        st = REDUCTIONS[args.method](read_matrix(args.w), read_vector(args.xhat))
        res = search_quadratic(st, beta0=beta0, trace=trace)
        n = st.n
        if res.found:
            x, objective = res.x_opt, res.beta_sq
            babai = int_matvec(int_inverse(st.Z).T, res.babai)
    else:
        _need(args, "a", "y")
        A, y = read_matrix(args.a), read_vector(args.y)
        if args.form == "eils":
            _need(args, "alpha")
        st = _standard_reduction(args, A, y)
        n = st.n
        if args.form == "eils":
            res = search_eils(st.R, st.ybar, args.alpha, beta0=beta0, trace=trace)
        else:
            res = search_standard(st.R, st.ybar, beta0=beta0, trace=trace)
        if res.found:
            x = int_matvec(st.Z, res.z_opt)
            babai = int_matvec(st.Z, res.babai)
            r = y - A @ np.array(x, dtype=float)
            objective = float(r @ r)
    if args.trace:
        _write_trace(args.trace, trace, n)
    if not res.found:
        print("found=0 nodes=%d" % res.nodes)
        return 1
    print("x=%s objective=%.17g nodes=%d babai=%s" % (_vec(x), objective, res.nodes, _vec(babai)))
    return 0


def _int_list(text):
    return [int(t) for t in text.split(",") if t]


def _ns(args):
    return list(range(args.nmin, args.nmax + 1, args.nstep))


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def cmd_bench(args):
    cfg = bh.BenchConfig(cases=_int_list(args.cases), ns=_ns(args), runs=args.runs,
                         seed=args.seed, methods=args.methods.split(","),
                         search=not args.no_search, max_nodes=args.max_nodes)
    out = _open_out(args.out)
    try:
        return bh.run_bench(cfg, out)
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_eils_bench(args):
    cfg = bh.EilsBenchConfig(sigma=args.sigma, ns=_ns(args), runs=args.runs,
                             seed=args.seed, methods=args.methods.split(","),
                             max_nodes=args.max_nodes, half_width=args.half_width)
    out = _open_out(args.out)
    try:
        return bh.run_eils_bench(cfg, out)
    finally:
        if out is not sys.stdout:
            out.close()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ils", description="Integer least squares solvers and benchmarks")
    sub = p.add_subparsers(dest="command", required=True)

    def problem_args(q):
        q.add_argument("--form", choices=["standard", "quadratic", "eils"], default="standard")
        q.add_argument("--method", required=True)
        q.add_argument("--a", help="generator matrix file")
        q.add_argument("--y", help="target vector file")
        q.add_argument("--w", help="covariance matrix file")
        q.add_argument("--xhat", help="real-valued estimate file")
        q.add_argument("--alpha", type=float, help="constraint radius")

    q = sub.add_parser("reduce", help="reduce a problem and write its factors")
    problem_args(q)
    q.add_argument("--out", required=True, help="output file prefix")
    q.set_defaults(func=cmd_reduce)

    q = sub.add_parser("solve", help="reduce and search")
    problem_args(q)
    q.add_argument("--beta0", type=float, help="initial search radius")
    q.add_argument("--trace", help="write the visited-node log as CSV")
    q.set_defaults(func=cmd_solve)

    def sweep_args(q, nmin, nmax, runs):
        q.add_argument("--nmin", type=int, default=nmin)
        q.add_argument("--nmax", type=int, default=nmax)
        q.add_argument("--nstep", type=int, default=1)
        q.add_argument("--runs", type=int, default=runs)
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--out", default="-")

    q = sub.add_parser("bench", help="quadratic-form reduction benchmark")
    q.add_argument("--cases", default="1")
    sweep_args(q, 5, 10, 3)
    q.add_argument("--methods", default=",".join(bh.QUAD_METHODS))
    q.add_argument("--no-search", action="store_true")
    q.add_argument("--max-nodes", type=int, default=200000)
    q.set_defaults(func=cmd_bench)

    q = sub.add_parser("eils-bench", help="constrained problem benchmark, LLL vs CLLL")
    q.add_argument("--sigma", type=float, default=4.0)
    sweep_args(q, 5, 8, 20)
    q.add_argument("--methods", default=",".join(bh.EILS_METHODS))
    q.add_argument("--max-nodes", type=int, default=10 ** 6)
    q.add_argument("--half-width", type=int, default=bh.EILS_HALF_WIDTH,
                   help="planted x is drawn from the integers of [-h, h]^n")
    q.set_defaults(func=cmd_eils_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IlsError, ValueError, OSError) as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
