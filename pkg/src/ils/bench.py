"""Instance generators and the CSV benchmark driver."""
import csv
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .eils import EilsProblem, solve_eils
from .errors import InvalidCase, IlsError, NonUnimodular
from .matcore import (householder_q, int_inverse, jacobi_eigenvalues,
                      ltdl_product, qr_householder, round_nearest, solve_upper,
                      symmetrize)
from .quadratic import REDUCTIONS
from .rng import derive_seed, seeded_rng
from .search import quad_to_standard, search_quadratic

CSV_HEADER = ["case", "n", "seed", "method", "reduce_s", "search_s", "nodes",
              "rbe", "objective", "status"]
QUAD_METHODS = ["lambda", "mreduction", "preduction", "minreduction", "noreduction"]
EILS_METHODS = ["lll", "clll"]
CASE8_DIM = 20
CASE9_NOISE_VAR = 0.05
EILS_HALF_WIDTH = 1


@dataclass
class CaseSpec:
    """For case 8 `n` is the exponent k (kappa = 2^k) and the dimension is 20."""
    case_id: int
    n: int
    seed: int

    @property
    def dim(self) -> int:
        return CASE8_DIM if self.case_id == 8 else self.n


@dataclass
class BenchRecord:
    case_id: object
    n: int
    seed: int
    method: str
    reduce_time_s: float = 0.0
    search_time_s: float = 0.0
    nodes: int = 0
    rbe: float | None = None
    objective: float | None = None
    status: str = "ok"

    def row(self):
        def num(v):
            return "" if v is None else repr(float(v))
        return [self.case_id, self.n, self.seed, self.method,
                "%.6f" % self.reduce_time_s, "%.6f" % self.search_time_s,
                self.nodes, num(self.rbe), num(self.objective), self.status]


def _unit_lower(gen, n):
    L = np.eye(n)
    for i in range(1, n):
        for j in range(i):
            L[i, j] = gen.gaussian()
    return L


def _orthogonal(gen, n):
    Q, _ = householder_q(gen.normal_array(n, n))
    return Q


def _log_spread(gen, n, half_exp):
    """d_1 = 2^-half_exp, d_n = 2^half_exp, interior log-uniform between them."""
    e = [-half_exp] + [-half_exp + 2 * half_exp * gen.uniform() for _ in range(n - 2)] + [half_exp]
    return np.array([2.0 ** v for v in e]) if n > 1 else np.array([1.0])


def gen_case(spec: CaseSpec):
    """Return (W, xhat) for one of the nine covariance families."""
    cid = spec.case_id
    n = spec.dim
    if cid not in range(1, 10):
        raise InvalidCase("case must be 1..9, got %r" % cid)
    if n < 1 or (cid == 8 and spec.n < 1):
        raise InvalidCase("dimension must be positive")
    gen = seeded_rng(spec.seed)
    if cid <= 4:
        L = _unit_lower(gen, n)
        if cid == 1:
            d = gen.uniform_array(n)
        elif cid == 2:
            d = 1.0 / np.arange(n, 0, -1)
        elif cid == 3:
            d = 1.0 / np.arange(1, n + 1)
        else:
            d = np.array([200.0] * min(3, n) + [0.1] * max(0, n - 3))
        W = ltdl_product(L, d)
    elif cid in (5, 6, 8):
        U = _orthogonal(gen, n)
        if cid == 5:
            d = gen.uniform_array(n)
        elif cid == 6:
            d = _log_spread(gen, n, n / 4.0)
        else:
            d = _log_spread(gen, n, spec.n / 2.0)
        W = (U * d) @ U.T
    elif cid == 7:
        A = gen.normal_array(n, n)
        W = A.T @ A
    else:
        return _case9(gen, n)
    xhat = 100.0 * gen.normal_array(n)
    return symmetrize(W), xhat


def _case9(gen, n):
    """Linear model y = A x + v; W = s^2 (A^T A)^{-1}, xhat the LS estimate, via QR."""
    A = gen.normal_array(2 * n, n)
    x = np.array([round_nearest(100.0 * g) for g in gen.normal_array(n)], dtype=float)
    v = math.sqrt(CASE9_NOISE_VAR) * gen.normal_array(2 * n)
    y = A @ x + v
    R, ybar = qr_householder(A, y)
    xhat = solve_upper(R, ybar)
    Rinv = np.column_stack([solve_upper(R, e) for e in np.eye(n)])
    W = CASE9_NOISE_VAR * (Rinv @ Rinv.T)
    return symmetrize(W), xhat


def gen_eils(n: int, sigma: float, seed: int, half_width: int = EILS_HALF_WIDTH) -> EilsProblem:
    """A ~ N(0,1) n x n, x uniform on the integers of [-h, h]^n (x != 0),
    y = A x + v with v ~ N(0, sigma^2 I), alpha = ||A x||."""
    if not sigma > 0:
        raise IlsError("sigma must be positive")
    gen = seeded_rng(seed)
    A = gen.normal_array(n, n)
    while True:
        x = np.array([gen.integer(-half_width, half_width) for _ in range(n)], dtype=float)
        if np.any(x):
            break
    v = sigma * gen.normal_array(n)
    return EilsProblem(A, A @ x + v, float(np.linalg.norm(A @ x)), x_true=x)


def _two_norm(M) -> float:
    ev = jacobi_eigenvalues(M.T @ M)
    return math.sqrt(max(ev[-1], 0.0))


def relative_backward_error(W, Z, L, D) -> float:
    """||W - Z^{-T} L^T D L Z^{-1}||_2 / ||W||_2 with Z inverted exactly."""
    Zinv = int_inverse(Z)
    try:
        Zi = Zinv.astype(float)
    except OverflowError as exc:
        raise NonUnimodular("inverse entries exceed float range") from exc
    W = np.asarray(W, dtype=float)
    E = W - Zi.T @ ltdl_product(L, D) @ Zi
    return _two_norm(E) / _two_norm(W)


def objective_quadratic(W, xhat, x) -> float:
    """(x - xhat)^T W^{-1} (x - xhat), evaluated through the LtDL factors."""
    R, ybar = quad_to_standard(W, xhat)
    r = ybar - R @ np.asarray(x, dtype=float)
    return float(r @ r)


@dataclass
class BenchConfig:
    cases: list = field(default_factory=lambda: [1])
    ns: list = field(default_factory=lambda: [5])
    runs: int = 1
    seed: int = 0
    methods: list = field(default_factory=lambda: list(QUAD_METHODS))
    search: bool = True
    max_nodes: int | None = 200000
    threads: int | None = None


def _threads(cfg) -> int:
    if cfg.threads is not None:
        return max(1, int(cfg.threads))
    try:
        return max(1, int(os.environ.get("ILS_THREADS", "1")))
    except ValueError:
        return 1


def _quad_instance(task):
    case_id, n, run, seed, methods, do_search, max_nodes = task
    iseed = derive_seed(seed, case_id, n, run)
    out = []
    try:
        W, xhat = gen_case(CaseSpec(case_id, n, iseed))
        # objectives are evaluated in original coordinates so that methods
        # returning the same solution report the same number
        R0, yb0 = quad_to_standard(W, xhat)
    except IlsError as exc:
        for m in methods:
            out.append(BenchRecord(case_id, n, iseed, m, status="error:" + type(exc).__name__))
        return out
    for m in methods:
        rec = BenchRecord(case_id, n, iseed, m)
        try:
            t0 = time.perf_counter()
            st = REDUCTIONS[m](W, xhat)
            rec.reduce_time_s = time.perf_counter() - t0
            try:
                rec.rbe = relative_backward_error(W, st.Z, st.L, st.D)
            except NonUnimodular:
                rec.rbe = math.inf
            if do_search:
                t0 = time.perf_counter()
                res = search_quadratic(st, max_nodes=max_nodes)
                rec.search_time_s = time.perf_counter() - t0
                rec.nodes = res.nodes
                if res.found:
                    r = yb0 - R0 @ np.array(res.x_opt, dtype=float)
                    rec.objective = float(r @ r)
                if not res.complete:
                    rec.status = "node_cap"
        except (IlsError, KeyError) as exc:
            rec.status = "error:" + type(exc).__name__
        out.append(rec)
    return out


def _eils_instance(task):
    sigma, n, run, seed, methods, max_nodes, half_width = task
    iseed = derive_seed(seed, "eils", sigma, n, run)
    prob = gen_eils(n, sigma, iseed, half_width)
    out = []
    for m in methods:
        rec = BenchRecord("eils:%g" % sigma, n, iseed, m)
        try:
            res = solve_eils(prob, m, max_nodes=max_nodes)
            rec.reduce_time_s = res.reduce_s
            rec.search_time_s = res.search_s
            rec.nodes = res.nodes
            rec.objective = res.beta_sq if res.found else None
            if not res.complete:
                rec.status = "node_cap"
            elif not res.found:
                rec.status = "infeasible"
        except IlsError as exc:
            rec.status = "error:" + type(exc).__name__
        out.append(rec)
    return out


def _dispatch(fn, tasks, threads):
    if threads <= 1:
        for t in tasks:
            yield fn(t)
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(fn, tasks)


def _write(records_iter, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    failed = False
    for recs in records_iter:
        for r in recs:
            failed |= r.status.startswith("error")
            w.writerow(r.row())
    return 2 if failed else 0


def run_bench(cfg: BenchConfig, out) -> int:
    """Write one CSV row per (case, n, run, method).  Returns the exit status."""
    tasks = [(c, n, r, cfg.seed, list(cfg.methods), cfg.search, cfg.max_nodes)
             for c in cfg.cases for n in cfg.ns for r in range(cfg.runs)]
    return _write(_dispatch(_quad_instance, tasks, _threads(cfg)), out)


@dataclass
class EilsBenchConfig:
    sigma: float = 4.0
    ns: list = field(default_factory=lambda: [5])
    runs: int = 20
    seed: int = 0
    methods: list = field(default_factory=lambda: list(EILS_METHODS))
    max_nodes: int | None = 10 ** 6
    half_width: int = EILS_HALF_WIDTH
    threads: int | None = None


def run_eils_bench(cfg: EilsBenchConfig, out) -> int:
    tasks = [(cfg.sigma, n, r, cfg.seed, list(cfg.methods), cfg.max_nodes, cfg.half_width)
             for n in cfg.ns for r in range(cfg.runs)]
    return _write(_dispatch(_eils_instance, tasks, _threads(cfg)), out)


def read_records(path):
    """Parse a bench CSV back into dicts (numbers converted where present)."""
    rows = []
    with open(path, newline="") as fh:
        for r in csv.DictReader(fh):
            for key in ("reduce_s", "search_s", "rbe", "objective"):
                r[key] = float(r[key]) if r[key] != "" else None
            r["nodes"] = int(r["nodes"])
            r["n"] = int(r["n"])
            rows.append(r)
    return rows
