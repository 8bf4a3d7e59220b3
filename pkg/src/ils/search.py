"""Depth-first Schnorr-Euchner enumeration for the three problem forms.

Levels are 0-based internally and enumeration starts at level n-1.  A node
is one assignment of an integer to a level, whether it is the first
(nearest) candidate or a later zig-zag candidate.  A full point is only
accepted when its objective is strictly below the current radius, so the
recorded radii decrease strictly and ties keep the earlier point.

When a trace list is passed, one tuple is appended per event:
    ("node", level, value, accepted)  level is 1-based, accepted says whether
                                      the partial objective stayed in the radius
    ("empty", level, None, False)     an EILS level whose interval was empty
    ("found", 0, beta_sq, True)       a full point was accepted
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .matcore import (int_inverse, int_matvec, ltdl, round_nearest, sgn,
                      solve_upper)

INF = math.inf
ALPHA_SLACK = 1e-10


@dataclass
class SearchOutcome:
    z_opt: np.ndarray | None
    x_opt: np.ndarray | None
    beta_sq: float
    nodes: int
    babai: np.ndarray | None
    found: bool
    complete: bool = True
    radii: list = field(default_factory=list)
    reduce_s: float = 0.0
    search_s: float = 0.0


def _ints(v):
    out = np.empty(len(v), dtype=object)
    out[:] = [int(t) for t in v]
    return out


def _enumerate(n, center, weight, beta_sq, trace, max_nodes):
    """Shared control flow.  center(k, z, c) gives c_k from the levels above k."""
    z = [0] * n
    c = [0.0] * n
    step = [0] * n
    dist = [0.0] * (n + 1)
    best = None
    babai = None
    radii = []
    nodes = 0
    complete = True

    def assign(k):
        ck = center(k, z, c)
        c[k] = ck
        zk = round_nearest(ck)
        z[k] = zk
        step[k] = sgn(ck - zk)

    k = n - 1
    assign(k)
    nodes += 1
    while True:
        # step 3
        diff = z[k] - c[k]
        t = weight[k] * diff * diff
        inside = t < beta_sq - dist[k + 1]
        if trace is not None:
            trace.append(("node", k + 1, z[k], inside))
        if inside and k > 0:
            dist[k] = dist[k + 1] + t
            k -= 1
            assign(k)
        else:
            if inside:
                # step 5
                beta_sq = dist[1] + t
                best = list(z)
                radii.append(beta_sq)
                if babai is None:
                    babai = list(z)
                if trace is not None:
                    trace.append(("found", 0, beta_sq, True))
                k += 1
            elif k < n - 1:
                # step 4
                k += 1
            else:
                break
            if k >= n:
                break
            # step 6
            z[k] += step[k]
            step[k] = -step[k] - sgn(step[k])
        nodes += 1
        if max_nodes is not None and nodes >= max_nodes:
            complete = False
            break
    return best, beta_sq, nodes, babai, radii, complete


def _beta_sq(beta0):
    return INF if beta0 is None or beta0 == INF else float(beta0) ** 2


def search_standard(R, ybar, beta0=INF, trace=None, max_nodes=None) -> SearchOutcome:
    """Minimise ||ybar - R z||^2 over integer z with objective below beta0^2."""
    R = np.asarray(R, dtype=float)
    n = R.shape[0]
    r = R.tolist()
    yb = [float(v) for v in ybar]
    weight = [r[k][k] ** 2 for k in range(n)]

    def center(k, z, c):
        rk = r[k]
        s = yb[k]
        for j in range(k + 1, n):
            s -= rk[j] * z[j]
        return s / rk[k]

    best, bsq, nodes, babai, radii, complete = _enumerate(
        n, center, weight, _beta_sq(beta0), trace, max_nodes)
    if best is None:
        return SearchOutcome(None, None, bsq, nodes, None, False, complete, radii)
    zo = _ints(best)
    return SearchOutcome(zo, zo.copy(), bsq, nodes, _ints(babai), True, complete, radii)


def search_quadratic(state, beta0=INF, trace=None, max_nodes=None) -> SearchOutcome:
    """Minimise sum_j (z_j - zbar_j)^2 / d_j for a reduced quadratic form.

    zbar_j = zhat_j + sum_{i>j} l_ij (z_i - zbar_i); x_opt = Z^{-T} z_opt.
    """
    L = np.asarray(state.L, dtype=float)
    n = L.shape[0]
    lt = L.T.tolist()
    zh = [float(v) for v in state.zhat]
    weight = [1.0 / float(v) for v in state.D]

    def center(k, z, c):
        col = lt[k]
        s = zh[k]
        for i in range(k + 1, n):
            s += col[i] * (z[i] - c[i])
        return s

    best, bsq, nodes, babai, radii, complete = _enumerate(
        n, center, weight, _beta_sq(beta0), trace, max_nodes)
    if best is None:
        return SearchOutcome(None, None, bsq, nodes, None, False, complete, radii)
    zo = _ints(best)
    Zinv = int_inverse(state.Z)
    return SearchOutcome(zo, int_matvec(Zinv.T, zo), bsq, nodes, _ints(babai),
                         True, complete, radii)


def search_eils(R, ybar, alpha, beta0=INF, trace=None, max_nodes=None) -> SearchOutcome:
    """Minimise ||ybar - R z||^2 subject to ||R z|| <= alpha.

    b_k = sum_{j>k} r_kj z_j and s_k = alpha^2 - sum_{i>k} (r_ii z_i + b_i)^2
    confine z_k to [l_k, u_k]; the zig-zag is clipped by the lbound/ubound
    flags.  found is False when no integer point is feasible below beta0.
    """
    R = np.asarray(R, dtype=float)
    n = R.shape[0]
    r = R.tolist()
    yb = [float(v) for v in ybar]
    beta_sq = _beta_sq(beta0)
    z = [0] * n
    c = [0.0] * n
    step = [0] * n
    lo = [0] * n
    hi = [0] * n
    lflag = [False] * n
    uflag = [False] * n
    b = [0.0] * n
    s = [0.0] * n
    dist = [0.0] * (n + 1)
    best = None
    babai = None
    radii = []
    nodes = 0
    complete = True

    def enter(k):
        # step 2, returns False if the interval is empty
        rkk = r[k][k]
        root = math.sqrt(max(s[k], 0.0))
        lk = math.ceil((-root - b[k]) / rkk)
        uk = math.floor((root - b[k]) / rkk)
        lflag[k] = uflag[k] = False
        if uk < lk:
            return False
        lo[k], hi[k] = lk, uk
        if uk == lk:
            lflag[k] = uflag[k] = True
        ck = (yb[k] - b[k]) / rkk
        c[k] = ck
        zk = round_nearest(ck)
        if zk <= lk:
            zk = lk
            lflag[k] = True
            step[k] = 1
        elif zk >= uk:
            zk = uk
            uflag[k] = True
            step[k] = -1
        else:
            step[k] = sgn(ck - zk)
        z[k] = zk
        return True

    k = n - 1
    b[k] = 0.0
    # alpha = ||A x0|| puts the planted point on the boundary; a relative
    # slack keeps it from being lost to rounding in s_k
    s[k] = float(alpha) ** 2 * (1.0 + ALPHA_SLACK)
    ok = enter(k)
    if ok:
        nodes += 1
    go_up = not ok
    if go_up and trace is not None:
        trace.append(("empty", k + 1, None, False))
    while True:
        if not go_up:
            # step 3
            diff = z[k] - c[k]
            rkk = r[k][k]
            t = rkk * rkk * diff * diff
            inside = t < beta_sq - dist[k + 1]
            if trace is not None:
                trace.append(("node", k + 1, z[k], inside))
            if inside and k > 0:
                dist[k] = dist[k + 1] + t
                row = r[k - 1]
                bk = 0.0
                for j in range(k, n):
                    bk += row[j] * z[j]
                b[k - 1] = bk
                e = rkk * z[k] + b[k]
                s[k - 1] = s[k] - e * e
                k -= 1
                if enter(k):
                    nodes += 1
                else:
                    if trace is not None:
                        trace.append(("empty", k + 1, None, False))
                    go_up = True
                if max_nodes is not None and nodes >= max_nodes:
                    complete = False
                    break
                continue
            if inside:
                # step 5
                beta_sq = dist[1] + t
                best = list(z)
                radii.append(beta_sq)
                if babai is None:
                    babai = list(z)
                if trace is not None:
                    trace.append(("found", 0, beta_sq, True))
                k += 1
                if k >= n:
                    break
            else:
                go_up = True
        if go_up:
            # step 4
            go_up = False
            if k >= n - 1:
                break
            k += 1
        # step 6
        if lflag[k] and uflag[k]:
            go_up = True
            continue
        dk = step[k]
        zk = z[k] + dk
        z[k] = zk
        if zk == lo[k]:
            lflag[k] = True
            step[k] = -dk - sgn(dk)
        elif zk == hi[k]:
            uflag[k] = True
            step[k] = -dk - sgn(dk)
        elif lflag[k]:
            step[k] = 1
        elif uflag[k]:
            step[k] = -1
        else:
            step[k] = -dk - sgn(dk)
        nodes += 1
        if max_nodes is not None and nodes >= max_nodes:
            complete = False
            break
    if best is None:
        return SearchOutcome(None, None, beta_sq, nodes, None, False, complete, radii)
    zo = _ints(best)
    return SearchOutcome(zo, zo.copy(), beta_sq, nodes, _ints(babai), True, complete, radii)


def quad_to_standard(W, xhat):
    """R = D^{-1/2} L^{-T}, ybar = R xhat, so ||ybar - R x||^2 = (x - xhat)^T W^{-1} (x - xhat)."""
    L, d = ltdl(W)
    n = L.shape[0]
    LT = L.T
    Linv_T = np.column_stack([solve_upper(LT, e) for e in np.eye(n)])
    R = Linv_T / np.sqrt(d)[:, None]
    return R, R @ np.asarray(xhat, dtype=float)


def trace_rows(trace, n):
    """Collapse a trace into rows of level values, None meaning no valid integer.

    Rows are written for: every accepted full point, followed by a row with
    level 1 cleared (after a full point no other value at level 1 can do
    better, so the level is exhausted); every freshly entered level whose
    first candidate is already outside the radius (or whose interval is
    empty); and a final all-None row when the search ends.
    """
    rows = []
    cur = [None] * n
    prev = None
    for kind, level, value, accepted in trace:
        if kind == "found":
            rows.append(tuple(cur))
            rows.append((None,) + tuple(cur[1:]))
            continue
        descended = prev is not None and prev[0] == level + 1 and prev[1]
        if kind == "empty":
            if descended:
                rows.append(tuple([None] * level + cur[level:]))
            prev = (level, False)
            continue
        cur[level - 1] = value
        if not accepted and descended:
            rows.append(tuple([None] * level + cur[level:]))
        prev = (level, accepted)
    rows.append(tuple([None] * n))
    return rows
