"""Ellipsoid-constrained problems: min ||y - A x||^2 subject to ||A x|| <= alpha."""
import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import IlsError
from .matcore import (as_matrix, as_vector, int_identity, int_matvec,
                      qr_householder, round_nearest, sgn, solve_lower)
from .search import SearchOutcome, search_eils
from .standard import (QrzReduction, igt_upper, lll_reduce, swap_cap,
                       swap_rotation)


@dataclass
class EilsProblem:
    A: np.ndarray
    y: np.ndarray
    alpha: float
    x_true: np.ndarray | None = None

    def __post_init__(self):
        self.A = as_matrix(self.A)
        self.y = as_vector(self.y)
        self.alpha = float(self.alpha)
        if not self.alpha > 0:
            raise IlsError("alpha must be positive")


def box_bounds(R, alpha, k):
    """Integer range of z_k over the ellipsoid ||R z|| <= alpha (k is 0-based).

    By Cauchy-Schwarz |z_k| = |q^T R z| <= alpha ||q|| with R^T q = e_k.
    """
    R = np.asarray(R, dtype=float)
    e = np.zeros(R.shape[0])
    e[k] = 1.0
    q = solve_lower(R.T, e)
    w = float(alpha) * float(np.linalg.norm(q))
    return math.ceil(-w), math.floor(w)


def second_nearest_on_interval(c, l, u):
    """Second integer of the zig-zag order around c restricted to [l, u]."""
    if u - l < 1:
        return None
    if c <= l:
        return l + 1
    if c >= u:
        return u - 1
    z = round_nearest(c)
    step = sgn(c - z)
    seen = 0
    while True:
        if l <= z <= u:
            seen += 1
            if seen == 2:
                return z
        z += step
        step = -step - sgn(step)


def _nearest_on_interval(c, l, u):
    return min(max(round_nearest(c), l), u)


def _swap_score(R, ybar, alpha, k):
    """|r_kk (z_k - cbar_k)| with z_k the second-nearest feasible integer.

    With fewer than two integers in the box interval, fall back to
    |r_kk| * max(|z_k - cbar_k|, 0.5) for the one remaining integer.
    """
    rkk = R[k, k]
    cbar = ybar[k] / rkk
    lo, hi = box_bounds(R, alpha, k)
    z = second_nearest_on_interval(cbar, lo, hi)
    if z is None:
        if hi < lo:
            return None
        z = _nearest_on_interval(cbar, lo, hi)
        return abs(rkk) * max(abs(z - cbar), 0.5)
    return abs(rkk * (z - cbar))


def clll_reduce(problem: EilsProblem) -> QrzReduction:
    """LLL-style walk whose swap test looks at the constrained search instead
    of the diagonal: a swap is kept when it enlarges |r_kk (z_k - cbar_k)|."""
    R, ybar = qr_householder(problem.A, problem.y)
    n = R.shape[0]
    st = QrzReduction(R, int_identity(n), ybar)
    alpha = problem.alpha
    cap = swap_cap(n)
    k = 1
    while k < n:
        for i in range(k - 1, -1, -1):
            igt_upper(st, i, k)
        R2 = st.R.copy()
        y2 = st.ybar.copy()
        swap_rotation(R2, y2, k)
        now = _swap_score(st.R, st.ybar, alpha, k)
        trial = _swap_score(R2, y2, alpha, k)
        if now is None or trial is None:
            better = R2[k, k] > st.R[k, k]
        else:
            better = trial > now
        if better:
            st.R, st.ybar = R2, y2
            st.Z[:, [k - 1, k]] = st.Z[:, [k, k - 1]]
            st.swaps += 1
            if st.swaps >= cap:
                st.capped = True
                break
            if k > 1:
                k -= 1
        else:
            k += 1
    return st


def solve_eils(problem: EilsProblem, strategy: str = "clll", beta0=math.inf,
               max_nodes=None) -> SearchOutcome:
    """Reduce, search in the reduced coordinates, map back with x = Z z."""
    t0 = time.perf_counter()
    if strategy == "lll":
        st = lll_reduce(problem.A, problem.y)
    elif strategy == "clll":
        st = clll_reduce(problem)
    else:
        raise IlsError("unknown EILS strategy %r" % strategy)
    t1 = time.perf_counter()
    out = search_eils(st.R, st.ybar, problem.alpha, beta0=beta0, max_nodes=max_nodes)
    t2 = time.perf_counter()
    if out.found:
        out.x_opt = int_matvec(st.Z, out.z_opt)
        out.babai = int_matvec(st.Z, out.babai)
    out.reduce_s = t1 - t0
    out.search_s = t2 - t1
    return out
