"""Reductions of the standard form min ||y - A x||^2 to an upper triangular R.

Indices in this module are 0-based: igt_upper(st, i, j) acts on R[i, j] and
permute_adjacent(st, k) swaps columns k-1 and k.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonTermination
from .matcore import givens_pair, int_identity, qr_householder, round_nearest


@dataclass
class QrzReduction:
    """R = Q1^T A Z, ybar = Q1^T y, so min ||ybar - R z|| with x = Z z."""
    R: np.ndarray
    Z: np.ndarray
    ybar: np.ndarray
    igts: int = 0
    swaps: int = 0
    capped: bool = False

    @property
    def n(self) -> int:
        return self.R.shape[0]

    def copy(self) -> "QrzReduction":
        return QrzReduction(self.R.copy(), self.Z.copy(), self.ybar.copy(),
                            self.igts, self.swaps, self.capped)


def swap_cap(n: int) -> int:
    return 10 * n ** 3


def igt_upper(st: QrzReduction, i: int, j: int) -> QrzReduction:
    """Reduce R[i, j] to at most R[i, i] / 2 in magnitude, in place."""
    mu = round_nearest(st.R[i, j] / st.R[i, i])
    if mu != 0:
        st.R[:i + 1, j] -= mu * st.R[:i + 1, i]
        st.Z[:, j] -= mu * st.Z[:, i]
        st.igts += 1
    return st


def swap_rotation(R, ybar, k):
    """Swap columns k-1, k of R and retriangularise, in place.

    Returns the 2x2 rotation applied to rows k-1, k.
    """
    R[:, [k - 1, k]] = R[:, [k, k - 1]]
    c, s = givens_pair(R[k - 1, k - 1], R[k, k - 1])
    G = np.array([[c, s], [-s, c]])
    R[k - 1:k + 1, k - 1:] = G @ R[k - 1:k + 1, k - 1:]
    R[k, k - 1] = 0.0
    ybar[k - 1:k + 1] = G @ ybar[k - 1:k + 1]
    if R[k, k] < 0:
        R[k, k:] *= -1.0
        ybar[k] = -ybar[k]
    return G


def permute_adjacent(st: QrzReduction, k: int) -> QrzReduction:
    """Swap columns k-1 and k and restore triangular form, in place."""
    swap_rotation(st.R, st.ybar, k)
    st.Z[:, [k - 1, k]] = st.Z[:, [k, k - 1]]
    st.swaps += 1
    return st


def lll_reduce(A, y) -> QrzReduction:
    """LLL reduction with delta = 1."""
    R, ybar = qr_householder(A, y)
    n = R.shape[0]
    st = QrzReduction(R, int_identity(n), ybar)
    cap = swap_cap(n)
    k = 1
    while k < n:
        for i in range(k - 1, -1, -1):
            igt_upper(st, i, k)
        R = st.R
        if R[k - 1, k - 1] > math.hypot(R[k - 1, k], R[k, k]):
            permute_adjacent(st, k)
            if st.swaps > cap:
                raise NonTermination("LLL exceeded %d swaps" % cap)
            if k > 1:
                k -= 1
        else:
            k += 1
    return st


def sorted_qr(A, y) -> QrzReduction:
    """QR with the smallest remaining column norm chosen first; Z records the order."""
    R, ybar, perm = qr_householder(A, y, pivot=True)
    n = R.shape[0]
    Z = np.zeros((n, n), dtype=object)
    for k, p in enumerate(perm):
        Z[p, k] = 1
    return QrzReduction(R, Z, ybar)


def plll_reduce(A, y) -> QrzReduction:
    """Partial LLL: only reduce a column when a swap there is going to happen."""
    st = sorted_qr(A, y)
    n = st.n
    cap = swap_cap(n)
    k = 1
    while k < n:
        R = st.R
        a = R[k - 1, k - 1]
        rt = R[k - 1, k] - round_nearest(R[k - 1, k] / a) * a
        if a > math.hypot(rt, R[k, k]):
            for i in range(k - 1, -1, -1):
                igt_upper(st, i, k)
            permute_adjacent(st, k)
            if st.swaps > cap:
                raise NonTermination("PLLL exceeded %d swaps" % cap)
            if k > 1:
                k -= 1
        else:
            k += 1
    return st
