"""Reductions of the quadratic form (x - xhat)^T W^{-1} (x - xhat).

Every reduction returns an LtdlState with Z^T W Z = L^T D L and
zhat = Z^T xhat.  Indices are 0-based: gauss_igt(st, i, j) reduces L[i, j]
(i > j) and permute_pair(st, k) swaps positions k and k+1.
"""
from dataclasses import dataclass

import numpy as np

from .errors import NonTermination, NotPositiveDefinite
from .matcore import (as_vector, int_identity, ltdl, ltdl_sympiv,
                      round_nearest, symmetrize)


@dataclass
class LtdlState:
    L: np.ndarray
    D: np.ndarray
    Z: np.ndarray
    zhat: np.ndarray
    igts: int = 0
    perms: int = 0

    @property
    def n(self) -> int:
        return self.L.shape[0]

    def copy(self) -> "LtdlState":
        return LtdlState(self.L.copy(), self.D.copy(), self.Z.copy(),
                         self.zhat.copy(), self.igts, self.perms)

    def transformed_w(self) -> np.ndarray:
        return self.L.T @ (self.D[:, None] * self.L)


def perm_cap(n: int) -> int:
    return 10 * n ** 3


def gauss_igt(st: LtdlState, i: int, j: int, mu=None) -> LtdlState:
    """Apply Z_ij = I - mu e_i e_j^T, in place.  mu defaults to round(L[i, j])."""
    if mu is None:
        mu = round_nearest(st.L[i, j])
    if mu != 0:
        st.L[i:, j] -= mu * st.L[i:, i]
        st.Z[:, j] -= mu * st.Z[:, i]
        st.zhat[j] -= mu * st.zhat[i]
        st.igts += 1
    return st


def permute_pair(st: LtdlState, k: int, delta=None) -> LtdlState:
    """Swap positions k and k+1 and update the factors, in place.

    delta is the new D[k+1], i.e. D[k] + L[k+1, k]^2 D[k+1].
    """
    L, D = st.L, st.D
    if delta is None:
        delta = D[k] + L[k + 1, k] ** 2 * D[k + 1]
    eta = D[k] / delta
    lam = D[k + 1] * L[k + 1, k] / delta
    D[k] = eta * D[k + 1]
    D[k + 1] = delta
    T = np.array([[-L[k + 1, k], 1.0], [eta, lam]])
    L[k:k + 2, :k] = T @ L[k:k + 2, :k]
    L[k + 1, k] = lam
    L[k + 2:, [k, k + 1]] = L[k + 2:, [k + 1, k]]
    st.Z[:, [k, k + 1]] = st.Z[:, [k + 1, k]]
    st.zhat[[k, k + 1]] = st.zhat[[k + 1, k]]
    st.perms += 1
    return st


def _start(W, xhat, pivot):
    x = as_vector(xhat)
    if pivot:
        P, L, d = ltdl_sympiv(W)
        zhat = P.T.astype(float) @ x
        return LtdlState(L, d, P, zhat)
    L, d = ltdl(W)
    return LtdlState(L, d, int_identity(L.shape[0]), x.copy())


def _check_cap(st):
    if st.perms > perm_cap(st.n):
        raise NonTermination("more than %d permutations" % perm_cap(st.n))


def noreduction(W, xhat) -> LtdlState:
    return _start(W, xhat, pivot=False)


def lambda_reduce(W, xhat) -> LtdlState:
    """Decorrelate fully, swap whenever d_{k+1} can shrink, restart from the end."""
    st = _start(W, xhat, pivot=False)
    n = st.n
    k = n - 2
    k1 = k
    while k >= 0:
        if k <= k1:
            for i in range(k + 1, n):
                gauss_igt(st, i, k)
        delta = st.D[k] + st.L[k + 1, k] ** 2 * st.D[k + 1]
        if delta < st.D[k + 1]:
            permute_pair(st, k, delta)
            _check_cap(st)
            k1 = k
            k = n - 2
        else:
            k -= 1
    return st


def minreduction(W, xhat) -> LtdlState:
    """As lambda_reduce, but the only IGT ever applied is the subdiagonal one
    on a pair that is about to be permuted."""
    st = _start(W, xhat, pivot=False)
    n = st.n
    L, D = st.L, st.D
    k = n - 2
    while k >= 0:
        l = L[k + 1, k] - round_nearest(L[k + 1, k])
        delta = D[k] + l * l * D[k + 1]
        if delta < D[k + 1]:
            gauss_igt(st, k + 1, k)
            permute_pair(st, k)
            _check_cap(st)
            k = n - 2
        else:
            k -= 1
    return st


def mreduction(W, xhat) -> LtdlState:
    """Pivoted start, greedy choice of the pair whose swap shrinks most, lazy IGTs."""
    st = _start(W, xhat, pivot=True)
    n = st.n
    L, D = st.L, st.D
    stale = [True] * (n + 1)
    dbar = [0.0] * (n + 1)
    while True:
        best = 1.0
        pick = None
        for k in range(n - 1):
            if D[k] / D[k + 1] < 1.0:
                if stale[k + 1]:
                    gauss_igt(st, k + 1, k)
                    dbar[k + 1] = D[k] + L[k + 1, k] ** 2 * D[k + 1]
                    stale[k + 1] = False
                ratio = dbar[k + 1] / D[k + 1]
                if ratio < best:
                    best = ratio
                    pick = k
        if pick is None:
            break
        permute_pair(st, pick, dbar[pick + 1])
        _check_cap(st)
        for j in range(pick, min(pick + 3, n + 1)):
            stale[j] = True
    for k in range(n - 1):
        for i in range(k + 1, n):
            gauss_igt(st, i, k)
    return st


def preduction(W, xhat) -> LtdlState:
    """Permute wherever a reduced subdiagonal would allow it; reduce only there."""
    st = _start(W, xhat, pivot=True)
    n = st.n
    L, D = st.L, st.D
    k = n - 2
    k1 = k
    while k >= 0:
        l = L[k + 1, k] - round_nearest(L[k + 1, k])
        dbar = D[k] + l * l * D[k + 1]
        if dbar < D[k + 1]:
            if k <= k1:
                for i in range(k + 1, n):
                    gauss_igt(st, i, k)
            else:
                gauss_igt(st, k + 1, k)
            permute_pair(st, k)
            _check_cap(st)
            k1 = k
            if k < n - 2:
                k += 1
        else:
            k -= 1
    return st


REDUCTIONS = {
    "lambda": lambda_reduce,
    "mreduction": mreduction,
    "preduction": preduction,
    "minreduction": minreduction,
    "noreduction": noreduction,
}


def psi(W) -> float:
    """Sum of absolute correlation coefficients over the strict upper triangle."""
    W = symmetrize(W)
    dg = np.diag(W)
    if np.any(dg <= 0):
        raise NotPositiveDefinite("non-positive diagonal entry")
    s = np.sqrt(dg)
    C = np.abs(W) / np.outer(s, s)
    return float(np.sum(np.triu(C, 1)))
