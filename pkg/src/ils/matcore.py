"""Dense linear algebra used by the reductions and searches.

Matrices are plain row-major numpy float64 arrays.  Integer transformation
matrices are numpy object arrays of Python ints so that entries never
overflow.
"""
import math
from fractions import Fraction

import numpy as np

from .errors import (DegenerateRotation, NonUnimodular, NotPositiveDefinite,
                     NotSymmetric, RankDeficient, SingularTriangular)

EPS = np.finfo(float).eps


def round_nearest(x) -> int:
    """Nearest integer, ties go to the one with smaller magnitude."""
    a = abs(float(x))
    f = math.floor(a)
    r = f + 1 if a - f > 0.5 else f
    return int(r) if x >= 0 else -int(r)


def sgn(x) -> int:
    # zero counts as negative
    return -1 if x <= 0 else 1


def as_matrix(A) -> np.ndarray:
    A = np.array(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("expected a 2-d array, got shape %s" % (A.shape,))
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def as_vector(y) -> np.ndarray:
    y = np.array(y, dtype=float).reshape(-1)
    if not np.all(np.isfinite(y)):
        raise ValueError("vector has non-finite entries")
    return y


def int_identity(n: int) -> np.ndarray:
    Z = np.zeros((n, n), dtype=object)
    for i in range(n):
        Z[i, i] = 1
    return Z


def as_int_matrix(Z) -> np.ndarray:
    Z = np.asarray(Z)
    out = np.empty(Z.shape, dtype=object)
    for idx, v in np.ndenumerate(Z):
        iv = int(v)
        if iv != v:
            raise ValueError("non-integer entry %r" % (v,))
        out[idx] = iv
    return out


# ---------------------------------------------------------------- QR

def _householder(A, pivot=False):
    """Householder triangularisation of a copy of A.

    Returns (T, vs, betas, perm) where T holds R in its upper n x n block,
    reflector k is I - beta_k v_k v_k^T acting on rows k:, and perm lists
    the column order.  With pivot=True the column with the smallest
    remaining norm is brought forward at every step.
    """
    T = as_matrix(A).copy()
    m, n = T.shape
    cnorm = np.linalg.norm(T, axis=0)
    if m < n:
        raise RankDeficient("need rows >= cols, got %d x %d" % (m, n))
    perm = list(range(n))
    vs, betas = [], []
    for k in range(n):
        if pivot:
            j = k + int(np.argmin(np.linalg.norm(T[k:, k:], axis=0)))
            if j != k:
                T[:, [k, j]] = T[:, [j, k]]
                cnorm[[k, j]] = cnorm[[j, k]]
                perm[k], perm[j] = perm[j], perm[k]
        x = T[k:, k]
        nx = np.linalg.norm(x)
        # a column that has lost all but rounding residue is dependent too
        if nx <= max(m, n) * EPS * cnorm[k]:
            raise RankDeficient("column %d is dependent on the previous ones" % k)
        alpha = -nx if x[0] >= 0 else nx
        v = x.copy()
        v[0] -= alpha
        beta = 2.0 / (v @ v)
        T[k:, k:] -= beta * np.outer(v, v @ T[k:, k:])
        T[k + 1:, k] = 0.0
        T[k, k] = alpha
        vs.append(v)
        betas.append(beta)
    d = np.abs(np.diag(T[:n]))
    if d.min() < n * EPS * d.max():
        raise RankDeficient("diagonal of R collapsed: min |r_ii| = %g" % d.min())
    return T, vs, betas, perm


def _apply_reflectors(vs, betas, y):
    y = y.copy()
    for k, (v, beta) in enumerate(zip(vs, betas)):
        y[k:] -= beta * v * (v @ y[k:])
    return y


def qr_householder(A, y, pivot=False):
    """R with positive diagonal and ybar = Q1^T y.

    With pivot=True also returns the column order used (see _householder).
    """
    A = as_matrix(A)
    y = as_vector(y)
    if y.shape[0] != A.shape[0]:
        raise ValueError("y has length %d, A has %d rows" % (y.shape[0], A.shape[0]))
    T, vs, betas, perm = _householder(A, pivot)
    n = A.shape[1]
    qty = _apply_reflectors(vs, betas, y)
    R = np.triu(T[:n])
    s = np.where(np.diag(R) < 0, -1.0, 1.0)
    if pivot:
        return R * s[:, None], qty[:n] * s, perm
    return R * s[:, None], qty[:n] * s


def householder_q(A):
    """Full orthogonal Q and R such that A = Q [R; 0], diag(R) > 0."""
    A = as_matrix(A)
    m, n = A.shape
    T, vs, betas, _ = _householder(A)
    Q = np.eye(m)
    for k in reversed(range(n)):
        v, beta = vs[k], betas[k]
        Q[k:, :] -= beta * np.outer(v, v @ Q[k:, :])
    R = np.triu(T[:n])
    s = np.where(np.diag(R) < 0, -1.0, 1.0)
    Q[:, :n] *= s
    return Q, R * s[:, None]


def givens_pair(a, b):
    """(c, s) with [[c, s], [-s, c]] @ (a, b) = (hypot(a, b), 0)."""
    r = math.hypot(a, b)
    if r == 0.0:
        raise DegenerateRotation("cannot rotate the zero vector")
    return a / r, b / r


# ------------------------------------------------------------ L^T D L

def symmetrize(W) -> np.ndarray:
    W = as_matrix(W)
    if W.shape[0] != W.shape[1]:
        raise NotSymmetric("matrix is %d x %d" % W.shape)
    scale = np.abs(W).max()
    if np.abs(W - W.T).max() > 1e-10 * scale:
        raise NotSymmetric("asymmetry %g exceeds tolerance" % np.abs(W - W.T).max())
    return 0.5 * (W + W.T)


def ltdl(W):
    """Factor W = L^T D L, eliminating from the bottom-right corner up.

    Returns the unit lower triangular L and the vector of diagonal entries of D.
    """
    A = symmetrize(W)
    n = A.shape[0]
    L = np.eye(n)
    d = np.zeros(n)
    for k in range(n - 1, -1, -1):
        dk = A[k, k]
        if not dk > 0:
            raise NotPositiveDefinite("pivot %d is %g" % (k, dk))
        d[k] = dk
        l = A[k, :k] / dk
        L[k, :k] = l
        A[:k, :k] -= dk * np.outer(l, l)
    return L, d


def ltdl_sympiv(W):
    """P^T W P = L^T D L, moving the smallest remaining diagonal entry last.

    Returns (P, L, d) with P an integer permutation matrix.
    """
    A = symmetrize(W)
    n = A.shape[0]
    perm = list(range(n))
    for k in range(n - 1, -1, -1):
        dg = np.diag(A)[:k + 1]
        # keep the current entry when it ties for the minimum, otherwise
        # take the lowest index among the minima
        q = k if dg[k] <= dg.min() else int(np.argmin(dg))
        if q != k:
            perm[k], perm[q] = perm[q], perm[k]
            A[[k, q], :] = A[[q, k], :]
            A[:, [k, q]] = A[:, [q, k]]
        dk = A[k, k]
        if not dk > 0:
            raise NotPositiveDefinite("pivot %d is %g" % (k, dk))
        A[k, :k] /= dk
        l = A[k, :k]
        A[:k, :k] -= dk * np.outer(l, l)
    L = np.tril(A, -1) + np.eye(n)
    d = np.diag(A).copy()
    P = np.zeros((n, n), dtype=object)
    for k, p in enumerate(perm):
        P[p, k] = 1
    return P, L, d


def ltdl_product(L, d) -> np.ndarray:
    return L.T @ (np.asarray(d)[:, None] * L)


# ----------------------------------------------------- triangular solves

def solve_lower(T, b):
    T = np.asarray(T, dtype=float)
    b = as_vector(b)
    n = b.shape[0]
    x = np.zeros(n)
    for i in range(n):
        if T[i, i] == 0:
            raise SingularTriangular("zero diagonal at %d" % i)
        x[i] = (b[i] - T[i, :i] @ x[:i]) / T[i, i]
    return x


def solve_upper(T, b):
    T = np.asarray(T, dtype=float)
    b = as_vector(b)
    n = b.shape[0]
    x = np.zeros(n)
    for i in range(n - 1, -1, -1):
        if T[i, i] == 0:
            raise SingularTriangular("zero diagonal at %d" % i)
        x[i] = (b[i] - T[i, i + 1:] @ x[i + 1:]) / T[i, i]
    return x


# ------------------------------------------------------------ spectra

def jacobi_eigenvalues(W, tol=1e-14, max_sweeps=100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations."""
    A = symmetrize(W).copy()
    n = A.shape[0]
    target = tol * np.linalg.norm(A)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if tau >= 0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ap = A[:, p].copy()
                aq = A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
    return np.sort(np.diag(A))


def cond_spd(W) -> float:
    ev = jacobi_eigenvalues(W)
    if ev[0] <= 0:
        raise NotPositiveDefinite("eigenvalue %g" % ev[0])
    return float(ev[-1] / ev[0])


def spectral_norm_sym(M) -> float:
    ev = jacobi_eigenvalues(M)
    return float(max(abs(ev[0]), abs(ev[-1])))


# ------------------------------------------------- exact integer algebra

def exact_det(M):
    """Determinant by fraction-free (Bareiss) elimination, exact in Fractions."""
    A = [[Fraction(v) for v in row] for row in np.asarray(M).tolist()]
    n = len(A)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) / prev
        prev = akk
    return sign * A[n - 1][n - 1] if n else 1


def int_inverse(Z) -> np.ndarray:
    """Exact inverse of a unimodular integer matrix."""
    rows = [[int(v) for v in row] for row in np.asarray(Z).tolist()]
    n = len(rows)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(rows)]
    det = Fraction(1)
    for k in range(n):
        p = next((r for r in range(k, n) if aug[r][k] != 0), None)
        if p is None:
            raise NonUnimodular("singular integer matrix")
        if p != k:
            aug[k], aug[p] = aug[p], aug[k]
            det = -det
        piv = aug[k][k]
        det *= piv
        rk = [v / piv for v in aug[k]]
        aug[k] = rk
        for i in range(n):
            if i != k and aug[i][k] != 0:
                f = aug[i][k]
                ri = aug[i]
                aug[i] = [a - f * b for a, b in zip(ri, rk)]
    if abs(det) != 1:
        raise NonUnimodular("|det Z| = %s" % abs(det))
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            v = aug[i][n + j]
            if v.denominator != 1:
                raise NonUnimodular("inverse is not integral")
            out[i, j] = int(v)
    return out


def int_matvec(Z, v) -> np.ndarray:
    """Z @ v for integer Z and integer v, exact."""
    Z = np.asarray(Z)
    out = np.empty(Z.shape[0], dtype=object)
    for i in range(Z.shape[0]):
        out[i] = sum(int(a) * int(b) for a, b in zip(Z[i], v))
    return out
