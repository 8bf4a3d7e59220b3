"""Recover an unrounded 3x3 instance consistent with four-decimal published data.

The published covariance is printed to four decimals, and that rounding is
enough to change which unimodular transform a reduction picks.  The
published transformed covariances (for two known Z), the estimate and both
transformed estimates pin the instance down much more tightly.  This script
solves two small linear feasibility problems: find W (six unknowns) and x
(three unknowns) that maximise the slack t while every published value is
reproduced within its rounding half-width minus t.  It then re-runs every
reduction on the recovered instance.

Needs scipy (pip install -e .[scripts]).
"""
import numpy as np
from scipy.optimize import linprog

from ils.quadratic import REDUCTIONS, psi
from ils.search import search_quadratic, trace_rows

W_PRINTED = np.array([[2.8376, -0.0265, -0.8061],
                      [-0.0265, 0.7587, 2.0602],
                      [-0.8061, 2.0602, 5.7845]])
X_PRINTED = np.array([26.6917, 64.1662, 42.5485])

# (Z, printed Z^T W Z, printed Z^T x, half-width of the printed z)
PUBLISHED = [
    (np.array([[4, -2, 1], [-43, 19, -11], [16, -7, 4]], float),
     np.array([[0.2282, 0.0452, -0.0009], [0.0452, 0.1232, -0.0006], [-0.0009, -0.0006, 0.0327]]),
     np.array([-1971.6, 867.9, -508.9]), 0.05),
    (np.array([[0, 0, 1], [1, -3, -11], [0, 1, 4]], float),
     np.array([[0.7587, -0.2160, -0.1317], [-0.2160, 0.2518, 0.0649], [-0.1317, 0.0649, 0.0327]]),
     np.array([64.1662, -149.9499, -508.9418]), 5e-5),
]
HALF = 5e-5
UPPER = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]


def _sym_basis(i, j):
    E = np.zeros((3, 3))
    E[i, j] = E[j, i] = 1.0
    return E


def _max_slack(rows, nvar):
    """rows: (coef, value, half).  Maximise t s.t. |coef.v - value| <= half - t."""
    A, b = [], []
    for coef, val, h in rows:
        A.append(list(coef) + [1.0])
        b.append(val + h)
        A.append(list(-np.asarray(coef)) + [1.0])
        b.append(-val + h)
    res = linprog(c=[0.0] * nvar + [-1.0], A_ub=A, b_ub=b,
                  bounds=[(None, None)] * (nvar + 1), method="highs")
    if res.status != 0 or res.x[-1] < 0:
        raise RuntimeError("published values are not jointly consistent")
    return res.x[:nvar], res.x[-1]


def recover():
    rows = []
    for k, (i, j) in enumerate(UPPER):
        rows.append((np.eye(6)[k], W_PRINTED[i, j], HALF))
    for Z, Wz, _, _ in PUBLISHED:
        for i, j in UPPER:
            rows.append(([(Z.T @ _sym_basis(*p) @ Z)[i, j] for p in UPPER], Wz[i, j], HALF))
    w, tw = _max_slack(rows, 6)
    W = np.zeros((3, 3))
    for k, (i, j) in enumerate(UPPER):
        W[i, j] = W[j, i] = w[k]

    rows = [(np.eye(3)[i], X_PRINTED[i], HALF) for i in range(3)]
    for Z, _, z, h in PUBLISHED:
        rows += [(Z[:, i], z[i], h) for i in range(3)]
    x, tx = _max_slack(rows, 3)
    return W, x, tw, tx


def report(W, x, label):
    print(label)
    for name in ["noreduction", "lambda", "minreduction", "mreduction", "preduction"]:
        st = REDUCTIONS[name](W, x)
        trace = []
        out = search_quadratic(st, trace=trace)
        Zf = np.array(st.Z, dtype=float)
        print("  %-12s psi=%.4f x=%s rows=%d Z=%s" % (
            name, psi(Zf.T @ W @ Zf), list(out.x_opt), len(trace_rows(trace, 3)), st.Z.tolist()))


def main():
    W, x, tw, tx = recover()
    np.set_printoptions(precision=17)
    print("slack W %.2e, slack x %.2e" % (tw, tx))
    print("W =", repr(W))
    print("x =", repr(x))
    print("max |W - printed| = %.1e" % np.max(np.abs(W - W_PRINTED)))
    report(W_PRINTED, X_PRINTED, "printed (rounded) instance")
    report(W, x, "recovered instance")


if __name__ == "__main__":
    main()
