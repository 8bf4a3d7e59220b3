import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ils.matcore import int_identity
from ils.quadratic import LtdlState, gauss_igt, lambda_reduce, minreduction, noreduction
from ils.search import (quad_to_standard, search_eils, search_quadratic,
                        search_standard, trace_rows)

import oracles
from worked_examples import W_2X2, W_3X3, XHAT_2X2, XHAT_3X3

N = None


def _rows(st_):
    trace = []
    out = search_quadratic(st_, trace=trace)
    return trace_rows(trace, st_.n), out


def _random_standard(g, n):
    R = np.triu(g.standard_normal((n, n)))
    R[np.diag_indices(n)] = g.uniform(0.3, 2.0, n)
    return R, g.standard_normal(n) * 4


def test_diagonal_rounds():
    out = search_standard(np.eye(2), [0.4, -0.3])
    assert out.z_opt.tolist() == [0, 0] and out.beta_sq == pytest.approx(0.25)
    s = LtdlState(np.eye(2), np.ones(2), int_identity(2), np.array([0.4, -0.3]))
    assert search_quadratic(s).z_opt.tolist() == [0, 0]


def test_two_by_two_tables():
    rows, out = _rows(noreduction(W_2X2, XHAT_2X2))
    assert rows == [(2, 18), (N, 18), (N, 19), (N, 17), (N, 20), (N, N)]
    rows2, out2 = _rows(gauss_igt(noreduction(W_2X2, XHAT_2X2), 1, 0))
    assert rows2 == [(-178, 18), (N, 18), (N, 19), (N, 17), (N, 20), (N, N)]
    assert out.nodes == out2.nodes and out.x_opt.tolist() == out2.x_opt.tolist() == [2, 18]


def test_three_by_three_tables():
    rows, out = _rows(noreduction(W_3X3, XHAT_3X3))
    assert rows == [(23, 64, 43), (N, 64, 43), (27, 64, 42), (N, 64, 42),
                    (N, N, 44), (N, N, 41), (N, N, N)]
    rows, _ = _rows(lambda_reduce(W_3X3, XHAT_3X3))
    assert rows == [(-1972, 868, -509), (N, 868, -509), (N, N, N)]
    rows, _ = _rows(minreduction(W_3X3, XHAT_3X3))
    assert rows == [(64, -150, -509), (N, -150, -509), (N, N, N)]
    assert out.x_opt.tolist() == [27, 64, 42]


def test_quad_to_standard_identity(rng):
    R, yb = quad_to_standard(np.eye(3), [1.0, 2.0, 3.0])
    assert np.allclose(R, np.eye(3)) and np.allclose(yb, [1, 2, 3])
    R, yb = quad_to_standard(W_2X2, XHAT_2X2)
    assert search_standard(R, yb).z_opt.tolist() == [2, 18]
    W = oracles.random_spd(rng, 5)
    xhat = 10 * rng.standard_normal(5)
    R, yb = quad_to_standard(W, xhat)
    assert np.allclose(np.tril(R, -1), 0) and np.all(np.diag(R) > 0)
    X = rng.integers(-20, 21, (20, 5))
    want = oracles.objective_quadratic(W, xhat, X)
    got = oracles.objective_standard(R, yb, X)
    assert np.allclose(got, want, rtol=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_standard_matches_brute_force(n, seed):
    g = np.random.default_rng(seed)
    R, yb = _random_standard(g, n)
    out = search_standard(R, yb)
    best, _ = oracles.brute_min(lambda X: oracles.objective_standard(R, yb, X), out.babai)
    assert out.beta_sq == pytest.approx(best, rel=1e-9, abs=1e-12)
    assert oracles.objective_standard(R, yb, [out.z_opt])[0] == pytest.approx(out.beta_sq, rel=1e-10, abs=1e-12)
    assert out.nodes >= n


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_quadratic_matches_brute_force(n, seed):
    g = np.random.default_rng(seed)
    W = oracles.random_spd(g, n, spread=2.0)
    xhat = 20 * g.standard_normal(n)
    out = search_quadratic(noreduction(W, xhat))
    best, _ = oracles.brute_min(lambda X: oracles.objective_quadratic(W, xhat, X), out.babai)
    assert out.beta_sq == pytest.approx(best, rel=1e-9, abs=1e-12)


def test_radii_and_babai(rng):
    for _ in range(40):
        n = int(rng.integers(2, 7))
        R, yb = _random_standard(rng, n)
        out = search_standard(R, yb)
        assert all(a > b for a, b in zip(out.radii, out.radii[1:]))
        fb = oracles.objective_standard(R, yb, [out.babai])[0]
        assert fb >= out.beta_sq - 1e-12
        if out.babai.tolist() != out.z_opt.tolist():
            assert fb > out.beta_sq
        else:
            assert fb == pytest.approx(out.beta_sq)


def _level_runs(trace):
    """Values enumerated at each level between two visits from above."""
    runs, open_ = [], {}
    for kind, level, value, _ in trace:
        if kind != "node":
            continue
        open_.setdefault(level, []).append(value)
        # moving up a level ends the runs below it
        for lower in [lv for lv in open_ if lv < level]:
            runs.append(open_.pop(lower))
    runs.extend(open_.values())
    return runs


def test_zigzag_visits_contiguous_values(rng):
    for _ in range(30):
        n = int(rng.integers(2, 5))
        R, yb = _random_standard(rng, n)
        trace = []
        search_standard(R, yb, trace=trace)
        for vals in _level_runs(trace):
            assert len(set(vals)) == len(vals)
            assert max(vals) - min(vals) == len(vals) - 1
            # nearest first, then alternating sides
            for a, b in zip(vals, vals[1:]):
                assert abs(b - vals[0]) >= abs(a - vals[0])


def test_eils_examples():
    out = search_eils(np.eye(3), [4.0, -7.0, 2.2], 0.5)
    assert out.found and out.z_opt.tolist() == [0, 0, 0]
    out = search_eils(np.eye(2), [1.2, 0.3], 1.5)
    assert out.z_opt.tolist() == [1, 0]
    feas = [z for z in oracles.all_points((-1, -1), (1, 1)) if z[0] ** 2 + z[1] ** 2 <= 2.25]
    best = min(feas, key=lambda z: (1.2 - z[0]) ** 2 + (0.3 - z[1]) ** 2)
    assert list(best) == [1, 0]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_eils_matches_brute_force(n, seed):
    g = np.random.default_rng(seed)
    A = g.standard_normal((n, n)) + 0.5 * np.eye(n)
    x0 = g.integers(-2, 3, n)
    if not x0.any():
        x0[0] = 1
    y = A @ x0 + 2.0 * g.standard_normal(n)
    alpha = float(np.linalg.norm(A @ x0))
    Q, R = np.linalg.qr(A)
    sg = np.sign(np.diag(R))
    R, yb = sg[:, None] * R, sg * (Q.T @ y)
    if np.max(np.abs(np.linalg.inv(R))) * alpha > 40:
        return
    trace = []
    out = search_eils(R, yb, alpha, trace=trace)
    want, _ = oracles.brute_eils(A, y, alpha)
    assert out.found
    assert out.beta_sq == pytest.approx(want, rel=1e-9, abs=1e-9)
    z = np.array(out.z_opt, dtype=float)
    assert float(np.sum((R @ z) ** 2)) <= alpha ** 2 * (1 + 1e-9)


def test_eils_full_points_feasible(rng):
    for _ in range(20):
        n = 4
        A = rng.standard_normal((n, n))
        x0 = rng.integers(-3, 4, n)
        x0[0] = x0[0] or 1
        alpha = float(np.linalg.norm(A @ x0))
        Q, R = np.linalg.qr(A)
        sg = np.sign(np.diag(R))
        R = sg[:, None] * R
        yb = sg * (Q.T @ (A @ x0 + 3 * rng.standard_normal(n)))
        trace = []
        search_eils(R, yb, alpha, trace=trace)
        cur = [0] * n
        for kind, level, value, _ in trace:
            if kind == "node":
                cur[level - 1] = value
            elif kind == "found":
                z = np.array(cur, dtype=float)
                assert float(np.sum((R @ z) ** 2)) <= alpha ** 2 * (1 + 1e-9)


def test_max_nodes_and_finite_radius():
    R, yb = quad_to_standard(W_3X3, XHAT_3X3)
    out = search_standard(R, yb, max_nodes=3)
    assert not out.complete and out.nodes == 3
    out = search_standard(R, yb, beta0=1e-3)
    assert not out.found and out.z_opt is None
    full = search_standard(R, yb)
    out = search_standard(R, yb, beta0=math.sqrt(full.beta_sq) * 1.01)
    assert out.found and out.z_opt.tolist() == full.z_opt.tolist()
