import csv

import numpy as np
import pytest

from ils.cli import main
from ils.matio import read_matrix, read_vector, write_matrix

from worked_examples import W_2X2, W_PRED, XHAT_2X2, XHAT_PRED


@pytest.fixture
def files(tmp_path):
    def put(name, M):
        p = tmp_path / name
        write_matrix(p, M)
        return str(p)
    return put


def test_reduce_quadratic(files, tmp_path, capsys):
    w, x = files("w.txt", W_PRED), files("x.txt", XHAT_PRED)
    out = str(tmp_path / "red")
    assert main(["reduce", "--form", "quadratic", "--method", "preduction",
                 "--w", w, "--xhat", x, "--out", out]) == 0
    assert read_matrix(out + "_Z.txt").astype(int).tolist() == [[0, 1, 0], [0, 0, 1], [1, -1, -2]]
    assert np.allclose(read_vector(out + "_D.txt"), [0.3205, 0.2710, 0.1738], atol=5e-4)
    assert read_matrix(out + "_L.txt").shape == (3, 3)
    assert read_vector(out + "_zhat.txt").shape == (3,)
    assert capsys.readouterr().out.startswith("igts=")


def test_reduce_standard(files, tmp_path, capsys, rng):
    A = rng.standard_normal((6, 4))
    a, y = files("a.txt", A), files("y.txt", rng.standard_normal(6))
    out = str(tmp_path / "s")
    for method in ("lll", "plll", "sqrd", "none"):
        assert main(["reduce", "--method", method, "--a", a, "--y", y, "--out", out]) == 0
        R, Z = read_matrix(out + "_R.txt"), read_matrix(out + "_Z.txt")
        assert np.allclose(np.tril(R, -1), 0)
        assert np.allclose(np.abs(np.linalg.qr(A @ Z)[1]), np.abs(R), atol=1e-10)
    assert "swaps=" in capsys.readouterr().out


def test_solve_quadratic_with_trace(files, tmp_path, capsys):
    w, x = files("w.txt", W_2X2), files("x.txt", XHAT_2X2)
    tr = str(tmp_path / "trace.csv")
    assert main(["solve", "--form", "quadratic", "--method", "lambda",
                 "--w", w, "--xhat", x, "--trace", tr]) == 0
    line = capsys.readouterr().out.strip()
    assert line.startswith("x=[2 18] objective=") and "babai=[" in line
    with open(tr) as fh:
        events = list(csv.DictReader(fh))
    assert events[0]["kind"] == "node"
    with open(tr + ".rows.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["z1", "z2"] and rows[-1] == ["-", "-"]


def test_solve_standard_and_eils(files, capsys):
    A = np.array([[2.0, 1.0], [0.5, 3.0], [1.0, -1.0]])
    y = A @ np.array([3.0, -2.0]) + np.array([0.1, -0.2, 0.05])
    a, yf = files("a.txt", A), files("y.txt", y)
    assert main(["solve", "--method", "lll", "--a", a, "--y", yf]) == 0
    assert capsys.readouterr().out.startswith("x=[3 -2]")
    alpha = str(float(np.linalg.norm(A @ np.array([3.0, -2.0]))))
    for method in ("lll", "clll"):
        assert main(["solve", "--form", "eils", "--method", method, "--a", a, "--y", yf,
                     "--alpha", alpha]) == 0
        assert capsys.readouterr().out.startswith("x=[3 -2]")


def test_solve_not_found(files, capsys):
    a, y = files("a.txt", np.eye(2)), files("y.txt", np.array([0.4, 0.4]))
    assert main(["solve", "--method", "none", "--a", a, "--y", y, "--beta0", "0.1"]) == 1
    assert "found=0" in capsys.readouterr().out


def test_bench_commands(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--cases", "1,3", "--nmin", "4", "--nmax", "5", "--runs", "1",
                 "--out", str(out)]) == 0
    assert len(out.read_text().strip().split("\n")) == 1 + 2 * 2 * 5
    assert main(["bench", "--cases", "1", "--nmin", "4", "--nmax", "4", "--runs", "1",
                 "--methods", "nope", "--out", str(out)]) == 2
    out = tmp_path / "e.csv"
    assert main(["eils-bench", "--sigma", "0.5", "--nmin", "3", "--nmax", "3", "--runs", "2",
                 "--out", str(out)]) == 0
    assert len(out.read_text().strip().split("\n")) == 1 + 2 * 2


def test_input_errors(files, tmp_path, capsys):
    assert main(["solve", "--method", "lll", "--a", str(tmp_path / "missing"),
                 "--y", str(tmp_path / "missing")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n1 2 3\n")
    assert main(["solve", "--method", "lll", "--a", str(bad), "--y", str(bad)]) == 2
    w = files("w.txt", np.array([[1.0, 2.0], [2.0, 1.0]]))
    x = files("x.txt", np.zeros(2))
    assert main(["solve", "--form", "quadratic", "--method", "lambda", "--w", w, "--xhat", x]) == 2
    assert "NotPositiveDefinite" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        main(["solve", "--form", "quadratic", "--method", "kz", "--w", w, "--xhat", x])
