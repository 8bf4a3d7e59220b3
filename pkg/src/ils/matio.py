"""Plain-text matrices: a "<rows> <cols>" line, then one line per row.

Floats are written with 17 significant digits so a write/read cycle returns
the same doubles; integer matrices are written exactly.
"""
import numpy as np


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def format_matrix(M) -> str:
    M = np.asarray(M)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    lines = ["%d %d" % M.shape]
    for row in M:
        lines.append(" ".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_matrix(path, M) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(M))


def parse_matrix(text: str) -> np.ndarray:
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("missing size line")
    rows, cols = int(tokens[0]), int(tokens[1])
    vals = tokens[2:]
    if len(vals) != rows * cols:
        raise ValueError("expected %d entries, found %d" % (rows * cols, len(vals)))
    return np.array([float(v) for v in vals]).reshape(rows, cols)


def read_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return parse_matrix(fh.read())


def read_vector(path) -> np.ndarray:
    M = read_matrix(path)
    if 1 not in M.shape:
        raise ValueError("%s is not a vector" % path)
    return M.ravel()
