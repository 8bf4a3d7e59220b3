import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import pytest  # noqa: E402

ACCEPTANCE = "test_acceptance.py::test_criterion_"


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call" and ACCEPTANCE in rep.nodeid:
                name = rep.nodeid.split("::")[-1]
                lines.append((name, outcome))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(lines, key=lambda t: int(t[0].split("_")[2])):
        terminalreporter.write_line("%-48s %s" % (name, "PASS" if outcome == "passed" else "FAIL"))


@pytest.fixture
def rng():
    import numpy as np
    return np.random.default_rng(20240607)
