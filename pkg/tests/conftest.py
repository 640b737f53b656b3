import numpy as np
import pytest

from cesarolab.ons import system_cosine, system_haar, system_walsh


@pytest.fixture(scope="session")
def builtins():
    return {"cosine": system_cosine(), "haar": system_haar(), "walsh": system_walsh()}


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


# acceptance verdict lines, collected by tests/test_acceptance.py and echoed in the summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """``verdict(number, ok, detail)``: print and record one pass/fail line, then assert."""

    def record(number, ok, detail):
        line = f"[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
