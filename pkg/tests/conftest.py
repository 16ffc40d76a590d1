import numpy as np
import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def record():
    """Collect one PASS/FAIL line per acceptance criterion for the terminal summary."""
    def add(number, title, passed, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'} criterion {number}: {title}"
                                + (f" ({detail})" if detail else ""))
        print(ACCEPTANCE_LINES[-1])
    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
