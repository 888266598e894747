import pytest

from tandemsim import Workload

ACCEPTANCE_LINES: list[str] = []


def naive_departures(w):
    """Row-major evaluation of the departure recurrence (no diagonal order)."""
    m, n = w.num_servers, w.num_customers
    zero = 0.0 if w.numeric == "float" else 0
    d = [[zero] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        for j in range(1, n + 1):
            north = d[i - 1][j] if i > 0 else zero
            d[i][j] = max(north, d[i][j - 1]) + w.tau[i][j - 1]
    return tuple(map(tuple, d))


def enumerate_widths(m, n):
    """Count cells (i, j), i=0..M, j=1..N, on each diagonal i+j=k."""
    counts = {}
    for i in range(m + 1):
        for j in range(1, n + 1):
            counts[i + j] = counts.get(i + j, 0) + 1
    return tuple(counts[k] for k in range(1, m + n + 1))


def brute_parallel_steps(m, n, p):
    """Two phases per diagonal, each ceil(width / P) rounds."""
    total = 0
    for width in enumerate_widths(m, n):
        rounds = 0
        left = width
        while left > 0:
            left -= p
            rounds += 1
        total += 2 * rounds
    return total


@pytest.fixture
def unit_workload():
    return Workload.from_rows([[1] * 5 for _ in range(3)])


@pytest.fixture
def small_workload():
    return Workload.from_rows([[1, 1, 1], [2, 2, 2]])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
