import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

from iatomic.history import make_history

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def h1():
    return make_history([("W", "a", 1, 2), ("R", "a", 3, 4)])


@pytest.fixture
def h2():
    return make_history([("W", "a", 0, 1), ("W", "b", 2, 3), ("R", "a", 4, 5)])


@pytest.fixture
def h3():
    return make_history([("W", "a", 0, 5), ("W", "b", 1, 6), ("R", "b", 7, 8), ("R", "a", 9, 10)])


@pytest.fixture
def sequential():
    rows = []
    for k in range(4):
        rows.append(("W", k, 4 * k, 4 * k + 1))
        rows.append(("R", k, 4 * k + 2, 4 * k + 3))
    return make_history(rows)


@st.composite
def histories(draw, max_writes=5, max_reads=2):
    """Valid single-key histories with distinct timestamps."""
    n_w = draw(st.integers(1, max_writes))
    n_reads = [draw(st.integers(0, max_reads)) for _ in range(n_w)]
    total = n_w + sum(n_reads)
    times = draw(st.permutations(range(2 * total)))
    rows, k = [], 0
    write_start = []
    for v in range(n_w):
        s, f = sorted(times[k:k + 2])
        k += 2
        rows.append(("W", v, s, f))
        write_start.append(s)
    for v, cnt in enumerate(n_reads):
        for _ in range(cnt):
            s, f = sorted(times[k:k + 2])
            k += 2
            if f > write_start[v]:
                rows.append(("R", v, s, f))
    return make_history(rows)


_acceptance_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when != "call" and not rep.failed:
        return
    number, title = marker.args
    prev = _acceptance_results.get(number, (title, True))
    _acceptance_results[number] = (title, prev[1] and rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance_results):
        title, ok = _acceptance_results[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}")
