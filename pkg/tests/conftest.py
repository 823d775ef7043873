import hypothesis
import numpy as np
import pytest

from electmap.core import Election

hypothesis.settings.register_profile("default", deadline=None, max_examples=60)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile("default")

A, B, C, D = range(4)


@pytest.fixture
def matrices_example():
    # a>b>c>d, a>c>b>d, d>b>c>a
    return Election.from_votes([[A, B, C, D], [A, C, B, D], [D, B, C, A]], labels="abcd")


@pytest.fixture
def hb_example():
    # three a>b>c>d voters and one d>c>b>a voter
    return Election.from_votes([[A, B, C, D]] * 3 + [[D, C, B, A]], labels="abcd")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_election(rng, m, n):
    return Election(np.argsort(rng.random((n, m)), axis=1))


@pytest.fixture
def worked_pair():
    """The two 4x4 frequency matrices of the worked positionwise example (columns a..d and x, y, z, w)."""
    from electmap.core import FrequencyMatrix

    e = FrequencyMatrix.from_fractions(
        [["2/3", 0, 0, "1/3"], [0, "2/3", "1/3", 0], [0, "1/3", "2/3", 0], ["1/3", 0, 0, "2/3"]])
    f = FrequencyMatrix.from_fractions(
        [["1/3", "1/3", 0, "1/3"], ["1/3", "1/3", "1/3", 0], ["1/3", 0, "1/3", "1/3"], [0, "1/3", "1/3", "1/3"]])
    return e, f


def random_position_matrix(rng, m, n):
    """Sum of ``n`` random permutation matrices."""
    counts = np.zeros((m, m), dtype=np.int64)
    for _ in range(n):
        counts[np.arange(m), rng.permutation(m)] += 1
    return counts


def random_frequency_matrix(rng, m, n):
    from electmap.core import FrequencyMatrix

    return FrequencyMatrix(random_position_matrix(rng, m, n), n)


# Acceptance results are collected here and echoed in the terminal summary.
ACCEPTANCE: list[tuple[str, bool, str]] = []
SUITE_BUDGET_SECONDS = 20 * 60
_session_start = [0.0]


def record(criterion: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE.append((criterion, bool(ok), detail))
    print(f"{'PASS' if ok else 'FAIL'} {criterion} {detail}")
    return bool(ok)


def pytest_sessionstart(session):
    import time

    _session_start[0] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    import time

    elapsed = time.perf_counter() - _session_start[0]
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for name, ok, detail in ACCEPTANCE:
            terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
        terminalreporter.write_line(
            f"{'PASS' if elapsed < SUITE_BUDGET_SECONDS else 'FAIL'}  criterion 11: whole suite "
            f"in {elapsed:.1f}s (budget {SUITE_BUDGET_SECONDS}s)")


def pytest_sessionfinish(session, exitstatus):
    import time

    if time.perf_counter() - _session_start[0] >= SUITE_BUDGET_SECONDS and exitstatus == 0:
        session.exitstatus = 1
