import pytest
from hypothesis import HealthCheck, settings

from hypercat.trees import canonicalize

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def tree(n, edges):
    return canonicalize(n, edges)[0]


def path(n):
    return tree(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves):
    return tree(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def spider():
    """Degrees 3, 2, 1, 1, 1: v-a, a-d, v-b, v-c."""
    return tree(5, [(0, 1), (1, 4), (0, 2), (0, 3)])


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
