import pytest
from hypothesis import HealthCheck, settings

from wittlab.fields.tower import Tower

settings.register_profile(
    "wittlab",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("wittlab")


@pytest.fixture(scope="session")
def ex1_tower():
    """k = Q(b)((a))((t))."""
    return Tower.Q().rat("b").laurent("a").laurent("t")


@pytest.fixture(scope="session")
def generic_tower():
    """Q(b, c)((a))((t)) with b, c free."""
    return Tower.Q().rat("b").rat("c").laurent("a").laurent("t")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, line = RESULTS[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n}. {line}")
