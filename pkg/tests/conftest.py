import pytest
from hypothesis import HealthCheck, settings

from homcover.words import parse_aut

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.rstrip("abc")), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")


@pytest.fixture
def partial_conj():
    return parse_aut("rank: 2\na -> a\nb -> Aba")


@pytest.fixture
def fib():
    return parse_aut("rank: 2\na -> ab\nb -> a")


@pytest.fixture
def tt_sample():
    """Train-track map with trivial homology action and a full-dimensional shadow."""
    return parse_aut("rank: 3\na -> Cac\nb -> abA\nc -> aBAcabA")
