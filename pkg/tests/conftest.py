import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qmtsearch.qmt import StateVector

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20161210)


def random_state(n, rng, scale=1.0):
    N2 = 2 << n
    amps = rng.standard_normal(N2) + 1j * rng.standard_normal(N2)
    return StateVector(n, scale * amps)


@st.composite
def states(draw, min_n=1, max_n=4):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_state(n, np.random.default_rng(seed))


@st.composite
def oracle_specs(draw, min_n=1, max_n=4):
    from qmtsearch.gates import OracleSpec

    n = draw(st.integers(min_n, max_n))
    sols = draw(st.lists(st.integers(0, (1 << n) - 1), unique=True, max_size=1 << n))
    return OracleSpec(n, tuple(sols))


_ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
