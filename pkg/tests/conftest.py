import numpy as np
import pytest

from spinchain_cnot.appendix_oracle import random_density_matrix
from spinchain_cnot.model import TWO_PI, BathParams, SystemParams, build_rate_table


@pytest.fixture
def params():
    return SystemParams()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_state(rng):
    return lambda: random_density_matrix(rng)


@pytest.fixture(params=[0.0, 300.0, 0.01], ids=["T0", "T300", "T0.01"])
def rates(request, params):
    return build_rate_table(params, BathParams(request.param, TWO_PI * 0.1))


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line, print it, and fail the test if it did not pass."""
    def record(number, name, ok, detail):
        line = f"criterion {number:>2} {name}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.acceptance_lines.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
