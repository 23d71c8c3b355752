import numpy as np
import pytest

from rigidity.linearize import linearize_channel_major
from rigidity.model import load_builtin


@pytest.fixture(scope="session")
def j1j2():
    return linearize_channel_major(load_builtin("j1j2_square"))


@pytest.fixture(scope="session")
def aniso():
    return linearize_channel_major(load_builtin("square_anisotropic_nnn"))


@pytest.fixture(scope="session")
def pyro():
    return linearize_channel_major(load_builtin("pyrochlore"))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for res in sorted(RESULTS, key=lambda r: r.number):
        terminalreporter.write_line(res.line())
