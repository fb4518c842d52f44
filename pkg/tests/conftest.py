from pathlib import Path

import numpy as np
import pytest

from qracbound.sampling import make_rng

FIXTURES = Path(__file__).parent / "fixtures"

_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def rng():
    return make_rng(12345)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def random_hermitian(rng, n, size=None):
    shape = (n, n) if size is None else (size, n, n)
    g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return 0.5 * (g + np.conj(np.swapaxes(g, -1, -2)))


@pytest.fixture
def acceptance_log(request):
    """Records one pass/fail line per acceptance criterion for the terminal summary."""
    log = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(criterion, passed, detail=""):
        log[criterion] = (passed, detail)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_ACCEPTANCE, None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(log):
        passed, detail = log[name]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip())
