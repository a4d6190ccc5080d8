import pytest

from gumbelmax.distributions import Case
from gumbelmax.montecarlo import run_cases

FULL_N = 10_000
FULL_REPS = 10_000
FULL_SEED = 1

_CRITERIA = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_CRITERIA] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion(request):
    """Record one PASS/FAIL line per acceptance criterion for the summary."""

    def record(number, passed, detail):
        status = "PASS" if passed else "FAIL"
        request.config.stash[_CRITERIA].append(f"criterion {number:2d}: {status}  {detail}")
        return passed

    return record


@pytest.fixture(scope="session")
def full_scale_samples():
    """Raw maxima of all six statistics at the Monte Carlo scale of the figures."""
    return run_cases(list(Case), FULL_N, FULL_REPS, FULL_SEED, workers=1)
