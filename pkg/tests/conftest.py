import numpy as np
import pytest

from diffmix.materials import MaterialParams, Materials


@pytest.fixture
def water_air():
    return Materials((MaterialParams(4.4, 6.0e6, 1606.0, name="water"),
                      MaterialParams(1.4, 0.0, 714.0, name="air")))


@pytest.fixture
def three_gases():
    return Materials((MaterialParams(1.5, 0.0, 40.0), MaterialParams(1.4, 0.0, 50.0),
                      MaterialParams(2.0, 0.0, 20.0)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def report(request):
    """``report(n, title, ok, detail)`` prints one PASS/FAIL line and asserts ``ok``."""
    lines = request.config.stash[_ACCEPTANCE]

    def _report(number, title, ok, detail):
        line = f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {title} -- {detail}"
        print(line)
        lines.append(line)
        assert ok, line
    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
