import json
from pathlib import Path

import pytest

from hsusy.grid import Grid

ORACLES = json.loads((Path(__file__).parent / "oracles" / "values.json").read_text())


@pytest.fixture(scope="session")
def oracle():
    return ORACLES


@pytest.fixture(scope="session")
def design_grid():
    return Grid(-8.0, 8.0, 3201)


@pytest.fixture(scope="session")
def verify_grid():
    return Grid(-12.0, 12.0, 4801)


def cval(pair):
    return complex(pair[0], pair[1])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
