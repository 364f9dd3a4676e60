from pathlib import Path

import pytest

from l1proj.groups import SU2Group, cyclic_product, symmetric_group

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "l1proj" / "data" / "fixtures"

# filled by test_acceptance.py, printed at the end of the session
ACCEPTANCE_LINES: dict = {}


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def s3():
    return symmetric_group(3)


@pytest.fixture(scope="session")
def s4():
    return symmetric_group(4)


@pytest.fixture(scope="session")
def z4():
    return cyclic_product([4])


@pytest.fixture(scope="session")
def su2():
    return SU2Group((16, 16, 32), 2)


@pytest.fixture(scope="session")
def su2_small():
    return SU2Group((8, 8, 16), 1)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
