import pytest

from qcong.mocktheta import MockTables
from qcong.series import EXACT, Ring


@pytest.fixture(scope="session")
def tables_exact():
    """Shared exact f/omega tables; coefficients are twist-independent."""
    return MockTables(EXACT)


@pytest.fixture(scope="session")
def tables_mod23():
    return MockTables(Ring(23))


@pytest.fixture(scope="session")
def tables_mod5():
    return MockTables(Ring(5))
