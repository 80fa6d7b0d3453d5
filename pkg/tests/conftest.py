import pytest

from covkh.corpus import PD_CODES, corpus

EVEN = (1, 1, 1)
ODD = (1, -1, 1)


@pytest.fixture(scope="session")
def diagrams():
    return corpus()


@pytest.fixture(scope="session")
def pd_codes():
    return PD_CODES
