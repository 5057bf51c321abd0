import pytest

from cqglab import groups
from cqglab.tlrep import IrrepCategory


@pytest.fixture(scope="session")
def bundled():
    return {key: groups.load_bundled(key) for key in groups.BUNDLED}


@pytest.fixture(scope="session")
def cat2():
    return IrrepCategory(2)


@pytest.fixture(scope="session")
def cat3():
    return IrrepCategory(3)


@pytest.fixture(scope="session")
def cat4():
    return IrrepCategory(4)
