import pytest

from snhecke.algebra import KLCache


@pytest.fixture(scope="session")
def kl2():
    return KLCache(2)


@pytest.fixture(scope="session")
def kl3():
    return KLCache(3)


@pytest.fixture(scope="session")
def kl4():
    return KLCache(4)


@pytest.fixture(scope="session")
def kl5():
    return KLCache(5)
