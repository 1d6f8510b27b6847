import pytest

from liouville.arithmetic import sieve_liouville, sieve_mobius
from liouville.oracles import point_liouville_list, point_mobius_list


@pytest.fixture(scope="session")
def lam():
    """lambda(0..20010) by trial division; index 0 unused."""
    return point_liouville_list(20_010)


@pytest.fixture(scope="session")
def mu_list():
    return point_mobius_list(10_000)


@pytest.fixture(scope="session")
def small_table():
    return sieve_liouville(1, 20_010)


@pytest.fixture(scope="session")
def table_1e5():
    return sieve_liouville(1, 200_010)


@pytest.fixture(scope="session")
def table_1e6():
    return sieve_liouville(1, 2_000_010)


@pytest.fixture(scope="session")
def mobius_small():
    return sieve_mobius(1, 20_010)
