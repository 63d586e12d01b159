import pytest

from hmf.forms import eisenstein, ideal_of
from hmf.hecke import eigenforms
from hmf.quadfield import make_field


@pytest.fixture(scope="session")
def F5():
    return make_field(5)


@pytest.fixture(scope="session")
def ideals5(F5):
    """The ideals appearing in the D=5 tables: (2), (3), the different, (4)."""
    return {
        "two": ideal_of(F5, 2),
        "three": ideal_of(F5, 3),
        "diff": ideal_of(F5, 2, 1),
        "four": ideal_of(F5, 4),
    }


@pytest.fixture(scope="session")
def eis5(F5):
    cache = {}

    def get(k, B=200):
        if (k, B) not in cache:
            cache[k, B] = eisenstein(F5, k, B)
        return cache[k, B]

    return get


@pytest.fixture(scope="session")
def eigen5(F5):
    cache = {}

    def get(k, B=200):
        if (k, B) not in cache:
            cache[k, B] = eigenforms(F5, k, B)
        return cache[k, B]

    return get
