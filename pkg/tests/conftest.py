import random

import pytest

from zeroprod import _backend
from zeroprod.ffield import make_field
from zeroprod.fibctor import fibonacci_pair
from zeroprod.matspace import Matrix, decode


@pytest.fixture(scope="session")
def gf2():
    return make_field(2)


@pytest.fixture(scope="session")
def gf3():
    return make_field(3)


@pytest.fixture(scope="session")
def gf5():
    return make_field(5)


@pytest.fixture(params=_backend.available(), ids=lambda k: k.NAME)
def kernels(request):
    return request.param


def fib_pair(f):
    return list(fibonacci_pair(f))


def mat(rows, f):
    return Matrix.from_rows(rows, f)


def random_matrix(rng, n, f):
    return decode(rng.randrange(f.q ** (n * n)), n, f)


def random_invertible(rng, n, f):
    from zeroprod.matspace import is_invertible
    while True:
        M = random_matrix(rng, n, f)
        if is_invertible(M):
            return M


@pytest.fixture
def rng():
    return random.Random(20261014)
