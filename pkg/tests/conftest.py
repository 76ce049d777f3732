import pytest

from grmrepair.cli import PARAM_MATRIX
from grmrepair.fields import field
from grmrepair.grm import GrmParams


@pytest.fixture(scope="session")
def f16():
    return field(2, 4)


@pytest.fixture(scope="session")
def f4():
    return field(2, 2)


@pytest.fixture(scope="session")
def f9():
    return field(3, 2)


def make_params(p, t, m, mu) -> GrmParams:
    return GrmParams(field(p, t), m, mu)


@pytest.fixture(params=PARAM_MATRIX, ids=lambda inst: "p%dt%dm%dmu%d" % inst)
def matrix_params(request):
    return make_params(*request.param)
