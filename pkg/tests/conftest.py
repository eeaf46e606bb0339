import pytest

from polarframes import kernels
from polarframes.fixtures import fixture


@pytest.fixture
def f1():
    return fixture("f1")


@pytest.fixture
def f1r():
    return fixture("f1r")


@pytest.fixture
def fneq():
    return fixture("fneq")


@pytest.fixture
def fm3():
    return fixture("fm3")


BACKENDS = ["python"] + (["cython"] if kernels.compiled_available() else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param
