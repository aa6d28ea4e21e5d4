"""
Общие фикстуры тестов: алгебры, каталог примеров и сброс параметров выполнения
"""

from pathlib import Path

import pytest

from config.settings import EPSILON, ENUMERATION_CAP
from core.algebra import make_algebra
from core.utils import configure_runtime

SPECS_DIR = Path(__file__).parent / "specs"


@pytest.fixture(autouse=True)
def reset_runtime():
    configure_runtime(EPSILON, ENUMERATION_CAP)
    yield
    configure_runtime(EPSILON, ENUMERATION_CAP)


@pytest.fixture
def specs_dir():
    return SPECS_DIR


@pytest.fixture
def product():
    return make_algebra("product")


@pytest.fixture
def godel():
    return make_algebra("godel")


@pytest.fixture
def lukasiewicz():
    return make_algebra("lukasiewicz")


@pytest.fixture
def boolean():
    return make_algebra("boolean")


@pytest.fixture(params=["boolean", "godel", "lukasiewicz", "product"])
def standard_algebra(request):
    return make_algebra(request.param)
