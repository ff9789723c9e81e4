import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from pierced.code import Code, parse_code

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def load(name: str) -> Code:
    return parse_code((FIXTURES / f"{name}.code").read_text())


@pytest.fixture
def nine() -> Code:
    return load("nine")


@pytest.fixture
def five() -> Code:
    return load("five")


@pytest.fixture
def code_c() -> Code:
    return load("code_c")


@pytest.fixture
def code_d() -> Code:
    return load("code_d")


@pytest.fixture
def power4() -> Code:
    return Code.power_set(4)


@pytest.fixture
def ex11() -> Code:
    return load("ex11")
