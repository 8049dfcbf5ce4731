import pytest

from fracsob import box, full_space


@pytest.fixture
def unit_interval():
    return box([0.0], [1.0])


@pytest.fixture
def real_line():
    return full_space(1)
