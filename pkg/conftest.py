"""Shared fixtures: small fields and the quadratic series used across the suite."""

import pytest

from config.settings import get_settings
from utils.field_core import field_config, field_config_for_q, get_field
from utils.literals import parse_series

# Root of X^2 + T X - 1 over F_3: alpha = 1/(T + 1/(T + ...)), every quotient equal to T.
ALPHA3 = "alg:(X^2+T*X+2);prefix=(T^-1);floor=-30"
# Root of X^2 + T X + 1 over F_2 on the branch T^-1 + ...
ALPHA2 = "alg:(X^2+T*X+1);prefix=(T^-1);floor=-30"


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def F2():
    return get_field(field_config(2))


@pytest.fixture
def F3():
    return get_field(field_config(3))


@pytest.fixture
def F4():
    return get_field(field_config_for_q(4))


@pytest.fixture
def F9():
    return get_field(field_config(3, 2))


@pytest.fixture
def alpha3(F3):
    return parse_series(ALPHA3, F3)


@pytest.fixture
def alpha2(F2):
    return parse_series(ALPHA2, F2)
