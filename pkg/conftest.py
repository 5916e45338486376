# conftest.py
# Shared fields, templates and seeded random parameter generators

import random

import pytest

from codes.etgrs import build_params, build_template
from gf.field import make_field

SEED = 20240611


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture
def gf7():
    return make_field(7)


@pytest.fixture
def gf8():
    return make_field(2, 3)


@pytest.fixture
def gf11():
    return make_field(11)


@pytest.fixture
def gf13():
    return make_field(13)


@pytest.fixture
def q11_template(gf11):
    """MDS example: n = 6, k = 3, h = 1, alpha = 0..5."""
    return build_template(gf11, 6, 3, 1, [0, 1, 2, 3, 4, 5])


@pytest.fixture
def q11_params(q11_template):
    return q11_template.params(4, 7)


@pytest.fixture
def q5_template():
    """AMDS example: n = 5, k = 3, h = 1, alpha = 0..4."""
    return build_template(make_field(5), 5, 3, 1, [0, 1, 2, 3, 4])


@pytest.fixture
def random_params():
    """Draw valid parameters over F with 3 <= k, k + 1 < n <= min(q, 8)."""

    def draw(rng, F):
        n_max = min(F.q, 8)
        k = rng.randint(3, n_max - 2)
        n = rng.randint(k + 2, n_max)
        h = rng.randint(0, k - 2)
        alpha = rng.sample(range(F.q), n)
        v = [rng.randrange(1, F.q) for _ in range(n)]
        eta, delta = rng.randrange(1, F.q), rng.randrange(1, F.q)
        return build_params(F, n, k, h, alpha, v, eta, delta)

    return draw
