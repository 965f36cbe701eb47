import random

import pytest
from hypothesis import HealthCheck, settings

from synchrokit.core import Dfa, Transformation

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def random_transformation(rng: random.Random, n: int) -> Transformation:
    return Transformation(tuple(rng.randrange(n) for _ in range(n)))


def random_permutation(rng: random.Random, n: int) -> Transformation:
    images = list(range(n))
    rng.shuffle(images)
    return Transformation(tuple(images))


def random_dfa(rng: random.Random, n: int, m: int) -> Dfa:
    """``m`` letters drawn uniformly from all transformations."""
    return Dfa(
        n,
        tuple((f"x{i}", random_transformation(rng, n)) for i in range(m)),
    )


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
