import math
import random

import pytest
from hypothesis import HealthCheck, settings

from swarmform.geometry import Similarity

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_similarity(rng: random.Random) -> Similarity:
    return Similarity(math.exp(rng.uniform(math.log(0.1), math.log(10.0))), rng.uniform(0, 2 * math.pi),
                      rng.random() < 0.5, (rng.uniform(-5, 5), rng.uniform(-5, 5)))


def regular_polygon(k, r=1.0, c=(0.0, 0.0), phase=0.0):
    return [(c[0] + r * math.cos(phase + 2 * math.pi * j / k), c[1] + r * math.sin(phase + 2 * math.pi * j / k))
            for j in range(k)]


def close(p, q, eps=1e-9):
    return math.dist(p, q) <= eps


@pytest.fixture
def rng():
    return random.Random(20240601)


def same_points(A, B, eps=1e-9):
    """Equal as sequences of points, coordinatewise within eps."""
    return len(A) == len(B) and all(abs(a - b) <= eps for p, q in zip(A, B) for a, b in zip(p, q))


_SUITE = []


@pytest.fixture(scope="session")
def acceptance_suite():
    from swarmform.acceptance import Suite
    if not _SUITE:
        _SUITE.append(Suite())
    return _SUITE[0]


def pytest_terminal_summary(terminalreporter):
    if not _SUITE or not _SUITE[0].results:
        return
    s = _SUITE[0]
    terminalreporter.section("acceptance criteria")
    for k in sorted(s.results):
        terminalreporter.write_line(s.line(k))
