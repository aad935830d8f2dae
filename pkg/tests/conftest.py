"""Shared fixtures and deterministic random-instance helpers."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from renyi import DiscreteChannel, ProbabilityMeasure, binary_symmetric

# Solver-backed properties run well past the default deadline on cold
# caches; determinism comes from explicit seeds, not from timing.
settings.register_profile(
    "numeric",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")


def random_probability(rng: np.random.Generator, size: int) -> ProbabilityMeasure:
    return ProbabilityMeasure(rng.dirichlet(np.ones(size)))


def random_channel(rng: np.random.Generator, inputs: int, outputs: int) -> DiscreteChannel:
    return DiscreteChannel(rng.dirichlet(np.ones(outputs), size=inputs))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240812)


@pytest.fixture(scope="session")
def bsc() -> DiscreteChannel:
    return binary_symmetric(0.1)
