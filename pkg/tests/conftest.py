"""Shared test configuration.

Hypothesis is pinned to a deterministic profile so failures reproduce
across runs, and deadlines are disabled because some properties build
moderately large structure tensors.
"""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "det",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("det")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
