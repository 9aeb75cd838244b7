"""Shared fixtures: a small deterministic corpus most tests can reuse."""

import numpy as np
import pytest

from cdsfuse.affinity import minimax_normalize, similarity_from_distance
from cdsfuse.matrixio import FusionConfig
from cdsfuse.synth import SynthConfig, generate


@pytest.fixture(scope="session")
def small_corpus():
    """Ten groups of four items, three features, one of them pure noise."""
    cfg = SynthConfig(groups=10, group_size=4, dims=8,
                      feature_noises=[0.1, 0.2, 1.0], seed=7)
    matrices, truth = generate(cfg)
    features = [minimax_normalize(similarity_from_distance(m)) for m in matrices]
    return cfg, features, truth


@pytest.fixture()
def default_config():
    return FusionConfig()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
