"""Synthetic corpus generation: determinism, structure, noise ordering."""

import numpy as np
import pytest

from cdsfuse.matrixio import ConfigError, KIND_DISTANCE
from cdsfuse.synth import SynthConfig, generate


CFG = SynthConfig(groups=6, group_size=4, dims=8,
                  feature_noises=[0.1, 0.5], seed=3)


def test_shapes_and_kind():
    matrices, truth = generate(CFG)
    assert len(matrices) == 2
    for fm in matrices:
        assert fm.kind == KIND_DISTANCE
        assert fm.n == CFG.n == 24
        np.testing.assert_array_equal(np.diag(fm.values), 0.0)
        np.testing.assert_allclose(fm.values, fm.values.T)
        assert np.all(fm.values >= 0.0)


def test_truth_partitions_items():
    _, truth = generate(CFG)
    assert len(truth) == CFG.n
    for i, group in truth.items():
        assert i in group
        assert len(group) == CFG.group_size


def test_same_seed_is_identical():
    a, _ = generate(CFG)
    b, _ = generate(CFG)
    for fa, fb in zip(a, b):
        np.testing.assert_array_equal(fa.values, fb.values)


def test_different_seed_differs():
    other = SynthConfig(groups=6, group_size=4, dims=8,
                        feature_noises=[0.1, 0.5], seed=4)
    a, _ = generate(CFG)
    b, _ = generate(other)
    assert not np.array_equal(a[0].values, b[0].values)


def test_noise_levels_are_independent_streams():
    """Changing one feature's noise leaves the other feature untouched."""
    alt = SynthConfig(groups=6, group_size=4, dims=8,
                      feature_noises=[0.1, 0.9], seed=3)
    a, _ = generate(CFG)
    b, _ = generate(alt)
    np.testing.assert_array_equal(a[0].values, b[0].values)
    assert not np.array_equal(a[1].values, b[1].values)


def test_noisier_feature_blurs_groups():
    matrices, truth = generate(CFG)
    def within_group_mean(fm):
        vals = []
        for i, group in truth.items():
            for j in group:
                if j != i:
                    vals.append(fm.values[i, j])
        return np.mean(vals)
    assert within_group_mean(matrices[0]) < within_group_mean(matrices[1])


def test_config_text_roundtrip():
    text = CFG.to_text()
    assert SynthConfig.from_text(text) == CFG


def test_config_validation():
    with pytest.raises(ConfigError):
        SynthConfig(groups=0, group_size=4, dims=8, feature_noises=[0.1])
    with pytest.raises(ConfigError):
        SynthConfig(groups=2, group_size=4, dims=8, feature_noises=[])
    with pytest.raises(ConfigError):
        SynthConfig(groups=2, group_size=4, dims=8, feature_noises=[-0.1])
    with pytest.raises(ConfigError):
        SynthConfig.from_text("groups=2\n")
