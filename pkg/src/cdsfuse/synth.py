"""Deterministic synthetic multi-feature retrieval corpora.

Group centers live on the unit sphere; each feature observes every item as
its group center plus isotropic noise at that feature's standard deviation.
Noise for item i under feature f comes from its own counter-derived stream,
so changing one feature's noise level leaves every other draw untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist

from cdsfuse.matrixio import KIND_DISTANCE, ConfigError, FeatureMatrix


@dataclass
class SynthConfig:
    groups: int
    group_size: int
    dims: int
    feature_noises: list[float]
    seed: int = 0

    def __post_init__(self):
        if self.groups < 1 or self.group_size < 1:
            raise ConfigError("groups and group_size must be >= 1")
        if self.dims < 1:
            raise ConfigError("dims must be >= 1")
        if not self.feature_noises:
            raise ConfigError("need at least one feature noise level")
        if any(s < 0 for s in self.feature_noises):
            raise ConfigError("feature noise levels must be >= 0")

    @property
    def n(self) -> int:
        return self.groups * self.group_size

    @property
    def z(self) -> int:
        return len(self.feature_noises)

    def to_text(self) -> str:
        lines = [
            f"groups={self.groups}",
            f"group_size={self.group_size}",
            f"dims={self.dims}",
            "feature_noises=" + ",".join(repr(s) for s in self.feature_noises),
            f"seed={self.seed}",
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SynthConfig":
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            if "=" not in ln:
                raise ConfigError(f"malformed config line {ln!r}")
            key, _, val = ln.partition("=")
            key, val = key.strip(), val.strip()
            if key not in known:
                raise ConfigError(f"unknown synth config key {key!r}")
            if key == "feature_noises":
                kwargs[key] = [float(t) for t in val.split(",") if t]
            elif key in ("groups", "group_size", "dims", "seed"):
                kwargs[key] = int(val)
        missing = {"groups", "group_size", "dims", "feature_noises"} - set(kwargs)
        if missing:
            raise ConfigError(f"missing synth config keys: {sorted(missing)}")
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> "SynthConfig":
        return cls.from_text(Path(path).read_text())


def _stream(seed: int, *spawn_key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=spawn_key))


def generate(cfg: SynthConfig) -> tuple[list[FeatureMatrix], dict[int, set[int]]]:
    """Build one Euclidean distance matrix per feature and the group truth."""
    n = cfg.n
    centers = _stream(cfg.seed, 0).standard_normal((cfg.groups, cfg.dims))
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    group_of = np.repeat(np.arange(cfg.groups), cfg.group_size)

    matrices = []
    for f, noise in enumerate(cfg.feature_noises):
        emb = np.empty((n, cfg.dims))
        for i in range(n):
            delta = _stream(cfg.seed, 1, f, i).standard_normal(cfg.dims)
            emb[i] = centers[group_of[i]] + noise * delta
        d = cdist(emb, emb)
        d = (d + d.T) / 2.0
        np.fill_diagonal(d, 0.0)
        matrices.append(FeatureMatrix(values=d, kind=KIND_DISTANCE,
                                      feature_name=f"synth_{f}"))

    truth = {}
    for i in range(n):
        g = group_of[i]
        members = set(range(g * cfg.group_size, (g + 1) * cfg.group_size))
        truth[i] = members
    return matrices, truth
