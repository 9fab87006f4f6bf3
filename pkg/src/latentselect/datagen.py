"""Synthetic Gaussian-mixture datasets with an orientation-style target.

Stands in for proprietary production data: clusters of very different sizes
create the in-class imbalance that diversity-aware selection is supposed to
mitigate. All draws are Box-Muller over SplitMix64 so generation is
bit-reproducible from the seed alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .rng import SplitMix64

TARGET_RULES = ("angle", "radius")


@dataclass(frozen=True)
class ClusterSpec:
    center: tuple[float, ...]
    stddev: float
    count: int
    label: str


@dataclass(frozen=True)
class MixtureConfig:
    clusters: tuple[ClusterSpec, ...]
    ambient_dim: int
    seed: int
    # Regression target as a fixed smooth function of position:
    #   angle  -- atan2 of the first two coordinates, mapped to [0, 2*pi)
    #   radius -- Euclidean norm of the full position
    target_rule: str = "angle"

    def validate(self) -> None:
        if not self.clusters:
            raise ConfigError("mixture needs at least one cluster")
        if self.ambient_dim < 1:
            raise ConfigError(f"ambient_dim must be >= 1, got {self.ambient_dim}")
        if self.target_rule not in TARGET_RULES:
            raise ConfigError(f"unknown target_rule {self.target_rule!r}")
        for c in self.clusters:
            if len(c.center) != self.ambient_dim:
                raise ConfigError(
                    f"cluster {c.label!r} center has {len(c.center)} entries, "
                    f"ambient_dim is {self.ambient_dim}"
                )
            if c.stddev < 0:
                raise ConfigError(f"cluster {c.label!r} has negative stddev")
            if c.count < 1:
                raise ConfigError(f"cluster {c.label!r} needs count >= 1")


def _normal_pair(rng: SplitMix64) -> tuple[float, float]:
    # Basic Box-Muller: u1 in (0,1] keeps the log finite, u2 in [0,1).
    u1 = rng.unit_positive()
    u2 = rng.unit()
    r = math.sqrt(-2.0 * math.log(u1))
    return r * math.cos(2.0 * math.pi * u2), r * math.sin(2.0 * math.pi * u2)


def _standard_normal_row(rng: SplitMix64, dim: int) -> list[float]:
    # Coordinates are drawn in pairs; an odd dim drops the last pair's second value.
    out: list[float] = []
    for _ in range((dim + 1) // 2):
        z0, z1 = _normal_pair(rng)
        out.append(z0)
        out.append(z1)
    return out[:dim]


def generate(config: MixtureConfig) -> tuple[np.ndarray, list[str], np.ndarray]:
    """Draw the mixture.

    Returns (features, labels, targets): a float32 (n, ambient_dim) matrix
    with rows grouped by cluster in config order, one label per row, and the
    float64 regression targets computed by the target rule.
    """
    config.validate()
    rng = SplitMix64(config.seed)
    rows: list[list[float]] = []
    labels: list[str] = []
    for cluster in config.clusters:
        center = np.asarray(cluster.center, dtype=np.float64)
        for _ in range(cluster.count):
            z = np.asarray(_standard_normal_row(rng, config.ambient_dim))
            rows.append(list(center + cluster.stddev * z))
            labels.append(cluster.label)
    features = np.asarray(rows, dtype=np.float32)
    targets = _targets(features, config.target_rule)
    return features, labels, targets


def _targets(features: np.ndarray, rule: str) -> np.ndarray:
    x = features.astype(np.float64)
    if rule == "angle":
        return np.mod(np.arctan2(x[:, 1], x[:, 0]), 2.0 * math.pi)
    return np.sqrt(np.einsum("ij,ij->i", x, x))


def default_mixture(seed: int = 7) -> MixtureConfig:
    """The demo config: 180/20 two-cluster mixture in 8-D.

    Centers sit 4.0 apart in the first coordinate and well inside the upper
    half-plane of the first two coordinates, so the angle target is smooth
    over the data's support (no wrap-around at 0/2*pi).
    """
    dim = 8
    majority = (-2.0, 2.5) + (0.0,) * (dim - 2)
    minority = (2.0, 2.5) + (0.0,) * (dim - 2)
    return MixtureConfig(
        clusters=(
            ClusterSpec(center=majority, stddev=0.5, count=180, label="majority"),
            ClusterSpec(center=minority, stddev=0.5, count=20, label="minority"),
        ),
        ambient_dim=dim,
        seed=seed,
    )
