"""Capacities, rates and failure budgets of the streaming structures.

``derive`` evaluates the formulas with every leading constant of 1 (where the formulas
only fix an order of growth) and applies the matching group of ``ScaleConfig``.
All logarithms are base 2. Parameters may also be built directly with explicit values.
"""
from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field

from dskm.core.hashing import default_independence
from dskm.models.config_models import ScaleConfig
from dskm.models.instance_models import ClusteringInstance

ESTIMATION_RATE_CONSTANT = 4e4
LABEL_RATE_CONSTANT = 1e4
SHORTCUT_CAPACITY_PER_CENTER = 10_000
SHORTCUT_DELTA = 0.001
DRIVER_DELTA = 0.001


class EstimationParams(BaseModel):
    """Parameters of one PointsEstimation(o, eps, delta) instance."""
    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(gt=0.0, lt=0.5)
    delta: float = Field(gt=0.0, lt=0.5)
    independence: int = Field(ge=2)
    alpha: int = Field(ge=1)
    alpha_prime: int = Field(ge=1)
    rate_constant: float = Field(default=ESTIMATION_RATE_CONSTANT, gt=0.0)

    @classmethod
    def derive(cls, instance: ClusteringInstance, delta: float, scale: ScaleConfig) -> "EstimationParams":
        d, L, k, eps = instance.d, instance.levels, instance.k, instance.epsilon
        return cls(
            epsilon=eps,
            delta=delta,
            independence=default_independence(instance, delta, scale.independence),
            alpha=ScaleConfig.scaled_count(scale.capacity, 1e11 * k * L * d * math.log2(1.0 / delta)),
            alpha_prime=ScaleConfig.scaled_count(scale.capacity, 1e16 * eps**-3 * k * L**2 * d**4),
            rate_constant=ESTIMATION_RATE_CONSTANT * scale.rate,
        )

    def storing_delta(self, instance: ClusteringInstance) -> float:
        """Failure budget 0.1 delta / L of every embedded Storing."""
        return 0.1 * self.delta / instance.levels


class SamplerParams(BaseModel):
    """Parameters of one Sampling(o, eps, delta) instance."""
    model_config = ConfigDict(frozen=True)

    delta: float = Field(gt=0.0, lt=0.5)
    estimation: EstimationParams
    m_hat: int = Field(ge=1)
    alpha: int = Field(ge=1)
    beta: int = Field(ge=1)
    label_rate_constant: float = Field(default=LABEL_RATE_CONSTANT, gt=0.0)
    sample_scale: float = Field(default=1.0, gt=0.0)

    @classmethod
    def derive(cls, instance: ClusteringInstance, delta: float, scale: ScaleConfig) -> "SamplerParams":
        d, L, k, eps = instance.d, instance.levels, instance.k, instance.epsilon
        shared = eps**-3 * L**3 * d**7 * math.log2(d * L * k / delta) / delta
        return cls(
            delta=delta,
            estimation=EstimationParams.derive(instance, delta / 2, scale),
            m_hat=ScaleConfig.scaled_count(scale.capacity, k * L * shared),
            alpha=ScaleConfig.scaled_count(scale.capacity, k * shared),
            beta=ScaleConfig.scaled_count(scale.capacity, shared),
            label_rate_constant=LABEL_RATE_CONSTANT * scale.rate,
            sample_scale=scale.sample,
        )

    def storing_delta(self, instance: ClusteringInstance) -> float:
        return 0.1 * self.delta / instance.levels

    def sample_count(self, t_prime: float, instance: ClusteringInstance) -> int:
        """m = ceil(kappa_m * t' eps^-2 L d log(t'/delta)); zero when nothing is retained."""
        if t_prime <= 0.0:
            return 0
        log_term = max(1.0, math.log2(t_prime / self.delta))
        return math.ceil(
            self.sample_scale * t_prime * instance.epsilon**-2 * instance.levels * instance.d * log_term
        )


class DriverParams(BaseModel):
    """Parameters of the guess sweep over one stream."""
    model_config = ConfigDict(frozen=True)

    shortcut_capacity: int = Field(ge=1)
    shortcut_delta: float = Field(default=SHORTCUT_DELTA, gt=0.0, lt=0.5)
    size_threshold: int = Field(ge=1)
    sampler: SamplerParams

    @classmethod
    def derive(cls, instance: ClusteringInstance, scale: ScaleConfig) -> "DriverParams":
        d, L, k, eps = instance.d, instance.levels, instance.k, instance.epsilon
        return cls(
            shortcut_capacity=ScaleConfig.scaled_count(scale.shortcut, SHORTCUT_CAPACITY_PER_CENTER * k),
            size_threshold=ScaleConfig.scaled_count(
                scale.size, k * eps**-2 * L**2 * d**4 * math.log2(max(2, k * L * d))
            ),
            sampler=SamplerParams.derive(instance, guess_delta(instance), scale),
        )


def guess_delta(instance: ClusteringInstance) -> float:
    """Per-guess failure budget 0.001 / (dL)."""
    return DRIVER_DELTA / (instance.d * instance.levels)


def guesses(instance: ClusteringInstance) -> list[tuple[int, float]]:
    """``(u, o_u)`` with ``o_u = 2^u * 50k`` for ``u = 1 .. 2dL``."""
    return [(u, float(2**u * 50 * instance.k)) for u in range(1, 2 * instance.d * instance.levels + 1)]
