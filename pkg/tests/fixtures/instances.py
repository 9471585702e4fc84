"""Clustering instance and parameter fixtures.

Full-constant parameters are far too large for a test run, so the streaming tests
build their structures from the explicit small parameter sets defined here.
"""
import pytest

from dskm.core.geometry import GridHierarchy
from dskm.core.parameters import DriverParams, EstimationParams, SamplerParams
from dskm.models.instance_models import ClusteringInstance

# Ten distinct points of [1, 8]^2 shared by the exact-regime sampler tests.
SMALL_POINTS = [
    (1, 1), (2, 5), (3, 3), (4, 8), (5, 2),
    (6, 6), (7, 4), (8, 8), (2, 2), (6, 1),
]


def exact_estimation_params(alpha: int = 16, independence: int = 2) -> EstimationParams:
    """Estimation with every subsampling rate at 1, so estimates equal exact counts."""
    return EstimationParams(
        epsilon=0.25,
        delta=0.3,
        independence=independence,
        alpha=alpha,
        alpha_prime=alpha,
        rate_constant=1e6,
    )


def exact_sampler_params(m_hat: int = 3, beta: int = 64, sample_scale: float = 1e-9) -> SamplerParams:
    """Sampler whose label hashes keep every point and whose m is a single draw."""
    return SamplerParams(
        delta=0.3,
        estimation=exact_estimation_params(),
        m_hat=m_hat,
        alpha=32,
        beta=beta,
        label_rate_constant=1e-6,
        sample_scale=sample_scale,
    )


def inert_sampler_params() -> SamplerParams:
    """Sampler whose hashes select nothing; keeps per-update cost near zero."""
    return SamplerParams(
        delta=0.3,
        estimation=EstimationParams(
            epsilon=0.2, delta=0.3, independence=2, alpha=1, alpha_prime=1, rate_constant=1e-12
        ),
        m_hat=1,
        alpha=1,
        beta=1,
        label_rate_constant=1e12,
    )


@pytest.fixture
def small_instance():
    """d=2, L=3 (Delta=8), k=1, eps=0.25.

    Returns:
        ClusteringInstance: The instance the exact-regime streaming tests run on.
    """
    return ClusteringInstance(d=2, delta_exp=3, k=1, epsilon=0.25)


@pytest.fixture
def small_grid(small_instance):
    """Grid hierarchy of ``small_instance`` with a fixed non-trivial shift."""
    return GridHierarchy(small_instance, (3, 5))


@pytest.fixture
def small_points():
    """Ten distinct live points of ``small_instance``."""
    return list(SMALL_POINTS)


@pytest.fixture
def exact_params():
    """Exact-regime ``SamplerParams`` (rates 1, one draw per query)."""
    return exact_sampler_params()


@pytest.fixture
def exact_driver_params():
    """Driver parameters whose shortcut is too small for ``small_points``.

    Example:
        >>> def test_sampler_path(small_instance, exact_driver_params):
        ...     driver = DynamicCoreset(small_instance, params=exact_driver_params)
    """
    return DriverParams(shortcut_capacity=4, size_threshold=8, sampler=exact_sampler_params())


@pytest.fixture
def shortcut_driver_params():
    """Driver parameters with a 50-point shortcut and inert samplers."""
    return DriverParams(shortcut_capacity=50, size_threshold=8, sampler=inert_sampler_params())
