"""Shared test fixtures."""
from .instances import (
    exact_driver_params,
    exact_params,
    shortcut_driver_params,
    small_grid,
    small_instance,
    small_points,
)
from .streams import churned_ops, clustered_file, stream_text

__all__ = [
    "churned_ops",
    "clustered_file",
    "exact_driver_params",
    "exact_params",
    "shortcut_driver_params",
    "small_grid",
    "small_instance",
    "small_points",
    "stream_text",
]
