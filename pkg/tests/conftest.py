"""Pytest configuration and shared fixtures.

This file imports all fixtures from the fixtures/ directory to make them
available to all tests. Additional pytest configuration and hooks can be
added here as needed.
"""
# Import all fixtures to make them available to tests
from tests.fixtures import (
    churned_ops,
    clustered_file,
    exact_driver_params,
    exact_params,
    shortcut_driver_params,
    small_grid,
    small_instance,
    small_points,
    stream_text,
)

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
