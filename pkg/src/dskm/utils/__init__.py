"""Utility functions."""
from dskm.utils.logger import get_logger
from dskm.utils.register_cli_components import register_cli_components
from dskm.utils.stream_io import load_stream, replay, save_stream

__all__ = [
    "get_logger",
    "load_stream",
    "register_cli_components",
    "replay",
    "save_stream",
]
