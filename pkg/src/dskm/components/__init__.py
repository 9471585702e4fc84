"""
CLI Components package.

This package contains all CLI components organized into:
- commands: the dskm subcommands (build, generate, verify, solve, stats)
"""

from dskm.components import commands

__all__ = ["commands"]
