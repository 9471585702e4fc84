"""Integration tests for dskm components.

These tests verify that the driver, the CLI commands and the offline oracle
work together on generated streams.
"""
