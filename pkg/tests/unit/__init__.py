"""Unit tests for dskm components."""
