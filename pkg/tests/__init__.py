"""Test package for dskm."""
