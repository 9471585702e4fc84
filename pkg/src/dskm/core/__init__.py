"""Streaming and offline coreset algorithms."""
