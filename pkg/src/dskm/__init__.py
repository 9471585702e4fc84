"""Dynamic-stream k-means coresets."""
__version__ = "0.1.0"
