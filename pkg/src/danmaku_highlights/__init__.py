"""Highlight detection and summarization from time-sync (danmaku) comments."""

from .errors import ConfigError, ConsistencyError, DataError, OOVError

__version__ = "0.1.0"

__all__ = ["ConfigError", "ConsistencyError", "DataError", "OOVError", "__version__"]
