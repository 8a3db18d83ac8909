"""POS-tag block statistics across treebanks (Python bindings)."""

from ._posdist import *  # noqa: F401,F403
from ._posdist import TAGS, DataError, ConfigError

__all__ = [name for name in dir() if not name.startswith("_")]
