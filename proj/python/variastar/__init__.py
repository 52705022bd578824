"""Velocity-weighted A* planning with Lagrangian dynamics and variational checks."""

from ._core import *  # noqa: F401,F403
from ._core import (  # noqa: F401
    ConfigError,
    ConvergenceError,
    Error,
    InvalidNodeError,
    MapParseError,
)

__version__ = "0.1.0"
