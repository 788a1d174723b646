"""Minimal-lifting splitting for sums of monotone operators."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
