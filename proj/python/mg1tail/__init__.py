"""Tail approximations for the M/G/1 waiting time with regularly varying service."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
