"""Relativistic semiclassical densities of states."""

from ._reltrace import *  # noqa: F401,F403
from ._reltrace import __version__, billiard, coulomb  # noqa: F401
