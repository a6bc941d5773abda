"""Rotating-bath superradiance simulator (Python bindings)."""

from ._rotbath import *  # noqa: F401,F403
from ._rotbath import __version__  # noqa: F401
