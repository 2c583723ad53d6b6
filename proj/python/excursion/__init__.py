"""Excursion probabilities of a 2-D Gaussian field with a degenerate variance corner."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
