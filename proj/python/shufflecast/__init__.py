"""Shuffle-phase network load modeling for MapReduce jobs."""

from shufflecast._core import *  # noqa: F401,F403
from shufflecast._core import __doc__  # noqa: F401
