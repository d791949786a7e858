"""Deterministic laboratory for evolving neural cellular automata.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its public surface.
"""

from ncalab._core import *  # noqa: F401,F403
from ncalab._core import __version__  # noqa: F401
