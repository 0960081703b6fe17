"""Python bindings for the kslog chemotaxis solver."""

from ._kslog import *  # noqa: F401,F403
from ._kslog import __version__  # noqa: F401
