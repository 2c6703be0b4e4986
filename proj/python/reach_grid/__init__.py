"""Python interface to the reach library."""

from ._core import *  # noqa: F401,F403
from ._core import ResourceError, __doc__  # noqa: F401
