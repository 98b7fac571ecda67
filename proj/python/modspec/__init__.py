"""Python bindings for the modspec library.

Everything lives in the compiled extension; this package simply re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
