"""Exact and numerical toolkit for the coupled Painleve II systems.

Thin re-export of the compiled module; all expressions cross the boundary
as canonical strings, states and paths as complex numbers.
"""

from ._pain2 import *  # noqa: F401,F403
from ._pain2 import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
