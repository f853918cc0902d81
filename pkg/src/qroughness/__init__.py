"""Roughness and negativity of Wigner functions for quantum optical states.

Submodules: ``specfun`` (special functions, exact combinatorics),
``states`` (Fock-basis density matrices), ``phasespace`` (grids,
Wigner/Husimi fields, FFT smoothing, quadrature), ``roughness`` (closed
forms and the general Fock-basis route), ``dynamics`` (Kerr evolution and
the classical/quantum distance) and ``cli``.
"""

from .dynamics import *  # noqa: F401,F403
from .exceptions import (  # noqa: F401
    ConsistencyError,
    DomainError,
    GridTooSmallError,
    TruncationError,
    UnsupportedStateError,
)
from .phasespace import *  # noqa: F401,F403
from .roughness import *  # noqa: F401,F403
from .specfun import *  # noqa: F401,F403
from .states import *  # noqa: F401,F403

__version__ = "0.1.0"
