"""Trapping, spectroscopy and coherent dynamics of highly polarizable ions in linear Paul traps."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .trap import *  # noqa: F401,F403
from .stark import *  # noqa: F401,F403
from .overlap import *  # noqa: F401,F403
from .spectra import *  # noqa: F401,F403
from .dynamics import *  # noqa: F401,F403
