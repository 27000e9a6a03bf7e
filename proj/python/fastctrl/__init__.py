"""Fast boundary controls for 1-D spectral control systems.

Moment-method machinery for parabolic and dispersive modal systems: spectrum
presets, canonical products, the compactly supported multiplier, Gram-based
minimal-norm null controls and control-cost bounds, biorthogonal synthesis,
and an exact modal simulator.
"""

from ._fastctrl import *  # noqa: F401,F403
from ._fastctrl import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
