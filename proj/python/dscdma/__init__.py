"""Asynchronous DS-CDMA uplink simulator.

Gold spreading codes, joint delay/amplitude channel estimation over pilot
symbols, matched-filter and successive-interference-cancellation multiuser
detection, and a seeded Monte Carlo sweep harness.
"""

from ._dscdma import *  # noqa: F401,F403
from ._dscdma import __doc__ as _native_doc  # noqa: F401

__version__ = "0.1.0"
