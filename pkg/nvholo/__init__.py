# -*- coding: utf-8 -*-
"""nvholo: non-adiabatic holonomic gates on NV-center spins

nvholo is a pulse-level simulator for holonomic one- and two-qubit gates
built from the electron spin of nitrogen-vacancy centers. It evolves the
driven spin under the Lindblad master equation and scores the result against
the ideal geometric gate.
"""
import logging
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version(__name__)
except PackageNotFoundError:
    # package is not installed
    __version__ = "unknown"

logging.getLogger(__name__).addHandler(logging.NullHandler())
