# -*- coding: utf-8 -*-
"""
Global configuration for nvholo.
"""
from dataclasses import dataclass


@dataclass
class ToleranceConfig:
    """Numerical tolerances shared by the simulator."""

    hermitian: float = 1e-10
    """Maximum entrywise defect |A - A^dagger| for Hermitian inputs"""
    trace: float = 1e-9
    """Maximum deviation of a density matrix trace from one"""
    positivity: float = 1e-8
    """Most negative eigenvalue tolerated for a density matrix"""
    abort: float = 1e-6
    """Defect beyond which an evolution is aborted"""
    unitary: float = 1e-8
    """Maximum entrywise defect |U^dagger U - I| for unitary inputs"""
    norm: float = 1e-12
    """Tolerance on the norm of a normalised state vector"""


@dataclass
class IntegrationConfig:
    """Defaults for the time integrators."""

    steps_per_gate: int = 2000
    """Default number of steps per gate, i.e. dt = duration / steps"""
    max_step_product: float = 0.1
    """Upper bound on dt * (max ||H|| + max rate)"""
    transport_samples: int = 200
    """Number of sample times used by the parallel-transport check"""


@dataclass
class OutputConfig:
    """Configuration for the files written by the runner."""

    float_format: str = "%.15e"
    """printf-style format for floats in CSV files"""
    line_terminator: str = "\n"
    """Line terminator for CSV files"""


tolerances = ToleranceConfig()
integration = IntegrationConfig()
output = OutputConfig()
