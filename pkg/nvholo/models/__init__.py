# -*- coding: utf-8 -*-
"""
Models of the holonomic one- and two-qubit gates.
"""
from .base import (
    GateModel,
    GateSpec,
    HolonomyReport,
    PulseAreaError,
    run_gate_scenario,
    verify_holonomy,
)
from .one_qubit import (
    OneQubitModel,
    bright_dark,
    default_nv_channels,
    dressed_eigenstates,
    holonomic_one_qubit_gate,
    one_qubit_hamiltonian,
    verify_holonomy_one_qubit,
)
from .two_qubit import (
    TwoQubitModel,
    cavity_decay_channel,
    holonomic_two_qubit_gate,
    two_qubit_embedding,
    two_qubit_hamiltonian,
    verify_holonomy_two_qubit,
)

__all__ = [
    "GateModel",
    "GateSpec",
    "HolonomyReport",
    "OneQubitModel",
    "PulseAreaError",
    "TwoQubitModel",
    "bright_dark",
    "cavity_decay_channel",
    "default_nv_channels",
    "dressed_eigenstates",
    "holonomic_one_qubit_gate",
    "holonomic_two_qubit_gate",
    "one_qubit_hamiltonian",
    "run_gate_scenario",
    "two_qubit_embedding",
    "two_qubit_hamiltonian",
    "verify_holonomy",
    "verify_holonomy_one_qubit",
    "verify_holonomy_two_qubit",
]
