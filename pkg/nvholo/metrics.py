# -*- coding: utf-8 -*-
"""
Fidelity and distance measures used to score simulated gates.
"""
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
import logging
from typing import Dict, Sequence

import numpy as np

from . import config
from .dynamics import TrajectoryResult
from .quantum import (
    DimensionMismatchError,
    Operator,
    StateVector,
    is_unitary,
)

logger = logging.getLogger(__name__)


class NonUnitaryError(ValueError):
    """Exception raised when a unitary operator is required"""

    pass


def state_fidelity(rho: Operator, psi: StateVector) -> float:
    """Overlap fidelity F = <psi|rho|psi> with a pure target.

    The raw real part is returned without clamping so that invariant checks
    can see small excursions outside [0, 1].
    """
    if rho.space != psi.space:
        raise DimensionMismatchError(
            f"State lives on {rho.space}, target on {psi.space}"
        )
    return float(np.vdot(psi.amplitudes, rho.data @ psi.amplitudes).real)


def gate_distance_up_to_phase(
    U: Operator, V: Operator, validate: bool = True
) -> float:
    """Phase-insensitive distance 1 - |tr(U^dagger V)| / d.

    Zero if and only if U = exp(i phi) V for unitary inputs.

    Parameters
    ----------
    U, V : :obj:`nvholo.quantum.Operator`
        Operators of equal dimension. Labels are not compared.
    validate : bool
        Check both inputs are unitary within
        :py:attr:`nvholo.config.ToleranceConfig.unitary`. Disable to score
        a projected propagator that leaked out of the subspace.
    """
    if U.dim != V.dim:
        raise DimensionMismatchError(
            f"Cannot compare operators of dimension {U.dim} and {V.dim}"
        )
    if validate:
        for name, op in (("U", U), ("V", V)):
            if not is_unitary(op):
                raise NonUnitaryError(f"{name} is not unitary")
    overlap = abs(np.trace(U.data.conj().T @ V.data)) / U.dim
    return float(max(0.0, 1.0 - overlap))


def populations(rho: Operator, basis: Sequence[StateVector]) -> np.ndarray:
    """Populations <b_k|rho|b_k> for an orthonormal list of states.

    Raises
    ------
    ValueError
        If the basis is not orthonormal within 1e-10.
    """
    if not basis:
        return np.array([])
    for b in basis:
        if b.space != rho.space:
            raise DimensionMismatchError(
                f"Basis state lives on {b.space}, state on {rho.space}"
            )
    B = np.array([b.amplitudes for b in basis])
    gram = B.conj() @ B.T
    if np.max(np.abs(gram - np.eye(len(basis)))) > 1e-10:
        raise ValueError("Basis states are not orthonormal")
    return np.einsum("ki,ij,kj->k", B.conj(), rho.data, B).real


def format_percent(value: float, decimals: int = 2) -> str:
    """Format a fidelity as a percentage rounded half-up, e.g. '99.95%'."""
    quantum = Decimal(1).scaleb(-decimals)
    percent = Decimal(repr(float(value) * 100)).quantize(
        quantum, rounding=ROUND_HALF_UP
    )
    return f"{percent}%"


@dataclass
class FidelityReport:
    """Summary of a fidelity trajectory."""

    max_fidelity: float
    argmax_time: float
    final_fidelity: float
    populations_at_max: Dict[str, float] = field(default_factory=dict)

    @property
    def max_fidelity_percent(self) -> str:
        return format_percent(min(max(self.max_fidelity, 0.0), 1.0))

    def to_dict(self) -> dict:
        return {
            "max_fidelity": self.max_fidelity,
            "max_fidelity_percent": self.max_fidelity_percent,
            "argmax_time_us": self.argmax_time,
            "final_fidelity": self.final_fidelity,
            "populations_at_max": dict(self.populations_at_max),
        }


def fidelity_report(result: TrajectoryResult) -> FidelityReport:
    """Build a :py:class:`FidelityReport` from a trajectory.

    Populations are taken from the recorded row closest in time to the
    maximum.
    """
    if not np.isfinite(result.max_fidelity):
        raise ValueError("Trajectory was evolved without a target state")
    row = int(np.argmin(np.abs(result.times - result.argmax_time)))
    report = FidelityReport(
        max_fidelity=float(result.max_fidelity),
        argmax_time=float(result.argmax_time),
        final_fidelity=float(result.final_fidelity),
        populations_at_max={
            label: float(result.populations[row, k])
            for k, label in enumerate(result.labels)
        },
    )
    tol = config.tolerances.trace
    if not -tol <= report.max_fidelity <= 1 + tol:
        logger.warning(
            f"Maximum fidelity outside [0, 1]: {report.max_fidelity:.12f}"
        )
    return report
