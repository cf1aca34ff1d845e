# -*- coding: utf-8 -*-
"""
One-qubit holonomic gate on the V-type three-level system of an NV center.

The qubit is encoded in the ``|0>`` and ``|1>`` levels (the m = -1 and m = +1
spin sublevels) and the ``|e>`` level (m = 0) acts as the auxiliary state.
Two microwave fields with a common envelope Omega(t) couple both qubit levels
to ``|e>`` with amplitudes ``cos(theta/2)`` and ``sin(theta/2)``. Only the
bright state is driven and a pulse of area pi returns it to the qubit
subspace with a sign flip, which implements the reflection

.. math::

    U_1(\\theta) = \\begin{pmatrix} \\cos\\theta & \\sin\\theta \\\\
        \\sin\\theta & -\\cos\\theta \\end{pmatrix}.
"""
from dataclasses import dataclass, field
import logging
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from ..dynamics import CollapseChannel, HamiltonianSchedule, Segment
from ..pulses import EnvelopeShape, PulseEnvelope
from ..quantum import (
    HilbertSpace,
    Operator,
    StateVector,
    operator_from_terms,
)
from ..utils.expressions import parse_operator
from .base import GateModel, HolonomyReport, PulseAreaError, verify_holonomy

logger = logging.getLogger(__name__)

SPACE = HilbertSpace(("0", "1", "e"))
"""Qubit levels and the auxiliary level"""

QUBIT_SPACE = HilbertSpace(("0", "1"))

RABI_FREQUENCY = 2 * np.pi * 300.0
"""Peak Rabi frequency in rad/us (300 MHz)"""

GAMMA_Y = 2 * np.pi * 0.005
"""Qubit relaxation rate in rad/us (5 kHz)"""

GAMMA_X = 2 * np.pi * 1.5
"""Auxiliary relaxation rate in rad/us (1.5 MHz)"""

GAMMA_Z = 2 * np.pi * 1.5
"""Dephasing rate in rad/us (1.5 MHz)"""

DEFAULT_CHANNEL_OPERATORS = {
    "A_minus": "|0><1|",
    "S_minus": "|0><e|",
    "S_z": "|0><0| - |1><1|",
}
"""Default collapse operators, written as ket-bra sums"""

CALIBRATED_CHANNEL_OPERATORS = {
    "A_minus": "|0><1|",
    "S_minus": "|0><1|",
    "S_z": "|e><e|",
}
"""Operator set selected by :py:func:`nvholo.models.calibration.calibrate_channels`
as closest to the reference one-qubit fidelities"""

_RATE_KEYS = {"A_minus": "gamma_y", "S_minus": "gamma_x", "S_z": "gamma_z"}


def default_nv_channels(
    space: HilbertSpace = SPACE,
    gamma_y: float = GAMMA_Y,
    gamma_x: float = GAMMA_X,
    gamma_z: float = GAMMA_Z,
    operators: Mapping[str, str] = None,
) -> List[CollapseChannel]:
    """Collapse channels of the one-qubit model.

    Parameters
    ----------
    space : :obj:`nvholo.quantum.HilbertSpace`
        Three-level space. Must contain the labels used by the operators.
    gamma_y, gamma_x, gamma_z : float
        Rates in rad/us for ``A_minus``, ``S_minus`` and ``S_z``.
    operators : Mapping[str, str], optional
        Overrides for the operators of ``A_minus``, ``S_minus`` and ``S_z`` as
        ket-bra expressions. Missing entries use
        :py:data:`DEFAULT_CHANNEL_OPERATORS`.

    Returns
    -------
    list of :obj:`nvholo.dynamics.CollapseChannel`
        The three channels in the order ``A_minus``, ``S_minus``, ``S_z``.
    """
    expressions = dict(DEFAULT_CHANNEL_OPERATORS)
    if operators:
        unknown = set(operators) - set(expressions)
        if unknown:
            raise ValueError(
                f"Unknown channel names: {sorted(unknown)}. Choose from: "
                f"{list(expressions)}"
            )
        expressions.update(operators)
    rates = {"gamma_y": gamma_y, "gamma_x": gamma_x, "gamma_z": gamma_z}
    return [
        CollapseChannel(
            parse_operator(expressions[name], space), rates[key], name
        )
        for name, key in _RATE_KEYS.items()
    ]


def bright_dark(theta: float) -> Tuple[StateVector, StateVector]:
    """Bright and dark states of the drive on the three-level space."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    bright = StateVector(SPACE, [c, s, 0.0])
    dark = StateVector(SPACE, [s, -c, 0.0])
    return bright, dark


def dressed_eigenstates(
    theta: float,
) -> Tuple[StateVector, StateVector, StateVector]:
    """Eigenstates of the drive Hamiltonian divided by Omega(t).

    Returns
    -------
    tuple
        ``(D0, Dminus, Dplus)`` with eigenvalues 0, -1 and +1. ``D0`` is the
        dark state and ``D-+ = (|b> -+ |e>) / sqrt(2)``.
    """
    bright, dark = bright_dark(theta)
    e = StateVector(SPACE, [0.0, 0.0, 1.0])
    return (
        dark,
        (bright - e) / np.sqrt(2),
        (bright + e) / np.sqrt(2),
    )


def bright_state_hamiltonian(theta: float, omega: float = 1.0) -> Operator:
    """Drive Hamiltonian in the bright-state form Omega (|b><e| + |e><b|)."""
    bright, _ = bright_dark(theta)
    b = bright.amplitudes
    e = np.array([0.0, 0.0, 1.0])
    return Operator(SPACE, omega * (np.outer(b, e) + np.outer(e, b.conj())))


def drive_operator(theta: float) -> Operator:
    """Drive Hamiltonian for unit envelope written in the level basis.

    ``cos(theta/2)|0><e| + sin(theta/2)|1><e| + h.c.``
    """
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return operator_from_terms(
        SPACE,
        [(c, "0", "e"), (s, "1", "e"), (c, "e", "0"), (s, "e", "1")],
    )


def holonomic_one_qubit_gate(theta: float) -> Operator:
    """Ideal one-qubit reflection gate on ``|0>``, ``|1>``.

    ``theta = pi/4`` gives the Hadamard gate, ``theta = pi/2`` gives a NOT
    gate and ``theta = 0`` gives sigma_z.
    """
    c, s = np.cos(theta), np.sin(theta)
    return Operator(QUBIT_SPACE, [[c, s], [s, -c]])


@dataclass(frozen=True)
class OneQubitModel(GateModel):
    """V-system model of the one-qubit gate.

    Parameters
    ----------
    theta : float
        Relative strength of the two drives, in radians.
    envelope : :obj:`nvholo.pulses.PulseEnvelope`, optional
        Pulse envelope. Defaults to a square pi pulse at
        :py:data:`RABI_FREQUENCY`.
    channels : Sequence[CollapseChannel], optional
        Collapse channels. Defaults to :py:func:`default_nv_channels`.
    allow_non_cyclic : bool
        Allow envelopes whose area is not pi. Used for negative controls.
    """

    theta: float
    envelope: PulseEnvelope = None
    channels: Tuple[CollapseChannel, ...] = None
    allow_non_cyclic: bool = False
    space: HilbertSpace = field(default=SPACE, init=False)

    def __post_init__(self):
        if self.envelope is None:
            object.__setattr__(
                self,
                "envelope",
                PulseEnvelope.for_area(EnvelopeShape.SQUARE, RABI_FREQUENCY),
            )
        if self.channels is None:
            object.__setattr__(self, "channels", tuple(default_nv_channels()))
        else:
            object.__setattr__(self, "channels", tuple(self.channels))
        if (
            not self.allow_non_cyclic
            and abs(self.envelope.area - np.pi) > 1e-10
        ):
            raise PulseAreaError(
                f"Pulse area must be pi for a cyclic evolution, got "
                f"{self.envelope.area:.12f}"
            )

    @property
    def duration(self) -> float:
        return self.envelope.duration

    @property
    def embedding(self) -> Dict[str, str]:
        return {"0": "0", "1": "1"}

    def hamiltonian(self) -> HamiltonianSchedule:
        return one_qubit_hamiltonian(self)

    def ideal_gate(self) -> Operator:
        return holonomic_one_qubit_gate(self.theta)

    def with_channels(
        self, channels: Sequence[CollapseChannel]
    ) -> "OneQubitModel":
        return OneQubitModel(
            self.theta,
            self.envelope,
            channels=channels,
            allow_non_cyclic=self.allow_non_cyclic,
        )


def one_qubit_hamiltonian(m: OneQubitModel) -> HamiltonianSchedule:
    """Schedule H(t) = Omega(t) (cos(theta/2)|0><e| + sin(theta/2)|1><e| + h.c.).

    The schedule is a single segment covering the pulse and is flagged as
    constant for square envelopes.
    """
    H0 = drive_operator(m.theta)
    envelope = m.envelope
    constant = envelope.shape is EnvelopeShape.SQUARE

    def generator(t):
        return envelope(t) * H0

    if constant:
        segment = Segment.from_operator(envelope.peak * H0, envelope.duration)
    else:
        segment = Segment(envelope.duration, generator)
    return HamiltonianSchedule(SPACE, [segment])


def verify_holonomy_one_qubit(
    m: OneQubitModel, dt: float = None, samples: int = None
) -> HolonomyReport:
    """Holonomy conditions for the one-qubit model.

    See :py:func:`nvholo.models.base.verify_holonomy`.
    """
    return verify_holonomy(m, dt=dt, samples=samples)
