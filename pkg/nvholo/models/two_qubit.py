# -*- coding: utf-8 -*-
"""
Two-qubit holonomic gate on two NV centers coupled through a microwave cavity.

The dynamics is restricted to the single-excitation subspace

- ``G``: both spins in the lower level and no photon,
- ``Psi1``: the second spin excited,
- ``Psi2``: the first spin excited,
- ``Psi3``: one photon in the cavity,

where the effective Hamiltonian couples ``Psi2`` and ``Psi1`` to ``Psi3``
with strengths ``eta1`` and ``eta2``. This is a Lambda system whose bright
state is returned to the ``{Psi1, Psi2}`` span with a sign flip by a pulse of
area pi in ``lambda = sqrt(eta1^2 + eta2^2)``.
"""
from dataclasses import dataclass, field
from enum import Enum
import logging
from typing import Dict, Sequence, Tuple

import numpy as np

from ..dynamics import CollapseChannel, HamiltonianSchedule, Segment
from ..pulses import EnvelopeShape, PulseEnvelope
from ..quantum import (
    HilbertSpace,
    Operator,
    StateVector,
    operator_from_terms,
)
from .base import GateModel, HolonomyReport, PulseAreaError, verify_holonomy

logger = logging.getLogger(__name__)

SPACE = HilbertSpace(("G", "Psi1", "Psi2", "Psi3"))
"""Single-excitation subspace plus the ground state reached by cavity decay"""

COMPUTATIONAL_SPACE = HilbertSpace(("00", "01", "10", "11"))

KAPPA = 2 * np.pi * 0.056
"""Cavity decay rate in rad/us (56 kHz)"""

SPIN_CAVITY_COUPLING = 2 * np.pi * 1e3
"""Spin-cavity coupling g in rad/us (1 GHz)"""

DEFAULT_COUPLING = 2 * np.pi * 50.0
"""Default effective Rabi frequency lambda in rad/us"""

CALIBRATED_COUPLING = 134.9
"""Effective Rabi frequency in rad/us reproducing a fidelity of 0.9994 for
``vartheta = pi/4`` and :py:data:`KAPPA`, see
:py:func:`nvholo.models.calibration.calibrate_coupling`"""


class RatioConvention(str, Enum):
    """How the coupling ratio encodes vartheta.

    ``amplitude``: eta1 / eta2 = tan(vartheta / 2).
    ``squared``: eta1^2 / eta2^2 = tan(vartheta / 2).
    """

    AMPLITUDE = "amplitude"
    SQUARED = "squared"


class FidelityTarget(str, Enum):
    """Target state used to score the two-qubit gate."""

    GATE = "gate"
    FULL_TRANSFER = "full_transfer"


def two_qubit_embedding() -> Dict[str, str]:
    """Map from computational labels to the single-excitation space.

    Only the ``10`` and ``11`` block of the gate is realised by the Lambda
    dynamics, so ``00`` and ``01`` have no image.
    """
    return {"10": "Psi2", "11": "Psi1"}


def couplings_from_ratio(
    vartheta: float,
    coupling: float,
    convention: RatioConvention = RatioConvention.AMPLITUDE,
) -> Tuple[float, float]:
    """Split lambda into ``(eta1, eta2)`` for a given vartheta.

    Parameters
    ----------
    vartheta : float
        Gate angle in radians.
    coupling : float
        Effective Rabi frequency lambda in rad/us.
    convention : {'amplitude', 'squared'}
        Ratio convention, see :py:class:`RatioConvention`.
    """
    convention = RatioConvention(convention)
    if not coupling > 0:
        raise ValueError(f"Coupling must be positive, got {coupling}")
    if convention is RatioConvention.AMPLITUDE:
        return coupling * np.sin(vartheta / 2), coupling * np.cos(vartheta / 2)
    ratio = np.tan(vartheta / 2)
    if ratio < 0:
        raise ValueError(
            "Squared ratio convention requires tan(vartheta/2) >= 0, got "
            f"{ratio}"
        )
    return (
        coupling * np.sqrt(ratio / (1 + ratio)),
        coupling * np.sqrt(1 / (1 + ratio)),
    )


def cavity_decay_channel(kappa: float = KAPPA) -> CollapseChannel:
    """Photon loss from the cavity, mapping ``Psi3`` to ``G``."""
    return CollapseChannel(
        operator_from_terms(SPACE, [(1.0, "G", "Psi3")]), kappa, "kappa"
    )


def holonomic_two_qubit_gate(vartheta: float) -> Operator:
    """Ideal two-qubit gate on ``00, 01, 10, 11``.

    Block diagonal with the reflection ``[[c, s], [s, -c]]`` on the first two
    states and ``[[-c, s], [s, c]]`` on the last two, where ``c`` and ``s``
    are the cosine and sine of vartheta.
    """
    c, s = np.cos(vartheta), np.sin(vartheta)
    return Operator(
        COMPUTATIONAL_SPACE,
        [
            [c, s, 0, 0],
            [s, -c, 0, 0],
            [0, 0, -c, s],
            [0, 0, s, c],
        ],
    )


@dataclass(frozen=True)
class TwoQubitModel(GateModel):
    """Cavity-mediated model of the two-qubit gate.

    Parameters
    ----------
    vartheta : float
        Gate angle in radians. Only used for the ideal gate, the dynamics is
        set by the couplings.
    eta1, eta2 : float
        Peak effective couplings of ``Psi2`` and ``Psi1`` to ``Psi3`` in
        rad/us.
    kappa : float
        Cavity decay rate in rad/us, used for the default channel.
    shape : {'square', 'sine_squared'}
        Envelope shared by both couplings. The duration is chosen so the
        area in lambda is pi.
    channels : Sequence[CollapseChannel], optional
        Collapse channels. Defaults to :py:func:`cavity_decay_channel`.
    allow_non_cyclic : bool
        Accept a pulse area other than pi.
    pulse_area : float
        Area of the pulse in lambda. Must be pi unless ``allow_non_cyclic``.
    """

    vartheta: float
    eta1: float
    eta2: float
    kappa: float = KAPPA
    shape: EnvelopeShape = EnvelopeShape.SQUARE
    channels: Tuple[CollapseChannel, ...] = None
    allow_non_cyclic: bool = False
    pulse_area: float = np.pi
    space: HilbertSpace = field(default=SPACE, init=False)

    def __post_init__(self):
        object.__setattr__(self, "shape", EnvelopeShape(self.shape))
        if not self.coupling > 0:
            raise ValueError("At least one coupling must be non-zero")
        if self.kappa < 0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa}")
        if self.channels is None:
            object.__setattr__(
                self, "channels", (cavity_decay_channel(self.kappa),)
            )
        else:
            object.__setattr__(self, "channels", tuple(self.channels))
        if not self.allow_non_cyclic and abs(self.pulse_area - np.pi) > 1e-10:
            raise PulseAreaError(
                f"Pulse area must be pi for a cyclic evolution, got "
                f"{self.pulse_area:.12f}"
            )

    @classmethod
    def from_coupling(
        cls,
        vartheta: float,
        coupling: float = DEFAULT_COUPLING,
        ratio_convention: RatioConvention = RatioConvention.AMPLITUDE,
        **kwargs,
    ) -> "TwoQubitModel":
        """Model with couplings derived from lambda and the ratio condition."""
        eta1, eta2 = couplings_from_ratio(vartheta, coupling, ratio_convention)
        return cls(vartheta, eta1, eta2, **kwargs)

    @property
    def coupling(self) -> float:
        """Effective Rabi frequency lambda"""
        return float(np.hypot(self.eta1, self.eta2))

    @property
    def envelope(self) -> PulseEnvelope:
        """Envelope of lambda(t)."""
        return PulseEnvelope.for_area(
            self.shape, self.coupling, self.pulse_area
        )

    @property
    def duration(self) -> float:
        return self.envelope.duration

    @property
    def embedding(self) -> Dict[str, str]:
        return two_qubit_embedding()

    def hamiltonian(self) -> HamiltonianSchedule:
        return two_qubit_hamiltonian(self)

    def ideal_gate(self) -> Operator:
        return holonomic_two_qubit_gate(self.vartheta)

    def full_transfer_target(self) -> StateVector:
        """Target for complete population transfer into ``Psi1``."""
        return StateVector(SPACE, [0, 1, 0, 0])

    def with_channels(
        self, channels: Sequence[CollapseChannel]
    ) -> "TwoQubitModel":
        return TwoQubitModel(
            self.vartheta,
            self.eta1,
            self.eta2,
            kappa=self.kappa,
            shape=self.shape,
            channels=channels,
            allow_non_cyclic=self.allow_non_cyclic,
            pulse_area=self.pulse_area,
        )


def coupling_operator(eta1: float, eta2: float) -> Operator:
    """Effective Hamiltonian for fixed couplings."""
    return operator_from_terms(
        SPACE,
        [
            (eta1, "Psi2", "Psi3"),
            (eta1, "Psi3", "Psi2"),
            (eta2, "Psi1", "Psi3"),
            (eta2, "Psi3", "Psi1"),
        ],
    )


def two_qubit_hamiltonian(m: TwoQubitModel) -> HamiltonianSchedule:
    """Schedule of the effective Hamiltonian in the single-excitation space.

    Both couplings share the envelope so their ratio is constant in time.
    """
    envelope = m.envelope
    H0 = coupling_operator(m.eta1, m.eta2)
    if envelope.shape is EnvelopeShape.SQUARE:
        segment = Segment.from_operator(H0, envelope.duration)
    else:
        scale = 1.0 / envelope.peak

        def generator(t):
            return (scale * envelope(t)) * H0

        segment = Segment(envelope.duration, generator)
    return HamiltonianSchedule(SPACE, [segment])


def verify_holonomy_two_qubit(
    m: TwoQubitModel, dt: float = None, samples: int = None
) -> HolonomyReport:
    """Holonomy conditions on the ``{Psi2, Psi1}`` span.

    The gate error compares against the ``10, 11`` block of the ideal gate.
    """
    return verify_holonomy(m, dt=dt, samples=samples)
