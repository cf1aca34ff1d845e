# -*- coding: utf-8 -*-
"""
Base class for gate models and the generic scenario and holonomy machinery.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
import logging
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .. import config
from ..dynamics import (
    CollapseChannel,
    HamiltonianSchedule,
    TrajectoryResult,
    default_dt,
    evolve_lindblad,
    unitary_path,
)
from ..metrics import gate_distance_up_to_phase
from ..quantum import (
    DimensionMismatchError,
    HilbertSpace,
    Operator,
    StateVector,
    density_matrix,
    embed,
    is_unitary,
    project,
)

logger = logging.getLogger(__name__)


class PulseAreaError(ValueError):
    """Exception raised when a pulse does not close the cyclic evolution"""

    pass


class GateModel(ABC):
    """Base class for the holonomic gate models.

    Subclasses define the model space, the Hamiltonian schedule of the gate,
    the ideal gate on the computational space and how computational basis
    labels map onto the model space.
    """

    space: HilbertSpace
    channels: Tuple[CollapseChannel, ...]

    @abstractmethod
    def hamiltonian(self) -> HamiltonianSchedule:
        """Hamiltonian schedule of the gate pulse."""
        raise NotImplementedError()

    @abstractmethod
    def ideal_gate(self) -> Operator:
        """Ideal gate on the computational space."""
        raise NotImplementedError()

    @property
    @abstractmethod
    def embedding(self) -> Dict[str, str]:
        """Map from computational labels to model labels."""
        raise NotImplementedError()

    @property
    @abstractmethod
    def duration(self) -> float:
        """Duration of the gate pulse in us."""
        raise NotImplementedError()

    @property
    def subspace_labels(self) -> Tuple[str, ...]:
        """Model labels of the cyclic subspace, in computational order."""
        gate = self.ideal_gate()
        return tuple(
            self.embedding[label]
            for label in gate.space.labels
            if label in self.embedding
        )

    def ideal_block(self) -> Operator:
        """Ideal gate restricted to the labels present in the embedding."""
        gate = self.ideal_gate()
        labels = [
            label for label in gate.space.labels if label in self.embedding
        ]
        return project(gate, labels)

    def default_dt(self) -> float:
        """Default step size for the gate pulse."""
        return default_dt(self.hamiltonian())


@dataclass(frozen=True)
class HolonomyReport:
    """Numerical check of the conditions for a holonomic gate.

    Attributes
    ----------
    cyclicity_error : float
        Frobenius norm of P(tau) - P(0) where P is the projector onto the
        evolved computational subspace.
    parallel_transport_max : float
        Largest |<phi_k(t)|H(t)|phi_l(t)>| over the sampled times.
    gate_error : float
        Phase-insensitive distance between the projected propagator and the
        ideal gate.
    samples : int
        Number of times used for the parallel-transport check.
    """

    cyclicity_error: float
    parallel_transport_max: float
    gate_error: float
    samples: int = 0

    def passed(self, tolerance: float = 1e-6) -> bool:
        return (
            self.cyclicity_error < tolerance
            and self.parallel_transport_max < tolerance
            and self.gate_error < tolerance
        )

    def to_dict(self) -> dict:
        return {
            "cyclicity_error": self.cyclicity_error,
            "parallel_transport_max": self.parallel_transport_max,
            "gate_error": self.gate_error,
            "samples": self.samples,
            "passed": self.passed(),
        }


def verify_holonomy(
    model: GateModel, dt: float = None, samples: int = None
) -> HolonomyReport:
    """Check cyclicity, parallel transport and the resulting gate.

    The closed-system propagator is built step by step. The parallel
    transport condition is evaluated at ``samples`` evenly spaced step ends
    (at least one per step if there are fewer steps) with the Hamiltonian
    sampled at the same time.

    Parameters
    ----------
    model : :obj:`GateModel`
        Model to check.
    dt : float, optional
        Step size in us. Defaults to :py:meth:`GateModel.default_dt`.
    samples : int, optional
        Number of parallel-transport samples. Defaults to
        :py:attr:`nvholo.config.IntegrationConfig.transport_samples`.
    """
    sched = model.hamiltonian()
    if dt is None:
        dt = default_dt(sched)
    if samples is None:
        samples = config.integration.transport_samples
    labels = model.subspace_labels
    idx = [model.space.index(label) for label in labels]
    n_steps = sched.n_steps(dt)
    sample_steps = set(
        np.unique(np.linspace(1, n_steps, min(samples, n_steps)).astype(int))
    )

    counts = sched.step_counts(dt)
    P0 = np.zeros((model.space.dim,) * 2, dtype=complex)
    P0[idx, idx] = 1.0
    transport = 0.0
    U = np.eye(model.space.dim, dtype=complex)
    for step, (t_mid, _, U) in enumerate(unitary_path(sched, dt), start=1):
        if step in sample_steps:
            index = min(
                int(np.searchsorted(sched.starts, t_mid, side="right")) - 1,
                len(sched.segments) - 1,
            )
            h = sched.segments[index].duration / counts[index]
            H = sched.sample(index, t_mid + 0.5 * h).data
            phi = U[:, idx]
            transport = max(
                transport, float(np.max(np.abs(phi.conj().T @ H @ phi)))
            )
    P = U @ P0 @ U.conj().T
    cyclicity = float(np.linalg.norm(P - P0, "fro"))
    block = project(Operator(model.space, U), labels)
    gate_error = gate_distance_up_to_phase(
        block, model.ideal_block(), validate=False
    )
    report = HolonomyReport(
        cyclicity_error=cyclicity,
        parallel_transport_max=transport,
        gate_error=gate_error,
        samples=len(sample_steps),
    )
    logger.debug(f"Holonomy report: {report}")
    return report


@dataclass
class GateSpec:
    """A gate model together with the input state it is applied to.

    Parameters
    ----------
    model : :obj:`GateModel`
        One- or two-qubit model.
    initial_state : :obj:`nvholo.quantum.StateVector`
        Normalised state on the computational space of the ideal gate.
    ideal_gate : :obj:`nvholo.quantum.Operator`, optional
        Ideal gate on the computational space. Defaults to the model's.
    target : :obj:`nvholo.quantum.StateVector`, optional
        Target on the model space. Defaults to the embedded image of the
        initial state under the ideal gate.
    idle_time : float
        Free evolution after the pulse in us.
    name : str
        Scenario name.
    """

    model: GateModel
    initial_state: StateVector
    ideal_gate: Optional[Operator] = None
    target: Optional[StateVector] = None
    idle_time: float = 0.0
    name: str = ""
    computational_basis: Tuple[str, ...] = field(init=False)

    def __post_init__(self):
        if self.ideal_gate is None:
            self.ideal_gate = self.model.ideal_gate()
        if not is_unitary(self.ideal_gate, atol=1e-12):
            raise ValueError("Ideal gate is not unitary within 1e-12")
        if self.initial_state.space != self.ideal_gate.space:
            raise DimensionMismatchError(
                f"Initial state lives on {self.initial_state.space}, ideal "
                f"gate on {self.ideal_gate.space}"
            )
        if abs(self.initial_state.norm - 1) > 1e-9:
            raise ValueError(
                f"Initial state is not normalised: norm "
                f"{self.initial_state.norm:.12f}"
            )
        if self.idle_time < 0:
            raise ValueError(
                f"Idle time must be non-negative, got {self.idle_time}"
            )
        self.computational_basis = self.ideal_gate.space.labels
        if self.target is None:
            self.target = embed(
                self.ideal_gate @ self.initial_state,
                self.model.space,
                self.model.embedding,
            )
        elif self.target.space != self.model.space:
            raise DimensionMismatchError(
                f"Target lives on {self.target.space}, model on "
                f"{self.model.space}"
            )

    @property
    def embedded_initial_state(self) -> StateVector:
        return embed(
            self.initial_state, self.model.space, self.model.embedding
        )

    def schedule(self) -> HamiltonianSchedule:
        """Gate pulse followed by the idle period."""
        return self.model.hamiltonian().with_idle(self.idle_time)


def run_gate_scenario(
    spec: GateSpec,
    dt: float = None,
    record_stride: int = 1,
    progress: bool = False,
    channels: Sequence[CollapseChannel] = None,
) -> TrajectoryResult:
    """Evolve the initial state of a gate spec under the model dynamics.

    Parameters
    ----------
    spec : :obj:`GateSpec`
        Scenario to run.
    dt : float, optional
        Step size in us. Defaults to the model's default step.
    record_stride : int
        Record every ``record_stride`` steps.
    progress : bool
        Show a progress bar.
    channels : Sequence[CollapseChannel], optional
        Override the model's collapse channels.

    Returns
    -------
    :obj:`nvholo.dynamics.TrajectoryResult`
        Trajectory with the fidelity to the target on every recorded step.
        The maximum fidelity is taken over the second half of the pulse and
        the idle period that follows it.
    """
    if dt is None:
        dt = spec.model.default_dt()
    if channels is None:
        channels = spec.model.channels
    rho0 = density_matrix(spec.embedded_initial_state)
    logger.debug(f"Running scenario '{spec.name}' with dt={dt:.6e} us")
    return evolve_lindblad(
        spec.schedule(),
        rho0,
        channels,
        dt,
        record_stride=record_stride,
        target=spec.target,
        progress=progress,
        max_after=0.5 * spec.model.duration,
    )
