# -*- coding: utf-8 -*-
"""
Time evolution under piecewise-defined Hamiltonians.

Closed systems are propagated with products of matrix exponentials and open
systems with a fixed-step fourth-order Runge-Kutta integrator of the
Lindblad master equation

.. math::

    \\dot\\rho = -i[H, \\rho]
        + \\sum_k \\frac{\\gamma_k}{2}
        (2 A_k \\rho A_k^\\dagger - A_k^\\dagger A_k \\rho
        - \\rho A_k^\\dagger A_k).

In both cases the Hamiltonian is sampled once per step at the midpoint of the
step. For constant segments the Liouvillian exponential in
:py:func:`superoperator_exp` solves the same problem exactly and serves as an
independent check of the integrator.
"""
from dataclasses import dataclass, field
import logging
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from . import config
from .quantum import (
    DensityMatrix,
    DimensionMismatchError,
    HilbertSpace,
    NonHermitianError,
    Operator,
    StateVector,
    expm_array,
    validate_density_matrix,
)

logger = logging.getLogger(__name__)


class StepSizeError(ValueError):
    """Exception raised when the step size is invalid or too large"""

    pass


class NumericalInvariantError(RuntimeError):
    """Exception raised when an evolved state stops being physical"""

    pass


class NonConstantScheduleError(ValueError):
    """Exception raised when a constant Hamiltonian is required"""

    pass


@dataclass(frozen=True)
class CollapseChannel:
    """Collapse operator and the rate at which it acts.

    Parameters
    ----------
    operator : :obj:`nvholo.quantum.Operator`
        Dimensionless jump operator.
    rate : float
        Rate in rad/us. Must be non-negative.
    name : str
        Optional name used in logs and summaries.
    """

    operator: Operator
    rate: float
    name: str = ""

    def __post_init__(self):
        rate = float(self.rate)
        if not np.isfinite(rate) or rate < 0:
            raise ValueError(
                f"Collapse rate must be finite and non-negative, got {rate} "
                f"for channel '{self.name}'"
            )
        object.__setattr__(self, "rate", rate)

    @property
    def space(self) -> HilbertSpace:
        return self.operator.space


@dataclass(frozen=True)
class Segment:
    """Piece of a Hamiltonian schedule.

    Parameters
    ----------
    duration : float
        Duration in us.
    generator : Callable[[float], Operator]
        Returns the Hamiltonian at an absolute schedule time.
    constant : bool
        True if the generator does not depend on time.
    """

    duration: float
    generator: Callable[[float], Operator]
    constant: bool = False

    @classmethod
    def from_operator(cls, H: Operator, duration: float) -> "Segment":
        """Constant segment holding a fixed Hamiltonian."""
        return cls(duration, lambda t: H, constant=True)


class HamiltonianSchedule:
    """Ordered sequence of Hamiltonian segments on a common space.

    Parameters
    ----------
    space : :obj:`nvholo.quantum.HilbertSpace`
        Space the Hamiltonians act on.
    segments : Sequence[Segment]
        Segments in time order. Durations must be positive.
    """

    def __init__(self, space: HilbertSpace, segments: Sequence[Segment]):
        segments = tuple(segments)
        if not segments:
            raise ValueError("A schedule needs at least one segment")
        for segment in segments:
            if not segment.duration > 0:
                raise ValueError(
                    f"Segment durations must be positive, got "
                    f"{segment.duration}"
                )
        self.space = space
        self.segments = segments
        self.starts = tuple(
            np.concatenate([[0.0], np.cumsum([s.duration for s in segments])])[
                :-1
            ]
        )

    @classmethod
    def constant(cls, H: Operator, duration: float) -> "HamiltonianSchedule":
        return cls(H.space, [Segment.from_operator(H, duration)])

    @property
    def total_duration(self) -> float:
        return float(sum(s.duration for s in self.segments))

    @property
    def is_piecewise_constant(self) -> bool:
        return all(s.constant for s in self.segments)

    def then(self, *segments: Segment) -> "HamiltonianSchedule":
        """New schedule with segments appended."""
        return HamiltonianSchedule(self.space, self.segments + segments)

    def with_idle(self, duration: float) -> "HamiltonianSchedule":
        """Append free evolution (zero Hamiltonian) for a given duration."""
        if duration <= 0:
            return self
        zero = Operator(self.space, np.zeros((self.space.dim,) * 2))
        return self.then(Segment.from_operator(zero, duration))

    def sample(self, segment_index: int, t: float) -> Operator:
        """Evaluate a segment's generator and check it is Hermitian."""
        H = self.segments[segment_index].generator(t)
        if H.space != self.space:
            raise DimensionMismatchError(
                f"Generator returned an operator on {H.space}, expected "
                f"{self.space}"
            )
        if not H.is_hermitian():
            raise NonHermitianError(
                f"Hamiltonian at t={t:.6e} us is not Hermitian, defect: "
                f"{H.hermiticity_defect():.3e}"
            )
        return H

    def __call__(self, t: float) -> Operator:
        """Hamiltonian at time t."""
        index = int(np.searchsorted(self.starts, t, side="right")) - 1
        index = min(max(index, 0), len(self.segments) - 1)
        return self.sample(index, t)

    def step_counts(self, dt: float) -> List[int]:
        """Number of steps used for each segment for a nominal step size.

        Each segment is split into ``ceil(duration / dt)`` equal steps so that
        segment boundaries always fall on step boundaries.
        """
        if not dt > 0:
            raise StepSizeError(f"dt must be positive, got {dt}")
        return [
            max(1, int(np.ceil(s.duration / dt - 1e-9)))
            for s in self.segments
        ]

    def n_steps(self, dt: float) -> int:
        return int(sum(self.step_counts(dt)))

    def steps(self, dt: float) -> Iterator[Tuple[int, float, float]]:
        """Iterate over the integration steps.

        Yields
        ------
        tuple
            Segment index, midpoint time and step length.
        """
        for index, (segment, start, n) in enumerate(
            zip(self.segments, self.starts, self.step_counts(dt))
        ):
            h = segment.duration / n
            for k in range(n):
                yield index, start + (k + 0.5) * h, h


def default_dt(sched: HamiltonianSchedule, steps: int = None) -> float:
    """Default step size: total duration over the configured step count."""
    if steps is None:
        steps = config.integration.steps_per_gate
    return sched.total_duration / steps


def unitary_path(
    sched: HamiltonianSchedule, dt: float
) -> Iterator[Tuple[float, np.ndarray, np.ndarray]]:
    """Iterate over the closed-system propagator step by step.

    Yields
    ------
    tuple
        Midpoint time, the Hamiltonian sampled there (array) and the
        propagator U(t, 0) at the end of the step (array).
    """
    U = np.eye(sched.space.dim, dtype=complex)
    cache = {}
    for index, t_mid, h in sched.steps(dt):
        segment = sched.segments[index]
        if segment.constant and index in cache:
            H, step = cache[index]
        else:
            H = sched.sample(index, t_mid).data
            step = expm_array(-1j * h * H)
            if segment.constant:
                cache[index] = (H, step)
        U = step @ U
        yield t_mid, H, U


def propagate_unitary(sched: HamiltonianSchedule, dt: float) -> Operator:
    """Closed-system propagator U(T, 0) of a schedule.

    The time-ordered exponential is approximated by a product of matrix
    exponentials of the Hamiltonian sampled at the midpoint of each step.

    Parameters
    ----------
    sched : :obj:`HamiltonianSchedule`
        Schedule to propagate.
    dt : float
        Nominal step size in us. Must satisfy 0 < dt <= total duration.

    Returns
    -------
    :obj:`nvholo.quantum.Operator`
        The propagator over the whole schedule.
    """
    if not 0 < dt <= sched.total_duration * (1 + 1e-12):
        raise StepSizeError(
            f"dt must be in (0, {sched.total_duration}], got {dt}"
        )
    U = np.eye(sched.space.dim, dtype=complex)
    for _, _, U in unitary_path(sched, dt):
        pass
    return Operator(sched.space, U)


def _prepare_channels(channels: Sequence[CollapseChannel], space):
    jumps = []
    for channel in channels:
        if channel.space != space:
            raise DimensionMismatchError(
                f"Channel '{channel.name}' lives on {channel.space}, "
                f"expected {space}"
            )
        if channel.rate == 0:
            continue
        A = channel.operator.data
        Ad = A.conj().T
        jumps.append((channel.rate, A, Ad, Ad @ A))
    return jumps


def _lindblad_rhs_array(rho, H, jumps):
    out = -1j * (H @ rho - rho @ H)
    for rate, A, Ad, AdA in jumps:
        out += rate * (A @ rho @ Ad - 0.5 * (AdA @ rho + rho @ AdA))
    return out


def lindblad_rhs(
    rho: DensityMatrix, H: Operator, channels: Sequence[CollapseChannel]
) -> Operator:
    """Right-hand side of the Lindblad master equation.

    Parameters
    ----------
    rho : :obj:`nvholo.quantum.DensityMatrix`
        Current state.
    H : :obj:`nvholo.quantum.Operator`
        Hermitian Hamiltonian in rad/us.
    channels : Sequence[CollapseChannel]
        Collapse channels. Each contributes
        rate/2 (2 A rho A^dag - A^dag A rho - rho A^dag A).

    Returns
    -------
    :obj:`nvholo.quantum.Operator`
        d rho / dt, a traceless Hermitian operator.
    """
    if rho.space != H.space:
        raise DimensionMismatchError(
            f"State space {rho.space} does not match Hamiltonian space "
            f"{H.space}"
        )
    if not H.is_hermitian():
        raise NonHermitianError(
            f"Hamiltonian is not Hermitian, defect: "
            f"{H.hermiticity_defect():.3e}"
        )
    jumps = _prepare_channels(channels, H.space)
    return Operator(H.space, _lindblad_rhs_array(rho.data, H.data, jumps))


@dataclass
class TrajectoryResult:
    """Recorded output of an open-system evolution.

    Rows are recorded at step 0 and every ``record_stride`` steps after that.
    The maximum fidelity and its time are tracked on every step, so they are
    exact for the discretisation even when the stride skips the maximum.
    """

    labels: Tuple[str, ...]
    """Basis labels of the model space"""
    times: np.ndarray
    """Recorded times in us"""
    states: List[DensityMatrix]
    """Recorded density matrices"""
    populations: np.ndarray
    """Populations of the basis states, shape (rows, dim)"""
    fidelity: np.ndarray
    """Fidelity with the target state per row. Empty without a target."""
    max_fidelity: float = np.nan
    argmax_time: float = np.nan
    final_fidelity: float = np.nan
    final_state: Optional[DensityMatrix] = None
    final_time: float = 0.0
    steps: int = 0
    record_stride: int = 1
    max_defects: dict = field(default_factory=dict)
    """Largest trace, Hermiticity and positivity defects seen"""

    def population(self, label: str) -> np.ndarray:
        """Population series of a basis state."""
        return self.populations[:, self.labels.index(label)]

    @property
    def populations_by_label(self) -> dict:
        return {
            label: self.populations[:, k]
            for k, label in enumerate(self.labels)
        }


def _check_state(rho, step, t, worst):
    """Monitor physicality of a recorded state.

    Drift beyond the tight tolerances is logged, drift beyond the abort
    tolerance raises :py:class:`NumericalInvariantError`.
    """
    tol = config.tolerances
    defects = validate_density_matrix(rho)
    worst["hermiticity"] = max(worst["hermiticity"], defects.hermiticity)
    worst["trace"] = max(worst["trace"], defects.trace)
    worst["min_eigenvalue"] = min(
        worst["min_eigenvalue"], defects.min_eigenvalue
    )
    if (
        defects.hermiticity > tol.abort
        or defects.trace > tol.abort
        or defects.min_eigenvalue < -tol.abort
    ):
        raise NumericalInvariantError(
            f"State left the physical set at step {step} (t={t:.6e} us): "
            f"hermiticity defect {defects.hermiticity:.3e}, trace defect "
            f"{defects.trace:.3e}, min eigenvalue "
            f"{defects.min_eigenvalue:.3e}"
        )
    if (
        defects.hermiticity > tol.hermitian * 10
        or defects.trace > tol.trace
        or defects.min_eigenvalue < -tol.positivity
    ):
        logger.warning(
            f"Physicality drift at step {step} (t={t:.6e} us): {defects}"
        )


def evolve_lindblad(
    sched: HamiltonianSchedule,
    rho0: DensityMatrix,
    channels: Sequence[CollapseChannel],
    dt: float,
    record_stride: int = 1,
    target: Optional[StateVector] = None,
    progress: bool = False,
    max_after: float = 0.0,
) -> TrajectoryResult:
    """Integrate the Lindblad equation with fixed-step RK4.

    Parameters
    ----------
    sched : :obj:`HamiltonianSchedule`
        Hamiltonian schedule. Sampled at the midpoint of every step.
    rho0 : :obj:`nvholo.quantum.DensityMatrix`
        Initial state.
    channels : Sequence[CollapseChannel]
        Collapse channels.
    dt : float
        Nominal step size in us.
    record_stride : int
        Record every ``record_stride`` steps (step 0 is always recorded).
    target : :obj:`nvholo.quantum.StateVector`, optional
        Pure state used to compute the fidelity <psi|rho|psi> on every step.
    progress : bool
        Show a progress bar.
    max_after : float
        Only times ``t >= max_after`` count towards the maximum fidelity.

    Returns
    -------
    :obj:`TrajectoryResult`
        The recorded trajectory.

    Raises
    ------
    StepSizeError
        If dt * (||H|| + max rate) exceeds
        :py:attr:`nvholo.config.IntegrationConfig.max_step_product` on any
        step.
    NumericalInvariantError
        If a recorded state drifts out of the physical set by more than the
        abort tolerance.
    """
    space = sched.space
    if rho0.space != space:
        raise DimensionMismatchError(
            f"Initial state lives on {rho0.space}, schedule on {space}"
        )
    if target is not None and target.space != space:
        raise DimensionMismatchError(
            f"Target lives on {target.space}, schedule on {space}"
        )
    record_stride = int(record_stride)
    if record_stride < 1:
        raise ValueError(f"record_stride must be >= 1, got {record_stride}")
    if not 0.0 <= max_after <= sched.total_duration:
        raise ValueError(
            f"max_after must lie in [0, {sched.total_duration:.6e}] us, "
            f"got {max_after}"
        )

    jumps = _prepare_channels(channels, space)
    max_rate = max([j[0] for j in jumps], default=0.0)
    n_steps = sched.n_steps(dt)
    limit = config.integration.max_step_product
    logger.debug(
        f"Evolving {space} for {sched.total_duration:.6e} us in {n_steps} "
        f"steps with {len(jumps)} active channels"
    )

    rho = np.array(rho0.data, dtype=complex)
    psi = None if target is None else target.amplitudes

    def fidelity_of(r):
        return float(np.vdot(psi, r @ psi).real)

    times, states, fidelity = [0.0], [rho0], []
    worst = {"hermiticity": 0.0, "trace": 0.0, "min_eigenvalue": np.inf}
    _check_state(rho0, 0, 0.0, worst)
    best, best_time = -np.inf, np.nan
    if psi is not None:
        fidelity.append(fidelity_of(rho))
        if max_after <= 0.0:
            best, best_time = fidelity[0], 0.0

    checked = {}
    t = 0.0
    step = 0
    with tqdm(total=n_steps, desc="Integrating", disable=not progress) as bar:
        for index, t_mid, h in sched.steps(dt):
            segment = sched.segments[index]
            if segment.constant and index in checked:
                H = checked[index]
            else:
                H = sched.sample(index, t_mid).data
                product = h * (np.linalg.norm(H, 2) + max_rate)
                if product >= limit:
                    raise StepSizeError(
                        f"Step too large at t={t_mid:.6e} us: "
                        f"dt*(||H|| + max rate) = {product:.3e} >= {limit}"
                    )
                if segment.constant:
                    checked[index] = H
            k1 = _lindblad_rhs_array(rho, H, jumps)
            k2 = _lindblad_rhs_array(rho + 0.5 * h * k1, H, jumps)
            k3 = _lindblad_rhs_array(rho + 0.5 * h * k2, H, jumps)
            k4 = _lindblad_rhs_array(rho + h * k3, H, jumps)
            rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            step += 1
            t = t_mid + 0.5 * h
            if psi is not None:
                f = fidelity_of(rho)
                if f > best and t >= max_after:
                    best, best_time = f, t
            if step % record_stride == 0:
                state = DensityMatrix(space, rho, check=False)
                _check_state(state, step, t, worst)
                times.append(t)
                states.append(state)
                if psi is not None:
                    fidelity.append(f)
            bar.update(1)

    final_state = DensityMatrix(space, rho, check=False)
    _check_state(final_state, step, t, worst)

    result = TrajectoryResult(
        labels=space.labels,
        times=np.array(times),
        states=states,
        populations=np.array([s.populations() for s in states]),
        fidelity=np.array(fidelity),
        max_fidelity=float(best) if psi is not None else np.nan,
        argmax_time=float(best_time),
        final_state=final_state,
        final_time=float(t),
        steps=step,
        record_stride=record_stride,
        max_defects=worst,
        final_fidelity=fidelity_of(rho) if psi is not None else np.nan,
    )
    logger.debug(f"Finished evolution, largest defects: {worst}")
    return result


def final_state(result: TrajectoryResult) -> DensityMatrix:
    """State after the last integration step.

    Available even when the record stride skipped the last step.
    """
    if result.final_state is None:
        raise ValueError("Trajectory has no final state")
    return result.final_state


def vectorize(rho: Operator) -> np.ndarray:
    """Column-stacking vectorisation vec(rho)."""
    return rho.data.reshape(-1, order="F")


def unvectorize(vector: np.ndarray, space: HilbertSpace) -> DensityMatrix:
    """Inverse of :py:func:`vectorize`."""
    return DensityMatrix(
        space, np.reshape(vector, (space.dim, space.dim), order="F"),
        check=False,
    )


@dataclass(frozen=True)
class Superoperator:
    """Linear map acting on column-stacked density matrices."""

    space: HilbertSpace
    matrix: np.ndarray

    def __call__(self, rho: Operator) -> DensityMatrix:
        if rho.space != self.space:
            raise DimensionMismatchError(
                f"State lives on {rho.space}, map on {self.space}"
            )
        return unvectorize(self.matrix @ vectorize(rho), self.space)

    def __matmul__(self, other: "Superoperator") -> "Superoperator":
        if other.space != self.space:
            raise DimensionMismatchError("Cannot compose maps on different spaces")
        return Superoperator(self.space, self.matrix @ other.matrix)


def liouvillian(
    H: Operator, channels: Sequence[CollapseChannel]
) -> Superoperator:
    """Liouvillian generator for the column-stacking convention.

    With vec(A X B) = (B^T (x) A) vec(X) the generator reads

    L = -i (I (x) H - H^T (x) I)
        + sum rate/2 (2 conj(A) (x) A - I (x) A^dag A - (A^dag A)^T (x) I)
    """
    if not H.is_hermitian():
        raise NonHermitianError(
            f"Hamiltonian is not Hermitian, defect: "
            f"{H.hermiticity_defect():.3e}"
        )
    d = H.dim
    eye = np.eye(d)
    L = -1j * (np.kron(eye, H.data) - np.kron(H.data.T, eye))
    for rate, A, _, AdA in _prepare_channels(channels, H.space):
        L += (rate / 2.0) * (
            2.0 * np.kron(A.conj(), A)
            - np.kron(eye, AdA)
            - np.kron(AdA.T, eye)
        )
    return Superoperator(H.space, L)


def superoperator_exp(
    H: Operator, channels: Sequence[CollapseChannel], t: float
) -> Superoperator:
    """Exact open-system map exp(L t) for a constant Hamiltonian."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    L = liouvillian(H, channels)
    return Superoperator(H.space, expm_array(L.matrix * t))


def evolve_superoperator(
    sched: HamiltonianSchedule,
    rho0: DensityMatrix,
    channels: Sequence[CollapseChannel],
) -> DensityMatrix:
    """Evolve a state through a piecewise-constant schedule exactly.

    Raises
    ------
    NonConstantScheduleError
        If any segment is not flagged as constant.
    """
    if not sched.is_piecewise_constant:
        raise NonConstantScheduleError(
            "Superoperator evolution requires every segment to be constant"
        )
    total = Superoperator(
        sched.space, np.eye(sched.space.dim**2, dtype=complex)
    )
    for index, (segment, start) in enumerate(
        zip(sched.segments, sched.starts)
    ):
        H = sched.sample(index, start)
        total = superoperator_exp(H, channels, segment.duration) @ total
    return total(rho0)
