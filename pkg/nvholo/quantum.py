# -*- coding: utf-8 -*-
"""
Dense linear algebra over small labelled Hilbert spaces.

All operators, state vectors and density matrices in nvholo carry the
:py:class:`HilbertSpace` they act on so that dimension and basis-ordering
mistakes are caught when operators are combined. The objects are immutable:
the underlying numpy arrays are flagged read-only after construction.
"""
from collections import namedtuple
from dataclasses import dataclass
import logging
from numbers import Number
from typing import Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from . import config

logger = logging.getLogger(__name__)


class DimensionMismatchError(ValueError):
    """Exception raised when objects live on incompatible spaces"""

    pass


class NonHermitianError(ValueError):
    """Exception raised when a Hermitian operator is required"""

    pass


class NonFiniteError(ValueError):
    """Exception raised when an operator contains NaNs or infinities"""

    pass


DensityDefects = namedtuple(
    "DensityDefects", ["hermiticity", "trace", "min_eigenvalue"]
)
"""Defects of a density matrix: max |rho - rho^dagger|, |tr(rho) - 1| and the
smallest eigenvalue of the Hermitian part."""


@dataclass(frozen=True)
class HilbertSpace:
    """Finite-dimensional Hilbert space with a labelled orthonormal basis.

    Parameters
    ----------
    labels : Sequence[str]
        Names of the basis states, in order. Must be unique and non-empty.
    """

    labels: Tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        if not labels:
            raise ValueError("A Hilbert space needs at least one basis label")
        if len(set(labels)) != len(labels):
            raise ValueError(f"Basis labels must be unique, got: {labels}")
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        """Dimension of the space"""
        return len(self.labels)

    def index(self, label: str) -> int:
        """Position of a basis label."""
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(
                f"Unknown basis label: {label}. Space has: {self.labels}"
            )

    def __contains__(self, label) -> bool:
        return str(label) in self.labels

    def __repr__(self):
        return f"HilbertSpace({list(self.labels)})"


def _check_same_space(*objects):
    spaces = [o.space for o in objects]
    if any(s != spaces[0] for s in spaces[1:]):
        raise DimensionMismatchError(
            f"Objects live on different spaces: {spaces}"
        )
    return spaces[0]


class StateVector:
    """Pure state on a labelled space.

    Parameters
    ----------
    space : :obj:`HilbertSpace`
        Space the state lives on.
    amplitudes : array_like
        Complex amplitudes, one per basis label.
    """

    __slots__ = ("space", "amplitudes")
    # Defer to the reflected operators for numpy scalars
    __array_ufunc__ = None

    def __init__(self, space: HilbertSpace, amplitudes):
        amplitudes = np.array(amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size != space.dim:
            raise DimensionMismatchError(
                f"Expected {space.dim} amplitudes, got {amplitudes.size}"
            )
        amplitudes.setflags(write=False)
        self.space = space
        self.amplitudes = amplitudes

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "StateVector") -> complex:
        """Inner product <self|other>."""
        _check_same_space(self, other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def amplitude(self, label: str) -> complex:
        return complex(self.amplitudes[self.space.index(label)])

    def __add__(self, other):
        _check_same_space(self, other)
        return StateVector(self.space, self.amplitudes + other.amplitudes)

    def __sub__(self, other):
        _check_same_space(self, other)
        return StateVector(self.space, self.amplitudes - other.amplitudes)

    def __neg__(self):
        return StateVector(self.space, -self.amplitudes)

    def __mul__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return StateVector(self.space, scalar * self.amplitudes)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return StateVector(self.space, self.amplitudes / scalar)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __repr__(self):
        return f"StateVector({self.space.labels}, {self.amplitudes})"


class Operator:
    """Dense operator on a labelled space.

    Parameters
    ----------
    space : :obj:`HilbertSpace`
        Space the operator acts on.
    data : array_like
        Square complex matrix of shape ``(space.dim, space.dim)``.
    """

    __slots__ = ("space", "data")
    __array_ufunc__ = None

    def __init__(self, space: HilbertSpace, data):
        data = np.array(data, dtype=complex)
        if data.shape != (space.dim, space.dim):
            raise DimensionMismatchError(
                f"Operator shape {data.shape} does not match space "
                f"dimension {space.dim}"
            )
        data.setflags(write=False)
        self.space = space
        self.data = data

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def dag(self) -> "Operator":
        """Conjugate transpose"""
        return adjoint(self)

    def element(self, bra: str, ket: str) -> complex:
        """Matrix element <bra|A|ket> by label."""
        return complex(
            self.data[self.space.index(bra), self.space.index(ket)]
        )

    def hermiticity_defect(self) -> float:
        """Maximum entrywise |A - A^dagger|."""
        return float(np.max(np.abs(self.data - self.data.conj().T)))

    def is_hermitian(self, atol: float = None) -> bool:
        if atol is None:
            atol = config.tolerances.hermitian
        return self.hermiticity_defect() <= atol

    def _wrap(self, data):
        return Operator(self.space, data)

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            _check_same_space(self, other)
            return StateVector(self.space, self.data @ other.amplitudes)
        if isinstance(other, Operator):
            _check_same_space(self, other)
            return Operator(self.space, self.data @ other.data)
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        _check_same_space(self, other)
        return Operator(self.space, self.data + other.data)

    def __sub__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        _check_same_space(self, other)
        return Operator(self.space, self.data - other.data)

    def __neg__(self):
        return Operator(self.space, -self.data)

    def __mul__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return Operator(self.space, scalar * self.data)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Operator(self.space, self.data / scalar)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.data, dtype=dtype)

    def __repr__(self):
        return (
            f"{self.__class__.__name__}({list(self.space.labels)},\n"
            f"{self.data})"
        )


class DensityMatrix(Operator):
    """Hermitian, unit-trace, positive semi-definite operator.

    Parameters
    ----------
    space : :obj:`HilbertSpace`
        Space the state lives on.
    data : array_like
        Matrix entries.
    check : bool
        If true, raise a ValueError when the matrix is not a valid density
        matrix within the tolerances in :py:data:`nvholo.config.tolerances`.
    """

    __slots__ = ()

    def __init__(self, space: HilbertSpace, data, check: bool = True):
        super().__init__(space, data)
        if check:
            defects = validate_density_matrix(self)
            tol = config.tolerances
            if (
                defects.hermiticity > tol.hermitian
                or defects.trace > tol.trace
                or defects.min_eigenvalue < -tol.positivity
            ):
                raise ValueError(f"Not a valid density matrix: {defects}")

    @classmethod
    def from_state(cls, state: StateVector) -> "DensityMatrix":
        """Projector onto a (normalised) pure state."""
        return cls(state.space, np.outer(state.amplitudes, state.amplitudes.conj()))

    @classmethod
    def maximally_mixed(cls, space: HilbertSpace) -> "DensityMatrix":
        return cls(space, np.eye(space.dim) / space.dim)

    def populations(self) -> np.ndarray:
        """Diagonal of the matrix in the space's own basis."""
        return self.data.diagonal().real.copy()

    def _wrap(self, data):
        return DensityMatrix(self.space, data, check=False)


def identity(space: HilbertSpace) -> Operator:
    """Identity operator on a space."""
    return Operator(space, np.eye(space.dim))


def ket(space: HilbertSpace, label: str) -> StateVector:
    """Basis state with the given label."""
    amplitudes = np.zeros(space.dim, dtype=complex)
    amplitudes[space.index(label)] = 1.0
    return StateVector(space, amplitudes)


def basis_states(space: HilbertSpace) -> List[StateVector]:
    """List of the basis states of a space, in label order."""
    return [ket(space, label) for label in space.labels]


def normalize(state: StateVector) -> StateVector:
    """Return the state rescaled to unit norm.

    Raises
    ------
    ValueError
        If the state has zero norm.
    """
    norm = np.linalg.norm(state.amplitudes)
    if norm == 0:
        raise ValueError("Cannot normalise a zero vector")
    return StateVector(state.space, state.amplitudes / norm)


def density_matrix(state: StateVector) -> DensityMatrix:
    """Pure-state density matrix |psi><psi|."""
    return DensityMatrix.from_state(state)


def adjoint(A: Operator) -> Operator:
    """Conjugate transpose of an operator."""
    return A._wrap(A.data.conj().T)


def tensor_product(
    A: Operator, B: Operator, separator: str = ""
) -> Operator:
    """Kronecker product A (x) B.

    The labels of the product space are the concatenated labels of the
    factors, with the first factor varying slowest.
    """
    labels = [
        f"{a}{separator}{b}" for a in A.space.labels for b in B.space.labels
    ]
    return Operator(HilbertSpace(labels), np.kron(A.data, B.data))


def expm_array(a: np.ndarray) -> np.ndarray:
    """Matrix exponential of a square array.

    Uses the scaling-and-squaring Pade algorithm in :code:`scipy.linalg`.

    Raises
    ------
    NonFiniteError
        If the input contains NaNs or infinities.
    """
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("Cannot exponentiate a matrix with non-finite entries")
    return linalg.expm(a)


def matrix_exp(A: Operator) -> Operator:
    """Matrix exponential exp(A) of an operator."""
    return Operator(A.space, expm_array(A.data))


def outer(u: StateVector, v: StateVector) -> Operator:
    """Outer product |u><v|."""
    _check_same_space(u, v)
    return Operator(u.space, np.outer(u.amplitudes, v.amplitudes.conj()))


def trace(A: Operator) -> complex:
    return complex(np.trace(A.data))


def expectation(A: Operator, psi: StateVector) -> complex:
    """Expectation value <psi|A|psi>."""
    _check_same_space(A, psi)
    return complex(np.vdot(psi.amplitudes, A.data @ psi.amplitudes))


def commutator(A: Operator, B: Operator) -> Operator:
    """Commutator [A, B] = AB - BA."""
    _check_same_space(A, B)
    return Operator(A.space, A.data @ B.data - B.data @ A.data)


def _fix_phase(vector: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    """Rotate the phase so the first non-zero component is real-positive."""
    idx = np.flatnonzero(np.abs(vector) > atol)
    if idx.size:
        first = vector[idx[0]]
        vector = vector * (abs(first) / first)
    return vector


def eig_hermitian(A: Operator) -> Tuple[np.ndarray, List[StateVector]]:
    """Eigen-decomposition of a Hermitian operator.

    Eigenvalues are returned in ascending order. Each eigenvector is rotated
    so its first non-zero component is real and positive.

    Raises
    ------
    NonHermitianError
        If the operator is not Hermitian within
        :py:attr:`nvholo.config.ToleranceConfig.hermitian`.
    """
    if not A.is_hermitian():
        raise NonHermitianError(
            "eig_hermitian requires a Hermitian operator, defect: "
            f"{A.hermiticity_defect():.3e}"
        )
    values, vectors = np.linalg.eigh(A.data)
    states = [
        StateVector(A.space, _fix_phase(vectors[:, k]))
        for k in range(A.dim)
    ]
    return values, states


def is_unitary(A: Operator, atol: float = None) -> bool:
    """Check if U^dagger U = I within a tolerance."""
    if atol is None:
        atol = config.tolerances.unitary
    defect = np.max(np.abs(A.data.conj().T @ A.data - np.eye(A.dim)))
    return bool(defect <= atol)


def project(A: Operator, labels: Sequence[str]) -> Operator:
    """Restrict an operator to the subspace spanned by some basis labels.

    Returns the block <i|A|j> for i, j in ``labels`` on a new space with
    those labels, in the given order.
    """
    idx = [A.space.index(label) for label in labels]
    return Operator(HilbertSpace(labels), A.data[np.ix_(idx, idx)])


def embed(
    state: StateVector,
    space: HilbertSpace,
    mapping: Mapping[str, str] = None,
) -> StateVector:
    """Embed a state into a larger space.

    Parameters
    ----------
    state : :obj:`StateVector`
        State to embed.
    space : :obj:`HilbertSpace`
        Target space.
    mapping : Mapping[str, str], optional
        Map from the labels of the state's space to labels of the target
        space. If not specified the labels are used as-is. Labels that are
        missing from the mapping must carry zero amplitude.

    Raises
    ------
    ValueError
        If a label with non-zero amplitude has no image in the target space.
    """
    if mapping is None:
        mapping = {label: label for label in state.space.labels}
    amplitudes = np.zeros(space.dim, dtype=complex)
    for label, amp in zip(state.space.labels, state.amplitudes):
        target = mapping.get(label)
        if target is None or target not in space:
            if abs(amp) > config.tolerances.norm:
                raise ValueError(
                    f"State has weight on '{label}' which has no image in "
                    f"{space}"
                )
            continue
        amplitudes[space.index(target)] += amp
    return StateVector(space, amplitudes)


def validate_density_matrix(rho: Operator) -> DensityDefects:
    """Measure how far an operator is from being a density matrix."""
    data = rho.data
    hermiticity = float(np.max(np.abs(data - data.conj().T)))
    trace_defect = float(abs(np.trace(data) - 1.0))
    min_eig = float(np.linalg.eigvalsh(0.5 * (data + data.conj().T))[0])
    return DensityDefects(hermiticity, trace_defect, min_eig)


def operator_from_terms(
    space: HilbertSpace,
    terms: Iterable[Tuple[Union[complex, float], str, str]],
) -> Operator:
    """Build sum_k c_k |ket_k><bra_k| from (coefficient, ket, bra) terms."""
    data = np.zeros((space.dim, space.dim), dtype=complex)
    for coefficient, ket_label, bra_label in terms:
        data[space.index(ket_label), space.index(bra_label)] += coefficient
    return Operator(space, data)
