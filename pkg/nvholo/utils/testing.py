# -*- coding: utf-8 -*-
"""
Utilities for the test suite.
"""
import numpy as np

from ..quantum import Operator, validate_density_matrix


def assert_operators_close(x, y, atol=1e-12, check_labels=True):
    """Assert two operators are equal entrywise within a tolerance.

    Parameters
    ----------
    x : :obj:`nvholo.quantum.Operator` or array_like
        Operator to check.
    y : :obj:`nvholo.quantum.Operator` or array_like
        Operator to compare to.
    atol : float
        Absolute tolerance on every entry.
    check_labels : bool
        If both inputs are operators, also require the same basis labels.

    Raises
    ------
    AssertionError
        If the shapes, labels or entries differ.
    """
    if (
        check_labels
        and isinstance(x, Operator)
        and isinstance(y, Operator)
        and x.space != y.space
    ):
        raise AssertionError(
            f"""Operators live on different spaces:

            Expected: {y.space}
            Actual: {x.space}
            """
        )
    a = np.asarray(x, dtype=complex)
    b = np.asarray(y, dtype=complex)
    if a.shape != b.shape:
        raise AssertionError(f"Shapes differ: {a.shape} != {b.shape}")
    diff = np.max(np.abs(a - b)) if a.size else 0.0
    if diff > atol:
        raise AssertionError(
            f"""
        Operators are not equal.

        Max difference: {diff:.3e} (atol={atol:.1e})
        Expected: {b}
        Actual: {a}
        """
        )


def assert_physical_state(rho, trace=1e-9, hermitian=1e-9, positivity=1e-8):
    """Assert an operator is a valid density matrix within tolerances.

    Raises
    ------
    AssertionError
        If the trace, Hermiticity or positivity defect is too large.
    """
    defects = validate_density_matrix(rho)
    if (
        defects.trace > trace
        or defects.hermiticity > hermitian
        or defects.min_eigenvalue < -positivity
    ):
        raise AssertionError(f"State is not physical: {defects}")
