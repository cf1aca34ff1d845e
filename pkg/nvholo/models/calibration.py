# -*- coding: utf-8 -*-
"""
Calibration of the under-determined parts of the gate models.

The collapse operators of the one-qubit model are only known through their
rates, so :py:func:`calibrate_channels` scores a grid of candidate operator
assignments against the reference one-qubit fidelities. The two-qubit
coupling only enters through the ratio of the gate time to the cavity
lifetime, :py:func:`calibrate_coupling` finds the coupling that reproduces
the reference two-qubit fidelity.
"""
from functools import partial
import itertools
import logging
from typing import Dict, List, Mapping, Sequence

import numpy as np
import pandas as pd
from scipy import optimize

from ..pulses import EnvelopeShape, PulseEnvelope
from ..quantum import StateVector, normalize
from .base import GateSpec, run_gate_scenario
from .one_qubit import (
    GAMMA_X,
    GAMMA_Y,
    GAMMA_Z,
    QUBIT_SPACE,
    RABI_FREQUENCY,
    OneQubitModel,
    default_nv_channels,
)
from .two_qubit import (
    COMPUTATIONAL_SPACE,
    KAPPA,
    RatioConvention,
    TwoQubitModel,
)
from ..utils.multiprocessing import map_in_order

logger = logging.getLogger(__name__)

REFERENCE_ONE_QUBIT_FIDELITIES = {
    "hadamard_0": 0.9995,
    "not_0": 0.9993,
    "hadamard_1": 0.9883,
    "not_1": 0.9820,
    "hadamard_plus": 0.9720,
    "not_plus": 0.9985,
}
"""Reference maximum fidelities of the one-qubit scenarios"""

REFERENCE_TWO_QUBIT_FIDELITY = 0.9994

ONE_QUBIT_SCENARIOS = {
    "hadamard_0": (np.pi / 4, (1, 0)),
    "not_0": (np.pi / 2, (1, 0)),
    "hadamard_1": (np.pi / 4, (0, 1)),
    "not_1": (np.pi / 2, (0, 1)),
    "hadamard_plus": (np.pi / 4, (1, 1)),
    "not_plus": (np.pi / 2, (1, 1)),
}
"""Gate angle and (unnormalised) initial amplitudes of each scenario"""

QUBIT_CANDIDATES = (
    "|0><1|",
    "|0><e|",
    "|1><e|",
    "sqrt(1/2)*(|0><e| + |1><e|)",
)
"""Candidate lowering operators for ``A_minus`` and ``S_minus``"""

DEPHASING_CANDIDATES = (
    "|0><0| - |1><1|",
    "|e><e|",
    "|e><e| - |0><0| - |1><1|",
)
"""Candidate operators for ``S_z``"""


def channel_candidates(
    lowering: Sequence[str] = QUBIT_CANDIDATES,
    dephasing: Sequence[str] = DEPHASING_CANDIDATES,
) -> List[Dict[str, str]]:
    """Grid of operator assignments in a fixed order."""
    return [
        {"A_minus": a, "S_minus": s, "S_z": z}
        for a, s, z in itertools.product(lowering, lowering, dephasing)
    ]


def one_qubit_reference_specs(
    operators: Mapping[str, str] = None,
    gamma_y: float = GAMMA_Y,
    gamma_x: float = GAMMA_X,
    gamma_z: float = GAMMA_Z,
    envelope: PulseEnvelope = None,
) -> Dict[str, GateSpec]:
    """Gate specs of the six reference one-qubit scenarios."""
    if envelope is None:
        envelope = PulseEnvelope.for_area(EnvelopeShape.SQUARE, RABI_FREQUENCY)
    channels = default_nv_channels(
        gamma_y=gamma_y, gamma_x=gamma_x, gamma_z=gamma_z, operators=operators
    )
    specs = {}
    for name, (theta, amplitudes) in ONE_QUBIT_SCENARIOS.items():
        model = OneQubitModel(theta, envelope, channels=channels)
        state = normalize(StateVector(QUBIT_SPACE, amplitudes))
        specs[name] = GateSpec(model, state, name=name)
    return specs


def score_channels(operators: Mapping[str, str], dt: float = None) -> dict:
    """Maximum fidelity of every reference scenario for an operator set.

    Returns
    -------
    dict
        The operators, one ``fidelity_<scenario>`` entry per scenario and the
        mean and maximum absolute deviation from the reference values.
    """
    row = dict(operators)
    deviations = []
    for name, spec in one_qubit_reference_specs(operators).items():
        result = run_gate_scenario(spec, dt=dt)
        row[f"fidelity_{name}"] = result.max_fidelity
        deviations.append(
            abs(result.max_fidelity - REFERENCE_ONE_QUBIT_FIDELITIES[name])
        )
    row["mean_abs_deviation"] = float(np.mean(deviations))
    row["max_abs_deviation"] = float(np.max(deviations))
    return row


def calibrate_channels(
    candidates: Sequence[Mapping[str, str]] = None,
    dt: float = None,
    n_pool: int = None,
    progress: bool = False,
) -> pd.DataFrame:
    """Rank collapse-operator assignments by agreement with the reference data.

    Parameters
    ----------
    candidates : Sequence[Mapping[str, str]], optional
        Operator assignments to score. Defaults to
        :py:func:`channel_candidates`.
    dt : float, optional
        Step size in us.
    n_pool : int, optional
        Number of processes.
    progress : bool
        Show a progress bar.

    Returns
    -------
    :obj:`pandas.DataFrame`
        One row per candidate sorted by mean absolute deviation. Ties keep
        the candidate order.
    """
    if candidates is None:
        candidates = channel_candidates()
    if not candidates:
        raise ValueError("No candidates to calibrate")
    logger.info(f"Scoring {len(candidates)} collapse-operator assignments")
    rows = map_in_order(
        partial(score_channels, dt=dt),
        candidates,
        n_pool=n_pool,
        progress=progress,
        desc="Calibrating",
    )
    df = pd.DataFrame(rows)
    df.insert(0, "candidate", np.arange(len(df)))
    df = df.sort_values(
        "mean_abs_deviation", kind="mergesort", ignore_index=True
    )
    best = df.iloc[0]
    logger.info(
        f"Best assignment: A_minus={best['A_minus']}, "
        f"S_minus={best['S_minus']}, S_z={best['S_z']} "
        f"(mean deviation {best['mean_abs_deviation']:.4e})"
    )
    return df


def two_qubit_fidelity(
    coupling: float,
    vartheta: float = np.pi / 4,
    kappa: float = KAPPA,
    ratio_convention: RatioConvention = RatioConvention.AMPLITUDE,
    dt: float = None,
) -> float:
    """Maximum fidelity of the two-qubit gate from ``10`` for a coupling."""
    model = TwoQubitModel.from_coupling(
        vartheta, coupling, ratio_convention, kappa=kappa
    )
    state = StateVector(COMPUTATIONAL_SPACE, [0, 0, 1, 0])
    return run_gate_scenario(GateSpec(model, state), dt=dt).max_fidelity


def calibrate_coupling(
    kappa: float = KAPPA,
    vartheta: float = np.pi / 4,
    target_fidelity: float = REFERENCE_TWO_QUBIT_FIDELITY,
    bracket=(2 * np.pi * 1.0, 2 * np.pi * 1e3),
    ratio_convention: RatioConvention = RatioConvention.AMPLITUDE,
    xtol: float = 1e-6,
) -> float:
    """Coupling lambda at which the two-qubit gate reaches a target fidelity.

    The fidelity increases with the coupling because a shorter gate spends
    less time with a photon in the cavity, so the root is bracketed and found
    with :code:`scipy.optimize.brentq`.

    Parameters
    ----------
    kappa : float
        Cavity decay rate in rad/us.
    vartheta : float
        Gate angle.
    target_fidelity : float
        Fidelity to reproduce.
    bracket : tuple
        Lower and upper coupling in rad/us.
    ratio_convention : {'amplitude', 'squared'}
        Ratio convention used to split the coupling.
    xtol : float
        Absolute tolerance on the coupling.

    Raises
    ------
    ValueError
        If the target is not bracketed.
    """
    if kappa <= 0:
        raise ValueError("Calibration requires a positive decay rate")

    def objective(coupling):
        return (
            two_qubit_fidelity(
                coupling, vartheta, kappa, ratio_convention=ratio_convention
            )
            - target_fidelity
        )

    lower, upper = bracket
    f_lower, f_upper = objective(lower), objective(upper)
    if np.sign(f_lower) == np.sign(f_upper):
        raise ValueError(
            f"Target fidelity {target_fidelity} is not bracketed by couplings "
            f"{bracket}: fidelities {f_lower + target_fidelity:.6f} and "
            f"{f_upper + target_fidelity:.6f}"
        )
    coupling = optimize.brentq(objective, lower, upper, xtol=xtol)
    logger.info(
        f"Calibrated coupling: {coupling:.6f} rad/us "
        f"({coupling / (2 * np.pi):.6f} MHz)"
    )
    return float(coupling)
