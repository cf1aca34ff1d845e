# -*- coding: utf-8 -*-
"""
Run scenarios and write their results.

For every scenario :py:func:`run` writes

- ``<name>_trace.csv`` with columns ``time_us``, ``fidelity`` and one
  ``pop_<label>`` column per basis state of the model, one row per recorded
  step,
- ``<name>_summary.json`` with the fidelity report, the holonomy checks and
  the parameters,
- optionally ``<name>_states.h5`` with the recorded density matrices.

Scenarios may run in a pool of processes. Results are collected in
configuration order so the output does not depend on scheduling.
"""
from dataclasses import dataclass, field
from functools import partial
import logging
import os
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from .dynamics import NumericalInvariantError, TrajectoryResult
from .metrics import fidelity_report, format_percent
from .models.base import run_gate_scenario, verify_holonomy
from .models.calibration import calibrate_channels, calibrate_coupling
from .scenarios import ScenarioConfig
from .utils.expressions import format_operator
from .utils.io import save_dict_to_hdf5, save_to_json, write_csv
from .utils.multiprocessing import map_in_order

logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_INVALID = 1
EXIT_ABORTED = 2


@dataclass
class ScenarioOutcome:
    """Result of one scenario.

    ``exit_code`` is 0 on success, 1 for invalid input and 2 when the
    evolution was aborted because the state stopped being physical.
    """

    name: str
    exit_code: int = EXIT_SUCCESS
    summary: dict = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_SUCCESS


def trace_frame(result: TrajectoryResult) -> pd.DataFrame:
    """Recorded trajectory as a data frame with the trace CSV columns."""
    data = {"time_us": result.times}
    if result.fidelity.size:
        data["fidelity"] = result.fidelity
    else:
        data["fidelity"] = np.full(result.times.shape, np.nan)
    for k, label in enumerate(result.labels):
        data[f"pop_{label}"] = result.populations[:, k]
    return pd.DataFrame(data)


def states_dict(result: TrajectoryResult) -> dict:
    """Recorded states in a form accepted by :py:func:`save_dict_to_hdf5`."""
    return {
        "labels": list(result.labels),
        "times": result.times,
        "states": np.array([s.data for s in result.states]),
        "final_state": result.final_state.data,
        "final_time": result.final_time,
    }


def _output_path(out_dir, name, suffix):
    return os.path.join(out_dir, f"{name}{suffix}")


def run_scenario(
    config: ScenarioConfig,
    out_dir: str,
    dt: float = None,
    save_states: bool = False,
    progress: bool = False,
) -> dict:
    """Simulate one scenario and write its files.

    Parameters
    ----------
    config : :obj:`nvholo.scenarios.ScenarioConfig`
        Scenario to run.
    out_dir : str
        Output directory.
    dt : float, optional
        Step size in us. Overrides the value in the scenario.
    save_states : bool
        Also write the recorded density matrices to HDF5.
    progress : bool
        Show a progress bar for the integration.

    Returns
    -------
    dict
        The summary written to ``<name>_summary.json``.
    """
    spec = config.build_gate_spec()
    if dt is None:
        dt = config.dt
    if dt is None:
        dt = spec.model.default_dt()
    logger.info(f"Running scenario '{config.name}' ({config.gate.value})")
    result = run_gate_scenario(
        spec, dt=dt, record_stride=config.record_stride, progress=progress
    )
    report = fidelity_report(result)
    holonomy = verify_holonomy(spec.model, dt=dt)

    os.makedirs(out_dir, exist_ok=True)
    write_csv(trace_frame(result), _output_path(out_dir, config.name, "_trace.csv"))
    if save_states:
        save_dict_to_hdf5(
            states_dict(result),
            _output_path(out_dir, config.name, "_states.h5"),
        )

    summary = {
        "name": config.name,
        "gate": config.gate.value,
        "parameters": config.parameters,
        "dt": dt,
        **report.to_dict(),
        "gate_error": holonomy.gate_error,
        "holonomy": holonomy.to_dict(),
        "channels": [
            {
                "name": channel.name,
                "rate": channel.rate,
                "operator": format_operator(channel.operator),
            }
            for channel in spec.model.channels
        ],
        "steps": result.steps,
        "rows": int(result.times.size),
    }
    save_to_json(summary, _output_path(out_dir, config.name, "_summary.json"))
    return summary


def _run_guarded(config, out_dir, dt, save_states, progress):
    try:
        summary = run_scenario(
            config, out_dir, dt=dt, save_states=save_states, progress=progress
        )
    except NumericalInvariantError as e:
        logger.error(f"Scenario '{config.name}' aborted: {e}")
        return ScenarioOutcome(config.name, EXIT_ABORTED, error=str(e))
    except ValueError as e:
        logger.error(f"Scenario '{config.name}' is invalid: {e}")
        return ScenarioOutcome(config.name, EXIT_INVALID, error=str(e))
    return ScenarioOutcome(config.name, summary=summary)


def summary_line(outcome: ScenarioOutcome) -> str:
    """One-line description of a scenario outcome."""
    if not outcome.ok:
        status = "ABORTED" if outcome.exit_code == EXIT_ABORTED else "INVALID"
        return f"{outcome.name}: {status}: {outcome.error}"
    s = outcome.summary
    return (
        f"{s['name']}: max fidelity {s['max_fidelity']:.6f} "
        f"({format_percent(s['max_fidelity'])}) at {s['argmax_time_us']:.6e} "
        f"us, final {s['final_fidelity']:.6f}, gate error "
        f"{s['gate_error']:.3e}"
    )


def _exit_code(outcomes: Sequence[ScenarioOutcome]) -> int:
    return max([o.exit_code for o in outcomes], default=EXIT_SUCCESS)


def run_outcomes(
    configs: Sequence[ScenarioConfig],
    out_dir: str,
    dt: float = None,
    n_pool: int = None,
    save_states: bool = False,
    zero_rates: bool = False,
    progress: bool = True,
) -> List[ScenarioOutcome]:
    """Run scenarios and return their outcomes in configuration order."""
    configs = list(configs)
    if zero_rates:
        configs = [c.zero_rates() for c in configs]
    return map_in_order(
        partial(
            _run_guarded,
            out_dir=out_dir,
            dt=dt,
            save_states=save_states,
            progress=False,
        ),
        configs,
        n_pool=n_pool,
        progress=progress,
        desc="Scenarios",
    )


def run(
    configs: Sequence[ScenarioConfig],
    out_dir: str,
    dt: float = None,
    n_pool: int = None,
    save_states: bool = False,
    zero_rates: bool = False,
    progress: bool = True,
) -> int:
    """Run scenarios, write their files and print one line per scenario.

    Parameters
    ----------
    configs : Sequence[ScenarioConfig]
        Scenarios to run.
    out_dir : str
        Output directory.
    dt : float, optional
        Step size in us overriding the scenario files.
    n_pool : int, optional
        Number of processes.
    save_states : bool
        Write the recorded density matrices to HDF5.
    zero_rates : bool
        Set every collapse rate to zero.
    progress : bool
        Show a progress bar over the scenarios.

    Returns
    -------
    int
        0 if every scenario completed, 2 if any scenario was aborted by a
        numerical invariant and 1 if any scenario was invalid otherwise.
    """
    outcomes = run_outcomes(
        configs,
        out_dir,
        dt=dt,
        n_pool=n_pool,
        save_states=save_states,
        zero_rates=zero_rates,
        progress=progress,
    )
    for outcome in outcomes:
        print(summary_line(outcome))
    return _exit_code(outcomes)


def _sweep_point(value, config, parameter, dt):
    point = config.with_parameter(parameter, value)
    spec = point.build_gate_spec()
    step = dt if dt is not None else point.dt
    if step is None:
        step = spec.model.default_dt()
    result = run_gate_scenario(spec, dt=step, record_stride=point.record_stride)
    report = fidelity_report(result)
    holonomy = verify_holonomy(spec.model, dt=step)
    return {
        parameter: value,
        "max_fidelity": report.max_fidelity,
        "argmax_time_us": report.argmax_time,
        "final_fidelity": report.final_fidelity,
        "gate_error": holonomy.gate_error,
        "cyclicity_error": holonomy.cyclicity_error,
        "parallel_transport_max": holonomy.parallel_transport_max,
    }


def sweep(
    config: ScenarioConfig,
    parameter: str,
    grid: Sequence[float],
    out_dir: str,
    dt: float = None,
    n_pool: int = None,
    progress: bool = True,
) -> int:
    """Run one scenario over a grid of values of a parameter.

    Writes ``sweep.csv`` with one row per grid point, in grid order.

    Raises
    ------
    nvholo.scenarios.ConfigError
        If the parameter does not exist for the scenario's gate.
    """
    grid = [float(v) for v in grid]
    if not grid:
        raise ValueError("Sweep grid is empty")
    # Fail early on an unknown parameter
    config.with_parameter(parameter, grid[0])
    logger.info(
        f"Sweeping '{parameter}' over {len(grid)} points for '{config.name}'"
    )
    try:
        rows = map_in_order(
            partial(_sweep_point, config=config, parameter=parameter, dt=dt),
            grid,
            n_pool=n_pool,
            progress=progress,
            desc="Sweep",
        )
    except NumericalInvariantError as e:
        logger.error(f"Sweep of '{config.name}' aborted: {e}")
        return EXIT_ABORTED
    os.makedirs(out_dir, exist_ok=True)
    df = pd.DataFrame(rows)
    write_csv(df, os.path.join(out_dir, "sweep.csv"))
    for row in rows:
        print(
            f"{parameter}={row[parameter]:.6g}: max fidelity "
            f"{row['max_fidelity']:.6f}, gate error {row['gate_error']:.3e}"
        )
    return EXIT_SUCCESS


def verify(
    configs: Sequence[ScenarioConfig],
    out_dir: str = None,
    dt: float = None,
    tolerance: float = 1e-6,
) -> int:
    """Check the holonomy conditions of every scenario's pulse.

    Returns
    -------
    int
        0 if every scenario passes within the tolerance, 1 otherwise.
    """
    rows = []
    for config in configs:
        spec = config.build_gate_spec()
        step = dt if dt is not None else config.dt
        report = verify_holonomy(spec.model, dt=step)
        passed = report.passed(tolerance)
        rows.append({"name": config.name, **report.to_dict(), "passed": passed})
        print(
            f"{config.name}: cyclicity {report.cyclicity_error:.3e}, "
            f"parallel transport {report.parallel_transport_max:.3e}, "
            f"gate error {report.gate_error:.3e} "
            f"[{'PASS' if passed else 'FAIL'}]"
        )
    if out_dir is not None and rows:
        os.makedirs(out_dir, exist_ok=True)
        write_csv(pd.DataFrame(rows), os.path.join(out_dir, "holonomy.csv"))
    return EXIT_SUCCESS if all(r["passed"] for r in rows) else EXIT_INVALID


def calibrate(
    out_dir: str,
    channels: bool = True,
    coupling: bool = False,
    dt: float = None,
    n_pool: int = None,
    progress: bool = True,
) -> int:
    """Run the calibrations and write their results.

    The channel calibration writes ``calibration.csv``, ranked by mean
    absolute deviation from the reference one-qubit fidelities. The coupling
    calibration writes ``coupling_calibration.json``.
    """
    os.makedirs(out_dir, exist_ok=True)
    if channels:
        df = calibrate_channels(dt=dt, n_pool=n_pool, progress=progress)
        write_csv(df, os.path.join(out_dir, "calibration.csv"))
        best = df.iloc[0]
        print(
            f"Best collapse operators: A_minus = {best['A_minus']}, "
            f"S_minus = {best['S_minus']}, S_z = {best['S_z']} "
            f"(mean deviation {best['mean_abs_deviation']:.4e})"
        )
    if coupling:
        value = calibrate_coupling()
        save_to_json(
            {"coupling": value, "coupling_mhz": value / (2 * np.pi)},
            os.path.join(out_dir, "coupling_calibration.json"),
        )
        print(f"Calibrated coupling: {value:.6f} rad/us")
    return EXIT_SUCCESS
