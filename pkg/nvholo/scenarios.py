# -*- coding: utf-8 -*-
"""
Scenario configuration files.

Scenario files use the INI grammar read by :py:mod:`configparser`. Every
section is one scenario and the ``[DEFAULT]`` section holds shared keys.
Numeric values may be arithmetic expressions such as ``2*pi*300`` and
operators are sums of ket-bra terms such as ``|0><0| - |1><1|``. See
``docs/scenario-files.rst`` for the full list of keys.
"""
import configparser
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
import logging
import os
from typing import Dict, List, Optional, Tuple

import numpy as np

from .dynamics import CollapseChannel
from .models.base import GateSpec
from .models.one_qubit import (
    GAMMA_X,
    GAMMA_Y,
    GAMMA_Z,
    QUBIT_SPACE,
    RABI_FREQUENCY,
    OneQubitModel,
    default_nv_channels,
)
from .models.one_qubit import SPACE as ONE_QUBIT_SPACE
from .models.two_qubit import (
    COMPUTATIONAL_SPACE,
    DEFAULT_COUPLING,
    KAPPA,
    FidelityTarget,
    RatioConvention,
    TwoQubitModel,
    cavity_decay_channel,
    couplings_from_ratio,
    two_qubit_embedding,
)
from .models.two_qubit import SPACE as TWO_QUBIT_SPACE
from .pulses import EnvelopeShape, PulseEnvelope
from .quantum import StateVector
from .utils.expressions import (
    evaluate_real,
    parse_amplitudes,
    parse_operator,
)

logger = logging.getLogger(__name__)

BUNDLED_PREFIX = "bundled:"


class ConfigError(ValueError):
    """Exception raised when a scenario file is invalid"""

    pass


class GateKind(str, Enum):
    ONE_QUBIT = "one_qubit"
    TWO_QUBIT = "two_qubit"


@dataclass(frozen=True)
class ChannelSpec:
    """Extra collapse channel given by a rate and a ket-bra expression."""

    name: str
    rate: float
    expression: str


_COMMON_KEYS = {
    "gate",
    "theta",
    "initial_state",
    "envelope",
    "pulse_area",
    "allow_non_cyclic",
    "idle_time",
    "dt",
    "record_stride",
    "seed",
}

_GATE_KEYS = {
    GateKind.ONE_QUBIT: _COMMON_KEYS
    | {"rabi_peak", "gamma_y", "gamma_x", "gamma_z"},
    GateKind.TWO_QUBIT: _COMMON_KEYS
    | {
        "vartheta",
        "kappa",
        "coupling",
        "eta1",
        "eta2",
        "ratio_convention",
        "fidelity_target",
    },
}

_RATE_DEFAULTS = {
    GateKind.ONE_QUBIT: {
        "gamma_y": GAMMA_Y,
        "gamma_x": GAMMA_X,
        "gamma_z": GAMMA_Z,
    },
    GateKind.TWO_QUBIT: {"kappa": KAPPA},
}

SWEEP_PARAMETERS = (
    "theta",
    "rabi_peak",
    "pulse_area",
    "idle_time",
    "gamma_y",
    "gamma_x",
    "gamma_z",
    "kappa",
    "coupling",
    "eta1",
    "eta2",
    "dt",
)
"""Parameters accepted by :py:meth:`ScenarioConfig.with_parameter`"""

PARAMETER_ALIASES = {"lambda": "coupling", "vartheta": "theta"}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated description of one simulation.

    Parameters
    ----------
    name : str
        Scenario name, used for output file names.
    gate : {'one_qubit', 'two_qubit'}
        Gate model.
    theta : float
        theta of the one-qubit gate or vartheta of the two-qubit gate.
    initial_state : tuple of complex
        Amplitudes over ``0, 1`` (one qubit) or ``00, 01, 10, 11`` (two
        qubits). Must be normalised within 1e-9.
    rabi_peak : float
        Peak Rabi frequency of the one-qubit drive in rad/us.
    envelope : {'square', 'sine_squared'}
        Pulse envelope.
    pulse_area : float
        Pulse area, pi for a cyclic evolution.
    allow_non_cyclic : bool
        Accept a pulse area other than pi.
    idle_time : float
        Free evolution after the pulse in us.
    rates : dict
        ``gamma_y``, ``gamma_x``, ``gamma_z`` or ``kappa`` in rad/us.
    operators : dict
        Overrides of the default one-qubit channel operators.
    channels : tuple of :obj:`ChannelSpec`
        Extra collapse channels.
    coupling : float, optional
        Effective Rabi frequency lambda of the two-qubit model in rad/us.
    eta1, eta2 : float, optional
        Explicit two-qubit couplings. Take precedence over ``coupling``.
    ratio_convention : {'amplitude', 'squared'}
        How ``coupling`` is split into ``eta1`` and ``eta2``.
    fidelity_target : {'gate', 'full_transfer'}
        Target state of the two-qubit gate.
    dt : float, optional
        Step size in us. Defaults to the model's default step.
    record_stride : int
        Record every ``record_stride`` steps.
    seed : int
        Reserved, the simulations are deterministic.
    source : str
        File the scenario was read from.
    """

    name: str
    gate: GateKind
    theta: float
    initial_state: Tuple[complex, ...]
    rabi_peak: float = RABI_FREQUENCY
    envelope: EnvelopeShape = EnvelopeShape.SQUARE
    pulse_area: float = np.pi
    allow_non_cyclic: bool = False
    idle_time: float = 0.0
    rates: Dict[str, float] = field(default_factory=dict)
    operators: Dict[str, str] = field(default_factory=dict)
    channels: Tuple[ChannelSpec, ...] = ()
    coupling: Optional[float] = None
    eta1: Optional[float] = None
    eta2: Optional[float] = None
    ratio_convention: RatioConvention = RatioConvention.AMPLITUDE
    fidelity_target: FidelityTarget = FidelityTarget.GATE
    dt: Optional[float] = None
    record_stride: int = 1
    seed: int = 0
    source: str = ""

    def __post_init__(self):
        try:
            object.__setattr__(self, "gate", GateKind(self.gate))
        except ValueError:
            self._fail("gate", f"unknown gate '{self.gate}'")
        for name, enum in (
            ("envelope", EnvelopeShape),
            ("ratio_convention", RatioConvention),
            ("fidelity_target", FidelityTarget),
        ):
            try:
                object.__setattr__(self, name, enum(getattr(self, name)))
            except ValueError:
                self._fail(
                    name,
                    f"unknown value '{getattr(self, name)}', choose from "
                    f"{[e.value for e in enum]}",
                )
        rates = dict(_RATE_DEFAULTS[self.gate])
        for key, value in self.rates.items():
            if key not in rates:
                self._fail(key, f"not a rate of the {self.gate.value} model")
            rates[key] = float(value)
        object.__setattr__(self, "rates", rates)
        object.__setattr__(
            self, "initial_state", tuple(complex(a) for a in self.initial_state)
        )
        object.__setattr__(self, "channels", tuple(self.channels))
        self._validate()

    def _fail(self, key, message):
        raise ConfigError(
            f"{self.source or '<config>'}: [{self.name}] {key}: {message}"
        )

    def _validate(self):
        for key, rate in self.rates.items():
            if not np.isfinite(rate) or rate < 0:
                self._fail(key, f"rate must be non-negative, got {rate}")
        for channel in self.channels:
            if not np.isfinite(channel.rate) or channel.rate < 0:
                self._fail(
                    f"channel.{channel.name}",
                    f"rate must be non-negative, got {channel.rate}",
                )
        expected = 2 if self.gate is GateKind.ONE_QUBIT else 4
        if len(self.initial_state) != expected:
            self._fail(
                "initial_state",
                f"expected {expected} amplitudes, got "
                f"{len(self.initial_state)}",
            )
        norm = np.linalg.norm(self.initial_state)
        if abs(norm - 1) > 1e-9:
            self._fail("initial_state", f"not normalised, norm is {norm:.12f}")
        if self.gate is GateKind.TWO_QUBIT:
            embedding = two_qubit_embedding()
            for label, amp in zip(COMPUTATIONAL_SPACE.labels, self.initial_state):
                if label not in embedding and abs(amp) > 0:
                    self._fail(
                        "initial_state",
                        f"weight on '{label}' is outside the single-excitation "
                        f"block, only {sorted(embedding)} are supported",
                    )
            if (self.eta1 is None) != (self.eta2 is None):
                self._fail("eta1", "eta1 and eta2 must be given together")
            if self.eta1 is not None and self.coupling is not None:
                self._fail("coupling", "cannot be combined with eta1 and eta2")
            if self.coupling is not None and not self.coupling > 0:
                self._fail("coupling", "must be positive")
        if not self.rabi_peak > 0:
            self._fail("rabi_peak", "must be positive")
        if not self.pulse_area > 0:
            self._fail("pulse_area", "must be positive")
        if self.idle_time < 0:
            self._fail("idle_time", "must be non-negative")
        if self.dt is not None and not self.dt > 0:
            self._fail("dt", "must be positive")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            self._fail("record_stride", "must be a positive integer")

    @property
    def parameters(self) -> dict:
        """Scalar parameters of the scenario, for summaries."""
        params = {
            "theta": self.theta,
            "initial_state": list(self.initial_state),
            "envelope": self.envelope.value,
            "pulse_area": self.pulse_area,
            "idle_time": self.idle_time,
            "record_stride": self.record_stride,
            "dt": self.dt,
            "seed": self.seed,
        }
        params.update(self.rates)
        if self.gate is GateKind.ONE_QUBIT:
            params["rabi_peak"] = self.rabi_peak
            params["operators"] = dict(self.operators)
        else:
            eta1, eta2 = self.couplings()
            params.update(
                coupling=float(np.hypot(eta1, eta2)),
                eta1=eta1,
                eta2=eta2,
                ratio_convention=self.ratio_convention.value,
                fidelity_target=self.fidelity_target.value,
            )
        return params

    def couplings(self) -> Tuple[float, float]:
        """``(eta1, eta2)`` of the two-qubit model."""
        if self.eta1 is not None:
            return float(self.eta1), float(self.eta2)
        coupling = DEFAULT_COUPLING if self.coupling is None else self.coupling
        eta1, eta2 = couplings_from_ratio(
            self.theta, coupling, self.ratio_convention
        )
        return float(eta1), float(eta2)

    def collapse_channels(self) -> List[CollapseChannel]:
        """Default channels with overrides followed by the extra channels."""
        if self.gate is GateKind.ONE_QUBIT:
            space = ONE_QUBIT_SPACE
            channels = default_nv_channels(
                space, operators=self.operators, **self.rates
            )
        else:
            space = TWO_QUBIT_SPACE
            channels = [cavity_decay_channel(self.rates["kappa"])]
        for spec in self.channels:
            try:
                operator = parse_operator(spec.expression, space)
            except ValueError as e:
                self._fail(f"channel.{spec.name}", str(e))
            channels.append(CollapseChannel(operator, spec.rate, spec.name))
        return channels

    def build_gate_spec(self) -> GateSpec:
        """Model, initial state and target described by the scenario."""
        channels = self.collapse_channels()
        if self.gate is GateKind.ONE_QUBIT:
            envelope = PulseEnvelope.for_area(
                self.envelope, self.rabi_peak, self.pulse_area
            )
            model = OneQubitModel(
                self.theta,
                envelope,
                channels=channels,
                allow_non_cyclic=self.allow_non_cyclic,
            )
            state = StateVector(QUBIT_SPACE, self.initial_state)
            target = None
        else:
            eta1, eta2 = self.couplings()
            model = TwoQubitModel(
                self.theta,
                eta1,
                eta2,
                kappa=self.rates["kappa"],
                shape=self.envelope,
                channels=channels,
                allow_non_cyclic=self.allow_non_cyclic,
                pulse_area=self.pulse_area,
            )
            state = StateVector(COMPUTATIONAL_SPACE, self.initial_state)
            target = (
                model.full_transfer_target()
                if self.fidelity_target is FidelityTarget.FULL_TRANSFER
                else None
            )
        return GateSpec(
            model,
            state,
            target=target,
            idle_time=self.idle_time,
            name=self.name,
        )

    def zero_rates(self) -> "ScenarioConfig":
        """Copy of the scenario with every collapse rate set to zero."""
        return replace(
            self,
            rates={key: 0.0 for key in self.rates},
            channels=tuple(replace(c, rate=0.0) for c in self.channels),
        )

    def with_parameter(self, parameter: str, value: float) -> "ScenarioConfig":
        """Copy of the scenario with one numeric parameter changed.

        Raises
        ------
        ConfigError
            If the parameter does not exist for this gate.
        """
        name = PARAMETER_ALIASES.get(parameter, parameter)
        if name not in SWEEP_PARAMETERS:
            raise ConfigError(
                f"Unknown parameter '{parameter}'. Choose from: "
                f"{list(SWEEP_PARAMETERS) + list(PARAMETER_ALIASES)}"
            )
        if name in _RATE_DEFAULTS[self.gate]:
            return replace(self, rates={**self.rates, name: float(value)})
        if name not in _GATE_KEYS[self.gate]:
            raise ConfigError(
                f"Parameter '{parameter}' does not apply to the "
                f"{self.gate.value} model"
            )
        if name == "coupling":
            return replace(self, coupling=float(value), eta1=None, eta2=None)
        return replace(self, **{name: float(value)})


_FLOAT_KEYS = {
    "theta",
    "rabi_peak",
    "pulse_area",
    "idle_time",
    "coupling",
    "eta1",
    "eta2",
    "dt",
}


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in {"1", "yes", "true", "on"}:
        return True
    if lowered in {"0", "no", "false", "off"}:
        return False
    raise ValueError(f"'{value}' is not a boolean")


def _parse_section(section, defaults, source) -> ScenarioConfig:
    name = section.name

    def fail(key, message):
        raise ConfigError(f"{source}: [{name}] {key}: {message}")

    if "gate" not in section:
        fail("gate", "missing required key")
    try:
        gate = GateKind(section["gate"].strip())
    except ValueError:
        fail(
            "gate",
            f"unknown gate '{section['gate']}', choose from "
            f"{[g.value for g in GateKind]}",
        )
    allowed = _GATE_KEYS[gate]
    other_keys = set().union(
        *(_GATE_KEYS[g] for g in GateKind if g is not gate)
    )
    if "theta" in section and "vartheta" in section:
        fail("vartheta", "conflicts with 'theta', set only one of them")
    kwargs = dict(name=name, gate=gate, source=source)
    rates, operators, channels = {}, {}, []
    for key, raw in section.items():
        inherited = key in defaults and defaults[key] == raw
        try:
            if key.startswith("operator."):
                if gate is not GateKind.ONE_QUBIT:
                    raise KeyError(key)
                parse_operator(raw, ONE_QUBIT_SPACE)
                operators[key.split(".", 1)[1]] = raw.strip()
                continue
            if key.startswith("channel."):
                rate, _, expression = raw.partition(";")
                if not expression.strip():
                    raise ValueError("expected '<rate> ; <operator>'")
                channels.append(
                    ChannelSpec(
                        key.split(".", 1)[1],
                        evaluate_real(rate),
                        expression.strip(),
                    )
                )
                continue
            if key not in allowed:
                raise KeyError(key)
            if key == "gate":
                continue
            if key in ("gamma_y", "gamma_x", "gamma_z", "kappa"):
                rates[key] = evaluate_real(raw)
            elif key == "vartheta":
                kwargs["theta"] = evaluate_real(raw)
            elif key in _FLOAT_KEYS:
                kwargs[key] = evaluate_real(raw)
            elif key == "initial_state":
                kwargs[key] = parse_amplitudes(raw)
            elif key in ("record_stride", "seed"):
                value = evaluate_real(raw)
                if value != int(value):
                    raise ValueError(f"expected an integer, got {raw}")
                kwargs[key] = int(value)
            elif key == "allow_non_cyclic":
                kwargs[key] = _parse_bool(raw)
            else:
                kwargs[key] = raw.strip()
        except KeyError:
            if inherited and (
                key in other_keys or key.startswith("operator.")
            ):
                logger.debug(
                    f"Ignoring default key '{key}' for [{name}] "
                    f"({gate.value})"
                )
                continue
            fail(key, f"unknown key for gate '{gate.value}'")
        except ValueError as e:
            fail(key, str(e))
    for required in ("theta", "initial_state"):
        if required not in kwargs:
            fail(required, "missing required key")
    unknown_ops = set(operators) - {"A_minus", "S_minus", "S_z"}
    if unknown_ops:
        fail(
            f"operator.{sorted(unknown_ops)[0]}",
            "unknown channel, choose from A_minus, S_minus, S_z",
        )
    return ScenarioConfig(
        rates=rates, operators=operators, channels=tuple(channels), **kwargs
    )


def resolve_path(path: str):
    """Resolve ``bundled:<name>`` to a scenario file shipped with nvholo."""
    path = str(path)
    if path.startswith(BUNDLED_PREFIX):
        name = path[len(BUNDLED_PREFIX) :]
        if not name.endswith(".cfg"):
            name += ".cfg"
        resource = resources.files("nvholo.data") / name
        if not resource.is_file():
            raise ConfigError(
                f"Unknown bundled scenario file '{name}'. Available: "
                f"{bundled_configs()}"
            )
        return resource
    return path


def bundled_configs() -> List[str]:
    """Names of the scenario files shipped with nvholo."""
    return sorted(
        entry.name[: -len(".cfg")]
        for entry in resources.files("nvholo.data").iterdir()
        if entry.name.endswith(".cfg")
    )


def load_config(path) -> List[ScenarioConfig]:
    """Read and validate every scenario in a file.

    Parameters
    ----------
    path : str
        Path to the file or ``bundled:<name>`` for a bundled file.

    Returns
    -------
    list of :obj:`ScenarioConfig`
        Scenarios in file order. Empty for a file without sections.

    Raises
    ------
    ConfigError
        If the file is missing, cannot be parsed or a value is invalid. The
        message names the file, the section and the key.
    """
    resolved = resolve_path(path)
    source = str(path)
    parser = configparser.ConfigParser(
        interpolation=None,
        inline_comment_prefixes=("#",),
        empty_lines_in_values=False,
    )
    parser.optionxform = str
    try:
        if isinstance(resolved, str):
            if not os.path.isfile(resolved):
                raise ConfigError(f"{source}: file not found")
            with open(resolved, encoding="utf-8") as f:
                parser.read_file(f, source=source)
        else:
            parser.read_string(
                resolved.read_text(encoding="utf-8"), source=source
            )
    except configparser.Error as e:
        raise ConfigError(f"{source}: {e}")
    defaults = parser.defaults()
    configs = [
        _parse_section(parser[name], defaults, source)
        for name in parser.sections()
    ]
    names = [c.name for c in configs]
    logger.info(f"Loaded {len(configs)} scenario(s) from {source}: {names}")
    return configs
