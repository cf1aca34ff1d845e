# -*- coding: utf-8 -*-
"""
Tests for reading and validating scenario files.
"""
import textwrap

import numpy as np
from numpy.testing import assert_allclose
import pytest

from nvholo.dynamics import evolve_superoperator
from nvholo.models.base import PulseAreaError, run_gate_scenario
from nvholo.models.calibration import (
    REFERENCE_ONE_QUBIT_FIDELITIES,
    REFERENCE_TWO_QUBIT_FIDELITY,
)
from nvholo.models.one_qubit import GAMMA_Y, GAMMA_Z, OneQubitModel
from nvholo.models.two_qubit import (
    DEFAULT_COUPLING,
    KAPPA,
    FidelityTarget,
    TwoQubitModel,
)
from nvholo.pulses import EnvelopeShape
from nvholo.quantum import density_matrix
from nvholo.scenarios import (
    ChannelSpec,
    ConfigError,
    GateKind,
    ScenarioConfig,
    bundled_configs,
    load_config,
    resolve_path,
)


@pytest.fixture()
def write_config(tmp_path):
    def func(text, name="scenarios.cfg"):
        path = tmp_path / name
        path.write_text(textwrap.dedent(text))
        return str(path)

    return func


def test_load_one_qubit(write_config):
    path = write_config(
        """
        [hadamard]
        gate = one_qubit
        theta = pi/4
        initial_state = 1, 0
        gamma_x = 2*pi*1.0
        """
    )
    (config,) = load_config(path)
    assert config.name == "hadamard"
    assert config.gate is GateKind.ONE_QUBIT
    assert config.theta == pytest.approx(np.pi / 4)
    assert config.initial_state == (1, 0)
    assert config.envelope is EnvelopeShape.SQUARE
    assert config.rates["gamma_x"] == pytest.approx(2 * np.pi)
    assert config.rates["gamma_y"] == GAMMA_Y
    assert config.source == path


def test_defaults_shared_and_order_kept(write_config):
    path = write_config(
        """
        [DEFAULT]
        gate = one_qubit
        initial_state = 0, 1

        [b]
        theta = pi/2

        [a]
        theta = 0
        envelope = sine_squared
        """
    )
    configs = load_config(path)
    assert [c.name for c in configs] == ["b", "a"]
    assert configs[1].envelope is EnvelopeShape.SINE_SQUARED
    assert configs[0].initial_state == (0, 1)


def test_empty_file(write_config):
    assert load_config(write_config("# nothing here\n")) == []


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="file not found"):
        load_config(str(tmp_path / "missing.cfg"))


def test_syntax_error(write_config):
    with pytest.raises(ConfigError):
        load_config(write_config("theta = 1\n"))


@pytest.mark.parametrize(
    "body, key",
    [
        ("theta = pi/4\ninitial_state = 1, 0\n", "gate"),
        ("gate = one_qubit\ninitial_state = 1, 0\n", "theta"),
        ("gate = one_qubit\ntheta = 0\n", "initial_state"),
        ("gate = three_qubit\ntheta = 0\ninitial_state = 1, 0\n", "gate"),
        ("gate = one_qubit\ntheta = 0\ninitial_state = 1, 1\n", "initial_state"),
        ("gate = one_qubit\ntheta = 0\ninitial_state = 1\n", "initial_state"),
        (
            "gate = one_qubit\ntheta = 0\ninitial_state = 1, 0\n"
            "gamma_x = -1\n",
            "gamma_x",
        ),
        (
            "gate = one_qubit\ntheta = 0\ninitial_state = 1, 0\n"
            "kappa = 1\n",
            "kappa",
        ),
        (
            "gate = one_qubit\ntheta = 0\ninitial_state = 1, 0\n"
            "envelope = gaussian\n",
            "envelope",
        ),
        (
            "gate = one_qubit\ntheta = 0\ninitial_state = 1, 0\n"
            "theta_typo = 1\n",
            "theta_typo",
        ),
        (
            "gate = one_qubit\ntheta = import os\ninitial_state = 1, 0\n",
            "theta",
        ),
        (
            "gate = one_qubit\ntheta = 0\ninitial_state = 1, 0\n"
            "record_stride = 2.5\n",
            "record_stride",
        ),
        (
            "gate = one_qubit\ntheta = 0\ninitial_state = 1, 0\n"
            "operator.S_z = |2><2|\n",
            "operator.S_z",
        ),
        (
            "gate = one_qubit\ntheta = 0\ninitial_state = 1, 0\n"
            "operator.T1 = |0><1|\n",
            "operator.T1",
        ),
        (
            "gate = one_qubit\ntheta = 0\ninitial_state = 1, 0\n"
            "channel.extra = 1.0\n",
            "channel.extra",
        ),
        (
            "gate = two_qubit\nvartheta = 0\ninitial_state = 1, 0, 0, 0\n",
            "initial_state",
        ),
        (
            "gate = two_qubit\nvartheta = 0\ninitial_state = 0, 0, 1, 0\n"
            "eta1 = 1\n",
            "eta1",
        ),
        (
            "gate = two_qubit\nvartheta = 0\ninitial_state = 0, 0, 1, 0\n"
            "operator.S_z = |G><G|\n",
            "operator.S_z",
        ),
    ],
)
def test_invalid_values_name_the_key(write_config, body, key):
    path = write_config("[broken]\n" + body)
    with pytest.raises(ConfigError) as excinfo:
        load_config(path)
    assert str(excinfo.value).startswith(f"{path}: [broken] {key}:")


def test_inherited_keys_for_other_gate_ignored(write_config):
    """One-qubit defaults do not break a two-qubit section"""
    path = write_config(
        """
        [DEFAULT]
        gamma_x = 2*pi*1.5
        operator.S_z = |e><e|

        [cavity]
        gate = two_qubit
        vartheta = pi/4
        initial_state = 0, 0, 1, 0
        """
    )
    (config,) = load_config(path)
    assert config.rates == {"kappa": KAPPA}
    assert config.operators == {}


@pytest.mark.parametrize(
    "default, gate, state",
    [
        ("gama_x = 2*pi*1.5", "one_qubit", "1, 0"),
        ("kapa = 2*pi*0.056", "two_qubit", "0, 0, 1, 0"),
        ("operator.S_z = |e><e|\nthetta = pi/4", "one_qubit", "1, 0"),
    ],
)
def test_inherited_unknown_key_rejected(write_config, default, gate, state):
    """A misspelt default is an error in every section that inherits it"""
    path = write_config(
        f"[DEFAULT]\n{default}\n\n[gate]\ngate = {gate}\ntheta = pi/4\n"
        f"initial_state = {state}\n"
    )
    with pytest.raises(ConfigError) as excinfo:
        load_config(path)
    message = str(excinfo.value)
    assert message.startswith(f"{path}: [gate] ")
    assert "unknown key" in message
    assert default.split("\n")[-1].split(" =")[0] in message


def test_inherited_two_qubit_keys_ignored_for_one_qubit(write_config):
    path = write_config(
        """
        [DEFAULT]
        kappa = 2*pi*0.056
        coupling = 134.9

        [hadamard]
        gate = one_qubit
        theta = pi/4
        initial_state = 1, 0
        """
    )
    (config,) = load_config(path)
    assert "kappa" not in config.rates
    assert config.theta == pytest.approx(np.pi / 4)


@pytest.mark.parametrize(
    "default, body",
    [
        ("", "theta = pi/4\nvartheta = pi/4\n"),
        ("theta = pi/4\n", "vartheta = pi/8\n"),
    ],
)
def test_theta_and_vartheta_conflict(write_config, default, body):
    path = write_config(
        f"[DEFAULT]\n{default}\n[cavity]\ngate = two_qubit\n"
        f"initial_state = 0, 0, 1, 0\n{body}"
    )
    with pytest.raises(ConfigError) as excinfo:
        load_config(path)
    assert str(excinfo.value).startswith(f"{path}: [cavity] vartheta:")
    assert "theta" in str(excinfo.value)


def test_theta_alias_for_two_qubit(write_config):
    path = write_config(
        "[cavity]\ngate = two_qubit\ntheta = pi/4\n"
        "initial_state = 0, 0, 1, 0\n"
    )
    (config,) = load_config(path)
    assert config.theta == pytest.approx(np.pi / 4)


def test_channel_key(write_config):
    path = write_config(
        """
        [extra]
        gate = one_qubit
        theta = 0
        initial_state = 1, 0
        channel.leak = 2*pi*0.1 ; sqrt(1/2)*(|0><e| + |1><e|)
        """
    )
    (config,) = load_config(path)
    channels = config.collapse_channels()
    assert [c.name for c in channels] == ["A_minus", "S_minus", "S_z", "leak"]
    assert channels[-1].rate == pytest.approx(2 * np.pi * 0.1)
    assert channels[-1].operator.element("1", "e") == pytest.approx(
        np.sqrt(0.5)
    )


def test_channel_with_unknown_label():
    config = ScenarioConfig(
        "bad",
        "one_qubit",
        0.0,
        (1, 0),
        channels=[ChannelSpec("leak", 1.0, "|G><e|")],
    )
    with pytest.raises(ConfigError, match=r"\[bad\] channel.leak"):
        config.collapse_channels()


def test_build_one_qubit_spec():
    config = ScenarioConfig(
        "s",
        "one_qubit",
        np.pi / 2,
        (0, 1),
        rabi_peak=2 * np.pi * 100,
        envelope="sine_squared",
        idle_time=0.001,
        rates={"gamma_x": 0.0},
    )
    spec = config.build_gate_spec()
    assert isinstance(spec.model, OneQubitModel)
    assert spec.model.envelope.peak == pytest.approx(2 * np.pi * 100)
    assert spec.model.envelope.area == pytest.approx(np.pi)
    assert spec.idle_time == 0.001
    assert spec.name == "s"
    assert [c.rate for c in spec.model.channels] == [GAMMA_Y, 0.0, GAMMA_Z]


def test_build_gate_spec_non_cyclic():
    config = ScenarioConfig("s", "one_qubit", 0.0, (1, 0), pulse_area=0.9 * np.pi)
    with pytest.raises(PulseAreaError):
        config.build_gate_spec()
    allowed = ScenarioConfig(
        "s",
        "one_qubit",
        0.0,
        (1, 0),
        pulse_area=0.9 * np.pi,
        allow_non_cyclic=True,
    )
    assert allowed.build_gate_spec().model.envelope.area == pytest.approx(
        0.9 * np.pi
    )


def test_build_two_qubit_spec():
    config = ScenarioConfig("c", "two_qubit", np.pi / 4, (0, 0, 1, 0))
    spec = config.build_gate_spec()
    assert isinstance(spec.model, TwoQubitModel)
    assert spec.model.coupling == pytest.approx(DEFAULT_COUPLING)
    assert spec.embedded_initial_state.amplitude("Psi2") == 1
    assert [c.name for c in spec.model.channels] == ["kappa"]


def test_two_qubit_full_transfer_target():
    config = ScenarioConfig(
        "c",
        "two_qubit",
        np.pi / 2,
        (0, 0, 1, 0),
        fidelity_target=FidelityTarget.FULL_TRANSFER,
    )
    spec = config.build_gate_spec()
    assert spec.target.amplitude("Psi1") == 1


def test_explicit_couplings():
    config = ScenarioConfig(
        "c", "two_qubit", np.pi / 4, (0, 0, 1, 0), eta1=3.0, eta2=4.0
    )
    assert config.couplings() == (3.0, 4.0)
    assert config.parameters["coupling"] == pytest.approx(5.0)


def test_parameters_one_qubit():
    config = ScenarioConfig("s", "one_qubit", 0.5, (1, 0))
    params = config.parameters
    assert params["theta"] == 0.5
    assert params["envelope"] == "square"
    assert set(["gamma_y", "gamma_x", "gamma_z", "rabi_peak"]) <= set(params)


def test_zero_rates():
    config = ScenarioConfig(
        "s",
        "one_qubit",
        0.5,
        (1, 0),
        channels=[ChannelSpec("leak", 1.0, "|0><e|")],
    ).zero_rates()
    assert set(config.rates.values()) == {0.0}
    assert [c.rate for c in config.collapse_channels()] == [0.0] * 4


@pytest.mark.parametrize(
    "parameter, value, attribute",
    [
        ("theta", 0.3, "theta"),
        ("vartheta", 0.3, "theta"),
        ("idle_time", 0.01, "idle_time"),
        ("dt", 1e-6, "dt"),
    ],
)
def test_with_parameter(parameter, value, attribute):
    config = ScenarioConfig("s", "one_qubit", 0.5, (1, 0))
    assert getattr(config.with_parameter(parameter, value), attribute) == value


def test_with_parameter_rate():
    config = ScenarioConfig("s", "one_qubit", 0.5, (1, 0))
    assert config.with_parameter("gamma_z", 2.0).rates["gamma_z"] == 2.0


def test_with_parameter_lambda_clears_etas():
    config = ScenarioConfig(
        "c", "two_qubit", np.pi / 4, (0, 0, 1, 0), eta1=3.0, eta2=4.0
    )
    swept = config.with_parameter("lambda", 10.0)
    assert swept.eta1 is None
    assert swept.couplings()[0] == pytest.approx(10.0 * np.sin(np.pi / 8))


@pytest.mark.parametrize(
    "gate, state, parameter",
    [
        ("one_qubit", (1, 0), "coupling"),
        ("two_qubit", (0, 0, 1, 0), "rabi_peak"),
        ("one_qubit", (1, 0), "banana"),
    ],
)
def test_with_parameter_invalid(gate, state, parameter):
    config = ScenarioConfig("s", gate, 0.5, state)
    with pytest.raises(ConfigError):
        config.with_parameter(parameter, 1.0)


def test_bundled_configs():
    assert bundled_configs() == [
        "paper_fig2",
        "paper_fig3",
        "paper_fig4",
    ]


def test_resolve_unknown_bundled():
    with pytest.raises(ConfigError, match="Unknown bundled scenario"):
        resolve_path("bundled:missing")


def test_load_bundled():
    configs = load_config("bundled:paper_fig2")
    assert [c.name for c in configs] == [
        "hadamard_0",
        "not_0",
        "hadamard_1",
        "not_1",
    ]
    assert all(c.record_stride == 10 for c in configs)
    assert configs[0].operators == {
        "A_minus": "|0><1|",
        "S_minus": "|0><1|",
        "S_z": "|e><e|",
    }
    assert [c.name for c in load_config("bundled:paper_fig3")] == [
        "hadamard_plus",
        "not_plus",
    ]
    (two_qubit,) = load_config("bundled:paper_fig4")
    assert two_qubit.gate is GateKind.TWO_QUBIT


@pytest.mark.integration_test
@pytest.mark.timeout(10)
@pytest.mark.parametrize("name", ["paper_fig2", "paper_fig3"])
def test_bundled_one_qubit_fidelities(name):
    """Every bundled scenario lies within 0.01 of its reference value"""
    for config in load_config(f"bundled:{name}"):
        result = run_gate_scenario(
            config.build_gate_spec(), record_stride=config.record_stride
        )
        reference = REFERENCE_ONE_QUBIT_FIDELITIES[config.name]
        assert reference - 0.01 <= result.max_fidelity <= 1.0


@pytest.mark.integration_test
@pytest.mark.timeout(5)
def test_bundled_two_qubit_fidelity():
    (config,) = load_config("bundled:paper_fig4")
    result = run_gate_scenario(config.build_gate_spec())
    assert result.max_fidelity == pytest.approx(
        REFERENCE_TWO_QUBIT_FIDELITY, abs=0.003
    )


@pytest.mark.integration_test
@pytest.mark.parametrize("name", ["paper_fig2", "paper_fig3", "paper_fig4"])
def test_bundled_matches_superoperator(name):
    """RK4 agrees with the exact propagator and stays physical"""
    for config in load_config(f"bundled:{name}"):
        spec = config.build_gate_spec()
        schedule = spec.schedule()
        assert schedule.is_piecewise_constant
        result = run_gate_scenario(spec, record_stride=config.record_stride)
        exact = evolve_superoperator(
            schedule,
            density_matrix(spec.embedded_initial_state),
            spec.model.channels,
        )
        assert_allclose(result.final_state.data, exact.data, atol=1e-6)
        assert result.max_defects["trace"] < 1e-9
        assert result.max_defects["hermiticity"] < 1e-9
        assert result.max_defects["min_eigenvalue"] > -1e-8
