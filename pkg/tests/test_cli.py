# -*- coding: utf-8 -*-
"""
Tests for the command line interface.
"""
import os
import textwrap
from unittest.mock import patch

import numpy as np
import pandas as pd
import pytest

from nvholo.cli import build_parser, main, parse_grid
from nvholo.dynamics import NumericalInvariantError


@pytest.fixture()
def config_file(tmp_path):
    path = tmp_path / "scenarios.cfg"
    path.write_text(
        textwrap.dedent(
            """
            [DEFAULT]
            gate = one_qubit
            record_stride = 50

            [not_0]
            theta = pi/2
            initial_state = 1, 0

            [hadamard_1]
            theta = pi/4
            initial_state = 0, 1
            """
        )
    )
    return str(path)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("0, pi/4, pi/2", [0.0, np.pi / 4, np.pi / 2]),
        ("1", [1.0]),
        ("0:1:5", [0.0, 0.25, 0.5, 0.75, 1.0]),
        ("2*pi*10:2*pi*20:2", [2 * np.pi * 10, 2 * np.pi * 20]),
    ],
)
def test_parse_grid(text, expected):
    assert parse_grid(text) == pytest.approx(expected)


@pytest.mark.parametrize("text", ["", "0:1", "0:1:0", "0:1:2.5", "a, b"])
def test_parse_grid_invalid(text):
    with pytest.raises(ValueError):
        parse_grid(text)


def test_parser_defaults():
    args = build_parser().parse_args(["run", "file.cfg"])
    assert args.out == "nvholo_output"
    assert args.dt is None
    assert args.n_pool is None
    assert not args.save_states
    assert not args.zero_rates


def test_parser_dt_expression():
    args = build_parser().parse_args(["run", "file.cfg", "--dt", "1/600/2000"])
    assert args.dt == pytest.approx(1 / 1.2e6)


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["run", "file.cfg", "--dt", "-1"])
    assert excinfo.value.code == 1
    assert "dt must be positive" in capsys.readouterr().err


def test_missing_command():
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 1


def test_list_bundled(capsys):
    assert main(["list-bundled"]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "bundled:paper_fig2",
        "bundled:paper_fig3",
        "bundled:paper_fig4",
    ]


def test_run(config_file, tmp_path, capsys):
    out = str(tmp_path / "out")
    assert main(["run", config_file, "--out", out, "--quiet"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line.split(":")[0] for line in lines] == ["not_0", "hadamard_1"]
    for name in ["not_0", "hadamard_1"]:
        assert os.path.exists(os.path.join(out, f"{name}_trace.csv"))
        assert os.path.exists(os.path.join(out, f"{name}_summary.json"))
    assert os.path.exists(os.path.join(out, "nvholo.log"))


def test_run_missing_file(tmp_path, capsys):
    code = main(["run", str(tmp_path / "missing.cfg"), "--out", str(tmp_path)])
    assert code == 1
    assert "file not found" in capsys.readouterr().err


def test_run_invalid_file(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("[bad]\ngate = one_qubit\ntheta = 0\n")
    assert main(["run", str(path), "--out", str(tmp_path)]) == 1
    assert "[bad] initial_state" in capsys.readouterr().err


def test_run_aborted(config_file, tmp_path):
    with patch(
        "nvholo.runner.run_scenario",
        side_effect=NumericalInvariantError("trace defect"),
    ):
        code = main(["run", config_file, "--out", str(tmp_path), "--quiet"])
    assert code == 2


@pytest.mark.parametrize("quiet", [True, False])
def test_quiet_skips_banner(config_file, tmp_path, quiet):
    argv = ["run", config_file, "--out", str(tmp_path)]
    if quiet:
        argv.append("--quiet")
    with patch("nvholo.cli.setup_logger") as mock_setup, patch(
        "nvholo.runner.run_scenario",
        side_effect=NumericalInvariantError("trace defect"),
    ):
        main(argv)
    mock_setup.assert_called_once_with(
        output=str(tmp_path),
        label="nvholo",
        log_level="WARNING" if quiet else "INFO",
        banner=not quiet,
    )


def test_run_invalid_log_level(config_file, tmp_path, capsys):
    code = main(
        ["run", config_file, "--out", str(tmp_path), "--log-level", "LOUD"]
    )
    assert code == 1
    assert "log_level LOUD not understood" in capsys.readouterr().err


def test_sweep(config_file, tmp_path):
    out = str(tmp_path / "sweep")
    code = main(
        [
            "sweep",
            config_file,
            "theta",
            "0, pi/2",
            "--scenario",
            "hadamard_1",
            "--out",
            out,
            "--quiet",
        ]
    )
    assert code == 0
    df = pd.read_csv(os.path.join(out, "sweep.csv"))
    assert list(df["theta"]) == pytest.approx([0.0, np.pi / 2])


def test_sweep_unknown_scenario(config_file, tmp_path, capsys):
    code = main(
        [
            "sweep",
            config_file,
            "theta",
            "0",
            "--scenario",
            "missing",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 1
    assert "Unknown scenario 'missing'" in capsys.readouterr().err


def test_sweep_unknown_parameter(config_file, tmp_path, capsys):
    code = main(
        ["sweep", config_file, "coupling", "1", "--out", str(tmp_path)]
    )
    assert code == 1
    assert "does not apply" in capsys.readouterr().err


def test_verify(config_file, tmp_path, capsys):
    assert main(["verify", config_file, "--out", str(tmp_path), "--quiet"]) == 0
    assert capsys.readouterr().out.count("[PASS]") == 2
    assert os.path.exists(tmp_path / "holonomy.csv")


def test_calibrate_flags(tmp_path):
    with patch("nvholo.cli.calibrate", return_value=0) as mock_calibrate:
        code = main(
            [
                "calibrate",
                "--coupling",
                "--skip-channels",
                "--out",
                str(tmp_path),
                "--n-pool",
                "2",
                "--quiet",
            ]
        )
    assert code == 0
    mock_calibrate.assert_called_once_with(
        str(tmp_path),
        channels=False,
        coupling=True,
        dt=None,
        n_pool=2,
        progress=False,
    )
