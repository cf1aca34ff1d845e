# -*- coding: utf-8 -*-
"""
Tests for the restricted expression evaluator.
"""
import numpy as np
import pytest

from nvholo.quantum import Operator
from nvholo.utils.expressions import (
    evaluate,
    evaluate_real,
    format_operator,
    parse_amplitudes,
    parse_operator,
)


@pytest.mark.parametrize(
    "expression, expected",
    [
        ("1", 1),
        ("2*pi*300", 2 * np.pi * 300),
        ("1/600", 1 / 600),
        ("-(1 + 2)**2", -9),
        ("sqrt(1/2)", np.sqrt(0.5)),
        ("exp(0) + cos(0) - sin(0) + tan(0)", 2.0),
        ("e", np.e),
        ("1j", 1j),
        ("(1 + 1j)/sqrt(2)", (1 + 1j) / np.sqrt(2)),
    ],
)
def test_evaluate(expression, expected):
    assert evaluate(expression) == pytest.approx(expected)


def test_evaluate_names():
    assert evaluate("2*x", {"x": 3}) == 6


@pytest.mark.parametrize(
    "expression",
    [
        "__import__('os')",
        "open('file')",
        "x",
        "[1, 2]",
        "1 if True else 0",
        "sqrt(1, 2)",
        "True",
        "'a'",
        "2 +",
        "np.pi",
        "(1).__class__",
        "2 ** ~1",
    ],
)
def test_evaluate_invalid(expression):
    """Anything outside the arithmetic whitelist is rejected"""
    with pytest.raises(ValueError):
        evaluate(expression)


def test_evaluate_real():
    assert evaluate_real("pi/4") == np.pi / 4
    assert isinstance(evaluate_real("1"), float)
    assert evaluate_real("1 + 0j") == 1.0


@pytest.mark.parametrize(
    "expression, match",
    [
        ("1j", "real"),
        ("1e400", "finite"),
        ("1/0", "finite"),
        ("2*x", "Unknown name"),
    ],
)
def test_evaluate_real_invalid(expression, match):
    with pytest.raises(ValueError, match=match):
        evaluate_real(expression)


def test_parse_amplitudes():
    out = parse_amplitudes("1/sqrt(2), 1j/sqrt(2)")
    assert out == pytest.approx([1 / np.sqrt(2), 1j / np.sqrt(2)])
    assert all(isinstance(a, complex) for a in out)


@pytest.mark.parametrize("text", ["", " , "])
def test_parse_amplitudes_empty(text):
    with pytest.raises(ValueError, match="at least one"):
        parse_amplitudes(text)


def test_parse_operator_single(vsystem_space):
    op = parse_operator("|0><e|", vsystem_space)
    expected = np.zeros((3, 3))
    expected[0, 2] = 1
    np.testing.assert_array_equal(op.data, expected)
    assert op.space == vsystem_space


def test_parse_operator_combination(vsystem_space):
    op = parse_operator("sqrt(1/2)*(|0><e| + |1><e|)", vsystem_space)
    np.testing.assert_allclose(op.data[:, 2], [np.sqrt(0.5), np.sqrt(0.5), 0])
    op = parse_operator("|0><0| - |1><1|", vsystem_space)
    np.testing.assert_array_equal(np.diag(op.data), [1, -1, 0])


def test_parse_operator_unknown_label(vsystem_space):
    with pytest.raises(ValueError, match="Unknown label 'g'"):
        parse_operator("|g><e|", vsystem_space)


@pytest.mark.parametrize(
    "expression, match",
    [
        ("1", "No ket-bra"),
        ("2*pi", "No ket-bra"),
        ("|0><1| ** 2", "Powers"),
        ("1/|0><1|", "Powers"),
        ("|0><1|*|1><0|", "operator"),
        ("|0><1| + 1", "operator"),
        ("exp(|0><1|)", "operator"),
        ("|0><1| + x", "Unknown name"),
        ("|0><1|.T", "Could not parse"),
    ],
)
def test_parse_operator_invalid(vsystem_space, expression, match):
    with pytest.raises(ValueError, match=match):
        parse_operator(expression, vsystem_space)


def test_parse_operator_expands(vsystem_space):
    """Repeated terms add up and brackets are multiplied out"""
    op = parse_operator("(|0><1| + |1><0|)*(1 + 1j)/2 + |0><1|", vsystem_space)
    assert op.data[0, 1] == pytest.approx(1.5 + 0.5j)
    assert op.data[1, 0] == pytest.approx(0.5 + 0.5j)
    assert np.count_nonzero(op.data) == 2


def test_parse_operator_cancels(vsystem_space):
    op = parse_operator("|0><1| - |0><1|", vsystem_space)
    np.testing.assert_array_equal(op.data, np.zeros((3, 3)))


def test_format_operator(vsystem_space):
    data = np.zeros((3, 3), dtype=complex)
    data[0, 0] = 1
    data[1, 1] = -1
    data[0, 2] = 0.5j
    data[2, 2] = 0.25
    text = format_operator(Operator(vsystem_space, data))
    assert text == "|0><0| + 0.5j*|0><e| - |1><1| + 0.25*|e><e|"


def test_format_operator_zero(vsystem_space):
    assert format_operator(Operator(vsystem_space, np.zeros((3, 3)))) == "0"


def test_format_operator_leading_negative(pauli):
    assert format_operator(-pauli["z"]) == "-|0><0| + |1><1|"


@pytest.mark.parametrize(
    "expression",
    [
        "|0><1|",
        "|0><0| - |1><1|",
        "sqrt(1/2)*|0><e| + sqrt(1/2)*|1><e|",
        "(0.3-0.2j)*|e><0|",
    ],
)
def test_format_operator_parses_back(vsystem_space, expression):
    op = parse_operator(expression, vsystem_space)
    again = parse_operator(format_operator(op), vsystem_space)
    np.testing.assert_allclose(again.data, op.data, atol=1e-12)
