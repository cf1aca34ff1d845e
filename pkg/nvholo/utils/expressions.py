# -*- coding: utf-8 -*-
"""
Restricted evaluation of the arithmetic used in scenario files.

Values such as ``2*pi*300`` or ``sqrt(1/2)*|0><e| + sqrt(1/2)*|1><e|`` are
parsed with :py:mod:`sympy`. The text is tokenized first and only numbers,
the arithmetic operators, parentheses and a fixed set of names are passed
on, so configuration files can never execute arbitrary code. Ket-bra terms
become commuting symbols and an operator is read off as the coefficients of
a linear combination of them.
"""
import re
from tokenize import TokenError
from typing import Dict, List

import numpy as np
import sympy
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from ..quantum import HilbertSpace, Operator

_FUNCTIONS = {
    "sqrt": sympy.sqrt,
    "exp": sympy.exp,
    "sin": sympy.sin,
    "cos": sympy.cos,
    "tan": sympy.tan,
}

_CONSTANTS = {
    "pi": sympy.pi,
    "e": sympy.E,
}

_PARSER_GLOBALS = {
    "__builtins__": {},
    "Integer": sympy.Integer,
    "Float": sympy.Float,
    "Rational": sympy.Rational,
    "Symbol": sympy.Symbol,
    "I": sympy.I,
}

_TOKEN = re.compile(
    r"(?P<number>(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?[jJ]?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/()])"
    r"|(?P<space>\s+)"
    r"|(?P<other>.)",
    re.ASCII,
)

_KET_BRA = re.compile(r"\|\s*([^|<>\s]+)\s*>\s*<\s*([^|<>\s]+)\s*\|")


def _check_tokens(expression: str, allowed: set) -> None:
    for match in _TOKEN.finditer(expression):
        if match.lastgroup == "other":
            raise ValueError(
                f"Could not parse '{expression}': unexpected "
                f"'{match.group()}'"
            )
        if match.lastgroup == "name" and match.group() not in allowed:
            raise ValueError(f"Unknown name: {match.group()}")


def _parse(expression: str, names: Dict) -> sympy.Expr:
    text = expression.strip()
    local_dict = {**_FUNCTIONS, **_CONSTANTS, **names}
    _check_tokens(text, set(local_dict))
    try:
        value = parse_expr(
            text,
            local_dict=local_dict,
            global_dict=dict(_PARSER_GLOBALS),
            transformations=standard_transformations,
        )
    except (SyntaxError, TokenError, TypeError, ValueError) as e:
        raise ValueError(f"Could not parse '{expression}': {e}")
    if not isinstance(value, sympy.Expr):
        raise ValueError(f"'{expression}' is not an arithmetic expression")
    return value


def _to_number(value: sympy.Expr, expression: str):
    if not value.is_number:
        raise ValueError(f"'{expression}' does not evaluate to a number")
    if value.has(sympy.zoo, sympy.nan) or value.is_infinite:
        raise ValueError(f"Expected a finite value, got {value}")
    value = complex(value.evalf())
    if not np.isfinite(value):
        raise ValueError(f"Expected a finite value, got {value}")
    if value.imag == 0:
        return value.real
    return value


def evaluate(expression: str, names: Dict = None):
    """Evaluate a restricted arithmetic expression.

    Supports numbers (including complex literals such as ``1j``), ``pi``,
    ``e``, the functions ``sqrt``, ``exp``, ``sin``, ``cos``, ``tan``,
    parentheses and the operators ``+ - * / **``.

    Parameters
    ----------
    expression : str
        Expression to evaluate.
    names : dict, optional
        Extra numeric names that may appear in the expression.

    Returns
    -------
    float or complex
        Value of the expression, a float when the imaginary part vanishes.

    Raises
    ------
    ValueError
        If the expression cannot be parsed or uses anything else.
    """
    if names is None:
        names = {}
    names = {k: sympy.sympify(v) for k, v in names.items()}
    return _to_number(_parse(expression, names), expression)


def evaluate_real(expression: str) -> float:
    """Evaluate an expression that must be real and finite."""
    value = evaluate(expression)
    if isinstance(value, complex):
        raise ValueError(f"Expected a real value, got {value}")
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"Expected a finite value, got {value}")
    return value


def parse_amplitudes(text: str) -> List[complex]:
    """Parse a comma-separated list of (complex) amplitudes."""
    items = [item for item in text.split(",") if item.strip()]
    if not items:
        raise ValueError("Expected at least one amplitude")
    return [complex(evaluate(item)) for item in items]


def _format_coefficient(c: complex) -> str:
    if c.imag == 0:
        return f"{c.real:.12g}"
    if c.real == 0:
        return f"{c.imag:.12g}j"
    return f"({c.real:.12g}{c.imag:+.12g}j)"


def format_operator(op: Operator, atol: float = 1e-15) -> str:
    """Write an operator as a sum of ket-bra terms.

    The output can be read back with :py:func:`parse_operator`. Unit
    coefficients are omitted.
    """
    terms = []
    for i, ket in enumerate(op.space.labels):
        for j, bra in enumerate(op.space.labels):
            c = complex(op.data[i, j])
            if abs(c) <= atol:
                continue
            term = f"|{ket}><{bra}|"
            if c == 1:
                terms.append(("+", term))
            elif c == -1:
                terms.append(("-", term))
            else:
                terms.append(("+", f"{_format_coefficient(c)}*{term}"))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    text = first if first_sign == "+" else f"-{first}"
    for sign, term in terms[1:]:
        text += f" {sign} {term}"
    return text


def parse_operator(expression: str, space: HilbertSpace) -> Operator:
    """Parse a sum of ket-bra terms into an operator.

    Examples of accepted expressions::

        |0><1|
        |0><0| - |1><1|
        sqrt(1/2)*(|0><e| + |1><e|)

    The expanded expression must be linear in the ket-bra terms: products
    and powers of terms and constant offsets are rejected.

    Parameters
    ----------
    expression : str
        Expression over ket-bra terms ``|ket><bra|`` whose labels belong to
        ``space``.
    space : :obj:`nvholo.quantum.HilbertSpace`
        Space the operator acts on.
    """
    elements = {}

    def substitute(match):
        ket, bra = match.group(1), match.group(2)
        for label in (ket, bra):
            if label not in space:
                raise ValueError(
                    f"Unknown label '{label}' in '{expression}'. "
                    f"Known labels: {list(space.labels)}"
                )
        symbol = sympy.Symbol(f"_term{len(elements)}")
        elements[symbol] = (space.index(ket), space.index(bra))
        return f" {symbol.name} "

    substituted = _KET_BRA.sub(substitute, expression)
    if not elements:
        raise ValueError(f"No ket-bra terms found in '{expression}'")
    value = sympy.expand(
        _parse(substituted, {s.name: s for s in elements})
    )

    data = np.zeros((space.dim, space.dim), dtype=complex)
    for term in sympy.Add.make_args(value):
        if term == 0:
            continue
        coefficient, rest = term.as_independent(*elements, as_Add=False)
        if rest.is_Pow:
            raise ValueError("Powers of operators are not supported")
        if rest not in elements or not coefficient.is_number:
            raise ValueError(
                f"'{expression}' does not evaluate to an operator"
            )
        data[elements[rest]] += _to_number(coefficient, expression)
    return Operator(space, data)
