"""Safe parser for function literals such as ``"x1*x2 + (1/2)*x2^2"``.

Accepted syntax: integer literals, coordinate names, ``i`` for the imaginary
unit, ``+ - * /`` (division by constants only), ``^`` or ``**`` with a
non-negative integer exponent, and plane waves ``e(k1, ..., kn)`` with integer
wave-vector entries.
"""
from __future__ import annotations

import ast
from typing import Dict, Sequence

from .functions import FunctionExpr, default_names
from .scalars import QI, I

__all__ = ["ParseError", "parse_function", "parse_vector"]


class ParseError(ValueError):
    """Malformed or unsupported expression literal."""


_ALIASES = {"x": 0, "y": 1, "z": 2}


def _name_table(dim: int, names: Sequence[str] | None) -> Dict[str, int]:
    table = {}
    if names is None:
        names = default_names(dim)
        for alias, j in _ALIASES.items():
            if j < dim:
                table[alias] = j
    for j, nm in enumerate(names):
        table[nm] = j
    return table


def parse_function(text: str, dim: int, names: Sequence[str] | None = None) -> FunctionExpr:
    if not isinstance(text, str):
        raise ParseError("expression must be a string, got %r" % (text,))
    src = text.strip().replace("^", "**")
    if not src:
        raise ParseError("empty expression")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError("cannot parse %r: %s" % (text, exc.msg)) from None
    table = _name_table(dim, names)
    return _eval(tree.body, dim, table, text)


def parse_vector(items: Sequence[str], dim: int, names: Sequence[str] | None = None):
    from .fields import VectorField

    if len(items) != dim:
        raise ParseError("expected %d components, got %d" % (dim, len(items)))
    return VectorField([parse_function(s, dim, names) for s in items])


def _int_literal(node) -> int:
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _int_literal(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return node.value
    raise ParseError("expected an integer literal")


def _eval(node, dim, table, text) -> FunctionExpr:
    if isinstance(node, ast.Constant):
        if type(node.value) is not int:
            raise ParseError("only integer literals are allowed in %r" % text)
        return FunctionExpr.constant(node.value, dim)
    if isinstance(node, ast.Name):
        if node.id in table:
            return FunctionExpr.coordinate(table[node.id], dim)
        if node.id == "i":
            return FunctionExpr.constant(I, dim)
        raise ParseError("unknown symbol %r in %r" % (node.id, text))
    if isinstance(node, ast.UnaryOp):
        inner = _eval(node.operand, dim, table, text)
        if isinstance(node.op, ast.USub):
            return -inner
        if isinstance(node.op, ast.UAdd):
            return inner
        raise ParseError("unsupported unary operator in %r" % text)
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _eval(node.left, dim, table, text)
            try:
                exp = _int_literal(node.right)
            except ParseError:
                raise ParseError("exponent must be an integer literal in %r" % text) from None
            if exp < 0:
                raise ParseError("negative exponent in %r" % text)
            return base ** exp
        left = _eval(node.left, dim, table, text)
        right = _eval(node.right, dim, table, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant() or not right:
                raise ParseError("division only by non-zero constants in %r" % text)
            return left * (QI(1) / right.constant_term())
        raise ParseError("unsupported operator in %r" % text)
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id != "e" or node.keywords:
            raise ParseError("only plane waves e(k1,...,kn) may be called in %r" % text)
        if len(node.args) != dim:
            raise ParseError("plane wave needs %d integer entries in %r" % (dim, text))
        return FunctionExpr.plane_wave([_int_literal(a) for a in node.args])
    raise ParseError("unsupported syntax in %r" % text)
