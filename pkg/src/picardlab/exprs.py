"""Tiny arithmetic-expression compiler for function descriptors.

Supports +, -, *, /, **, min, max, abs, numeric constants, and declared
variable names.  Numeric literals are parsed as exact rationals so that a
compiled expression evaluated on ``Fraction`` inputs stays in ``Fraction``
arithmetic (floats still flow through unchanged: Fraction*float -> float).
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Callable

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_ALLOWED_UNARY = (ast.USub, ast.UAdd)
_ALLOWED_CALLS = {"min", "max", "abs"}


class ExprError(ValueError):
    pass


def _validate(node: ast.AST, variables: tuple[str, ...]) -> None:
    if isinstance(node, ast.Expression):
        _validate(node.body, variables)
    elif isinstance(node, ast.BinOp):
        if not isinstance(node.op, _ALLOWED_BINOPS):
            raise ExprError(f"operator not allowed: {ast.dump(node.op)}")
        _validate(node.left, variables)
        _validate(node.right, variables)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, _ALLOWED_UNARY):
            raise ExprError(f"unary operator not allowed: {ast.dump(node.op)}")
        _validate(node.operand, variables)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _ALLOWED_CALLS:
            raise ExprError("only min/max/abs calls are allowed")
        if node.keywords:
            raise ExprError("keyword arguments are not allowed")
        for arg in node.args:
            _validate(arg, variables)
    elif isinstance(node, ast.Name):
        if node.id not in variables:
            raise ExprError(f"unknown variable {node.id!r}; expected one of {variables}")
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)) or isinstance(node.value, bool):
            raise ExprError(f"constant not allowed: {node.value!r}")
    else:
        raise ExprError(f"syntax not allowed: {type(node).__name__}")


class _Rationalize(ast.NodeTransformer):
    """Swap numeric literals for preloaded Fraction constants."""

    def __init__(self) -> None:
        self.constants: dict[str, Fraction] = {}

    def visit_Constant(self, node: ast.Constant) -> ast.AST:
        key = f"_c{len(self.constants)}"
        self.constants[key] = Fraction(str(node.value))
        return ast.copy_location(ast.Name(id=key, ctx=ast.Load()), node)


def compile_expr(body: str, variables: tuple[str, ...] = ("t",)) -> Callable:
    """Compile ``body`` into a positional function of ``variables``."""
    try:
        tree = ast.parse(body, mode="eval")
    except SyntaxError as exc:
        raise ExprError(f"cannot parse expression {body!r}: {exc}") from None
    _validate(tree, variables)

    rat = _Rationalize()
    tree = ast.fix_missing_locations(rat.visit(tree))
    code = compile(tree, f"<expr {body!r}>", "eval")
    env = {"__builtins__": {}, "min": min, "max": max, "abs": abs}
    env.update(rat.constants)

    def fn(*args):
        if len(args) != len(variables):
            raise TypeError(f"expected {len(variables)} arguments, got {len(args)}")
        scope = dict(zip(variables, args))
        return eval(code, env, scope)

    fn.__name__ = f"expr({body})"
    return fn
