"""Small expression grammar for user-defined prime-power rules.

Expressions range over the names ``p`` (the prime) and ``a`` (the exponent),
numeric literals, ``+ - * / **``, comparisons and the functions ``ln``,
``lnln``, ``sqrt``, ``abs``, ``min``, ``max`` and ``where(cond, x, y)``.
They compile to vectorized numpy rules; nothing is passed to ``eval``.
"""

import ast
import operator
from typing import Callable, Dict

import numpy as np

from arithmoments.errors import ParameterError
from arithmoments.functions.types import Rule

Node = Callable[[np.ndarray, np.ndarray], np.ndarray]

BINARY_OPS: Dict[type, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: np.power,
}

COMPARE_OPS: Dict[type, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    ast.Lt: np.less,
    ast.LtE: np.less_equal,
    ast.Gt: np.greater,
    ast.GtE: np.greater_equal,
    ast.Eq: np.equal,
    ast.NotEq: np.not_equal,
}

FUNCTIONS: Dict[str, Callable[..., np.ndarray]] = {
    "ln": np.log,
    "lnln": lambda x: np.log(np.log(x)),
    "sqrt": np.sqrt,
    "abs": np.abs,
    "min": np.minimum,
    "max": np.maximum,
    "where": np.where,
}

ARITY = {"ln": 1, "lnln": 1, "sqrt": 1, "abs": 1, "min": 2, "max": 2, "where": 3}

VARIABLES = ("p", "a")


def parse_rule(expression: str) -> Rule:
    try:
        tree = ast.parse(expression.strip(), mode="eval")
    except SyntaxError as e:
        raise ParameterError(f"cannot parse rule {expression!r}: {e.msg}", field="rule") from e
    node = _compile(tree.body, expression)

    def rule(p: np.ndarray, a: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return node(p.astype(np.float64), a.astype(np.float64))

    return rule


def _compile(node: ast.AST, source: str) -> Node:
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise _reject(f"literal {node.value!r}", source)
        value = float(node.value)
        return lambda p, a: np.full(p.shape, value)

    if isinstance(node, ast.Name):
        if node.id == "p":
            return lambda p, a: p
        if node.id == "a":
            return lambda p, a: a
        raise _reject(f"name {node.id!r}", source)

    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile(node.operand, source)
        if isinstance(node.op, ast.USub):
            return lambda p, a: -inner(p, a)
        return inner

    if isinstance(node, ast.BinOp) and type(node.op) in BINARY_OPS:
        op = BINARY_OPS[type(node.op)]
        left, right = _compile(node.left, source), _compile(node.right, source)
        return lambda p, a: op(left(p, a), right(p, a))

    if isinstance(node, ast.Compare):
        if len(node.ops) != 1 or type(node.ops[0]) not in COMPARE_OPS:
            raise _reject("chained comparison", source)
        cmp = COMPARE_OPS[type(node.ops[0])]
        left, right = _compile(node.left, source), _compile(node.comparators[0], source)
        return lambda p, a: cmp(left(p, a), right(p, a))

    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            raise _reject(f"call {ast.unparse(node.func)!r}", source)
        name = node.func.id
        if node.keywords or len(node.args) != ARITY[name]:
            raise _reject(f"{name} takes {ARITY[name]} positional argument(s)", source)
        func = FUNCTIONS[name]
        args = [_compile(arg, source) for arg in node.args]
        return lambda p, a: func(*(arg(p, a) for arg in args))

    raise _reject(type(node).__name__, source)


def _reject(what: str, source: str) -> ParameterError:
    return ParameterError(f"rule {source!r} uses unsupported {what}", field="rule")
