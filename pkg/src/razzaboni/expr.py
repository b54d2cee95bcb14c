"""A small arithmetic language for initial profiles such as ``1 + 0.1*sin(u)``.

Only numeric literals, ``pi``, the variable ``u``, the four arithmetic
operators, unary signs and the functions ``sin``, ``cos``, ``cosh`` and
``exp`` are accepted.  Parsing goes through :mod:`ast`, so nothing is ever
passed to ``eval``.
"""
from __future__ import annotations

import ast
import math
import operator

import numpy as np

from .errors import ConfigError

_FUNCS = {"sin": np.sin, "cos": np.cos, "cosh": np.cosh, "exp": np.exp}
_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub,
           ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_NAMES = {"pi": math.pi}


class Profile:
    """A parsed expression in ``u``; call it on an array of nodes."""

    def __init__(self, text: str):
        self.text = text
        try:
            tree = ast.parse(text.strip(), mode="eval")
        except SyntaxError as exc:
            raise ConfigError(f"cannot parse profile {text!r}: {exc.msg}") from None
        self._check(tree.body)
        self._tree = tree.body

    def _check(self, node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                raise ConfigError(f"profile {self.text!r}: only numeric constants allowed")
        elif isinstance(node, ast.Name):
            if node.id != "u" and node.id not in _NAMES:
                raise ConfigError(f"profile {self.text!r}: unknown name {node.id!r}")
        elif isinstance(node, ast.BinOp):
            if type(node.op) not in _BINOPS:
                raise ConfigError(f"profile {self.text!r}: operator not allowed")
            self._check(node.left)
            self._check(node.right)
        elif isinstance(node, ast.UnaryOp):
            if type(node.op) not in _UNARY:
                raise ConfigError(f"profile {self.text!r}: operator not allowed")
            self._check(node.operand)
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS:
                raise ConfigError(f"profile {self.text!r}: functions are "
                                  + ", ".join(sorted(_FUNCS)))
            if len(node.args) != 1 or node.keywords:
                raise ConfigError(f"profile {self.text!r}: functions take one argument")
            self._check(node.args[0])
        else:
            raise ConfigError(f"profile {self.text!r}: unsupported syntax "
                              f"{type(node).__name__}")

    def _eval(self, node, u):
        if isinstance(node, ast.Constant):
            return float(node.value)
        if isinstance(node, ast.Name):
            return u if node.id == "u" else _NAMES[node.id]
        if isinstance(node, ast.BinOp):
            return _BINOPS[type(node.op)](self._eval(node.left, u), self._eval(node.right, u))
        if isinstance(node, ast.UnaryOp):
            return _UNARY[type(node.op)](self._eval(node.operand, u))
        return _FUNCS[node.func.id](self._eval(node.args[0], u))

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        with np.errstate(all="ignore"):
            out = np.broadcast_to(np.asarray(self._eval(self._tree, u), dtype=float),
                                  u.shape).copy()
        if not np.all(np.isfinite(out)):
            raise ConfigError(f"profile {self.text!r} is not finite on the grid")
        return out

    def __repr__(self):
        return f"Profile({self.text!r})"


def parse_profile(text: str) -> Profile:
    return Profile(text)
