"""Small arithmetic language over the built-in forms.

Expressions use + - * / ^ (or **), parentheses, integer and rational
literals and the built-in names, e.g. ``chi8 - 6*h4^2`` or
``(e6*phi4 - e4*phi6)/24``.  Division is only by scalars.
"""

from __future__ import annotations

import ast
from fractions import Fraction

from .genio import Corpus, default_corpus
from .hjf import HJForm, mul_qseries
from .qexp import QSeries, delta

QEXP_NAMES = ("e2", "e4", "e6", "delta")
HJF_NAMES = ("phi4", "phi6", "phi8", "phi10")
HMF_NAMES = ("h4", "h6", "h8", "h10", "h12", "chi8", "f10", "f12")
BUILTINS = QEXP_NAMES + HJF_NAMES + HMF_NAMES


class ExpressionError(ValueError):
    pass


def _resolve(name: str, corpus: Corpus, t0: int):
    if name == "delta":
        e4 = corpus.qseries("e4")
        return delta(e4.trunc)
    if name in QEXP_NAMES:
        return corpus.qseries(name)
    if name in HJF_NAMES:
        return corpus.hjf(name)
    if name in HMF_NAMES:
        return corpus.hmf(name, t0)
    raise ExpressionError(f"unknown name {name!r}; built-ins are {', '.join(BUILTINS)}")


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction))


def _mul(x, y):
    if _is_scalar(x) and _is_scalar(y):
        return Fraction(x) * y
    if _is_scalar(x):
        return y * x
    if _is_scalar(y):
        return x * y
    if isinstance(x, QSeries) and isinstance(y, HJForm):
        return mul_qseries(x, y)
    if isinstance(x, HJForm) and isinstance(y, QSeries):
        return mul_qseries(y, x)
    if type(x) is type(y):
        return x * y
    raise ExpressionError(f"cannot multiply {type(x).__name__} by {type(y).__name__}")


def _add(x, y, sign=1):
    if _is_scalar(x) and _is_scalar(y):
        return Fraction(x) + sign * y
    if _is_scalar(x) or _is_scalar(y) or type(x) is not type(y):
        raise ExpressionError("can only add forms of the same kind")
    try:
        return x + y if sign == 1 else x - y
    except ValueError as exc:
        raise ExpressionError(str(exc)) from None


def _power(x, e):
    if not (_is_scalar(e) and Fraction(e).denominator == 1 and e >= 0):
        raise ExpressionError("exponents must be non-negative integers")
    e = int(e)
    if _is_scalar(x):
        return Fraction(x) ** e
    if e == 0:
        raise ExpressionError("zeroth power of a form is not supported")
    out = x
    for _ in range(e - 1):
        out = _mul(out, x)
    return out


def evaluate(text: str, corpus: Corpus | None = None, t0: int = 10):
    """Evaluate an expression; the result carries the expression as its name."""
    corpus = corpus or default_corpus()
    try:
        # '^' must bind like '**', not like Python's bitwise xor
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) \
                and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            return _resolve(node.id.lower(), corpus, t0)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return _mul(-1, v) if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return _add(a, b)
            if isinstance(node.op, ast.Sub):
                return _add(a, b, -1)
            if isinstance(node.op, ast.Mult):
                return _mul(a, b)
            if isinstance(node.op, ast.Div):
                if not _is_scalar(b) or b == 0:
                    raise ExpressionError("division only by nonzero scalars")
                return _mul(a, 1 / Fraction(b))
            if isinstance(node.op, ast.Pow):
                return _power(a, b)
        raise ExpressionError(f"unsupported syntax in {text!r}")

    value = ev(tree)
    if _is_scalar(value):
        raise ExpressionError(f"{text!r} is a constant, not a form")
    object.__setattr__(value, "name", text.strip())
    return value
