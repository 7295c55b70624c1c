"""Closed-form functions on cylinder charts.

A deliberately small expression language over the two chart variables
``z`` and ``theta``: arithmetic, integer powers, ``sin``, ``cos``,
``exp``, and the constant ``pi``.  It exists to describe conformal
factors and gauge coefficients on surfaces, so there is no general
computer algebra here: parsing, double-precision evaluation (scalar and
grid), exact symbolic differentiation, and a simplifier that does
constant folding and 0/1 identities only.

Grammar (whitespace-insensitive)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' int)?
    base   := number | 'pi' | 'z' | 'theta'
            | ('sin'|'cos'|'exp') '(' expr ')'
            | '(' expr ')' | '-' base
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "Expr",
    "ExprSyntaxError",
    "PoleError",
    "const",
    "var",
    "parse",
    "evaluate",
    "evaluate_grid",
    "differentiate",
    "simplify",
    "to_string",
]

_BINARY = ("add", "sub", "mul", "div")
_FUNCS = ("sin", "cos", "exp")
_VARS = ("z", "theta")


class ExprSyntaxError(ValueError):
    """Parse failure, carrying the byte offset and the expected tokens."""

    def __init__(self, offset: int, expected: tuple[str, ...]):
        self.offset = offset
        self.expected = expected
        opts = ", ".join(f"'{t}'" if len(t) <= 2 else t for t in expected)
        super().__init__(f"syntax error at offset {offset}: expected {opts}")


class PoleError(ValueError):
    """Evaluation hit a division by zero (or a zero base to a negative power)."""


@dataclass(frozen=True)
class Expr:
    """Immutable expression tree.

    ``kind`` is one of constant, variable, add, sub, mul, div, pow, neg,
    sin, cos, exp.  Only the payload field matching the kind is
    meaningful: ``value`` for constants, ``name`` for variables,
    ``power`` for integer powers.
    """

    kind: str
    args: tuple["Expr", ...] = ()
    value: float = 0.0
    name: str = ""
    power: int = 0

    def __str__(self) -> str:
        return to_string(self)


def const(v: float) -> Expr:
    return Expr("constant", value=float(v))


def var(name: str) -> Expr:
    if name not in _VARS:
        raise ValueError(f"unknown chart variable {name!r}")
    return Expr("variable", name=name)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]+)"
    r"|(?P<op>[-+*/^()])"
)

_BASE_EXPECTED = ("number", "pi", "z", "theta", "sin", "cos", "exp", "(", "-")


@dataclass(frozen=True)
class _Tok:
    kind: str  # number | name | op | end | bad
    text: str
    offset: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    i = 0
    n = len(src)
    while i < n:
        if src[i].isspace():
            i += 1
            continue
        m = _TOKEN_RE.match(src, i)
        if m is None:
            # illegal character: surfaces as a contextual parse error
            toks.append(_Tok("bad", src[i], i))
            i += 1
            continue
        toks.append(_Tok(m.lastgroup, m.group(), i))
        i = m.end()
    toks.append(_Tok("end", "", n))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected: tuple[str, ...]):
        raise ExprSyntaxError(self.peek().offset, expected)

    def expect_op(self, op: str):
        t = self.peek()
        if t.kind == "op" and t.text == op:
            self.take()
        else:
            self.fail((op,))

    def at_op(self, *ops: str) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text in ops

    def expr(self) -> Expr:
        e = self.term()
        while self.at_op("+", "-"):
            op = self.take().text
            rhs = self.term()
            e = Expr("add" if op == "+" else "sub", (e, rhs))
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.at_op("*", "/"):
            op = self.take().text
            rhs = self.factor()
            e = Expr("mul" if op == "*" else "div", (e, rhs))
        return e

    def factor(self) -> Expr:
        e = self.base()
        if self.at_op("^"):
            self.take()
            return Expr("pow", (e,), power=self.integer())
        return e

    def base(self) -> Expr:
        t = self.peek()
        if t.kind == "number":
            self.take()
            return const(float(t.text))
        if t.kind == "name":
            if t.text == "pi":
                self.take()
                return const(math.pi)
            if t.text in _VARS:
                self.take()
                return Expr("variable", name=t.text)
            if t.text in _FUNCS:
                self.take()
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return Expr(t.text, (inner,))
            self.fail(_BASE_EXPECTED)
        if self.at_op("("):
            self.take()
            inner = self.expr()
            self.expect_op(")")
            return inner
        if self.at_op("-"):
            self.take()
            return Expr("neg", (self.base(),))
        self.fail(_BASE_EXPECTED)

    def integer(self) -> int:
        sign = 1
        if self.at_op("-"):
            self.take()
            sign = -1
        t = self.peek()
        if t.kind == "number" and re.fullmatch(r"\d+", t.text):
            self.take()
            return sign * int(t.text)
        self.fail(("integer",))


def parse(src: str) -> Expr:
    p = _Parser(src)
    e = p.expr()
    if p.peek().kind != "end":
        p.fail(("end of input",))
    return e


# ---------------------------------------------------------------------------
# evaluation

def evaluate(e: Expr, z: float = 0.0, theta: float = 0.0) -> float:
    """Evaluate at a chart point in double precision."""
    k = e.kind
    if k == "constant":
        return e.value
    if k == "variable":
        return float(z) if e.name == "z" else float(theta)
    if k == "neg":
        return -evaluate(e.args[0], z, theta)
    if k == "pow":
        x = evaluate(e.args[0], z, theta)
        if x == 0.0 and e.power < 0:
            raise PoleError(f"pole: zero base to power {e.power} in '{to_string(e)}'")
        try:
            return x ** e.power
        except OverflowError:
            return math.inf if (x > 0 or e.power % 2 == 0) else -math.inf
    if k in _FUNCS:
        x = evaluate(e.args[0], z, theta)
        if k == "sin":
            return math.sin(x)
        if k == "cos":
            return math.cos(x)
        try:
            return math.exp(x)
        except OverflowError:
            return math.inf
    a = evaluate(e.args[0], z, theta)
    b = evaluate(e.args[1], z, theta)
    if k == "add":
        return a + b
    if k == "sub":
        return a - b
    if k == "mul":
        return a * b
    if b == 0.0:
        raise PoleError(f"pole: division by zero in '{to_string(e)}'")
    return a / b


def evaluate_grid(e: Expr, z, theta) -> np.ndarray:
    """Vectorized evaluation; ``z`` and ``theta`` broadcast together.

    Exact zero denominators anywhere on the grid raise PoleError; mere
    overflow follows IEEE double semantics (inf).
    """
    z = np.asarray(z, dtype=float)
    theta = np.asarray(theta, dtype=float)
    shape = np.broadcast_shapes(z.shape, theta.shape)
    with np.errstate(all="ignore"):
        out = _grid(e, z, theta)
    out = np.asarray(out, dtype=float)
    if out.shape != shape:
        out = np.broadcast_to(out, shape).copy()
    return out


def _grid(e: Expr, z, theta):
    k = e.kind
    if k == "constant":
        return e.value
    if k == "variable":
        return z if e.name == "z" else theta
    if k == "neg":
        return -_grid(e.args[0], z, theta)
    if k == "pow":
        x = _grid(e.args[0], z, theta)
        if e.power < 0 and np.any(np.asarray(x) == 0.0):
            raise PoleError(f"pole: zero base to power {e.power} in '{to_string(e)}'")
        return np.power(x, e.power)
    if k == "sin":
        return np.sin(_grid(e.args[0], z, theta))
    if k == "cos":
        return np.cos(_grid(e.args[0], z, theta))
    if k == "exp":
        return np.exp(_grid(e.args[0], z, theta))
    a = _grid(e.args[0], z, theta)
    b = _grid(e.args[1], z, theta)
    if k == "add":
        return a + b
    if k == "sub":
        return a - b
    if k == "mul":
        return a * b
    if np.any(np.asarray(b) == 0.0):
        raise PoleError(f"pole: division by zero in '{to_string(e)}'")
    return a / b


# ---------------------------------------------------------------------------
# calculus

def differentiate(e: Expr, wrt: str) -> Expr:
    """Exact symbolic partial derivative with respect to ``z`` or ``theta``."""
    if wrt not in _VARS:
        raise ValueError(f"unknown chart variable {wrt!r}")
    return simplify(_d(e, wrt))


def _d(e: Expr, v: str) -> Expr:
    k = e.kind
    if k == "constant":
        return const(0)
    if k == "variable":
        return const(1 if e.name == v else 0)
    if k == "neg":
        return Expr("neg", (_d(e.args[0], v),))
    if k == "add" or k == "sub":
        return Expr(k, (_d(e.args[0], v), _d(e.args[1], v)))
    if k == "mul":
        u, w = e.args
        return Expr("add", (Expr("mul", (_d(u, v), w)), Expr("mul", (u, _d(w, v)))))
    if k == "div":
        u, w = e.args
        num = Expr("sub", (Expr("mul", (_d(u, v), w)), Expr("mul", (u, _d(w, v)))))
        return Expr("div", (num, Expr("pow", (w,), power=2)))
    if k == "pow":
        u = e.args[0]
        if e.power == 0:
            return const(0)
        outer = Expr("mul", (const(e.power), Expr("pow", (u,), power=e.power - 1)))
        return Expr("mul", (outer, _d(u, v)))
    u = e.args[0]
    if k == "sin":
        return Expr("mul", (Expr("cos", (u,)), _d(u, v)))
    if k == "cos":
        return Expr("neg", (Expr("mul", (Expr("sin", (u,)), _d(u, v))),))
    return Expr("mul", (e, _d(u, v)))  # exp


# ---------------------------------------------------------------------------
# simplification

def _is_const(e: Expr, v: float | None = None) -> bool:
    return e.kind == "constant" and (v is None or e.value == v)


def _pole_free(e: Expr) -> bool:
    if e.kind == "div" or (e.kind == "pow" and e.power < 0):
        return False
    return all(_pole_free(a) for a in e.args)


def _fold(e: Expr) -> Expr:
    vals = [a.value for a in e.args]
    k = e.kind
    if k == "add":
        return const(vals[0] + vals[1])
    if k == "sub":
        return const(vals[0] - vals[1])
    if k == "mul":
        return const(vals[0] * vals[1])
    if k == "div":
        return const(vals[0] / vals[1])
    if k == "neg":
        return const(-vals[0])
    if k == "pow":
        try:
            return const(vals[0] ** e.power)
        except OverflowError:
            return const(math.inf if (vals[0] > 0 or e.power % 2 == 0) else -math.inf)
    if k == "sin":
        return const(math.sin(vals[0]))
    if k == "cos":
        return const(math.cos(vals[0]))
    try:
        return const(math.exp(vals[0]))
    except OverflowError:
        return const(math.inf)


def simplify(e: Expr) -> Expr:
    """Constant folding plus 0/1 identities; no algebraic rewriting."""
    if not e.args:
        return e
    args = tuple(simplify(a) for a in e.args)
    e = replace(e, args=args)
    k = e.kind
    if all(a.kind == "constant" for a in args):
        # a constant pole must stay visible to evaluation, so never fold it
        if k == "div" and args[1].value == 0.0:
            return e
        if k == "pow" and args[0].value == 0.0 and e.power < 0:
            return e
        return _fold(e)
    if k == "add":
        if _is_const(args[0], 0.0):
            return args[1]
        if _is_const(args[1], 0.0):
            return args[0]
    elif k == "sub":
        if _is_const(args[1], 0.0):
            return args[0]
        if _is_const(args[0], 0.0):
            return Expr("neg", (args[1],))
    elif k == "mul":
        if _is_const(args[0], 1.0):
            return args[1]
        if _is_const(args[1], 1.0):
            return args[0]
        # absorbing into 0 would erase a pole on the other side
        if _is_const(args[0], 0.0) and _pole_free(args[1]):
            return const(0)
        if _is_const(args[1], 0.0) and _pole_free(args[0]):
            return const(0)
    elif k == "div":
        if _is_const(args[1], 1.0):
            return args[0]
    elif k == "pow":
        if e.power == 1:
            return args[0]
        if e.power == 0:
            return const(1)
    return e


# ---------------------------------------------------------------------------
# printing

def _fmt_number(v: float) -> str:
    if v == math.pi:
        return "pi"
    if math.isfinite(v) and v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}


def _prec(e: Expr) -> int:
    return _PREC.get(e.kind, 5)


def _atomic(e: Expr) -> bool:
    # printable as a grammar `base` without parentheses
    return (
        e.kind == "variable"
        or e.kind in _FUNCS
        or (e.kind == "constant" and (e.value >= 0 or math.isnan(e.value)))
    )


def to_string(e: Expr) -> str:
    """Render so that ``parse(to_string(e))`` equals ``e`` modulo simplify."""
    k = e.kind
    if k == "constant":
        return _fmt_number(e.value)
    if k == "variable":
        return e.name
    if k in _FUNCS:
        return f"{k}({to_string(e.args[0])})"
    if k == "neg":
        inner = e.args[0]
        s = to_string(inner)
        return f"-{s}" if _atomic(inner) or inner.kind == "neg" else f"-({s})"
    if k == "pow":
        base = e.args[0]
        s = to_string(base)
        if not _atomic(base):
            s = f"({s})"
        return f"{s}^{e.power}"
    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[k]
    lhs, rhs = e.args
    p = _PREC[k]
    ls = to_string(lhs)
    if _prec(lhs) < p:
        ls = f"({ls})"
    rs = to_string(rhs)
    # the grammar is left-associative, so equal precedence on the right nests
    if _prec(rhs) <= p and rhs.kind in _BINARY:
        rs = f"({rs})"
    return f"{ls}{sym}{rs}"
