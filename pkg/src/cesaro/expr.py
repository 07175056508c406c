"""A small expression language for sequences b(k), weights f(x) and factors.

Grammar (lowest to highest precedence)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := primary ("^" unary)?          # right associative
    primary := NUMBER | NAME | NAME "(" expr ("," expr)* ")" | "(" expr ")"

so ``-x^2`` is ``-(x^2)`` and ``2^-1`` is ``2^(-1)``.  ``i`` is the imaginary
unit.  Evaluation is vectorised over numpy arrays and raises
:class:`ExprEvalError` instead of returning inf or nan.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import CesaroError, EvaluationError


class ExprSyntaxError(CesaroError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ExprEvalError(EvaluationError):
    pass


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class ImagUnit:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Expr", ...]


Expr = Union[Num, ImagUnit, Var, Neg, BinOp, Call]

FUNCTIONS = {"sqrt": 1, "log": 1, "exp": 1, "pow": 2, "floor": 1, "altblock": 1}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(src: str):
    pos = 0
    tokens = []
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            offset = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {src[offset]!r}", offset)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, variables):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0
        self.variables = set(variables)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.take()
        if text != value or kind == "end":
            found = "end of input" if kind == "end" else repr(text)
            raise ExprSyntaxError(f"expected {value!r}, found {found}", pos)

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        kind, text, pos = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                if text not in FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function {text!r}", pos)
                self.take()
                args = [self.expr()]
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != FUNCTIONS[text]:
                    raise ExprSyntaxError(f"{text} takes {FUNCTIONS[text]} argument(s), got {len(args)}", pos)
                return Call(text, tuple(args))
            if text in self.variables:
                return Var(text)
            if text == "i":
                return ImagUnit()
            if text in FUNCTIONS:
                raise ExprSyntaxError(f"function {text!r} needs arguments", pos)
            allowed = ", ".join(sorted(self.variables)) or "none"
            raise ExprSyntaxError(f"unknown identifier {text!r} (variables: {allowed})", pos)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(f"unexpected {found}", pos)


def parse_expr(src: str, variables=("k", "x")) -> Expr:
    """Parse ``src``; identifiers other than ``variables`` and ``i`` are rejected."""
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(src, variables).parse()


def to_source(e: Expr) -> str:
    """Fully parenthesised source text; ``parse_expr(to_source(e)) == e``."""
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, ImagUnit):
        return "i"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_source(e.operand)})"
    if isinstance(e, BinOp):
        return f"({to_source(e.left)} {e.op} {to_source(e.right)})"
    if isinstance(e, Call):
        return f"{e.name}({', '.join(to_source(a) for a in e.args)})"
    raise TypeError(f"not an expression node: {e!r}")


def free_variables(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Neg):
        return free_variables(e.operand)
    if isinstance(e, BinOp):
        return free_variables(e.left) | free_variables(e.right)
    if isinstance(e, Call):
        return set().union(*(free_variables(a) for a in e.args))
    return set()


# ---------------------------------------------------------------------------
# evaluation


def _is_real(v) -> bool:
    return not np.iscomplexobj(v) or not np.any(np.imag(v))


def _real(v, what):
    if not _is_real(v):
        raise ExprEvalError(f"{what} needs a real argument")
    return np.real(v)


def _finite(v, what):
    if not np.all(np.isfinite(v)):
        raise ExprEvalError(f"{what} produced a non-finite value")
    return v


def _power(base, exponent):
    if _is_real(base) and _is_real(exponent):
        base, exponent = np.real(base), np.real(exponent)
        if np.any((base == 0) & (exponent < 0)):
            raise ExprEvalError("division by zero in power (0 raised to a negative exponent)")
        bad = (base < 0) & (exponent != np.floor(exponent))
        if np.any(bad):
            raise ExprEvalError("negative base raised to a non-integer exponent")
        with np.errstate(all="ignore"):
            return _finite(np.power(base.astype(np.float64), exponent), "power")
    base = np.asarray(base, dtype=np.complex128)
    if np.any(base == 0):
        raise ExprEvalError("complex power of zero")
    with np.errstate(all="ignore"):
        return _finite(np.power(base, exponent), "power")


def _blocks(v):
    v = _real(v, "altblock")
    if np.any(v < 1) or np.any(v != np.floor(v)):
        raise ExprEvalError("altblock needs integer arguments >= 1")
    _, exponent = np.frexp(v)
    return (1 - 2 * ((exponent - 1) & 1)).astype(np.float64)


def evaluate(e: Expr, env: dict):
    """Evaluate ``e`` with variables bound to arrays or scalars in ``env``."""
    if isinstance(e, Num):
        return np.float64(e.value)
    if isinstance(e, ImagUnit):
        return np.complex128(1j)
    if isinstance(e, Var):
        if e.name not in env:
            raise ExprEvalError(f"variable {e.name!r} is unbound")
        return np.asarray(env[e.name], dtype=np.float64) if _is_real(env[e.name]) else np.asarray(env[e.name])
    if isinstance(e, Neg):
        return -evaluate(e.operand, env)
    if isinstance(e, BinOp):
        left = evaluate(e.left, env)
        right = evaluate(e.right, env)
        if e.op == "+":
            return _finite(left + right, "addition")
        if e.op == "-":
            return _finite(left - right, "subtraction")
        if e.op == "*":
            with np.errstate(all="ignore"):
                return _finite(left * right, "multiplication")
        if e.op == "/":
            if np.any(right == 0):
                raise ExprEvalError("division by zero")
            with np.errstate(all="ignore"):
                return _finite(left / right, "division")
        if e.op == "^":
            return _power(left, right)
        raise ExprEvalError(f"unknown operator {e.op!r}")
    if isinstance(e, Call):
        args = [evaluate(a, env) for a in e.args]
        if e.name == "sqrt":
            (v,) = args
            if _is_real(v):
                v = np.real(v)
                if np.any(v < 0):
                    raise ExprEvalError("sqrt of a negative number")
                return np.sqrt(v)
            return np.sqrt(v)
        if e.name == "log":
            v = _real(args[0], "log")
            if np.any(v <= 0):
                raise ExprEvalError("log of a nonpositive number")
            return np.log(v)
        if e.name == "exp":
            with np.errstate(all="ignore"):
                return _finite(np.exp(args[0]), "exp")
        if e.name == "pow":
            return _power(*args)
        if e.name == "floor":
            return np.floor(_real(args[0], "floor"))
        if e.name == "altblock":
            return _blocks(args[0])
    raise TypeError(f"not an expression node: {e!r}")


def sequence_from_source(src: str):
    """Sequence k -> value of ``src`` (variable ``k``)."""
    from .core import Sequence

    tree = parse_expr(src, variables=("k",))

    def terms(ks):
        out = evaluate(tree, {"k": ks})
        return np.broadcast_to(np.asarray(out, dtype=np.complex128), np.shape(ks))

    return Sequence(terms, src)


def weight_from_source(src: str, monotonicity: str = "none"):
    """Weight x -> value of ``src`` (variable ``x``), which must be real."""
    from .core import WeightFunction

    tree = parse_expr(src, variables=("x",))

    def values(xs):
        out = evaluate(tree, {"x": xs})
        if not _is_real(out):
            raise ExprEvalError(f"weight {src!r} takes complex values")
        return np.broadcast_to(np.real(out), np.shape(xs))

    return WeightFunction(values, monotonicity, src)


def constant_from_source(src: str) -> complex:
    """Value of a closed expression such as ``0.5-2*i``."""
    out = evaluate(parse_expr(src, variables=()), {})
    return complex(out)
