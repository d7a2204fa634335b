"""Arithmetic expression compiler for problem config files.

Supports exactly: + - * / ^ (right associative), unary minus, parentheses,
float literals, variables x1..xd (plain x is accepted for one-dimensional
problems), and the functions exp, abs, norm (norm is n-ary Euclidean).
Expressions compile to vectorized closures over an (n, d) point array; no
eval, no attribute access, nothing dynamic.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import ConfigError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)

_FUNCTIONS = {"exp", "abs", "norm"}


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ConfigError(f"bad character in expression at offset {pos}: {text[pos:pos + 10]!r}")
        if m.lastgroup == "num":
            out.append(("num", float(m.group("num"))))
        elif m.lastgroup == "name":
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, tokens, decision_dim):
        self.tokens = tokens
        self.pos = 0
        self.dim = decision_dim

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ConfigError(f"expected {op!r}, found {val!r}")

    def parse(self):
        node = self.expr()
        kind, val = self.peek()
        if kind != "end":
            raise ConfigError(f"trailing input in expression near {val!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            rhs = self.term()
            node = (lambda a, b: (lambda p: a(p) + b(p)))(node, rhs) if op == "+" else \
                (lambda a, b: (lambda p: a(p) - b(p)))(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            rhs = self.unary()
            if op == "*":
                node = (lambda a, b: (lambda p: a(p) * b(p)))(node, rhs)
            else:
                node = (lambda a, b: (lambda p: _safe_div(a(p), b(p))))(node, rhs)
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            inner = self.unary()
            return lambda p: -inner(p)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            exponent = self.unary()
            return lambda p: _safe_pow(base(p), exponent(p))
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return lambda p, v=val: np.full(p.shape[0], v)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "name":
            if self.peek() == ("op", "("):
                return self.call(val)
            return self.variable(val)
        raise ConfigError(f"unexpected token {val!r}")

    def call(self, name):
        if name not in _FUNCTIONS:
            raise ConfigError(f"unknown function {name!r} (allowed: exp, abs, norm)")
        self.expect_op("(")
        args = [self.expr()]
        while self.peek() == ("op", ","):
            self.take()
            args.append(self.expr())
        self.expect_op(")")
        if name in ("exp", "abs") and len(args) != 1:
            raise ConfigError(f"{name} takes exactly one argument")
        if name == "exp":
            a = args[0]
            return lambda p: _safe_exp(a(p))
        if name == "abs":
            a = args[0]
            return lambda p: np.abs(a(p))
        return lambda p: np.sqrt(sum(a(p) ** 2 for a in args))

    def variable(self, name):
        if name == "x" and self.dim == 1:
            return lambda p: p[:, 0]
        m = re.fullmatch(r"x([1-9]\d*)", name)
        if m is None:
            raise ConfigError(f"unknown name {name!r} (variables are x1..x{self.dim})")
        j = int(m.group(1))
        if not 1 <= j <= self.dim:
            raise ConfigError(f"variable {name!r} out of range for decision_dim {self.dim}")
        return lambda p: p[:, j - 1]


def _safe_exp(a):
    with np.errstate(over="ignore"):
        return np.exp(a)


def _safe_div(a, b):
    with np.errstate(divide="ignore", invalid="ignore"):
        return a / b


def _safe_pow(a, b):
    with np.errstate(over="ignore", invalid="ignore"):
        return np.power(a, b)


def parse_expression(text, decision_dim):
    """Compile one expression to a closure mapping (n, d) arrays to (n,)."""
    if not isinstance(text, str) or not text.strip():
        raise ConfigError("expression must be a nonempty string")
    if decision_dim < 1:
        raise ConfigError("decision_dim must be >= 1")
    return _Parser(_tokenize(text), decision_dim).parse()


def compile_objectives(texts, decision_dim):
    """Compile a list of coordinate expressions to one (n,d)->(n,m) evaluator."""
    if not texts:
        raise ConfigError("objective expression list is empty")
    parts = [parse_expression(t, decision_dim) for t in texts]

    def ev(points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.stack([part(pts) for part in parts], axis=1)

    return ev
