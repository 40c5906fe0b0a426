"""Expression language for rule conditions and algorithm tabs.

Grammar (whitespace insignificant)::

    stmt    := ref (':=' | '=') expr
    expr    := or
    or      := and (('or' | '||' | '∨') and)*
    and     := not (('and' | '&&' | '∧') not)*
    not     := ('not' | '!' | '¬') not | cmp
    cmp     := sum (('<' | '<=' | '>' | '>=' | '==' | '=' | '!=' | '≥' | '≤') sum)?
    sum     := prod (('+' | '-' | '−') prod)*
    prod    := unary (('*' | '/') unary | <juxtaposed '('> unary)*
    unary   := '-' unary | atom
    atom    := NUMBER | STRING | 'true' | 'false'
             | IDENT '.' IDENT            attribute reference, e.g. Z.z
             | IDENT '(' expr, ... ')'    function call: floor, ceil, min, max, abs, exp
             | IDENT                      attribute variable bound at match time
             | '(' expr ')'

A parenthesised group written directly after an operand multiplies it, so
``A.p_tox(1 - Z.z)`` reads as ``A.p_tox * (1 - Z.z)``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Any, Callable

from .errors import EvalError, ExprSyntaxError


@dataclass(frozen=True)
class Lit:
    value: Any


@dataclass(frozen=True)
class Ref:
    alias: str
    attr: str


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: Any


@dataclass(frozen=True)
class Binary:
    op: str
    left: Any
    right: Any


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple


@dataclass(frozen=True)
class Assign:
    target: Ref
    value: Any
    source: str = ""


FUNCTIONS: dict[str, Callable] = {
    "floor": math.floor,
    "ceil": math.ceil,
    "abs": abs,
    "min": min,
    "max": max,
    "exp": math.exp,
}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+\.\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?)
  | (?P<str>"[^"]*")
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>:=|<=|>=|==|!=|&&|\|\||[-+*/()<>=!.,≥≤∧∨¬−])
""", re.VERBOSE)

_CANON = {"−": "-", "≥": ">=", "≤": "<=", "∧": "and", "∨": "or", "¬": "not",
          "&&": "and", "||": "or", "!": "not", "=": "=="}


def _tokenize(text: str) -> list[tuple[str, Any, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r} at offset {pos} in {text!r}")
        kind = m.lastgroup
        val = m.group()
        if kind == "num":
            toks.append(("num", float(val) if any(c in val for c in ".eE") else int(val), pos))
        elif kind == "str":
            toks.append(("str", val[1:-1], pos))
        elif kind == "ident":
            if val in ("and", "or", "not"):
                toks.append(("op", val, pos))
            else:
                toks.append(("ident", val, pos))
        elif kind == "op":
            toks.append(("op", val if val == ":=" else _CANON.get(val, val), pos))
        pos = m.end()
    toks.append(("eof", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, offset: int = 0):
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept(self, *ops: str) -> str | None:
        kind, val, _ = self.peek()
        if kind == "op" and val in ops:
            self.i += 1
            return val
        return None

    def expect(self, op: str):
        if not self.accept(op):
            self.fail(f"expected {op!r}")

    def fail(self, msg: str):
        kind, val, pos = self.peek()
        got = "end of input" if kind == "eof" else repr(val)
        raise ExprSyntaxError(f"{msg}, got {got} at offset {pos} in {self.text!r}")

    def done(self):
        if self.peek()[0] != "eof":
            self.fail("trailing input")

    def statement(self) -> Assign:
        target = self.atom()
        if not isinstance(target, Ref):
            raise ExprSyntaxError(f"assignment target must be Alias.attr in {self.text!r}")
        if not (self.accept(":=") or self.accept("==")):
            self.fail("expected ':='")
        value = self.expr()
        self.done()
        return Assign(target, value, self.text.strip())

    def expr(self):
        left = self.and_()
        while self.accept("or"):
            left = Binary("or", left, self.and_())
        return left

    def and_(self):
        left = self.not_()
        while self.accept("and"):
            left = Binary("and", left, self.not_())
        return left

    def not_(self):
        if self.accept("not"):
            return Unary("not", self.not_())
        return self.cmp()

    def cmp(self):
        left = self.sum()
        op = self.accept("<", "<=", ">", ">=", "==", "!=")
        if op:
            return Binary(op, left, self.sum())
        return left

    def sum(self):
        left = self.prod()
        while True:
            op = self.accept("+", "-")
            if not op:
                return left
            left = Binary(op, left, self.prod())

    def prod(self):
        left = self.unary()
        while True:
            op = self.accept("*", "/")
            if op:
                left = Binary(op, left, self.unary())
            elif self.peek()[:2] == ("op", "("):
                left = Binary("*", left, self.unary())
            else:
                return left

    def unary(self):
        if self.accept("-"):
            return Unary("-", self.unary())
        return self.atom()

    def atom(self):
        kind, val, _ = self.peek()
        if kind == "num":
            self.i += 1
            return Lit(val)
        if kind == "str":
            self.i += 1
            return Lit(val)
        if kind == "ident":
            self.i += 1
            if val in ("true", "false"):
                return Lit(val == "true")
            if self.accept("."):
                k2, attr, _ = self.next()
                if k2 != "ident":
                    self.i -= 1
                    self.fail("expected attribute name after '.'")
                return Ref(val, attr)
            if self.peek()[:2] == ("op", "("):
                if val not in FUNCTIONS:
                    self.i -= 1
                    self.fail(f"unknown function {val!r}")
                self.i += 1
                args = [self.expr()]
                while self.accept(","):
                    args.append(self.expr())
                self.expect(")")
                return Call(val, tuple(args))
            return VarRef(val)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        self.fail("expected an operand")


def parse_expr(text: str):
    p = _Parser(text)
    e = p.expr()
    p.done()
    return e


def parse_assignment(text: str) -> Assign:
    return _Parser(text).statement()


def refs(e) -> set[tuple[str, str]]:
    """All ``(alias, attr)`` references in an expression."""
    if isinstance(e, Ref):
        return {(e.alias, e.attr)}
    if isinstance(e, Unary):
        return refs(e.operand)
    if isinstance(e, Binary):
        return refs(e.left) | refs(e.right)
    if isinstance(e, Call):
        out: set = set()
        for a in e.args:
            out |= refs(a)
        return out
    return set()


def variables(e) -> set[str]:
    if isinstance(e, VarRef):
        return {e.name}
    if isinstance(e, Unary):
        return variables(e.operand)
    if isinstance(e, Binary):
        return variables(e.left) | variables(e.right)
    if isinstance(e, Call):
        out: set = set()
        for a in e.args:
            out |= variables(a)
        return out
    return set()


def _num(v, op):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise EvalError(f"operator {op!r} expects a number, got {v!r}")
    return v


def _bool(v, op):
    if not isinstance(v, bool):
        raise EvalError(f"operator {op!r} expects a boolean, got {v!r}")
    return v


def evaluate(e, resolve_ref: Callable[[str, str], Any],
             resolve_var: Callable[[str], Any] | None = None) -> Any:
    """Evaluate ``e`` to a ground value.

    ``resolve_ref(alias, attr)`` and ``resolve_var(name)`` look up attribute
    references and variables; they should raise :class:`EvalError` when the
    name is unknown.
    """
    def ev(x):
        if isinstance(x, Lit):
            return x.value
        if isinstance(x, Ref):
            return resolve_ref(x.alias, x.attr)
        if isinstance(x, VarRef):
            if resolve_var is None:
                raise EvalError(f"unbound variable {x.name!r}")
            return resolve_var(x.name)
        if isinstance(x, Unary):
            v = ev(x.operand)
            if x.op == "-":
                return -_num(v, "-")
            return not _bool(v, "not")
        if isinstance(x, Binary):
            op = x.op
            if op == "and":
                return _bool(ev(x.left), op) and _bool(ev(x.right), op)
            if op == "or":
                return _bool(ev(x.left), op) or _bool(ev(x.right), op)
            a, b = ev(x.left), ev(x.right)
            if op in ("==", "!="):
                same = _equal(a, b)
                return same if op == "==" else not same
            if op == "+" and isinstance(a, str) and isinstance(b, str):
                return a + b
            a, b = _num(a, op), _num(b, op)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "/":
                if b == 0:
                    raise EvalError("division by zero")
                return a / b
            if op == "<":
                return a < b
            if op == "<=":
                return a <= b
            if op == ">":
                return a > b
            if op == ">=":
                return a >= b
            raise EvalError(f"unknown operator {op!r}")
        if isinstance(x, Call):
            args = [_num(ev(a), x.fn) for a in x.args]
            try:
                return FUNCTIONS[x.fn](*args)
            except (OverflowError, ValueError, TypeError) as exc:
                raise EvalError(f"{x.fn}: {exc}") from None
        raise EvalError(f"not an expression: {x!r}")

    return ev(e)


def _equal(a, b) -> bool:
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return a == b
    if type(a) is not type(b):
        raise EvalError(f"cannot compare {a!r} with {b!r}")
    return a == b
