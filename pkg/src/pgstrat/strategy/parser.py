"""Parser and linker for the strategy language.

Surface syntax::

    strategy := alt ( [';'] alt )* [';']      sequencing, right-associative
    alt      := prim ( 'orelse' prim )*
    prim     := 'Id' | 'Fail'
              | 'one' '(' RULE ')' | 'match' '(' RULE ')'
              | 'ppick' '(' branch ( ',' branch )* ',' dist ')'
              | 'while' '(' strategy ')' [ '(' bound ')' ] 'do' '(' strategy ')'
              | 'repeat' '(' strategy ')' [ '(' bound ')' | 'max' bound ]
              | 'setPos' '(' 'crtGraph' ')'
              | '#' NAME '#'
              | '(' strategy ')'
    branch   := RULE | strategy               a bare rule name means one(RULE)
    dist     := NAME | '[' NUMBER ( ',' NUMBER )* ']'
    bound    := INTEGER | NAME                a NAME is a parameter bound at link time

Whitespace and newlines are insignificant.  Two strategies written one after
the other without ``;`` are sequenced.
"""
from __future__ import annotations

import math
import re
from typing import Any, Callable, Mapping

from ..errors import DistributionError, LinkError, StrategySyntaxError
from . import ast as A

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+\.\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<punct>[();,#\[\]])
""", re.VERBOSE)

KEYWORDS = {"Id", "Fail", "one", "match", "ppick", "while", "do", "repeat", "setPos",
            "orelse", "max"}


class _Tok:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind, self.value, self.line, self.col = kind, value, line, col

    def __repr__(self):
        return f"{self.kind}:{self.value!r}@{self.line}:{self.col}"


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise StrategySyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        val = m.group()
        col = pos - line_start + 1
        if kind == "ws":
            nl = val.count("\n")
            if nl:
                line += nl
                line_start = pos + val.rindex("\n") + 1
        elif kind == "num":
            toks.append(_Tok("num", float(val) if any(c in val for c in ".eE") else int(val), line, col))
        elif kind == "ident":
            toks.append(_Tok("kw" if val in KEYWORDS else "ident", val, line, col))
        else:
            toks.append(_Tok("punct", val, line, col))
        pos = m.end()
    toks.append(_Tok("eof", None, line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        if tok is None:
            tok = self.tok
            msg += ", got " + ("end of input" if tok.kind == "eof" else repr(tok.value))
        raise StrategySyntaxError(msg, tok.line, tok.col)

    def is_(self, kind: str, value: Any = None) -> bool:
        t = self.tok
        return t.kind == kind and (value is None or t.value == value)

    def accept(self, kind: str, value: Any = None) -> _Tok | None:
        if self.is_(kind, value):
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, kind: str, value: Any = None, what: str | None = None) -> _Tok:
        t = self.accept(kind, value)
        if t is None:
            self.error(f"expected {what or (repr(value) if value else kind)}")
        return t

    def _starts_prim(self) -> bool:
        t = self.tok
        if t.kind == "kw":
            return t.value not in ("orelse", "do", "max")
        return t.kind == "punct" and t.value in ("(", "#")

    def program(self) -> A.Strategy:
        s = self.strategy()
        if not self.is_("eof"):
            self.error("unexpected input")
        return s

    def strategy(self) -> A.Strategy:
        parts = [self.alt()]
        while True:
            if self.accept("punct", ";"):
                if not self._starts_prim():
                    break
                parts.append(self.alt())
            elif self._starts_prim():
                parts.append(self.alt())
            else:
                break
        return A.seq(*parts)

    def alt(self) -> A.Strategy:
        left = self.prim()
        while self.accept("kw", "orelse"):
            left = A.OrElse(left, self.prim())
        return left

    def rule_name(self) -> str:
        t = self.accept("ident")
        if t is None:
            self.error("expected a rule name")
        return t.value

    def bound(self) -> int | str:
        t = self.tok
        if t.kind == "num" and isinstance(t.value, int):
            self.i += 1
            if t.value <= 0:
                self.error("iteration bound must be a positive integer", t)
            return t.value
        if t.kind == "ident":
            self.i += 1
            return t.value
        self.error("expected an iteration bound")

    def prim(self) -> A.Strategy:
        t = self.tok
        if self.accept("kw", "Id"):
            return A.Id()
        if self.accept("kw", "Fail"):
            return A.Fail()
        if self.accept("kw", "one"):
            self.expect("punct", "(")
            name = self.rule_name()
            self.expect("punct", ")")
            return A.One(name)
        if self.accept("kw", "match"):
            self.expect("punct", "(")
            name = self.rule_name()
            self.expect("punct", ")")
            return A.Match(name)
        if self.accept("kw", "ppick"):
            return self.ppick()
        if self.accept("kw", "while"):
            self.expect("punct", "(")
            cond = self.strategy()
            self.expect("punct", ")")
            bound = None
            if self.accept("punct", "("):
                bound = self.bound()
                self.expect("punct", ")")
            self.expect("kw", "do")
            self.expect("punct", "(")
            body = self.strategy()
            self.expect("punct", ")")
            return A.While(cond, body, bound)
        if self.accept("kw", "repeat"):
            self.expect("punct", "(")
            body = self.strategy()
            self.expect("punct", ")")
            bound = None
            if self.accept("kw", "max"):
                bound = self.bound()
            elif self.is_("punct", "(") and self._bound_follows():
                self.i += 1
                bound = self.bound()
                self.expect("punct", ")")
            return A.Repeat(body, bound)
        if self.accept("kw", "setPos"):
            self.expect("punct", "(")
            target = self.accept("ident")
            if target is None or target.value != "crtGraph":
                self.error("setPos supports only crtGraph", target)
            self.expect("punct", ")")
            return A.SetPos(target.value)
        if self.accept("punct", "#"):
            name = self.expect("ident", what="a macro name").value
            self.expect("punct", "#")
            return A.Macro(name)
        if self.accept("punct", "("):
            inner = self.strategy()
            self.expect("punct", ")")
            return inner
        self.error("expected a strategy", t)

    def _bound_follows(self) -> bool:
        # "(n)" or "(k)" directly after repeat(...) is a bound, not a parenthesised strategy
        nxt, close = self.toks[self.i + 1], self.toks[self.i + 2]
        return nxt.kind in ("num", "ident") and close.kind == "punct" and close.value == ")"

    def ppick(self) -> A.PPick:
        start = self.toks[self.i - 1]
        self.expect("punct", "(")
        args: list = []
        while True:
            if self.is_("punct", "["):
                args.append(self.literal_dist())
            elif self.is_("ident") and self.toks[self.i + 1].kind == "punct" \
                    and self.toks[self.i + 1].value in (",", ")"):
                args.append(("name", self.tok.value, self.tok))
                self.i += 1
            else:
                args.append(self.strategy())
            if self.accept("punct", ")"):
                break
            self.expect("punct", ",", what="',' or ')'")
        if len(args) < 2:
            self.error("ppick needs at least one branch and a distribution", start)
        *branches, dist = args
        if isinstance(dist, tuple) and dist[0] == "name":
            dist = A.NamedDist(dist[1])
        elif not isinstance(dist, A.LiteralDist):
            self.error("the last ppick argument must be a distribution", start)
        out = []
        for b in branches:
            if isinstance(b, A.LiteralDist):
                self.error("only the last ppick argument may be a distribution", start)
            out.append(A.One(b[1]) if isinstance(b, tuple) else b)
        if isinstance(dist, A.LiteralDist) and len(dist.probs) != len(out):
            self.error(f"distribution has {len(dist.probs)} entries for {len(out)} branches", start)
        return A.PPick(tuple(out), dist)

    def literal_dist(self) -> A.LiteralDist:
        self.expect("punct", "[")
        probs = [float(self.expect("num", what="a probability").value)]
        while self.accept("punct", ","):
            probs.append(float(self.expect("num", what="a probability").value))
        self.expect("punct", "]")
        return A.LiteralDist(tuple(probs))


def parse_strategy(text: str) -> A.Strategy:
    """Parse strategy text; raises :class:`StrategySyntaxError` with line/column."""
    return _Parser(text).program()


# -- linking -----------------------------------------------------------------

class UdfRegistry:
    """Named user functions that compute ``ppick`` distributions from a graph."""

    def __init__(self, functions: Mapping[str, Callable] | None = None):
        self._fns: dict[str, Callable] = {}
        for name, fn in (functions or {}).items():
            self.register(name, fn)

    def register(self, name: str, fn: Callable) -> "UdfRegistry":
        if name in self._fns:
            raise ValueError(f"distribution function {name!r} is already registered")
        self._fns[name] = fn
        return self

    def __contains__(self, name: str) -> bool:
        return name in self._fns

    def __getitem__(self, name: str) -> Callable:
        return self._fns[name]

    def names(self) -> list[str]:
        return list(self._fns)


def register_udf(registry: UdfRegistry | None, name: str, fn: Callable) -> UdfRegistry:
    registry = registry if registry is not None else UdfRegistry()
    return registry.register(name, fn)


def resolve_rule_name(name: str, rule_names) -> str:
    names = list(rule_names)
    if name in names:
        return name
    folded = [n for n in names if n.lower() == name.lower()]
    if len(folded) == 1:
        return folded[0]
    raise LinkError(f"unknown rule {name!r}" if not folded else f"ambiguous rule name {name!r}")


def link(s: A.Strategy, rule_names, macros: Mapping[str, Any] | None = None,
         udfs: UdfRegistry | Mapping[str, Callable] | None = None,
         params: Mapping[str, int] | None = None) -> A.Strategy:
    """Expand macros, resolve rule names and symbolic bounds, check references.

    ``macros`` maps names to strategy text or trees.  Recursive macros are
    rejected.  The result contains no :class:`~.ast.Macro` nodes.
    """
    rule_names = list(rule_names)
    macros = dict(macros or {})
    params = dict(params or {})
    udf_names = set(udfs.names() if isinstance(udfs, UdfRegistry) else (udfs or {}))

    def bound(b):
        if b is None or isinstance(b, int):
            return b
        if b not in params:
            raise LinkError(f"unknown parameter {b!r} used as iteration bound")
        value = params[b]
        if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
            raise LinkError(f"parameter {b!r} must be a positive integer, got {value!r}")
        return value

    def go(x, stack):
        if isinstance(x, (A.Id, A.Fail, A.SetPos)):
            return x
        if isinstance(x, A.One):
            return A.One(resolve_rule_name(x.rule, rule_names))
        if isinstance(x, A.Match):
            return A.Match(resolve_rule_name(x.rule, rule_names))
        if isinstance(x, A.Seq):
            return A.Seq(go(x.first, stack), go(x.second, stack))
        if isinstance(x, A.OrElse):
            return A.OrElse(go(x.first, stack), go(x.second, stack))
        if isinstance(x, A.PPick):
            if isinstance(x.dist, A.NamedDist) and x.dist.name not in udf_names:
                raise LinkError(f"unknown distribution function {x.dist.name!r}")
            if isinstance(x.dist, A.LiteralDist):
                check_probabilities(x.dist.probs, len(x.branches))
            return A.PPick(tuple(go(b, stack) for b in x.branches), x.dist)
        if isinstance(x, A.While):
            cond = go(x.cond, stack)
            if not _is_pure(cond):
                raise LinkError("while conditions are limited to match/Id/Fail and their "
                                "sequence/orelse combinations")
            return A.While(cond, go(x.body, stack), bound(x.bound))
        if isinstance(x, A.Repeat):
            return A.Repeat(go(x.body, stack), bound(x.bound))
        if isinstance(x, A.Macro):
            if x.name not in macros:
                raise LinkError(f"unknown macro #{x.name}#")
            if x.name in stack:
                raise LinkError("recursive macro: " + " -> ".join(f"#{n}#" for n in stack + (x.name,)))
            body = macros[x.name]
            if isinstance(body, str):
                body = parse_strategy(body)
            return go(body, stack + (x.name,))
        raise LinkError(f"not a strategy: {x!r}")

    return go(s, ())


def _is_pure(s: A.Strategy) -> bool:
    if isinstance(s, (A.Match, A.Id, A.Fail)):
        return True
    if isinstance(s, (A.Seq, A.OrElse)):
        return _is_pure(s.first) and _is_pure(s.second)
    return False


def check_probabilities(probs, n: int | None = None) -> list[float]:
    try:
        probs = [float(p) for p in probs]
    except (TypeError, ValueError):
        raise DistributionError(f"distribution is not a list of numbers: {probs!r}") from None
    if n is not None and len(probs) != n:
        raise DistributionError(f"distribution has {len(probs)} entries for {n} branches")
    if any(not math.isfinite(p) or p < 0.0 or p > 1.0 for p in probs):
        raise DistributionError(f"probabilities must lie in [0, 1]: {probs}")
    if abs(sum(probs) - 1.0) > 1e-9:
        raise DistributionError(f"probabilities must sum to 1, got {sum(probs)!r}")
    return probs
