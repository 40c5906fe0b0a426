"""Strategy expression tree."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Id:
    pass


@dataclass(frozen=True)
class Fail:
    pass


@dataclass(frozen=True)
class One:
    rule: str


@dataclass(frozen=True)
class Match:
    rule: str


@dataclass(frozen=True)
class Seq:
    first: "Strategy"
    second: "Strategy"


@dataclass(frozen=True)
class OrElse:
    first: "Strategy"
    second: "Strategy"


@dataclass(frozen=True)
class LiteralDist:
    probs: tuple


@dataclass(frozen=True)
class NamedDist:
    name: str


@dataclass(frozen=True)
class PPick:
    branches: tuple
    dist: Union[LiteralDist, NamedDist]


@dataclass(frozen=True)
class While:
    cond: "Strategy"
    body: "Strategy"
    bound: Union[int, str, None] = None


@dataclass(frozen=True)
class Repeat:
    body: "Strategy"
    bound: Union[int, str, None] = None


@dataclass(frozen=True)
class SetPos:
    target: str = "crtGraph"


@dataclass(frozen=True)
class Macro:
    name: str


Strategy = Union[Id, Fail, One, Match, Seq, OrElse, PPick, While, Repeat, SetPos, Macro]


def seq(*parts: Strategy) -> Strategy:
    """Right-nested sequence of ``parts``."""
    if not parts:
        return Id()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Seq(p, out)
    return out


def to_text(s: Strategy) -> str:
    """Render a strategy in the surface syntax (parses back to an equal tree)."""
    if isinstance(s, Id):
        return "Id"
    if isinstance(s, Fail):
        return "Fail"
    if isinstance(s, One):
        return f"one({s.rule})"
    if isinstance(s, Match):
        return f"match({s.rule})"
    if isinstance(s, Seq):
        return f"{_operand(s.first)}; {to_text(s.second)}"
    if isinstance(s, OrElse):
        return f"({to_text(s.first)}) orelse ({to_text(s.second)})"
    if isinstance(s, PPick):
        dist = (s.dist.name if isinstance(s.dist, NamedDist)
                else "[" + ", ".join(repr(p) for p in s.dist.probs) + "]")
        return "ppick(" + ", ".join([to_text(b) for b in s.branches] + [dist]) + ")"
    if isinstance(s, While):
        bound = "" if s.bound is None else f"({s.bound})"
        return f"while({to_text(s.cond)}){bound}do({to_text(s.body)})"
    if isinstance(s, Repeat):
        bound = "" if s.bound is None else f"({s.bound})"
        return f"repeat({to_text(s.body)}){bound}"
    if isinstance(s, SetPos):
        return f"setPos({s.target})"
    if isinstance(s, Macro):
        return f"#{s.name}#"
    raise TypeError(f"not a strategy: {s!r}")


def _operand(s: Strategy) -> str:
    return f"({to_text(s)})" if isinstance(s, Seq) else to_text(s)
