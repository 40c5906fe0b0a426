"""Attribute values and record labels.

A label is a record: an ordered list of ``(attribute, value)`` pairs that must
contain ``Name``.  Values are concrete Python scalars (``int``, ``float``,
``bool``, ``str``), variables (:class:`Var`), or terms (:class:`Term`) built
from operators over other values.  The ``Interface`` attribute of a node holds
a tuple of port names and is the only non-scalar concrete value.
"""
from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping

from .errors import EvalError

Scalar = (bool, int, float, str)


@dataclass(frozen=True)
class Var:
    """An attribute variable, bound at matching time."""

    name: str

    def __repr__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True)
class Term:
    """An operator applied to attribute values, e.g. ``Term('+', (Var('x'), 1))``."""

    op: str
    args: tuple

    def __post_init__(self):
        if self.op not in TERM_OPS:
            raise ValueError(f"unknown term operator {self.op!r}")
        object.__setattr__(self, "args", tuple(self.args))


TERM_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": operator.truediv,
    "neg": operator.neg,
    "not": operator.not_,
}


def is_ground(value: Any) -> bool:
    if isinstance(value, Var):
        return False
    if isinstance(value, Term):
        return all(is_ground(a) for a in value.args)
    return True


def variables_of(value: Any) -> set[str]:
    if isinstance(value, Var):
        return {value.name}
    if isinstance(value, Term):
        out: set[str] = set()
        for a in value.args:
            out |= variables_of(a)
        return out
    return set()


def instantiate(value: Any, bindings: Mapping[str, Any]) -> Any:
    """Substitute bound variables and reduce terms to concrete values."""
    if isinstance(value, Var):
        try:
            return bindings[value.name]
        except KeyError:
            raise EvalError(f"unbound variable {value.name!r}") from None
    if isinstance(value, Term):
        args = [instantiate(a, bindings) for a in value.args]
        try:
            return TERM_OPS[value.op](*args)
        except ZeroDivisionError:
            raise EvalError("division by zero in term") from None
    return value


def values_equal(a: Any, b: Any, tol: float = 0.0) -> bool:
    """Equality on concrete values; numbers compare within ``tol``.

    Booleans never equal numbers, even though Python treats ``True == 1``.
    """
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        if a == b:
            return True
        return tol > 0 and math.isclose(a, b, rel_tol=0.0, abs_tol=tol)
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(values_equal(x, y, tol) for x, y in zip(a, b))
    return type(a) is type(b) and a == b


class Record:
    """Immutable ordered attribute record.

    >>> r = Record([("Name", "Bank"), ("z", 1)])
    >>> r["z"], r.name
    (1, 'Bank')
    >>> r.set("z", 0)["z"]
    0
    """

    __slots__ = ("_pairs", "_index", "_hash")

    def __init__(self, pairs: Iterable[tuple[str, Any]] | Mapping[str, Any] = ()):
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        items = []
        index = {}
        for key, value in pairs:
            if key in index:
                raise ValueError(f"duplicate attribute {key!r} in record")
            if isinstance(value, list):
                value = tuple(value)
            index[key] = len(items)
            items.append((key, value))
        self._pairs = tuple(items)
        self._index = index
        self._hash = None

    @property
    def name(self) -> Any:
        return self.get("Name")

    def __getitem__(self, key: str) -> Any:
        return self._pairs[self._index[key]][1]

    def get(self, key: str, default: Any = None) -> Any:
        i = self._index.get(key)
        return default if i is None else self._pairs[i][1]

    def __contains__(self, key: object) -> bool:
        return key in self._index

    def __iter__(self) -> Iterator[str]:
        return (k for k, _ in self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def keys(self) -> list[str]:
        return [k for k, _ in self._pairs]

    def items(self) -> tuple[tuple[str, Any], ...]:
        return self._pairs

    def set(self, key: str, value: Any) -> "Record":
        return self.update({key: value})

    def update(self, changes: Mapping[str, Any]) -> "Record":
        if not changes:
            return self
        pairs = [(k, changes[k] if k in changes else v) for k, v in self._pairs]
        pairs += [(k, v) for k, v in changes.items() if k not in self._index]
        return Record(pairs)

    def without(self, *keys: str) -> "Record":
        return Record([(k, v) for k, v in self._pairs if k not in keys])

    def is_ground(self) -> bool:
        return all(is_ground(v) for _, v in self._pairs)

    def instantiate(self, bindings: Mapping[str, Any]) -> "Record":
        return Record([(k, instantiate(v, bindings)) for k, v in self._pairs])

    def equals(self, other: "Record", tol: float = 0.0) -> bool:
        """Order-insensitive comparison; ``Interface`` compares as a multiset."""
        if set(self._index) != set(other._index):
            return False
        for key, value in self._pairs:
            theirs = other[key]
            if key == "Interface":
                if sorted(value) != sorted(theirs):
                    return False
            elif not values_equal(value, theirs, tol):
                return False
        return True

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Record) and self.equals(other)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(
                (k, tuple(sorted(v)) if k == "Interface" else v) for k, v in self._pairs
            ))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v!r}" for k, v in self._pairs)
        return f"Record({inner})"


EMPTY = Record()


@dataclass(frozen=True)
class Signature:
    """The four pairwise disjoint vocabularies a port graph is built over."""

    attributes: frozenset = frozenset()
    attribute_variables: frozenset = frozenset()
    values: frozenset = frozenset()
    value_variables: frozenset = frozenset()

    def violations(self) -> list[str]:
        sets = {
            "attributes": self.attributes,
            "attribute_variables": self.attribute_variables,
            "values": self.values,
            "value_variables": self.value_variables,
        }
        out = []
        names = list(sets)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                common = sets[a] & sets[b]
                if common:
                    out.append(f"signature sets {a} and {b} overlap: {sorted(map(str, common))}")
        return out

    @classmethod
    def of_records(cls, records: Iterable[Record]) -> "Signature":
        attributes, values, value_vars = set(), set(), set()
        for rec in records:
            for key, value in rec.items():
                attributes.add(key)
                value_vars |= variables_of(value)
                if is_ground(value) and not isinstance(value, (Term, tuple)):
                    # tag values by type so 1 and True and "1" stay distinct
                    values.add((type(value).__name__, value))
        return cls(frozenset(attributes), frozenset(), frozenset(values), frozenset(value_vars))
