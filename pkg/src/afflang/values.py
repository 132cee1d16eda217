"""Runtime values: the value grammar plus tokens for atomic carriers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .syntax import UNIT, Atomic, Sum, Tensor, Type


class Value:
    __slots__ = ()

    def __str__(self) -> str:
        from .printer import print_value

        return print_value(self)


@dataclass(frozen=True)
class Star(Value):
    pass


@dataclass(frozen=True)
class LeftV(Value):
    left: Type
    right: Type
    value: Value


@dataclass(frozen=True)
class RightV(Value):
    left: Type
    right: Type
    value: Value


@dataclass(frozen=True)
class PairV(Value):
    first: Value
    second: Value


@dataclass(frozen=True)
class FoldV(Value):
    mu: Type
    value: Value


@dataclass(frozen=True)
class AtomV(Value):
    """Token ``index`` of the carrier of atomic type ``atom``.

    Never produced by a program (atomic types have no introduction rules);
    only enumerated carriers and declared inputs contain these.
    """

    atom: str
    index: int


STAR = Star()
FF = LeftV(UNIT, UNIT, STAR)
TT = RightV(UNIT, UNIT, STAR)

# Variable name -> value; never mutated once built.
Store = Mapping[str, Value]


def value_size(v: Value) -> int:
    """Node count: every constructor and ``*`` counts one."""
    match v:
        case LeftV(_, _, w) | RightV(_, _, w) | FoldV(_, w):
            return 1 + value_size(w)
        case PairV(a, b):
            return 1 + value_size(a) + value_size(b)
    return 1


def annotated_type(v: Value) -> Type:
    """The type a value's annotations commit it to (not checked)."""
    match v:
        case Star():
            return UNIT
        case LeftV(a, b, _) | RightV(a, b, _):
            return Sum(a, b)
        case PairV(a, b):
            return Tensor(annotated_type(a), annotated_type(b))
        case FoldV(mu, _):
            return mu
        case AtomV(name, _):
            return Atomic(name)
    raise TypeError(f"not a value: {v!r}")

