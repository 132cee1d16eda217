"""Small-step operational semantics over configurations ``(M | V)``."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .printer import print_store, print_term, print_value
from .syntax import (
    Case, Discard, Fold, LeftIntro, NewUnit, PairElim, PairIntro, RightIntro,
    Seq, Skip, Term, Unfold, While, desugar_if,
)
from .values import STAR, FoldV, LeftV, PairV, RightV, Store, Value

DEFAULT_FUEL = 10_000


@dataclass(frozen=True, eq=True)
class Configuration:
    term: Term
    store: Mapping[str, Value]

    def is_terminal(self) -> bool:
        return isinstance(self.term, Skip)

    def __hash__(self):
        return hash((self.term, frozenset(self.store.items())))

    def __str__(self) -> str:
        return format_configuration(self)


class StuckError(Exception):
    def __init__(self, reason: str, config: Configuration):
        self.reason = reason
        self.config = config
        super().__init__(f"stuck: {reason} in {config}")


def step(c: Configuration) -> Configuration | None:
    """One reduction step; ``None`` if ``c`` is terminal.

    Raises :class:`StuckError` when no rule applies.
    """
    if c.is_terminal():
        return None
    store = dict(c.store)
    term = _reduce(c.term, store, c)
    return Configuration(term, store)


def _fetch(store: dict, x: str, c: Configuration) -> Value:
    if x not in store:
        raise StuckError(f"{x} has no value", c)
    return store.pop(x)


def _bind(store: dict, x: str, v: Value, c: Configuration) -> None:
    if x in store:
        raise StuckError(f"{x} already has a value", c)
    store[x] = v


def _reduce(m: Term, store: dict, c: Configuration) -> Term:
    # store is a private copy; rules update it in place and return the new term
    match m:
        case NewUnit(u):
            _bind(store, u, STAR, c)
            return Skip()
        case Discard(x):
            _fetch(store, x, c)
            return Skip()
        case Seq(Skip(), rest):
            return rest
        case Seq(first, rest):
            return Seq(_reduce(first, store, c), rest)
        case While(b, body):
            if b not in store:
                raise StuckError(f"loop guard {b} has no value", c)
            return desugar_if(b, Seq(body, m), avoid=store)
        case LeftIntro(y, a, b, x):
            v = _fetch(store, x, c)
            _bind(store, y, LeftV(a, b, v), c)
            return Skip()
        case RightIntro(y, a, b, x):
            v = _fetch(store, x, c)
            _bind(store, y, RightV(a, b, v), c)
            return Skip()
        case Case(y, x1, m1, x2, m2):
            v = _fetch(store, y, c)
            match v:
                case LeftV(_, _, w):
                    _bind(store, x1, w, c)
                    return m1
                case RightV(_, _, w):
                    _bind(store, x2, w, c)
                    return m2
            raise StuckError(f"case on {y} = {print_value(v)}, which is not an injection", c)
        case PairIntro(x, x1, x2):
            v1 = _fetch(store, x1, c)
            v2 = _fetch(store, x2, c)
            _bind(store, x, PairV(v1, v2), c)
            return Skip()
        case PairElim(x1, x2, x):
            v = _fetch(store, x, c)
            if not isinstance(v, PairV):
                raise StuckError(f"{x} = {print_value(v)} is not a pair", c)
            _bind(store, x1, v.first, c)
            _bind(store, x2, v.second, c)
            return Skip()
        case Fold(y, mu, x):
            v = _fetch(store, x, c)
            _bind(store, y, FoldV(mu, v), c)
            return Skip()
        case Unfold(y, x):
            v = _fetch(store, x, c)
            if not isinstance(v, FoldV):
                raise StuckError(f"{x} = {print_value(v)} is not a fold", c)
            _bind(store, y, v.value, c)
            return Skip()
        case Skip():
            raise StuckError("skip does not reduce", c)
    raise TypeError(f"not a term: {m!r}")


@dataclass(frozen=True)
class Terminated:
    store: Store
    steps: int


@dataclass(frozen=True)
class OutOfFuel:
    """Fuel ran out: termination is unknown, not refuted."""

    config: Configuration
    steps: int


@dataclass(frozen=True)
class Stuck:
    reason: str
    config: Configuration
    steps: int


def run(c: Configuration, fuel: int = DEFAULT_FUEL) -> Terminated | OutOfFuel | Stuck:
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    steps = 0
    while not c.is_terminal():
        if steps == fuel:
            return OutOfFuel(c, steps)
        try:
            c = step(c)
        except StuckError as e:
            return Stuck(e.reason, e.config, steps)
        steps += 1
    return Terminated(c.store, steps)


def trace(c: Configuration, fuel: int = DEFAULT_FUEL) -> list[Configuration]:
    """``c`` followed by its successors, at most ``fuel`` steps long.

    A stuck configuration raises :class:`StuckError` (as ``run`` reports it).
    """
    out = [c]
    while len(out) <= fuel and not c.is_terminal():
        c = step(c)
        out.append(c)
    return out


def format_configuration(c: Configuration, abbreviations=None) -> str:
    return f"({print_term(c.term, abbreviations, compact=True)} | {print_store(c.store, abbreviations)})"


def trace_records(configs: list[Configuration], abbreviations=None) -> list[str]:
    """One JSON line per configuration: step index, printed term and store."""
    return [
        json.dumps({
            "step": i,
            "term": print_term(c.term, abbreviations, compact=True),
            "store": {x: print_value(v, abbreviations) for x, v in c.store.items()},
        })
        for i, c in enumerate(configs)
    ]
