"""Abstract syntax of types and terms, contexts, and type-level substitution.

Types compare up to renaming of ``mu`` binders: ``==`` and ``hash`` go
through a de Bruijn canonical key, so every place that compares types
(typechecker, value checks, dictionaries keyed by type) is alpha-aware.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


class Type:
    """Base class for type expressions."""

    __slots__ = ()

    def _canon(self, bound: tuple[str, ...]) -> tuple:
        raise NotImplementedError

    @cached_property
    def key(self) -> tuple:
        return self._canon(())

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return frozenset(_free(self))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Type):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        from .printer import print_type

        return print_type(self, abbreviate=False)


@dataclass(frozen=True, eq=False)
class TVar(Type):
    name: str

    def _canon(self, bound):
        for i, b in enumerate(bound):
            if b == self.name:
                return ("B", i)
        return ("F", self.name)


@dataclass(frozen=True, eq=False)
class UnitT(Type):
    def _canon(self, bound):
        return ("I",)


@dataclass(frozen=True, eq=False)
class Atomic(Type):
    name: str

    def _canon(self, bound):
        return ("A", self.name)


@dataclass(frozen=True, eq=False)
class Sum(Type):
    left: Type
    right: Type

    def _canon(self, bound):
        return ("+", self.left._canon(bound), self.right._canon(bound))


@dataclass(frozen=True, eq=False)
class Tensor(Type):
    left: Type
    right: Type

    def _canon(self, bound):
        return ("*", self.left._canon(bound), self.right._canon(bound))


@dataclass(frozen=True, eq=False)
class Mu(Type):
    var: str
    body: Type

    def _canon(self, bound):
        return ("mu", self.body._canon((self.var,) + bound))

    def unfolding(self) -> Type:
        """``A[mu X. A / X]``."""
        return substitute_type(self.body, self.var, self)


UNIT = UnitT()
BIT = Sum(UNIT, UNIT)


def desugar_bit() -> Type:
    return BIT


def _free(a: Type) -> set[str]:
    match a:
        case TVar(name):
            return {name}
        case Sum(l, r) | Tensor(l, r):
            return set(l.free_vars | r.free_vars)
        case Mu(var, body):
            return set(body.free_vars - {var})
        case _:
            return set()


def free_type_vars(a: Type) -> frozenset[str]:
    return a.free_vars


def is_closed(a: Type) -> bool:
    return not a.free_vars


def type_size(a: Type) -> int:
    match a:
        case Sum(l, r) | Tensor(l, r):
            return 1 + type_size(l) + type_size(r)
        case Mu(_, body):
            return 1 + type_size(body)
        case _:
            return 1


# ---------------------------------------------------------------------------
# Well-formedness and substitution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtomSpec:
    """Model data for one atomic type: a finite carrier of ``size`` tokens.

    ``undiscardable`` lists tokens on which the configured discarding map is
    undefined; the default (empty) makes the discard total.
    """

    size: int
    undiscardable: frozenset[int] = frozenset()


Atoms = Mapping[str, AtomSpec]

NO_ATOMS: Atoms = {}


def valid_type_context(theta: Iterable[str]) -> bool:
    theta = list(theta)
    return len(set(theta)) == len(theta)


def ill_formed_part(theta: Iterable[str], a: Type, atoms: Atoms = NO_ATOMS) -> str | None:
    """Return a description of why ``theta |- a`` fails, or None if it holds."""
    theta = tuple(theta)
    if not valid_type_context(theta):
        return f"type context {list(theta)} has duplicate variables"

    def go(t: Type, scope: frozenset[str]) -> str | None:
        match t:
            case TVar(name):
                return None if name in scope else f"unbound type variable {name}"
            case UnitT():
                return None
            case Atomic(name):
                return None if name in atoms else f"unregistered atomic type {name}"
            case Sum(l, r) | Tensor(l, r):
                return go(l, scope) or go(r, scope)
            case Mu(var, body):
                return go(body, scope | {var})
        raise TypeError(f"not a type: {t!r}")

    return go(a, frozenset(theta))


def type_well_formed(theta: Iterable[str], a: Type, atoms: Atoms = NO_ATOMS) -> bool:
    return ill_formed_part(theta, a, atoms) is None


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """``base`` itself if unused, otherwise ``base`` with enough primes appended."""
    avoid = set(avoid)
    name = base
    while name in avoid:
        name += "'"
    return name


def substitute_type(a: Type, x: str, b: Type) -> Type:
    """Capture-avoiding ``a[b/x]``."""
    if x not in a.free_vars:
        return a
    match a:
        case TVar(name):
            return b if name == x else a
        case Sum(l, r):
            return Sum(substitute_type(l, x, b), substitute_type(r, x, b))
        case Tensor(l, r):
            return Tensor(substitute_type(l, x, b), substitute_type(r, x, b))
        case Mu(var, body):
            if var in b.free_vars:
                new = fresh_name(var, b.free_vars | body.free_vars | {x})
                body = substitute_type(body, var, TVar(new))
                var = new
            return Mu(var, substitute_type(body, x, b))
    return a


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        from .printer import print_term

        return print_term(self, compact=True)


def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class NewUnit(Term):
    var: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Discard(Term):
    var: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Seq(Term):
    first: Term
    second: Term
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Skip(Term):
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class While(Term):
    guard: str
    body: Term
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class LeftIntro(Term):
    target: str
    left: Type
    right: Type
    source: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class RightIntro(Term):
    target: str
    left: Type
    right: Type
    source: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Case(Term):
    scrutinee: str
    left_var: str
    left_branch: Term
    right_var: str
    right_branch: Term
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class PairIntro(Term):
    target: str
    first: str
    second: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class PairElim(Term):
    first: str
    second: str
    source: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Fold(Term):
    target: str
    mu: Type
    source: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Unfold(Term):
    target: str
    source: str
    pos: Pos | None = _pos()


TERM_KINDS = (
    NewUnit, Discard, Seq, Skip, While, LeftIntro, RightIntro,
    Case, PairIntro, PairElim, Fold, Unfold,
)


def seq(*terms: Term) -> Term:
    """Right-nested sequence of ``terms``; ``skip`` when empty."""
    if not terms:
        return Skip()
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Seq(t, out)
    return out


def term_vars(m: Term) -> set[str]:
    """Every term-variable name occurring anywhere in ``m``, binders included."""
    match m:
        case NewUnit(v) | Discard(v):
            return {v}
        case Seq(a, b):
            return term_vars(a) | term_vars(b)
        case Skip():
            return set()
        case While(b, body):
            return {b} | term_vars(body)
        case LeftIntro(y, _, _, x) | RightIntro(y, _, _, x) | Fold(y, _, x) | Unfold(y, x):
            return {y, x}
        case Case(y, x1, m1, x2, m2):
            return {y, x1, x2} | term_vars(m1) | term_vars(m2)
        case PairIntro(x, a, b) | PairElim(a, b, x):
            return {x, a, b}
    raise TypeError(f"not a term: {m!r}")


def term_size(m: Term) -> int:
    match m:
        case Seq(a, b):
            return 1 + term_size(a) + term_size(b)
        case While(_, body):
            return 1 + term_size(body)
        case Case(_, _, m1, _, m2):
            return 1 + term_size(m1) + term_size(m2)
        case _:
            return 1


def desugar_if(guard: str, body: Term, avoid: Iterable[str] = ()) -> Term:
    """``if b then {M}`` as the case statement that restores ``b`` on both arms.

    The binder is ``u`` unless that clashes with ``avoid`` or the guard, in
    which case it is primed until fresh.
    """
    u = fresh_name("u", set(avoid) | {guard})
    return Case(
        guard,
        u, LeftIntro(guard, UNIT, UNIT, u),
        u, Seq(RightIntro(guard, UNIT, UNIT, u), body),
    )


# ---------------------------------------------------------------------------
# Variable contexts
# ---------------------------------------------------------------------------

# A variable context is an insertion-ordered ``dict[str, Type]``.  Equality
# is association equality (dict ``==`` ignores order); the insertion order is
# the canonical tuple layout used by the denotational semantics.
Context = dict


def context_problem(gamma: Mapping[str, Type], atoms: Atoms = NO_ATOMS) -> str | None:
    for name, a in gamma.items():
        why = ill_formed_part((), a, atoms)
        if why is not None:
            return f"{name}: {why}"
    return None


def format_context(gamma: Mapping[str, Type]) -> str:
    from .printer import print_type

    return "{" + ", ".join(f"{x}: {print_type(a)}" for x, a in gamma.items()) + "}"
