"""Affine typechecking: output-context inference for terms, value typing and
configuration well-formedness.

``check_term(gamma, m)`` returns the unique ``sigma`` such that
``<gamma> m <sigma>`` is derivable, or raises a :class:`TypingError`.
Contexts are insertion-ordered dicts; the order of ``sigma`` is what the
typing rules' threading produces (consumed variables drop out, introduced
ones are appended).
"""
from __future__ import annotations

from typing import Mapping

from .syntax import (
    BIT, NO_ATOMS, UNIT, Atomic, Atoms, Case, Discard, Fold, LeftIntro, Mu,
    NewUnit, PairElim, PairIntro, Pos, RightIntro, Seq, Skip, Sum, Tensor,
    Term, Type, Unfold, UnitT, While, format_context, ill_formed_part,
)
from .values import AtomV, FoldV, LeftV, PairV, RightV, Star, Value, annotated_type


class TypingError(Exception):
    code = "E000"

    def __init__(self, message: str, pos: Pos | None = None):
        self.message = message
        self.pos = pos
        where = f"{pos}: " if pos is not None else ""
        super().__init__(f"{where}[{self.code}] {message}")


class UnboundVariable(TypingError):
    code = "E001"

    def __init__(self, var: str, pos: Pos | None = None):
        self.var = var
        super().__init__(f"unbound variable {var}", pos)


class DuplicateVariable(TypingError):
    code = "E002"

    def __init__(self, var: str, pos: Pos | None = None):
        self.var = var
        super().__init__(f"variable {var} is already in the context", pos)


class TypeMismatch(TypingError):
    code = "E003"

    def __init__(self, var: str | None, expected, found, pos: Pos | None = None):
        self.var = var
        self.expected = expected
        self.found = found
        subject = f"{var} has type" if var is not None else "found"
        super().__init__(f"expected {expected}, but {subject} {found}", pos)


class BranchContextMismatch(TypingError):
    code = "E004"

    def __init__(self, first: Mapping, second: Mapping, pos: Pos | None = None,
                 what: str = "case branches end in different contexts"):
        self.first = dict(first)
        self.second = dict(second)
        super().__init__(f"{what}: {format_context(first)} vs {format_context(second)}", pos)


class GuardNotBit(TypingError):
    code = "E005"

    def __init__(self, var: str, found: Type, pos: Pos | None = None):
        self.var = var
        self.found = found
        super().__init__(f"loop guard {var} must have type bit, not {found}", pos)


class IllFormedAnnotation(TypingError):
    code = "E006"

    def __init__(self, annotation: Type, why: str, pos: Pos | None = None):
        self.annotation = annotation
        super().__init__(f"ill-formed type annotation {annotation}: {why}", pos)


class AmbiguousValueType(TypingError):
    code = "E007"

    def __init__(self, var: str, why: str):
        self.var = var
        super().__init__(f"cannot determine the type of {var}: {why}")


class StoreMismatch(TypingError):
    code = "E008"


ERROR_CODES = {
    cls.__name__: cls.code
    for cls in (UnboundVariable, DuplicateVariable, TypeMismatch, BranchContextMismatch,
                GuardNotBit, IllFormedAnnotation, AmbiguousValueType, StoreMismatch)
}


def _closed_annotation(a: Type, atoms: Atoms, pos) -> None:
    why = ill_formed_part((), a, atoms)
    if why is not None:
        raise IllFormedAnnotation(a, why, pos)


def _take(ctx: dict, x: str, pos) -> Type:
    if x not in ctx:
        raise UnboundVariable(x, pos)
    return ctx.pop(x)


def _put(ctx: dict, x: str, a: Type, pos) -> None:
    if x in ctx:
        raise DuplicateVariable(x, pos)
    ctx[x] = a


def check_term(gamma: Mapping[str, Type], m: Term, atoms: Atoms = NO_ATOMS) -> dict[str, Type]:
    """Infer the output context of ``m`` from the input context ``gamma``.

    ``gamma`` must be well formed (closed types, distinct names); it is not
    modified.
    """
    return _check(dict(gamma), m, atoms)


def _check(ctx: dict, m: Term, atoms: Atoms) -> dict:
    # ctx is owned by this call and may be mutated
    pos = m.pos
    match m:
        case NewUnit(u):
            _put(ctx, u, UNIT, pos)
        case Discard(x):
            _take(ctx, x, pos)
        case Seq(first, second):
            ctx = _check(ctx, first, atoms)
            ctx = _check(ctx, second, atoms)
        case Skip():
            pass
        case While(b, body):
            if b not in ctx:
                raise UnboundVariable(b, pos)
            if ctx[b] != BIT:
                raise GuardNotBit(b, ctx[b], pos)
            after = _check(dict(ctx), body, atoms)
            if after != ctx:
                raise BranchContextMismatch(ctx, after, pos, what="loop body does not restore its context")
        case LeftIntro(y, a, b, x) | RightIntro(y, a, b, x):
            _closed_annotation(a, atoms, pos)
            _closed_annotation(b, atoms, pos)
            found = _take(ctx, x, pos)
            want = a if isinstance(m, LeftIntro) else b
            if found != want:
                raise TypeMismatch(x, want, found, pos)
            _put(ctx, y, Sum(a, b), pos)
        case Case(y, x1, m1, x2, m2):
            found = _take(ctx, y, pos)
            if not isinstance(found, Sum):
                raise TypeMismatch(y, "a sum type", found, pos)
            left_ctx, right_ctx = dict(ctx), ctx
            _put(left_ctx, x1, found.left, pos)
            _put(right_ctx, x2, found.right, pos)
            sigma1 = _check(left_ctx, m1, atoms)
            sigma2 = _check(right_ctx, m2, atoms)
            if sigma1 != sigma2:
                raise BranchContextMismatch(sigma1, sigma2, pos)
            ctx = sigma1
        case PairIntro(x, x1, x2):
            if x1 == x2:
                raise DuplicateVariable(x1, pos)
            a = _take(ctx, x1, pos)
            b = _take(ctx, x2, pos)
            _put(ctx, x, Tensor(a, b), pos)
        case PairElim(x1, x2, x):
            found = _take(ctx, x, pos)
            if not isinstance(found, Tensor):
                raise TypeMismatch(x, "a tensor type", found, pos)
            if x1 == x2:
                raise DuplicateVariable(x1, pos)
            _put(ctx, x1, found.left, pos)
            _put(ctx, x2, found.right, pos)
        case Fold(y, mu, x):
            _closed_annotation(mu, atoms, pos)
            if not isinstance(mu, Mu):
                raise IllFormedAnnotation(mu, "fold needs a mu type", pos)
            found = _take(ctx, x, pos)
            want = mu.unfolding()
            if found != want:
                raise TypeMismatch(x, want, found, pos)
            _put(ctx, y, mu, pos)
        case Unfold(y, x):
            found = _take(ctx, x, pos)
            if not isinstance(found, Mu):
                raise TypeMismatch(x, "a mu type", found, pos)
            _put(ctx, y, found.unfolding(), pos)
        case _:
            raise TypeError(f"not a term: {m!r}")
    return ctx


def value_problem(v: Value, a: Type, atoms: Atoms = NO_ATOMS) -> str | None:
    """Why ``|- v : a`` fails (innermost failing sub-derivation), or None."""
    match v, a:
        case Star(), UnitT():
            return None
        case (LeftV(l, r, w), Sum(al, ar)) | (RightV(l, r, w), Sum(al, ar)):
            if l != al or r != ar:
                return f"annotation [{l},{r}] does not match {a}"
            return value_problem(w, al if isinstance(v, LeftV) else ar, atoms)
        case PairV(x, y), Tensor(al, ar):
            return value_problem(x, al, atoms) or value_problem(y, ar, atoms)
        case FoldV(mu, w), Mu():
            if mu != a:
                return f"fold annotation {mu} does not match {a}"
            return value_problem(w, a.unfolding(), atoms)
        case AtomV(name, k), Atomic(aname):
            if name != aname or aname not in atoms:
                return f"token of {name} is not an element of {a}"
            if not 0 <= k < atoms[aname].size:
                return f"token {k} is outside the carrier of {name}"
            return None
    return f"{v} is not a value of type {a}"


def check_value(v: Value, a: Type, atoms: Atoms = NO_ATOMS) -> bool:
    return value_problem(v, a, atoms) is None


def check_store(gamma: Mapping[str, Type], store: Mapping[str, Value], atoms: Atoms = NO_ATOMS) -> None:
    """``gamma |- store``: same variables, each value well typed."""
    if set(gamma) != set(store):
        raise StoreMismatch(
            f"store variables {sorted(store)} do not match context {sorted(gamma)}"
        )
    for x, a in gamma.items():
        if value_problem(store[x], a, atoms) is not None:
            raise TypeMismatch(x, a, annotated_type(store[x]))


def reconstruct_context(store: Mapping[str, Value], atoms: Atoms = NO_ATOMS) -> dict[str, Type]:
    """Recover the unique context typing ``store`` from its annotations."""
    gamma = {}
    for x, v in store.items():
        a = annotated_type(v)
        why = ill_formed_part((), a, atoms) or value_problem(v, a, atoms)
        if why is not None:
            raise AmbiguousValueType(x, why)
        gamma[x] = a
    return gamma


def check_configuration(
    m: Term,
    store: Mapping[str, Value],
    declared: Mapping[str, Type] | None = None,
    atoms: Atoms = NO_ATOMS,
) -> tuple[dict[str, Type], dict[str, Type]]:
    """Return ``(gamma, sigma)`` with ``gamma; sigma |- (m | store)``.

    With ``declared`` the input context is taken from it (ordering included)
    and the store is checked against it; otherwise it is reconstructed from
    the value annotations in store order.
    """
    if declared is None:
        gamma = reconstruct_context(store, atoms)
    else:
        for x, a in declared.items():
            _closed_annotation(a, atoms, None)
        gamma = dict(declared)
        check_store(gamma, store, atoms)
    return gamma, check_term(gamma, m, atoms)
