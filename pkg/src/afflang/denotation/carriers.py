"""Interpretation of types in sets and partial functions.

A closed type denotes the set of its values; ``mu`` types denote their
initial algebras, i.e. the finite fold-trees.  Carriers are infinite in
general, so they are exposed graded by value size (node count).

Two independent routes are provided:

* :func:`sem_elems` works on closed types syntactically, unrolling a ``mu``
  by substituting it into its body.
* :func:`interpret` evaluates an open type ``theta |- A`` as a functor on
  carriers, i.e. against an environment assigning a carrier to every free
  type variable, and builds ``mu`` as a self-referential carrier.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Mapping

from ..syntax import (
    NO_ATOMS, UNIT, Atomic, Atoms, Mu, Sum, Tensor, TVar, Type, UnitT,
)
from ..values import STAR, AtomV, FoldV, LeftV, PairV, RightV, Value


def atoms_key(atoms: Atoms) -> tuple:
    return tuple(sorted((n, s.size, tuple(sorted(s.undiscardable))) for n, s in atoms.items()))


def sem_elems(a: Type, size_bound: int, atoms: Atoms = NO_ATOMS) -> list[Value]:
    """All values of closed type ``a`` with at most ``size_bound`` nodes.

    Ordered by size, then by construction order; no duplicates.
    """
    if a.free_vars:
        raise ValueError(f"sem_elems needs a closed type, got {a}")
    key = atoms_key(atoms)
    out: list[Value] = []
    for n in range(1, size_bound + 1):
        out.extend(_exactly(a, n, key))
    return out


@lru_cache(maxsize=None)
def _exactly(a: Type, n: int, atoms: tuple) -> tuple[Value, ...]:
    if n <= 0:
        return ()
    match a:
        case UnitT():
            return (STAR,) if n == 1 else ()
        case Atomic(name):
            if n != 1:
                return ()
            size = next((s for k, s, _ in atoms if k == name), 0)
            return tuple(AtomV(name, i) for i in range(size))
        case Sum(l, r):
            return tuple(LeftV(l, r, v) for v in _exactly(l, n - 1, atoms)) + tuple(
                RightV(l, r, v) for v in _exactly(r, n - 1, atoms)
            )
        case Tensor(l, r):
            return tuple(
                PairV(x, y)
                for k in range(1, n - 1)
                for x in _exactly(l, k, atoms)
                for y in _exactly(r, n - 1 - k, atoms)
            )
        case Mu():
            return tuple(FoldV(a, v) for v in _exactly(a.unfolding(), n - 1, atoms))
    raise ValueError(f"cannot enumerate {a!r}")


def fold_iso(mu: Mu, v: Value) -> Value:
    """``A[mu X. A / X]  ->  mu X. A``."""
    return FoldV(mu, v)


def unfold_iso(mu: Mu, w: Value) -> Value:
    """Inverse of :func:`fold_iso`; ``w`` must be a fold at ``mu``."""
    if not isinstance(w, FoldV) or w.mu != mu:
        raise ValueError(f"unfold_iso: {w} is not a fold at {mu}")
    return w.value


# ---------------------------------------------------------------------------
# Functorial interpretation of open types
# ---------------------------------------------------------------------------


class Carrier:
    """A set graded by element size, named by the closed type whose values it holds.

    ``ty`` is only used to annotate constructed values.
    """

    def __init__(self, ty: Type, elems: Callable[[int], tuple[Value, ...]]):
        self.ty = ty
        self._elems = elems
        self._memo: dict[int, tuple[Value, ...]] = {}

    def exactly(self, n: int) -> tuple[Value, ...]:
        if n <= 0:
            return ()
        if n not in self._memo:
            self._memo[n] = self._elems(n)
        return self._memo[n]

    def upto(self, bound: int) -> list[Value]:
        return [v for n in range(1, bound + 1) for v in self.exactly(n)]


def unit_carrier() -> Carrier:
    return Carrier(UNIT, lambda n: (STAR,) if n == 1 else ())


def atom_carrier(name: str, atoms: Atoms) -> Carrier:
    size = atoms[name].size if name in atoms else 0
    return Carrier(
        Atomic(name), lambda n: tuple(AtomV(name, i) for i in range(size)) if n == 1 else ()
    )


def sum_carrier(l: Carrier, r: Carrier) -> Carrier:
    ty = Sum(l.ty, r.ty)
    return Carrier(
        ty,
        lambda n: tuple(LeftV(l.ty, r.ty, v) for v in l.exactly(n - 1))
        + tuple(RightV(l.ty, r.ty, v) for v in r.exactly(n - 1)),
    )


def tensor_carrier(l: Carrier, r: Carrier) -> Carrier:
    return Carrier(
        Tensor(l.ty, r.ty),
        lambda n: tuple(
            PairV(x, y)
            for k in range(1, n - 1)
            for x in l.exactly(k)
            for y in r.exactly(n - 1 - k)
        ),
    )


def reify(a: Type, env: Mapping[str, Carrier]) -> Type:
    """The closed type named by ``a`` under ``env`` (its annotation form)."""
    match a:
        case TVar(x):
            return env[x].ty if x in env else a
        case Sum(l, r):
            return Sum(reify(l, env), reify(r, env))
        case Tensor(l, r):
            return Tensor(reify(l, env), reify(r, env))
        case Mu(x, body):
            inner = {k: v for k, v in env.items() if k != x}
            return Mu(x, reify(body, inner))
    return a


def initial_algebra(
    body: Callable[[Carrier], Carrier], ty: Type
) -> Carrier:
    """Least fixed point of ``X |-> body(X)``: fold-trees over ``body``.

    ``body`` is applied once, to the carrier being defined; elements of size
    ``n`` are folds of ``body``-elements of size ``n - 1``.
    """
    unrolled: list[Carrier] = []

    def elems(n: int) -> tuple[Value, ...]:
        if not unrolled:
            unrolled.append(body(self))
        return tuple(FoldV(ty, v) for v in unrolled[0].exactly(n - 1))

    self = Carrier(ty, elems)
    return self


def interpret(a: Type, env: Mapping[str, Carrier], atoms: Atoms = NO_ATOMS) -> Carrier:
    """``[[theta |- a]]`` applied to the carriers in ``env``."""
    match a:
        case TVar(x):
            if x not in env:
                raise ValueError(f"type variable {x} has no carrier")
            return env[x]
        case UnitT():
            return unit_carrier()
        case Atomic(name):
            return atom_carrier(name, atoms)
        case Sum(l, r):
            return sum_carrier(interpret(l, env, atoms), interpret(r, env, atoms))
        case Tensor(l, r):
            return tensor_carrier(interpret(l, env, atoms), interpret(r, env, atoms))
        case Mu(x, body):
            return initial_algebra(
                lambda fix: interpret(body, {**env, x: fix}, atoms), reify(a, env)
            )
    raise ValueError(f"cannot interpret {a!r}")
