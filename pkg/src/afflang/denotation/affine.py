"""Affine interpretation of types: every type paired with a discarding map.

Objects of the slice over the unit are pairs ``(carrier, discard)`` where
``discard`` is a partial map from the carrier to the one-element set ``I``
(``None`` stands for "undefined").  The interpretation is built bottom-up:

* ``I`` gets the identity,
* an atomic type gets the map configured for it,
* ``A + B`` gets the copairing of the component maps,
* ``A * B`` gets the tensor of the component maps followed by the unitor
  ``I * I -> I``,
* ``mu X. A`` gets the map induced on the initial algebra, which satisfies
  ``discard(fold v) = discard_{A[mu X. A/X]}(v)``.

The forgetful projection to the plain interpretation is ``.carrier``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping

from ..syntax import NO_ATOMS, Atomic, Atoms, AtomSpec, Mu, Sum, Tensor, TVar, Type, UnitT
from ..values import STAR, AtomV, FoldV, LeftV, PairV, RightV, Value
from .carriers import (
    Carrier, atom_carrier, atoms_key, initial_algebra, reify, sum_carrier,
    tensor_carrier, unit_carrier,
)

DiscardMap = Callable[[Value], "Value | None"]


@dataclass(frozen=True)
class AffineObject:
    carrier: Carrier
    discard: DiscardMap


def _identity_on_unit(v: Value) -> Value | None:
    return STAR if v == STAR else None


def _unitor(pair: tuple) -> Value:
    # I * I -> I
    return STAR


def affine_unit() -> AffineObject:
    return AffineObject(unit_carrier(), _identity_on_unit)


def affine_atom(name: str, atoms: Atoms) -> AffineObject:
    spec = atoms.get(name, AtomSpec(0))

    def discard(v: Value) -> Value | None:
        if isinstance(v, AtomV) and v.atom == name and v.index not in spec.undiscardable:
            return STAR
        return None

    return AffineObject(atom_carrier(name, atoms), discard)


def affine_sum(l: AffineObject, r: AffineObject) -> AffineObject:
    def copair(v: Value) -> Value | None:
        match v:
            case LeftV(_, _, w):
                return l.discard(w)
            case RightV(_, _, w):
                return r.discard(w)
        return None

    return AffineObject(sum_carrier(l.carrier, r.carrier), copair)


def affine_tensor(l: AffineObject, r: AffineObject) -> AffineObject:
    def discard(v: Value) -> Value | None:
        if not isinstance(v, PairV):
            return None
        a, b = l.discard(v.first), r.discard(v.second)
        if a is None or b is None:
            return None
        return _unitor((a, b))

    return AffineObject(tensor_carrier(l.carrier, r.carrier), discard)


def affine_initial_algebra(
    body: Callable[[AffineObject], AffineObject], ty: Type
) -> AffineObject:
    """Initial algebra of ``body`` in the slice, with its colimit-induced discard."""
    unrolled: list[AffineObject] = []

    def unroll() -> AffineObject:
        if not unrolled:
            unrolled.append(body(self))
        return unrolled[0]

    def discard(v: Value) -> Value | None:
        if not isinstance(v, FoldV):
            return None
        return unroll().discard(v.value)

    carrier = initial_algebra(lambda _: unroll().carrier, ty)
    self = AffineObject(carrier, discard)
    return self


def affine(a: Type, env: Mapping[str, AffineObject], atoms: Atoms = NO_ATOMS) -> AffineObject:
    """``(|theta |- a|)`` applied to the affine objects in ``env``."""
    match a:
        case TVar(x):
            if x not in env:
                raise ValueError(f"type variable {x} has no affine object")
            return env[x]
        case UnitT():
            return affine_unit()
        case Atomic(name):
            return affine_atom(name, atoms)
        case Sum(l, r):
            return affine_sum(affine(l, env, atoms), affine(r, env, atoms))
        case Tensor(l, r):
            return affine_tensor(affine(l, env, atoms), affine(r, env, atoms))
        case Mu(x, body):
            carriers = {k: o.carrier for k, o in env.items()}
            return affine_initial_algebra(
                lambda fix: affine(body, {**env, x: fix}, atoms), reify(a, carriers)
            )
    raise ValueError(f"cannot interpret {a!r}")


@lru_cache(maxsize=None)
def _closed(a: Type, key: tuple) -> AffineObject:
    atoms = {n: AtomSpec(size, frozenset(und)) for n, size, und in key}
    return affine(a, {}, atoms)


def affine_closed(a: Type, atoms: Atoms = NO_ATOMS) -> AffineObject:
    if a.free_vars:
        raise ValueError(f"expected a closed type, got {a}")
    return _closed(a, atoms_key(atoms))


def discard(a: Type, v: Value, atoms: Atoms = NO_ATOMS) -> Value | None:
    """The synthesized discarding map of closed type ``a`` applied to ``v``.

    Returns ``STAR`` or ``None`` (undefined; only possible when an atomic
    discard is configured partial).
    """
    return affine_closed(a, atoms).discard(v)
