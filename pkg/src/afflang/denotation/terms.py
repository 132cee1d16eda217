"""Denotations of terms, values and configurations.

A term ``<gamma> M <sigma>`` denotes a partial map from tuples laid out in
the order of ``gamma`` to tuples laid out in the order of ``sigma``.  The
unitors and associators are no-ops on flat tuples; the symmetry is an
explicit permutation wherever two layouts have to agree (case branches and
loop bodies).

While loops denote ``lfp(W_f)`` where ``f`` is the body and

    W_f(g) = [id * left, g . f . (id * right)] . d

with ``d`` the distributivity iso splitting on the guard.  The fixpoint is
evaluated pointwise: ``W_f^n(bottom)`` applied to one input, i.e. the body
runs while the guard is ``tt``, and the evaluation is undefined once its
fuel is spent.

Fuel is shared across the whole evaluation and metered in one of two units:

``steps``
    each clause is charged the number of reduction steps the small-step
    machine takes for it: 1 per primitive statement, 0 for ``skip``, 1 per
    sequencing, 1 + branch for a case, and per loop unfolding 3 when the
    guard is ``ff`` or ``5 + body`` when it is ``tt``.  At equal fuel the
    denotation is defined exactly when ``run`` terminates.
``unfoldings``
    only loop unfoldings are counted: fuel ``n`` evaluates each loop through
    the iterates ``W^n(bottom)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from ..syntax import (
    NO_ATOMS, UNIT, Atoms, Case, Discard, Fold, LeftIntro, Mu, NewUnit,
    PairElim, PairIntro, RightIntro, Seq, Skip, Sum, Tensor, Term, Type,
    Unfold, While,
)
from ..typecheck import check_configuration, check_term
from ..values import STAR, FoldV, LeftV, PairV, RightV, Star, Value
from .affine import discard
from .carriers import fold_iso, unfold_iso

# reduction steps charged per loop unfolding, excluding the body
EXIT_COST = 3
CONTINUE_COST = 5

UNITS = ("steps", "unfoldings")


class _Bottom:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BOTTOM"

    def __bool__(self) -> bool:
        return False


BOTTOM = _Bottom()


class _Undefined(Exception):
    pass


class Budget:
    def __init__(self, fuel: int, unit: str = "steps"):
        if unit not in UNITS:
            raise ValueError(f"unknown fuel unit {unit!r}")
        if fuel < 0:
            raise ValueError("fuel must be non-negative")
        self.left = fuel
        self.unit = unit

    def steps(self, n: int) -> None:
        if self.unit == "steps" and n:
            self.left -= n
            if self.left < 0:
                raise _Undefined

    def unfolding(self) -> None:
        if self.unit == "unfoldings":
            self.left -= 1
            if self.left < 0:
                raise _Undefined


Layout = tuple[tuple[str, Type], ...]
Fn = Callable[[tuple, Budget], tuple]


def _index(layout: Layout, x: str) -> int:
    for i, (name, _) in enumerate(layout):
        if name == x:
            return i
    raise KeyError(x)


def _drop(t: tuple, i: int) -> tuple:
    return t[:i] + t[i + 1:]


def _permutation(src: Layout, dst: Layout) -> Callable[[tuple], tuple]:
    idx = tuple(_index(src, name) for name, _ in dst)
    if idx == tuple(range(len(src))):
        return lambda t: t
    return lambda t: tuple(t[i] for i in idx)


@dataclass(frozen=True)
class Denotation:
    """``[[<inputs> M <outputs>]]`` with an explicit, fuel-indexed evaluator."""

    inputs: Layout
    outputs: Layout
    fn: Fn

    def apply(self, args: tuple, fuel: int, unit: str = "steps") -> tuple | _Bottom:
        budget = Budget(fuel, unit)
        try:
            return self.fn(tuple(args), budget)
        except _Undefined:
            return BOTTOM

    def __call__(self, store: Mapping[str, Value], fuel: int, unit: str = "steps"):
        """Evaluate on a value assignment; returns a dict in output order or BOTTOM."""
        out = self.apply(tuple(store[x] for x, _ in self.inputs), fuel, unit)
        if out is BOTTOM:
            return BOTTOM
        return {x: v for (x, _), v in zip(self.outputs, out)}


def denote_term(gamma: Mapping[str, Type], m: Term, atoms: Atoms = NO_ATOMS) -> Denotation:
    """Compile ``m`` (which must typecheck in ``gamma``) to its denotation."""
    sigma = check_term(gamma, m, atoms)
    layout = tuple(gamma.items())
    out, fn = _compile(layout, m, atoms)
    assert dict(out) == sigma
    return Denotation(layout, out, fn)


def _compile(lay: Layout, m: Term, atoms: Atoms) -> tuple[Layout, Fn]:
    match m:
        case NewUnit(u):
            def new_unit(t, b):
                b.steps(1)
                return t + (STAR,)
            return lay + ((u, UNIT),), new_unit

        case Discard(x):
            i = _index(lay, x)
            a = lay[i][1]

            def discard_var(t, b):
                b.steps(1)
                if discard(a, t[i], atoms) is None:
                    raise _Undefined
                return _drop(t, i)
            return _drop(lay, i), discard_var

        case Seq(first, second):
            mid, f = _compile(lay, first, atoms)
            out, g = _compile(mid, second, atoms)

            def compose(t, b):
                t = f(t, b)
                b.steps(1)
                return g(t, b)
            return out, compose

        case Skip():
            return lay, lambda t, b: t

        case LeftIntro(y, l, r, x) | RightIntro(y, l, r, x):
            i = _index(lay, x)
            inject = LeftV if isinstance(m, LeftIntro) else RightV

            def injection(t, b):
                b.steps(1)
                return _drop(t, i) + (inject(l, r, t[i]),)
            return _drop(lay, i) + ((y, Sum(l, r)),), injection

        case Case(y, x1, m1, x2, m2):
            i = _index(lay, y)
            a = lay[i][1]
            rest = _drop(lay, i)
            out1, f1 = _compile(rest + ((x1, a.left),), m1, atoms)
            out2, f2 = _compile(rest + ((x2, a.right),), m2, atoms)
            align = _permutation(out2, out1)

            def case(t, b):
                b.steps(1)
                # distributivity: Gamma * (A + B) -> Gamma * A + Gamma * B
                match t[i]:
                    case LeftV(_, _, v):
                        return f1(_drop(t, i) + (v,), b)
                    case RightV(_, _, v):
                        return align(f2(_drop(t, i) + (v,), b))
                raise TypeError(f"case on non-injection {t[i]!r}")
            return out1, case

        case PairIntro(x, x1, x2):
            i, j = _index(lay, x1), _index(lay, x2)
            a, c = lay[i][1], lay[j][1]
            keep = tuple(k for k in range(len(lay)) if k not in (i, j))

            def pair(t, b):
                b.steps(1)
                return tuple(t[k] for k in keep) + (PairV(t[i], t[j]),)
            return tuple(lay[k] for k in keep) + ((x, Tensor(a, c)),), pair

        case PairElim(x1, x2, x):
            i = _index(lay, x)
            a = lay[i][1]

            def unpair(t, b):
                b.steps(1)
                v = t[i]
                return _drop(t, i) + (v.first, v.second)
            return _drop(lay, i) + ((x1, a.left), (x2, a.right)), unpair

        case Fold(y, mu, x):
            i = _index(lay, x)

            def fold(t, b):
                b.steps(1)
                return _drop(t, i) + (fold_iso(mu, t[i]),)
            return _drop(lay, i) + ((y, mu),), fold

        case Unfold(y, x):
            i = _index(lay, x)
            mu = lay[i][1]

            def unfold(t, b):
                b.steps(1)
                return _drop(t, i) + (unfold_iso(mu, t[i]),)
            return _drop(lay, i) + ((y, mu.unfolding()),), unfold

        case While(g, body):
            return lay, _loop(lay, g, body, atoms)

    raise TypeError(f"not a term: {m!r}")


def _loop(lay: Layout, g: str, body: Term, atoms: Atoms) -> Fn:
    ib = _index(lay, g)
    body_out, f = _compile(lay, body, atoms)
    restore = _permutation(body_out, lay)
    ff = LeftV(UNIT, UNIT, STAR)
    tt = RightV(UNIT, UNIT, STAR)

    def lfp(t, b):
        # pointwise W^n(bottom): each pass is one application of W
        while True:
            b.unfolding()
            guard = t[ib]
            if isinstance(guard, LeftV):
                b.steps(EXIT_COST)
                return t[:ib] + (ff,) + t[ib + 1:]
            if not isinstance(guard, RightV):
                raise TypeError(f"loop guard is not a bit: {guard!r}")
            b.steps(CONTINUE_COST)
            t = restore(f(t[:ib] + (tt,) + t[ib + 1:], b))

    return lfp


def denote_value(v: Value, a: Type | None = None) -> Value:
    """The point ``I -> [[A]]`` named by ``v``, built clause by clause.

    In this model points of a carrier are its elements, so the result
    equals ``v``; building it through the constructors keeps the clauses
    checkable.
    """
    match v:
        case Star():
            return STAR
        case LeftV(l, r, w):
            return LeftV(l, r, denote_value(w))
        case RightV(l, r, w):
            return RightV(l, r, denote_value(w))
        case PairV(x, y):
            return PairV(denote_value(x), denote_value(y))
        case FoldV(mu, w):
            return fold_iso(mu, denote_value(w))
    return v


def denote_store(gamma: Mapping[str, Type], store: Mapping[str, Value]) -> tuple:
    """``[[gamma |- V]]``: the tuple of value points in the order of ``gamma``."""
    return tuple(denote_value(store[x], a) for x, a in gamma.items())


def denote_configuration(
    term: Term,
    store: Mapping[str, Value],
    fuel: int,
    unit: str = "steps",
    declared: Mapping[str, Type] | None = None,
    atoms: Atoms = NO_ATOMS,
):
    """``[[M]] . [[V]]`` as an output store (dict), or BOTTOM."""
    gamma, _ = check_configuration(term, store, declared, atoms)
    den = denote_term(gamma, term, atoms)
    out = den.apply(denote_store(gamma, store), fuel, unit)
    if out is BOTTOM:
        return BOTTOM
    return {x: v for (x, _), v in zip(den.outputs, out)}
