"""Seeded random generation of types, values, terms and configurations.

Terms are built rule by rule against a running context, so every generated
configuration is well formed by construction (the suites still re-check).
Loops come in three shapes:

* *flip*: the body ends with ``discard b; b = ff``, so it runs at most once;
* *countdown*: the body peels one constructor off a ``Nat`` or list counter
  and sets the guard to ``ff`` once the counter is empty;
* *divergent*: the guard is set to ``tt`` and the body never touches it.

Divergent loops only appear when explicitly requested.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from ..parser import Abbreviation, SourceProgram
from ..syntax import (
    BIT, UNIT, Case, Discard, Fold, LeftIntro, Mu, NewUnit, PairElim,
    PairIntro, RightIntro, Seq, Skip, Sum, Tensor, Term, TVar, Type, Unfold,
    While, seq,
)
from ..values import STAR, FoldV, LeftV, PairV, RightV, Value
from ..denotation.carriers import sem_elems

NAT = Mu("X", Sum(UNIT, TVar("X")))
BIT_LIST = Mu("Y", Sum(UNIT, Tensor(BIT, TVar("Y"))))
ROSE = Mu("X", Mu("Y", Sum(UNIT, Tensor(TVar("X"), TVar("Y")))))

BASE_TYPES = (UNIT, BIT, NAT, BIT_LIST, Tensor(BIT, UNIT), Sum(BIT, NAT), ROSE)


@dataclass(frozen=True)
class GenConfig:
    """Knobs shared by the generators and the property suites."""

    seed: int = 0
    max_term_size: int = 12
    max_type_depth: int = 3
    max_value_size: int = 7
    fuel: int = 10_000
    size_bound: int = 12
    trace_fuel: int = 400
    instances: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("max_term_size", "max_type_depth", "max_value_size", "size_bound", "trace_fuel"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.fuel < 0:
            raise ValueError("fuel must be non-negative")

    def rng(self, *labels) -> random.Random:
        """Independent, reproducible stream for one instance."""
        return random.Random(":".join(map(str, (self.seed,) + labels)))


# ---------------------------------------------------------------------------
# Types and values
# ---------------------------------------------------------------------------


def gen_type(rng: random.Random, depth: int, tvars: tuple[str, ...] = ()) -> Type:
    """A random type over ``tvars``; ``mu`` binders are always used guardedly."""
    if depth <= 0 or rng.random() < 0.25:
        choices = [UNIT, UNIT] + [TVar(x) for x in tvars]
        return rng.choice(choices)
    kind = rng.choice(["sum", "sum", "tensor", "mu"])
    if kind == "mu":
        # reusing an outer name shadows it
        x = rng.choice([f"X{len(tvars)}", f"X{len(tvars)}", "X"])
        # I + F(X): the unit summand guarantees a base case
        return Mu(x, Sum(UNIT, gen_type(rng, depth - 1, tvars + (x,))))
    l, r = gen_type(rng, depth - 1, tvars), gen_type(rng, depth - 1, tvars)
    return Sum(l, r) if kind == "sum" else Tensor(l, r)


def gen_closed_type(rng: random.Random, depth: int) -> Type:
    return gen_type(rng, depth)


@lru_cache(maxsize=None)
def _small_values(a: Type, bound: int) -> tuple[Value, ...]:
    # values up to ``bound`` nodes, falling back to the smallest ones
    vals = sem_elems(a, bound)
    b = bound
    while not vals:
        b += 2
        if b > bound + 24:
            raise ValueError(f"{a} has no small values")
        vals = sem_elems(a, b)
    return tuple(vals)


def gen_value(rng: random.Random, a: Type, max_size: int) -> Value:
    return rng.choice(_small_values(a, max_size))


def materialize(v: Value, target: str, fresh) -> list[Term]:
    """Statements that build ``v`` from nothing into variable ``target``."""
    match v:
        case _ if v == STAR:
            return [NewUnit(target)]
        case LeftV(l, r, w) | RightV(l, r, w):
            tmp = fresh()
            intro = LeftIntro if isinstance(v, LeftV) else RightIntro
            return materialize(w, tmp, fresh) + [intro(target, l, r, tmp)]
        case PairV(x, y):
            t1, t2 = fresh(), fresh()
            return materialize(x, t1, fresh) + materialize(y, t2, fresh) + [PairIntro(target, t1, t2)]
        case FoldV(mu, w):
            tmp = fresh()
            return materialize(w, tmp, fresh) + [Fold(target, mu, tmp)]
    raise ValueError(f"cannot build {v} with a program")


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


class TermGen:
    """Builds well-typed terms against a running context."""

    def __init__(self, rng: random.Random, cfg: GenConfig, types: list[Type], divergent: bool = False):
        self.rng = rng
        self.cfg = cfg
        self.types = types
        self.mus = [t for t in types if isinstance(t, Mu)]
        self.divergent = divergent
        self.counter = 0

    def fresh(self) -> str:
        self.counter += 1
        return f"v{self.counter}"

    def value(self, a: Type) -> Value:
        return gen_value(self.rng, a, self.cfg.max_value_size)

    def build(self, ctx: dict[str, Type], target: str, a: Type) -> list[Term]:
        ctx[target] = a
        return materialize(self.value(a), target, self.fresh)

    def repair(self, have: dict[str, Type], want: dict[str, Type]) -> list[Term]:
        """Discard what ``want`` lacks, build what ``have`` lacks."""
        out: list[Term] = []
        for x in list(have):
            if x not in want or have[x] != want[x]:
                out.append(Discard(x))
                del have[x]
        for x, a in want.items():
            if x not in have:
                out.extend(self.build(have, x, a))
        return out

    def block(self, ctx: dict[str, Type], budget: int, depth: int) -> Term:
        """Statements from ``ctx``; ``ctx`` is updated to the output context."""
        stmts: list[Term] = []
        while budget > 0:
            s, cost = self.stmt(ctx, budget, depth)
            stmts.extend(s)
            budget -= cost
        if self.rng.random() < 0.2:
            stmts.append(Skip())
        if not stmts:
            return Skip()
        if len(stmts) >= 3 and self.rng.random() < 0.2:
            # a left-nested prefix exercises the block syntax
            k = self.rng.randrange(2, len(stmts))
            return seq(seq(*stmts[:k]), *stmts[k:])
        return seq(*stmts)

    def stmt(self, ctx: dict[str, Type], budget: int, depth: int) -> tuple[list[Term], int]:
        rng = self.rng
        names = list(ctx)
        sums = [x for x in names if isinstance(ctx[x], Sum)]
        tensors = [x for x in names if isinstance(ctx[x], Tensor)]
        mus = [x for x in names if isinstance(ctx[x], Mu)]
        foldable = [(x, mu) for x in names for mu in self.mus if mu.unfolding() == ctx[x]]
        options = ["new", "build"]
        if names:
            options += ["discard", "inject", "inject"]
        if sums and depth < 3:
            options += ["case", "case"]
        if len(names) >= 2:
            options += ["pair", "pair"]
        if tensors:
            options += ["unpair", "unpair"]
        if mus:
            options += ["unfold", "unfold"]
        if foldable:
            options += ["fold", "fold", "fold"]
        if depth < 2 and budget >= 3:
            options += ["loop", "loop"]
        kind = rng.choice(options)

        if kind == "new":
            u = self.fresh()
            ctx[u] = UNIT
            return [NewUnit(u)], 1
        if kind == "build":
            x = self.fresh()
            return self.build(ctx, x, rng.choice(self.types)), 1
        if kind == "discard":
            x = rng.choice(names)
            del ctx[x]
            return [Discard(x)], 1
        if kind == "inject":
            x = rng.choice(names)
            a = ctx.pop(x)
            y = x if rng.random() < 0.3 else self.fresh()
            other = rng.choice(self.types)
            if rng.random() < 0.5:
                ctx[y] = Sum(a, other)
                return [LeftIntro(y, a, other, x)], 1
            ctx[y] = Sum(other, a)
            return [RightIntro(y, other, a, x)], 1
        if kind == "pair":
            x1, x2 = rng.sample(names, 2)
            a, b = ctx.pop(x1), ctx.pop(x2)
            x = rng.choice([x1, x2, self.fresh()])
            ctx[x] = Tensor(a, b)
            return [PairIntro(x, x1, x2)], 1
        if kind == "unpair":
            x = rng.choice(tensors)
            a = ctx.pop(x)
            x1 = x if rng.random() < 0.3 else self.fresh()
            x2 = self.fresh()
            ctx[x1], ctx[x2] = a.left, a.right
            return [PairElim(x1, x2, x)], 1
        if kind == "unfold":
            x = rng.choice(mus)
            mu = ctx.pop(x)
            y = x if rng.random() < 0.3 else self.fresh()
            ctx[y] = mu.unfolding()
            return [Unfold(y, x)], 1
        if kind == "fold":
            x, mu = rng.choice(foldable)
            del ctx[x]
            y = x if rng.random() < 0.3 else self.fresh()
            ctx[y] = mu
            return [Fold(y, mu, x)], 1
        if kind == "case":
            return self.case(ctx, rng.choice(sums), budget, depth)
        return self.loop(ctx, budget, depth)

    def case(self, ctx, y, budget, depth) -> tuple[list[Term], int]:
        a = ctx.pop(y)
        x1, x2 = self.fresh(), self.fresh()
        share = self.rng.randint(1, max(1, budget // 2))
        left_ctx = dict(ctx, **{x1: a.left})
        m1 = self.block(left_ctx, share - 1, depth + 1)
        right_ctx = dict(ctx, **{x2: a.right})
        m2 = self.block(right_ctx, self.rng.randint(0, share), depth + 1)
        fix = self.repair(right_ctx, left_ctx)
        if fix:
            m2 = seq(m2, *fix) if not isinstance(m2, Skip) else seq(*fix)
        ctx.clear()
        ctx.update(left_ctx)
        return [Case(y, x1, m1, x2, m2)], share + 1

    def guard(self, ctx: dict[str, Type], value: bool | None) -> tuple[str, list[Term]]:
        bits = [x for x in ctx if ctx[x] == BIT]
        if value is None and bits and self.rng.random() < 0.6:
            return self.rng.choice(bits), []
        b = self.fresh()
        ctx[b] = BIT
        u = self.fresh()
        if value is None:
            value = self.rng.random() < 0.7
        intro = RightIntro if value else LeftIntro
        return b, [NewUnit(u), intro(b, UNIT, UNIT, u)]

    def loop(self, ctx, budget, depth) -> tuple[list[Term], int]:
        shape = self.rng.choice(["flip", "flip", "countdown"])
        if self.divergent:
            shape = "divergent"
            self.divergent = False
        pre: list[Term] = []
        if shape == "countdown":
            counter = self.rng.choice([NAT, BIT_LIST])
            n = self.fresh()
            pre += self.build(ctx, n, counter)
            b, setup = self.guard(ctx, True)
            pre += setup
        else:
            b, setup = self.guard(ctx, True if shape == "divergent" else None)
            pre += setup
        inner = {x: a for x, a in ctx.items() if x != b and (shape != "countdown" or x != n)}
        want = dict(inner)
        body_budget = self.rng.randint(0, budget - 2)
        m = self.block(inner, body_budget, depth + 1)
        tail = self.repair(inner, want)
        if shape == "flip":
            u = self.fresh()
            tail += [Discard(b), NewUnit(u), LeftIntro(b, UNIT, UNIT, u)]
        elif shape == "countdown":
            tail += self._countdown_step(n, b, ctx[n])
        body = seq(m, *tail) if tail else m
        out = pre + [While(b, body)]
        if shape == "countdown" and self.rng.random() < 0.5:
            out.append(Discard(n))
            del ctx[n]
        return out, body_budget + 2

    def _countdown_step(self, n: str, b: str, counter: Mu) -> list[Term]:
        """Peel one constructor off ``n``; ``b`` becomes ``ff`` once ``n`` is empty."""
        f = self.fresh
        k, z, zz, m, t, p, t2, u1, u2 = (f() for _ in range(9))
        unfolded = counter.unfolding()
        empty = seq(
            LeftIntro(zz, unfolded.left, unfolded.right, z),
            Fold(n, counter, zz),
            NewUnit(u1),
            LeftIntro(b, UNIT, UNIT, u1),
        )
        if isinstance(unfolded.right, Tensor):
            h = f()
            rename_src = [PairElim(h, m + "t", m), Discard(h)]
            tail_var = m + "t"
        else:
            rename_src = []
            tail_var = m
        nonempty = seq(
            *rename_src,
            NewUnit(t),
            PairIntro(p, tail_var, t),
            PairElim(n, t2, p),
            Discard(t2),
            NewUnit(u2),
            RightIntro(b, UNIT, UNIT, u2),
        )
        return [Discard(b), Unfold(k, n), Case(k, z, empty, m, nonempty)]


# ---------------------------------------------------------------------------
# Configurations and programs
# ---------------------------------------------------------------------------


def type_pool(rng: random.Random, cfg: GenConfig) -> list[Type]:
    pool = list(BASE_TYPES)
    for _ in range(2):
        a = gen_closed_type(rng, cfg.max_type_depth)
        if a not in pool:
            pool.append(a)
    return pool


def gen_well_typed_config(
    cfg: GenConfig, index: int = 0, closed: bool = False, divergent: bool = False
) -> tuple[Term, dict[str, Value], dict[str, Type]]:
    """A well-formed configuration ``(M | V)`` with its declared context.

    ``closed`` gives an empty store; ``divergent`` plants one loop whose
    guard is ``tt`` and never changes, at the top level.
    """
    rng = cfg.rng("config", index, closed, divergent)
    pool = type_pool(rng, cfg)
    gen = TermGen(rng, cfg, pool)
    gamma: dict[str, Type] = {}
    store: dict[str, Value] = {}
    if not closed:
        for _ in range(rng.randint(1, 3)):
            x = gen.fresh()
            gamma[x] = rng.choice(pool)
            store[x] = gen.value(gamma[x])
    ctx = dict(gamma)
    budget = rng.randint(1, cfg.max_term_size)
    if divergent:
        before = gen.block(ctx, rng.randint(0, budget // 2), 1)
        gen.divergent = True
        loop, _ = gen.loop(ctx, max(3, budget // 2), 1)
        after = gen.block(ctx, rng.randint(0, 2), 1)
        term = seq(before, *loop, after)
    else:
        term = gen.block(ctx, budget, 0)
    return term, store, gamma


def gen_program(cfg: GenConfig, index: int = 0) -> SourceProgram:
    """A random source program with type abbreviations and declared inputs."""
    rng = cfg.rng("program", index)
    term, store, gamma = gen_well_typed_config(cfg, index, closed=rng.random() < 0.3)
    abbreviations = {"Nat": Abbreviation((), NAT)}
    if rng.random() < 0.5:
        abbreviations["Pair"] = Abbreviation(("A", "B"), Tensor(TVar("A"), TVar("B")))
    if rng.random() < 0.5:
        abbreviations["Bits"] = Abbreviation((), BIT_LIST)
    if rng.random() < 0.5:
        # a declared input without a value
        gamma = dict(gamma)
        gamma["extra"] = rng.choice(BASE_TYPES)
    return SourceProgram(term, abbreviations, {}, gamma, dict(store))


def term_kinds(m: Term) -> set[str]:
    out = {type(m).__name__}
    match m:
        case Seq(a, b):
            out |= term_kinds(a) | term_kinds(b)
        case While(_, body):
            out |= term_kinds(body)
        case Case(_, _, m1, _, m2):
            out |= term_kinds(m1) | term_kinds(m2)
    return out
