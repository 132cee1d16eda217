"""Brute-force value counting, independent of the carrier enumerator.

Values are grown bottom-up over the raw value grammar: at each size every
constructor is applied to every smaller raw value, using as annotations only
the closed types reachable from the target.  A candidate survives a level
only if ``check_value`` accepts it at some reachable type; the count is the
number of survivors ``check_value`` accepts at the target itself.
"""
from __future__ import annotations

from ..syntax import NO_ATOMS, Atoms, Mu, Sum, Tensor, Type
from ..typecheck import check_value
from ..values import STAR, AtomV, FoldV, LeftV, PairV, RightV, Value


def annotation_pool(a: Type) -> list[Type]:
    """Closed types reachable from ``a`` by taking components and unfolding."""
    seen: list[Type] = []
    todo = [a]
    while todo:
        t = todo.pop()
        if t in seen:
            continue
        seen.append(t)
        if isinstance(t, (Sum, Tensor)):
            todo += [t.right, t.left]
        elif isinstance(t, Mu):
            todo.append(t.unfolding())
    return seen


def brute_values(a: Type, k: int, atoms: Atoms = NO_ATOMS) -> list[Value]:
    if a.free_vars:
        raise ValueError(f"expected a closed type, got {a}")
    pool = annotation_pool(a)
    sums = [t for t in pool if isinstance(t, Sum)]
    mus = [t for t in pool if isinstance(t, Mu)]

    def useful(v: Value) -> bool:
        return any(check_value(v, t, atoms) for t in pool)

    by_size: dict[int, list[Value]] = {}
    for n in range(1, k + 1):
        level: list[Value] = []
        if n == 1:
            level.append(STAR)
            for name, spec in sorted(atoms.items()):
                level.extend(AtomV(name, i) for i in range(spec.size))
        else:
            for w in by_size[n - 1]:
                for s in sums:
                    level.append(LeftV(s.left, s.right, w))
                    level.append(RightV(s.left, s.right, w))
                for mu in mus:
                    level.append(FoldV(mu, w))
            for i in range(1, n - 1):
                for x in by_size[i]:
                    for y in by_size[n - 1 - i]:
                        level.append(PairV(x, y))
        by_size[n] = [v for v in level if useful(v)]
    return [v for n in range(1, k + 1) for v in by_size[n] if check_value(v, a, atoms)]


def brute_count_values(a: Type, k: int, atoms: Atoms = NO_ATOMS) -> int:
    """Number of values of closed type ``a`` with at most ``k`` nodes."""
    return len(brute_values(a, k, atoms))
