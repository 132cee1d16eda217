"""Pretty-printing of types, terms, values, stores and whole programs.

Everything printed here reparses (see :mod:`afflang.parser`) to an
alpha-equivalent tree.
"""
from __future__ import annotations

from typing import Mapping

from .syntax import (
    BIT, UNIT, Atomic, Case, Discard, Fold, LeftIntro, Mu, NewUnit, PairElim,
    PairIntro, RightIntro, Seq, Skip, Sum, Tensor, Term, TVar, Type, Unfold,
    UnitT, While,
)
from .values import AtomV, FoldV, LeftV, PairV, RightV, Star, Value

_MU, _SUM, _TENSOR, _ATOM = range(4)

INDENT = "  "


def print_type(
    a: Type,
    abbreviations: Mapping[str, Type] | None = None,
    abbreviate: bool = True,
) -> str:
    """Render ``a``; with ``abbreviate`` closed subterms print as ``bit`` or a
    name from ``abbreviations`` when they match it up to alpha-equivalence."""
    names = {}
    if abbreviate:
        names[BIT] = "bit"
        for name, body in (abbreviations or {}).items():
            if not body.free_vars:
                names.setdefault(body, name)
    return _type(a, _MU, names, frozenset())


def _type(a: Type, level: int, names: dict, bound: frozenset[str]) -> str:
    if names and not a.free_vars:
        name = names.get(a)
        if name is not None and name not in bound:
            return name
    match a:
        case TVar(name):
            return name
        case UnitT():
            return "I"
        case Atomic(name):
            return name
        case Sum(l, r):
            out = f"{_type(l, _TENSOR, names, bound)} + {_type(r, _SUM, names, bound)}"
            return out if level <= _SUM else f"({out})"
        case Tensor(l, r):
            out = f"{_type(l, _ATOM, names, bound)} * {_type(r, _TENSOR, names, bound)}"
            return out if level <= _TENSOR else f"({out})"
        case Mu(var, body):
            out = f"mu {var}. {_type(body, _MU, names, bound | {var})}"
            return out if level == _MU else f"({out})"
    raise TypeError(f"not a type: {a!r}")


def print_value(
    v: Value,
    abbreviations: Mapping[str, Type] | None = None,
    abbreviate: bool = True,
) -> str:
    def ty(a):
        return print_type(a, abbreviations, abbreviate)

    def app(head, w):
        s = go(w)
        if isinstance(w, (LeftV, RightV, FoldV)) and " " in s:
            s = f"({s})"
        return head + s if s.startswith("(") else f"{head} {s}"

    def go(w):
        match w:
            case Star():
                return "*"
            case LeftV(a, b, Star()) if abbreviate and a == UNIT and b == UNIT:
                return "ff"
            case RightV(a, b, Star()) if abbreviate and a == UNIT and b == UNIT:
                return "tt"
            case LeftV(a, b, x):
                return app(f"left[{ty(a)},{ty(b)}]", x)
            case RightV(a, b, x):
                return app(f"right[{ty(a)},{ty(b)}]", x)
            case PairV(x, y):
                return f"({go(x)}, {go(y)})"
            case FoldV(mu, x):
                return app(f"fold[{ty(mu)}]", x)
            case AtomV(name, k):
                return f"@{name}.{k}"
        raise TypeError(f"not a value: {w!r}")

    return go(v)


def print_store(store: Mapping[str, Value], abbreviations=None, abbreviate: bool = True) -> str:
    inner = ", ".join(
        f"{x} = {print_value(v, abbreviations, abbreviate)}" for x, v in store.items()
    )
    return "{" + inner + "}"


def print_term(
    m: Term,
    abbreviations: Mapping[str, Type] | None = None,
    abbreviate: bool = True,
    compact: bool = False,
    indent: int = 0,
) -> str:
    """Render a statement sequence.

    ``compact`` puts everything on one line, which is the form used in traces.
    Left-nested sequences are wrapped in braces so the nesting survives a
    reparse.
    """
    def ty(a):
        return print_type(a, abbreviations, abbreviate)

    def items(t: Term) -> list[Term]:
        out = []
        while isinstance(t, Seq):
            out.append(t.first)
            t = t.second
        out.append(t)
        return out

    def block(t: Term, depth: int) -> str:
        if compact:
            return "{ " + stmts(t, depth) + " }"
        pad = INDENT * depth
        return "{\n" + stmts(t, depth + 1) + "\n" + pad + "}"

    def stmts(t: Term, depth: int) -> str:
        parts = [stmt(s, depth) for s in items(t)]
        if compact:
            return "; ".join(parts)
        pad = INDENT * depth
        return ";\n".join(pad + p for p in parts)

    def stmt(t: Term, depth: int) -> str:
        match t:
            case NewUnit(u):
                return f"new unit {u}"
            case Discard(x):
                return f"discard {x}"
            case Skip():
                return "skip"
            case Seq():
                return block(t, depth)
            case While(b, body):
                return f"while {b} do {block(body, depth)}"
            case LeftIntro(y, a, b, x):
                return f"{y} = left[{ty(a)},{ty(b)}] {x}"
            case RightIntro(y, a, b, x):
                return f"{y} = right[{ty(a)},{ty(b)}] {x}"
            case Case(y, x1, m1, x2, m2):
                if compact:
                    return (f"case {y} of {{ left {x1} -> {stmts(m1, 0)}"
                            f" | right {x2} -> {stmts(m2, 0)} }}")
                pad = INDENT * depth
                return (f"case {y} of {{\n{pad}{INDENT}left {x1} ->\n{stmts(m1, depth + 2)}\n"
                        f"{pad}{INDENT}| right {x2} ->\n{stmts(m2, depth + 2)}\n{pad}}}")
            case PairIntro(x, x1, x2):
                return f"{x} = ({x1}, {x2})"
            case PairElim(x1, x2, x):
                return f"({x1}, {x2}) = {x}"
            case Fold(y, mu, x):
                return f"{y} = fold[{ty(mu)}] {x}"
            case Unfold(y, x):
                return f"{y} = unfold {x}"
        raise TypeError(f"not a term: {t!r}")

    return stmts(m, indent)


def print_program(p) -> str:
    """Render a :class:`afflang.parser.SourceProgram` as source text."""
    lines = []
    for name, spec in p.atoms.items():
        lines.append(f"atom {name} : {spec.size};")
    for name, ab in p.abbreviations.items():
        params = f"({', '.join(ab.params)})" if ab.params else ""
        lines.append(f"type {name}{params} = {print_type(ab.body, abbreviate=False)};")
    abbrevs = p.nullary_abbreviations()
    for x, a in p.context.items():
        decl = f"input {x} : {print_type(a, abbrevs)}"
        if x in p.store:
            decl += f" = {print_value(p.store[x], abbrevs)}"
        lines.append(decl + ";")
    lines.append(print_term(p.term, abbrevs))
    return "\n".join(lines) + "\n"
