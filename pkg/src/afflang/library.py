"""The bundled ``.afl`` corpus and the closed types it mentions."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .parser import SourceProgram, instantiate, parse_program
from .syntax import (
    BIT, UNIT, Atomic, Case, Fold, LeftIntro, Mu, RightIntro, Seq, Sum, Tensor, Term,
    Type, While,
)


def corpus_names() -> list[str]:
    root = resources.files("afflang") / "corpus"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".afl"))


def corpus_text(name: str) -> str:
    if not name.endswith(".afl"):
        name += ".afl"
    return (resources.files("afflang") / "corpus" / name).read_text(encoding="utf-8")


def find_corpus_file(path: str) -> str | None:
    """Text of the bundled file with the same base name as ``path``, if any."""
    name = Path(path).name
    return corpus_text(name) if name in corpus_names() else None


def load_corpus() -> dict[str, SourceProgram]:
    return {name: parse_program(corpus_text(name)) for name in corpus_names()}


def _annotations(m: Term) -> list[Type]:
    match m:
        case LeftIntro(_, a, b, _) | RightIntro(_, a, b, _):
            return [Sum(a, b)]
        case Fold(_, mu, _):
            return [mu]
        case Seq(a, b):
            return _annotations(a) + _annotations(b)
        case While(_, body):
            return _annotations(body)
        case Case(_, _, m1, _, m2):
            return _annotations(m1) + _annotations(m2)
    return []


def _closed_subtypes(a: Type, out: dict) -> None:
    # closed subterms, plus one unfolding of every mu reached
    if a.free_vars or a in out:
        return
    out[a] = None
    match a:
        case Sum(l, r) | Tensor(l, r):
            _closed_subtypes(l, out)
            _closed_subtypes(r, out)
        case Mu():
            _closed_subtypes(a.unfolding(), out)


def corpus_types(programs: dict[str, SourceProgram] | None = None) -> list[Type]:
    """Every closed type the corpus declares, annotates or instantiates.

    Parametric abbreviations are instantiated at ``I`` and ``bit``.
    Atomic types are left out, since their carriers depend on each file's
    atom table.
    """
    programs = load_corpus() if programs is None else programs
    found: dict[Type, None] = {}
    for p in programs.values():
        roots: list[Type] = []
        for ab in p.abbreviations.values():
            if ab.params:
                for arg in (UNIT, BIT):
                    roots.append(instantiate(ab, [arg] * len(ab.params)))
            else:
                roots.append(ab.body)
        roots.extend(p.context.values())
        roots.extend(_annotations(p.term))
        for a in roots:
            if not _mentions_atoms(a):
                _closed_subtypes(a, found)
    return list(found)


def _mentions_atoms(a: Type) -> bool:
    match a:
        case Atomic():
            return True
        case Sum(l, r) | Tensor(l, r):
            return _mentions_atoms(l) or _mentions_atoms(r)
        case Mu(_, body):
            return _mentions_atoms(body)
    return False
