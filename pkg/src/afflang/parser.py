"""Lexer and recursive-descent parser for ``.afl`` source files.

Grammar (``//`` comments run to end of line)::

    program  ::= decl* stmts
    decl     ::= 'type' NAME ['(' NAME (',' NAME)* ')'] '=' type ';'
               | 'atom' NAME ':' INT ';'
               | 'input' NAME ':' type ['=' value] ';'
    stmts    ::= [stmt (';' stmt)*] [';']
    stmt     ::= 'new' 'unit' NAME | 'discard' NAME | 'skip'
               | 'while' NAME 'do' block | 'if' NAME ['then'] block
               | 'case' NAME 'of' '{' 'left' NAME '->' stmts '|' 'right' NAME '->' stmts '}'
               | NAME '=' ('left' | 'right') '[' type ',' type ']' NAME
               | NAME '=' 'fold' '[' type ']' NAME | NAME '=' 'unfold' NAME
               | NAME '=' '(' NAME ',' NAME ')' | '(' NAME ',' NAME ')' '=' NAME
               | NAME '=' ('tt' | 'ff') | block
    block    ::= '{' stmts '}'
    type     ::= 'mu' NAME '.' type | tensor ['+' type]
    tensor   ::= atom ['*' tensor]
    atom     ::= 'I' | 'bit' | NAME ['(' type (',' type)* ')'] | '(' type ')'
    value    ::= '*' | 'tt' | 'ff' | '@' NAME '.' INT
               | ('left' | 'right') '[' type ',' type ']' value
               | 'fold' '[' type ']' value | '(' value [',' value] ')'

``+`` and ``*`` associate to the right and ``*`` binds tighter.  Unicode
spellings ``μ``, ``⊗``, ``→`` and ``∗`` are accepted.
"""
from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field

from .syntax import (
    BIT, UNIT, Atomic, AtomSpec, Case, Discard, Fold, LeftIntro, Mu, NewUnit,
    PairElim, PairIntro, Pos, RightIntro, Seq, Skip, Sum, Tensor, Term, TVar,
    Type, Unfold, While, desugar_if, fresh_name, substitute_type,
)
from .values import FF, STAR, TT, AtomV, FoldV, LeftV, PairV, RightV, Value

KEYWORDS = frozenset({
    "new", "unit", "discard", "skip", "while", "do", "if", "then", "case",
    "of", "left", "right", "fold", "unfold", "type", "input", "atom", "mu",
    "tt", "ff", "I", "bit",
})

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|//[^\n]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<sym>->|→|[;=()\[\]{},.+*|:@]|μ|⊗|∗)
    """,
    re.VERBOSE,
)

_CANON = {"→": "->", "μ": "mu", "⊗": "*", "∗": "*"}


class ParseError(Exception):
    def __init__(self, message: str, pos: Pos, expected: frozenset[str] = frozenset()):
        self.message = message
        self.pos = pos
        self.expected = expected
        detail = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{pos}: {message}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # 'name', 'int', 'sym', 'kw', 'eof'
    text: str
    pos: Pos


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col, i = 1, 1, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", Pos(line, col))
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            s = _CANON.get(s, s)
            if kind == "name" and s in KEYWORDS:
                kind = "kw"
            if s == "mu":
                kind = "kw"
            tokens.append(Token(kind, s, Pos(line, col)))
        nl = s.count("\n") if kind == "ws" else 0
        if nl:
            line += nl
            col = len(s) - s.rindex("\n")
        else:
            col += m.end() - m.start()
        i = m.end()
    tokens.append(Token("eof", "<end of input>", Pos(line, col)))
    return tokens


@dataclass(frozen=True)
class Abbreviation:
    params: tuple[str, ...]
    body: Type


@dataclass
class SourceProgram:
    term: Term
    abbreviations: dict[str, Abbreviation] = field(default_factory=dict)
    atoms: dict[str, AtomSpec] = field(default_factory=dict)
    context: dict[str, Type] = field(default_factory=dict)
    store: dict[str, Value] = field(default_factory=dict)

    def nullary_abbreviations(self) -> dict[str, Type]:
        return {n: a.body for n, a in self.abbreviations.items() if not a.params}

    def has_store(self) -> bool:
        return set(self.store) == set(self.context)


class Parser:
    def __init__(self, text: str, atoms=None, abbreviations=None):
        self.tokens = tokenize(text)
        self.i = 0
        self.atoms: dict[str, AtomSpec] = dict(atoms or {})
        self.abbreviations: dict[str, Abbreviation] = dict(abbreviations or {})
        self.names = {t.text for t in self.tokens if t.kind == "name"}

    # -- token helpers ----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("sym", "kw") and self.tok.text in texts

    def error(self, message: str, expected=()) -> ParseError:
        return ParseError(message, self.tok.pos, frozenset(expected))

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"unexpected {self.tok.text!r}", {text})
        return self.advance()

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def name(self) -> str:
        if self.tok.kind != "name":
            raise self.error(f"unexpected {self.tok.text!r}", {"identifier"})
        return self.advance().text

    def fresh(self, base: str) -> str:
        n = fresh_name(base, self.names)
        self.names.add(n)
        return n

    # -- programs ---------------------------------------------------------

    def program(self) -> SourceProgram:
        context: dict[str, Type] = {}
        store: dict[str, Value] = {}
        while self.at("type", "atom", "input"):
            kw = self.advance().text
            if kw == "type":
                self.type_decl()
            elif kw == "atom":
                pos = self.tok.pos
                n = self.name()
                self.expect(":")
                if self.tok.kind != "int":
                    raise self.error("expected carrier size", {"integer"})
                size = int(self.advance().text)
                if n in self.atoms or n in self.abbreviations:
                    raise ParseError(f"{n} is already declared", pos)
                self.atoms[n] = AtomSpec(size)
            else:
                pos = self.tok.pos
                x = self.name()
                if x in context:
                    raise ParseError(f"input {x} declared twice", pos)
                self.expect(":")
                context[x] = self.type()
                if self.at("="):
                    self.advance()
                    store[x] = self.value()
            self.expect(";")
        term = self.stmts()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}", {";", "<end of input>"})
        return SourceProgram(term, self.abbreviations, self.atoms, context, store)

    def type_decl(self) -> None:
        pos = self.tok.pos
        n = self.name()
        if n in self.abbreviations or n in self.atoms:
            raise ParseError(f"type {n} is already declared", pos)
        params: list[str] = []
        if self.at("("):
            self.advance()
            params.append(self.name())
            while self.at(","):
                self.advance()
                params.append(self.name())
            self.expect(")")
            if len(set(params)) != len(params):
                raise ParseError(f"duplicate parameter in type {n}", pos)
        self.expect("=")
        body = self.type(frozenset(params))
        extra = body.free_vars - set(params)
        if extra:
            raise ParseError(
                f"type {n} mentions unbound type variable(s) {', '.join(sorted(extra))}", pos
            )
        self.abbreviations[n] = Abbreviation(tuple(params), body)

    # -- statements -------------------------------------------------------

    def stmts(self) -> Term:
        items: list[Term] = []
        if not self.at("}", "|") and self.tok.kind != "eof":
            self._push(items, self.stmt())
            while self.at(";"):
                self.advance()
                if self.at("}", "|") or self.tok.kind == "eof":
                    break
                self._push(items, self.stmt())
        if not items:
            return Skip()
        out = items[-1]
        for t in reversed(items[:-1]):
            out = Seq(t, out, pos=t.pos)
        return out

    @staticmethod
    def _push(items: list[Term], stmt: Term | list[Term]) -> None:
        # sugar expanding to several statements splices into the sequence
        if isinstance(stmt, list):
            items.extend(stmt)
        else:
            items.append(stmt)

    def block(self) -> Term:
        self.expect("{")
        body = self.stmts()
        self.expect("}")
        return body

    _STMT_START = {"new", "discard", "skip", "while", "if", "case", "(", "{", "identifier"}

    def stmt(self) -> Term | list[Term]:
        t = self.tok
        pos = t.pos
        if t.kind == "kw":
            match t.text:
                case "new":
                    self.advance()
                    self.expect("unit")
                    return NewUnit(self.name(), pos=pos)
                case "discard":
                    self.advance()
                    return Discard(self.name(), pos=pos)
                case "skip":
                    self.advance()
                    return Skip(pos=pos)
                case "while":
                    self.advance()
                    b = self.name()
                    self.expect("do")
                    return While(b, self.block(), pos=pos)
                case "if":
                    self.advance()
                    b = self.name()
                    if self.at("then"):
                        self.advance()
                    body = self.block()
                    case_term = desugar_if(b, body, self.names)
                    self.names.add(case_term.left_var)
                    return dataclasses.replace(case_term, pos=pos)
                case "case":
                    self.advance()
                    y = self.name()
                    self.expect("of")
                    self.expect("{")
                    self.expect("left")
                    x1 = self.name()
                    self.expect("->")
                    m1 = self.stmts()
                    self.expect("|")
                    self.expect("right")
                    x2 = self.name()
                    self.expect("->")
                    m2 = self.stmts()
                    self.expect("}")
                    return Case(y, x1, m1, x2, m2, pos=pos)
        if self.at("{"):
            return self.block()
        if self.at("("):
            self.advance()
            x1 = self.name()
            self.expect(",")
            x2 = self.name()
            self.expect(")")
            self.expect("=")
            return PairElim(x1, x2, self.name(), pos=pos)
        if t.kind != "name":
            raise self.error(f"unexpected {t.text!r}", self._STMT_START)
        y = self.name()
        self.expect("=")
        if self.at("left", "right"):
            ctor = LeftIntro if self.advance().text == "left" else RightIntro
            self.expect("[")
            a = self.type()
            self.expect(",")
            b = self.type()
            self.expect("]")
            return ctor(y, a, b, self.name(), pos=pos)
        if self.at("fold"):
            self.advance()
            self.expect("[")
            mu = self.type()
            self.expect("]")
            return Fold(y, mu, self.name(), pos=pos)
        if self.at("unfold"):
            self.advance()
            return Unfold(y, self.name(), pos=pos)
        if self.at("("):
            self.advance()
            x1 = self.name()
            self.expect(",")
            x2 = self.name()
            self.expect(")")
            return PairIntro(y, x1, x2, pos=pos)
        if self.at("tt", "ff"):
            ctor = RightIntro if self.advance().text == "tt" else LeftIntro
            u = self.fresh("u")
            return [NewUnit(u, pos=pos), ctor(y, UNIT, UNIT, u, pos=pos)]
        raise self.error(
            f"unexpected {self.tok.text!r}",
            {"left", "right", "fold", "unfold", "(", "tt", "ff"},
        )

    # -- types ------------------------------------------------------------

    def type(self, bound: frozenset[str] = frozenset()) -> Type:
        if self.at("mu"):
            self.advance()
            pos = self.tok.pos
            x = self.name()
            if x in self.abbreviations or x in self.atoms:
                raise ParseError(f"binder {x} shadows a declared type", pos)
            self.expect(".")
            return Mu(x, self.type(bound | {x}))
        left = self.tensor(bound)
        if self.at("+"):
            self.advance()
            return Sum(left, self.type(bound))
        return left

    def tensor(self, bound: frozenset[str]) -> Type:
        left = self.type_atom(bound)
        if self.at("*"):
            self.advance()
            return Tensor(left, self.tensor(bound))
        return left

    def type_atom(self, bound: frozenset[str]) -> Type:
        t = self.tok
        if self.at("I"):
            self.advance()
            return UNIT
        if self.at("bit"):
            self.advance()
            return BIT
        if self.at("("):
            self.advance()
            inner = self.type(bound)
            self.expect(")")
            return inner
        if t.kind != "name":
            raise self.error(f"unexpected {t.text!r}", {"I", "bit", "(", "mu", "type name"})
        n = self.advance().text
        if n in bound:
            return TVar(n)
        if n in self.abbreviations:
            ab = self.abbreviations[n]
            args: list[Type] = []
            if ab.params:
                self.expect("(")
                args.append(self.type(bound))
                while self.at(","):
                    self.advance()
                    args.append(self.type(bound))
                self.expect(")")
            if len(args) != len(ab.params):
                raise ParseError(
                    f"type {n} takes {len(ab.params)} argument(s), got {len(args)}", t.pos
                )
            return instantiate(ab, args)
        if n in self.atoms:
            return Atomic(n)
        return TVar(n)

    # -- values -----------------------------------------------------------

    def value(self) -> Value:
        t = self.tok
        if self.at("*"):
            self.advance()
            return STAR
        if self.at("tt"):
            self.advance()
            return TT
        if self.at("ff"):
            self.advance()
            return FF
        if self.at("@"):
            self.advance()
            n = self.name()
            self.expect(".")
            if self.tok.kind != "int":
                raise self.error("expected token index", {"integer"})
            return AtomV(n, int(self.advance().text))
        if self.at("left", "right"):
            ctor = LeftV if self.advance().text == "left" else RightV
            self.expect("[")
            a = self.type()
            self.expect(",")
            b = self.type()
            self.expect("]")
            return ctor(a, b, self.value())
        if self.at("fold"):
            self.advance()
            self.expect("[")
            mu = self.type()
            self.expect("]")
            return FoldV(mu, self.value())
        if self.at("("):
            self.advance()
            first = self.value()
            if self.at(","):
                self.advance()
                second = self.value()
                self.expect(")")
                return PairV(first, second)
            self.expect(")")
            return first
        raise self.error(
            f"unexpected {t.text!r}", {"*", "tt", "ff", "left", "right", "fold", "(", "@"}
        )


def instantiate(ab: Abbreviation, args: list[Type]) -> Type:
    """Simultaneous substitution of ``args`` for the parameters of ``ab``."""
    body = ab.body
    taken = set(ab.params) | set().union(*(a.free_vars for a in args)) | body.free_vars
    temps = []
    for p in ab.params:
        tmp = fresh_name(f"%{p}", taken)
        taken.add(tmp)
        temps.append(tmp)
        body = substitute_type(body, p, TVar(tmp))
    for tmp, a in zip(temps, args):
        body = substitute_type(body, tmp, a)
    return body


def _finish(p: Parser, result):
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}", {"<end of input>"})
    return result


def parse_program(text: str, atoms=None) -> SourceProgram:
    return Parser(text, atoms=atoms).program()


def parse_type(text: str, abbreviations=None, atoms=None) -> Type:
    """Parse a type; ``abbreviations`` maps names to types or :class:`Abbreviation`."""
    abbrevs = {
        n: a if isinstance(a, Abbreviation) else Abbreviation((), a)
        for n, a in (abbreviations or {}).items()
    }
    p = Parser(text, atoms=atoms, abbreviations=abbrevs)
    return _finish(p, p.type())


def parse_value(text: str, abbreviations=None, atoms=None) -> Value:
    abbrevs = {
        n: a if isinstance(a, Abbreviation) else Abbreviation((), a)
        for n, a in (abbreviations or {}).items()
    }
    p = Parser(text, atoms=atoms, abbreviations=abbrevs)
    return _finish(p, p.value())


def parse_term(text: str, abbreviations=None, atoms=None) -> Term:
    abbrevs = {
        n: a if isinstance(a, Abbreviation) else Abbreviation((), a)
        for n, a in (abbreviations or {}).items()
    }
    p = Parser(text, atoms=atoms, abbreviations=abbrevs)
    return _finish(p, p.stmts())
