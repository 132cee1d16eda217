import pytest
from hypothesis import given, settings, strategies as st

from afflang.library import corpus_names, corpus_text
from afflang.oracle.generate import GenConfig, gen_program
from afflang.parser import ParseError, parse_program, parse_term, parse_type, parse_value
from afflang.printer import print_program, print_term, print_type, print_value
from afflang.syntax import (
    BIT, UNIT, Fold, LeftIntro, Mu, NewUnit, PairElim, PairIntro, RightIntro,
    Seq, Skip, Sum, Tensor, TVar, While,
)
from afflang.values import STAR, FoldV, LeftV, PairV


def test_parse_new_unit_then_left():
    assert parse_term("new unit u; y = left[I,I] u") == Seq(NewUnit("u"), LeftIntro("y", UNIT, UNIT, "u"))


def test_parse_fold_with_abbreviation(nat):
    p = parse_program("type Nat = mu X. I + X;\ninput x : I + Nat;\ny = fold[Nat] x")
    assert p.term == Fold("y", nat, "x")
    assert p.term.mu == Mu("X", Sum(UNIT, TVar("X")))


def test_parse_while():
    assert parse_term("while b do { skip }") == While("b", Skip())


def test_parse_pairs():
    assert parse_term("p = (a, b); (c, d) = p") == Seq(PairIntro("p", "a", "b"), PairElim("c", "d", "p"))


def test_parse_bit_sugar():
    m = parse_term("y = tt")
    assert isinstance(m, Seq) and isinstance(m.second, RightIntro)
    assert m.second.target == "y" and m.second.left == UNIT and m.second.right == UNIT
    assert parse_type("bit") == BIT


def test_parse_if_sugar_uses_fresh_binder():
    m = parse_term("new unit u; if b then { discard u }")
    case = m.second
    assert case.left_var not in {"u", "b"}


def test_parse_parametric_abbreviation(abbrevs):
    a = parse_type("List(bit)", abbrevs)
    assert a == parse_type("mu Y. I + (I + I) * Y")


def test_unicode_spellings():
    assert parse_type("μX. I + X ⊗ X") == parse_type("mu X. I + X * X")
    assert parse_value("left[I,I] ∗") == LeftV(UNIT, UNIT, STAR)


def test_positions_recorded():
    m = parse_term("skip;\n  discard x")
    assert (m.second.pos.line, m.second.pos.col) == (2, 3)


def test_parse_error_reports_position_and_expected():
    with pytest.raises(ParseError) as e:
        parse_term("y = left x")
    assert (e.value.pos.line, e.value.pos.col) == (1, 10)
    assert "[" in e.value.expected
    assert "1:10" in str(e.value)


@pytest.mark.parametrize("src", [
    "y = left[I,I] x",
    "y = right[I,I] x",
    "y = fold[mu X. I + X] x",
])
def test_deleting_annotations_is_rejected(src):
    parse_term(src)
    stripped = src.split("[")[0] + src.split("]")[-1]
    with pytest.raises(ParseError):
        parse_term(stripped)


def test_rejects_abbreviation_cycles_and_unbound_params():
    with pytest.raises(ParseError):
        parse_program("type A = B; type B = A; skip")
    with pytest.raises(ParseError):
        parse_program("type L(A) = mu Y. I + B * Y; skip")


def test_print_value_annotated(nat):
    v = FoldV(nat, LeftV(UNIT, nat, STAR))
    assert print_value(v, {"Nat": nat}) == "fold[Nat](left[I,Nat] *)"
    assert print_value(PairV(STAR, STAR)) == "(*, *)"


def test_print_type_bit():
    assert print_type(Sum(UNIT, UNIT)) == "bit"
    assert print_type(Sum(UNIT, UNIT), abbreviate=False) == "I + I"


def test_print_type_precedence():
    for text in ["(I + I) * I", "I + I * I", "(I + I) + I", "(mu X. I + X) * I", "I * (I * I)"]:
        a = parse_type(text)
        assert parse_type(print_type(a)) == a


def test_printer_does_not_abbreviate_under_shadowing_binder(nat):
    # inside the binder, "Nat" means the bound variable, not the abbreviation
    a = Mu("Nat", Sum(nat, Tensor(TVar("Nat"), UNIT)))
    text = print_type(a, {"Nat": nat})
    assert text == "mu Nat. (mu X. I + X) + Nat * I"
    assert parse_type(text) == a


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_roundtrip(name):
    p = parse_program(corpus_text(name))
    q = parse_program(print_program(p))
    assert q.term == p.term
    assert q.context == p.context and q.store == p.store
    assert print_term(q.term) == print_term(p.term)


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_generated_programs_roundtrip(seed):
    p = gen_program(GenConfig(seed=seed), seed)
    q = parse_program(print_program(p))
    assert (q.term, q.context, q.store, q.abbreviations) == (p.term, p.context, p.store, p.abbreviations)
