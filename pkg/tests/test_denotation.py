import pytest
from hypothesis import given, settings, strategies as st

from afflang.denotation import (
    BOTTOM, affine_closed, denote_configuration, denote_store, denote_term,
    denote_value, discard, fold_iso, interpret, sem_elems, unfold_iso,
)
from afflang.interpreter import Configuration, Terminated, run
from afflang.library import corpus_text, corpus_types
from afflang.oracle.generate import GenConfig, gen_well_typed_config
from afflang.parser import parse_program, parse_term, parse_type, parse_value
from afflang.syntax import BIT, UNIT, Atomic, AtomSpec, Skip, Sum, Tensor, TVar
from afflang.values import FF, STAR, TT, AtomV, FoldV, LeftV, PairV, RightV, value_size


def test_sem_elems_examples(nat):
    assert sem_elems(BIT, 2) == [LeftV(UNIT, UNIT, STAR), RightV(UNIT, UNIT, STAR)]
    assert len(sem_elems(nat, 7)) == 3
    for k in (1, 5, 12):
        assert sem_elems(UNIT, k) == [STAR]


def test_sem_elems_sizes_and_order(nat):
    vals = sem_elems(nat, 12)
    assert [value_size(v) for v in vals] == [3, 5, 7, 9, 11]
    assert len(set(vals)) == len(vals)


def test_sem_elems_rejects_open_types():
    with pytest.raises(ValueError):
        sem_elems(TVar("X"), 3)


def test_atomic_carriers():
    atoms = {"Q": AtomSpec(3)}
    assert sem_elems(Atomic("Q"), 4, atoms) == [AtomV("Q", 0), AtomV("Q", 1), AtomV("Q", 2)]
    assert sem_elems(Atomic("Q"), 4) == []


def test_discard_examples(nat):
    assert discard(UNIT, STAR) == STAR
    two = parse_value("fold[Nat](right[I,Nat](fold[Nat](left[I,Nat] *)))", {"Nat": nat})
    assert discard(nat, two) == STAR
    assert discard(Tensor(BIT, BIT), PairV(TT, FF)) == STAR


def test_partial_atomic_discard():
    atoms = {"Q": AtomSpec(2, frozenset({1}))}
    a = Tensor(Atomic("Q"), UNIT)
    assert discard(a, PairV(AtomV("Q", 0), STAR), atoms) == STAR
    assert discard(a, PairV(AtomV("Q", 1), STAR), atoms) is None
    den = denote_term({"q": Atomic("Q")}, parse_term("discard q"), atoms)
    assert den({"q": AtomV("Q", 1)}, 10) is BOTTOM
    assert den({"q": AtomV("Q", 0)}, 10) == {}


def test_fold_unfold_isos(nat):
    zero = LeftV(UNIT, nat, STAR)
    assert fold_iso(nat, zero) == FoldV(nat, zero)
    for v in sem_elems(Sum(UNIT, nat), 11):
        assert unfold_iso(nat, fold_iso(nat, v)) == v
        assert discard(nat, fold_iso(nat, v)) == discard(Sum(UNIT, nat), v)
    with pytest.raises(ValueError):
        unfold_iso(nat, STAR)


def test_affine_carriers_agree_with_plain_ones():
    for a in corpus_types():
        assert affine_closed(a).carrier.upto(12) == sem_elems(a, 12)


def test_functorial_interpretation_matches_substitution(nat):
    a = parse_type("mu Y. I + X * Y")
    b = Sum(BIT, UNIT)
    from afflang.syntax import substitute_type

    direct = sem_elems(substitute_type(a, "X", b), 14)
    functorial = interpret(a, {"X": interpret(b, {})}).upto(14)
    assert set(direct) == set(functorial) and len(direct) == len(functorial) > 3


def test_denote_discard():
    den = denote_term({"x": UNIT}, parse_term("discard x"))
    for fuel in (1, 5, 100):
        assert den({"x": STAR}, fuel) == {}
    assert den.outputs == ()


def test_flip_loop_denotation():
    p = parse_program(corpus_text("flip_loop"))
    den = denote_term(p.context, p.term)
    assert den(p.store, 1, "unfoldings") is BOTTOM
    for fuel in (2, 3, 50):
        assert den(p.store, fuel, "unfoldings") == {"b": FF}
    assert den(p.store, 12) is BOTTOM
    assert den(p.store, 13) == {"b": FF}


def test_identity_loop_is_bottom_everywhere():
    den = denote_term({"b": BIT}, parse_term("while b do { skip }"))
    for fuel in (0, 1, 10, 1000):
        assert den({"b": TT}, fuel) is BOTTOM
        assert den({"b": TT}, fuel, "unfoldings") is BOTTOM
    assert den({"b": FF}, 3) == {"b": FF}


def test_denote_value_examples(nat):
    assert denote_value(STAR) == STAR
    assert discard(UNIT, denote_value(STAR)) == STAR
    v, w = TT, FoldV(nat, LeftV(UNIT, nat, STAR))
    assert denote_value(PairV(v, w)) == PairV(denote_value(v), denote_value(w))
    for a in corpus_types():
        for x in sem_elems(a, 12):
            assert discard(a, denote_value(x)) == STAR


def test_denote_configuration_examples():
    store = {"x": TT, "y": STAR}
    assert denote_configuration(Skip(), store, 0) == store
    assert denote_configuration(parse_term("discard x; new unit y"), {"x": TT}, 10) == {"y": STAR}
    assert denote_configuration(parse_term("while b do { skip }"), {"b": TT}, 10_000) is BOTTOM


def test_denote_store_follows_context_order():
    assert denote_store({"b": BIT, "a": UNIT}, {"a": STAR, "b": FF}) == (FF, STAR)


def test_case_branches_are_aligned():
    # the right branch builds its outputs in a different order
    m = parse_term("case x of { left u -> new unit a; new unit b; discard u"
                   " | right u -> new unit b; new unit a; discard u }")
    den = denote_term({"x": BIT}, m)
    assert [x for x, _ in den.outputs] == ["a", "b"]
    assert den({"x": TT}, 20) == den({"x": FF}, 20) == {"a": STAR, "b": STAR}


def test_fuel_validation():
    den = denote_term({}, Skip())
    with pytest.raises(ValueError):
        den({}, -1)
    with pytest.raises(ValueError):
        den({}, 1, "seconds")


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_fuel_monotonicity(seed):
    m, store, gamma = gen_well_typed_config(GenConfig(seed=seed), seed)
    den = denote_term(gamma, m)
    results = [den(store, k) for k in range(0, 120, 7)]
    defined = [r for r in results if r is not BOTTOM]
    assert all(r == defined[0] for r in defined)
    first = next((i for i, r in enumerate(results) if r is not BOTTOM), len(results))
    assert all(r is not BOTTOM for r in results[first:])


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_denotation_agrees_with_execution(seed):
    m, store, gamma = gen_well_typed_config(GenConfig(seed=seed), seed)
    r = run(Configuration(m, store), 10_000)
    assert isinstance(r, Terminated)
    assert denote_configuration(m, store, r.steps, declared=gamma) == r.store
    if r.steps:
        assert denote_configuration(m, store, r.steps - 1, declared=gamma) is BOTTOM
