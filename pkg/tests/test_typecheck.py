import random

import pytest
from hypothesis import given, settings, strategies as st

from afflang.oracle.generate import BASE_TYPES, GenConfig, gen_well_typed_config
from afflang.parser import parse_term, parse_value
from afflang.syntax import BIT, UNIT, Skip, Sum, Tensor, term_vars
from afflang.typecheck import (
    ERROR_CODES, AmbiguousValueType, BranchContextMismatch, DuplicateVariable,
    GuardNotBit, IllFormedAnnotation, StoreMismatch, TypeMismatch,
    UnboundVariable, check_configuration, check_term, check_value,
    reconstruct_context, value_problem,
)
from afflang.values import STAR, LeftV, RightV


def term(src, nat=None):
    return parse_term(src, {"Nat": nat} if nat is not None else None)


def test_discard(nat):
    assert check_term({"x": nat}, term("discard x")) == {}


def test_unbound_variable(nat):
    with pytest.raises(UnboundVariable) as e:
        check_term({"x": UNIT}, term("y = fold[Nat] z", nat))
    assert e.value.var == "z"
    assert e.value.code == "E001"


def test_branch_context_mismatch():
    m = term("case x of { left u -> skip | right u -> new unit w }")
    with pytest.raises(BranchContextMismatch) as e:
        check_term({"x": BIT}, m)
    assert e.value.first == {"u": UNIT}
    assert e.value.second == {"u": UNIT, "w": UNIT}


def test_output_context_threading(nat):
    m = term("new unit u; y = left[I,Nat] u; n = fold[Nat] y; k = unfold n", nat)
    assert check_term({}, m) == {"k": Sum(UNIT, nat)}


def test_reuse_of_consumed_name_allowed():
    assert check_term({"x": UNIT}, term("x = left[I,I] x")) == {"x": BIT}


def test_rebinding_live_name_rejected():
    with pytest.raises(DuplicateVariable):
        check_term({"x": UNIT, "y": UNIT}, term("y = left[I,I] x"))
    with pytest.raises(DuplicateVariable):
        check_term({"x": UNIT}, term("new unit x"))
    with pytest.raises(DuplicateVariable):
        check_term({"x": UNIT}, term("p = (x, x)"))
    with pytest.raises(DuplicateVariable):
        check_term({"p": Tensor(UNIT, UNIT)}, term("(a, a) = p"))


def test_case_binder_must_be_fresh():
    with pytest.raises(DuplicateVariable):
        check_term({"x": BIT, "u": UNIT}, term("case x of { left u -> skip | right v -> skip }"))


def test_annotation_mismatch():
    with pytest.raises(TypeMismatch) as e:
        check_term({"x": UNIT}, term("y = left[I + I,I] x"))
    assert e.value.code == "E003"


def test_unfold_needs_mu():
    with pytest.raises(TypeMismatch):
        check_term({"x": UNIT}, term("y = unfold x"))


def test_while_rules():
    assert check_term({"b": BIT}, term("while b do { discard b; b = ff }")) == {"b": BIT}
    with pytest.raises(GuardNotBit):
        check_term({"b": UNIT}, term("while b do { skip }"))
    with pytest.raises(BranchContextMismatch):
        check_term({"b": BIT}, term("while b do { new unit w }"))


def test_while_body_may_reorder_context():
    m = term("while b do { discard b; discard x; new unit x; b = ff }")
    assert check_term({"x": UNIT, "b": BIT}, m) == {"x": UNIT, "b": BIT}


def test_ill_formed_annotation():
    with pytest.raises(IllFormedAnnotation):
        check_term({"x": UNIT}, term("y = left[I,Z] x"))


def test_error_codes_are_distinct():
    assert len(set(ERROR_CODES.values())) == len(ERROR_CODES)


def test_check_value_examples(nat):
    assert check_value(STAR, UNIT)
    assert check_value(parse_value("fold[Nat](left[I,Nat] *)", {"Nat": nat}), nat)
    assert not check_value(LeftV(UNIT, UNIT, STAR), Tensor(UNIT, UNIT))
    assert not check_value(RightV(UNIT, BIT, STAR), Sum(UNIT, BIT))
    assert "annotation" in value_problem(LeftV(UNIT, UNIT, STAR), Sum(UNIT, BIT))


def test_check_configuration_examples():
    assert check_configuration(Skip(), {}) == ({}, {})
    assert check_configuration(term("discard x"), {"x": STAR}, {"x": UNIT}) == ({"x": UNIT}, {})
    with pytest.raises(TypeMismatch):
        check_configuration(term("y = unfold x"), {"x": STAR}, {"x": UNIT})


def test_check_configuration_store_mismatch():
    with pytest.raises(StoreMismatch):
        check_configuration(Skip(), {"x": STAR}, {})
    with pytest.raises(TypeMismatch):
        check_configuration(Skip(), {"x": STAR}, {"x": BIT})


def test_reconstruction_rejects_bad_annotations():
    with pytest.raises(AmbiguousValueType):
        reconstruct_context({"x": LeftV(UNIT, UNIT, LeftV(UNIT, UNIT, STAR))})


seeds = st.integers(min_value=0, max_value=10**6)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_frame_property(seed):
    m, store, gamma = gen_well_typed_config(GenConfig(seed=seed), seed)
    sigma = check_term(gamma, m)
    z = "frame"
    assert z not in term_vars(m)
    c = random.Random(seed).choice(BASE_TYPES)
    assert check_term({**gamma, z: c}, m) == {**sigma, z: c}


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_determinism_and_affine_discipline(seed):
    m, store, gamma = gen_well_typed_config(GenConfig(seed=seed), seed)
    sigma = check_term(gamma, m)
    assert check_term(dict(reversed(list(gamma.items()))), m) == sigma
    # nothing survives that was neither an input nor introduced by m
    assert set(sigma) <= set(gamma) | term_vars(m)
