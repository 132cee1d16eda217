import json

import pytest
from hypothesis import given, settings, strategies as st

from afflang.interpreter import (
    Configuration, OutOfFuel, Stuck, StuckError, Terminated, format_configuration,
    run, step, trace, trace_records,
)
from afflang.library import corpus_text
from afflang.oracle.generate import GenConfig, gen_well_typed_config
from afflang.parser import parse_program, parse_term
from afflang.syntax import UNIT, Case, Seq, Skip, desugar_if
from afflang.values import FF, STAR, TT, FoldV, LeftV


def cfg(src, **store):
    return Configuration(parse_term(src), store)


def test_new_unit():
    assert step(cfg("new unit u", x=TT)) == Configuration(Skip(), {"x": TT, "u": STAR})


def test_unfold_strips_fold(nat):
    v = LeftV(UNIT, nat, STAR)
    assert step(cfg("y = unfold x", x=FoldV(nat, v), z=FF)) == Configuration(Skip(), {"z": FF, "y": v})


def test_while_unfolds_to_if_sugar():
    c = cfg("while b do { discard b; b = ff }", b=TT)
    body = c.term.body
    d = step(c)
    assert d == Configuration(desugar_if("b", Seq(body, c.term), avoid={"b"}), {"b": TT})
    e = step(d)
    # the right branch was taken: b is consumed and the binder holds *
    assert e.store == {"u": STAR}
    assert isinstance(e.term, Seq) and e.term.first.target == "b"


def test_while_binder_avoids_store_names():
    c = cfg("while b do { skip }", b=FF, u=STAR)
    d = step(c)
    assert isinstance(d.term, Case) and d.term.left_var == "u'"


def test_skip_seq_and_congruence():
    assert step(cfg("skip; discard x", x=STAR)) == cfg("discard x", x=STAR)
    assert step(cfg("discard x; skip", x=STAR)) == Configuration(Seq(Skip(), Skip()), {})


def test_case_dispatch():
    c = cfg("case y of { left a -> discard a | right b -> new unit c }", y=TT)
    assert step(c) == Configuration(parse_term("new unit c"), {"b": STAR})


def test_pairs():
    d = step(cfg("p = (a, b)", a=TT, b=STAR))
    assert d.store == {"p": parse_program("input p : bit * I = (tt, *); skip").store["p"]}
    e = step(Configuration(parse_term("(x, y) = p"), d.store))
    assert e.store == {"x": TT, "y": STAR}


def test_terminal_and_stuck():
    assert step(Configuration(Skip(), {})) is None
    with pytest.raises(StuckError):
        step(cfg("case x of { left a -> skip | right b -> skip }", x=STAR))
    with pytest.raises(StuckError):
        step(cfg("discard x"))
    assert isinstance(run(cfg("y = unfold x", x=STAR)), Stuck)


def test_run_examples():
    assert run(Configuration(Skip(), {}), 0) == Terminated({}, 0)
    p = parse_program(corpus_text("flip_loop"))
    c = Configuration(p.term, p.store)
    r = run(c, 100)
    assert r == Terminated({"b": FF}, len(trace(c, 100)) - 1)
    assert r.steps == 13
    assert isinstance(run(cfg("while b do { skip }", b=TT), 10_000), OutOfFuel)


def test_run_fuel_is_exact():
    p = parse_program(corpus_text("flip_loop"))
    c = Configuration(p.term, p.store)
    assert isinstance(run(c, 12), OutOfFuel)
    assert isinstance(run(c, 13), Terminated)
    with pytest.raises(ValueError):
        run(c, -1)


def test_trace_examples():
    c = cfg("skip; skip")
    assert trace(c, 10) == [c, Configuration(Skip(), {})]
    loop = cfg("while b do { skip }", b=TT)
    assert len(trace(loop, 7)) == 8


def test_trace_format():
    c = cfg("new unit u; discard u")
    lines = [format_configuration(x) for x in trace(c)]
    assert lines[0] == "(new unit u; discard u | {})"
    assert lines[-1] == "(skip | {})"
    recs = [json.loads(r) for r in trace_records(trace(c))]
    assert [r["step"] for r in recs] == [0, 1, 2, 3]
    assert recs[1]["store"] == {"u": "*"}


def test_steps_do_not_mutate_earlier_stores():
    c = cfg("discard x; new unit y", x=STAR)
    before = dict(c.store)
    trace(c)
    assert c.store == before


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_trace_adjacent_pairs_step_deterministically(seed):
    m, store, _ = gen_well_typed_config(GenConfig(seed=seed), seed)
    tr = trace(Configuration(m, store), 300)
    assert len(tr) <= 301
    for a, b in zip(tr, tr[1:]):
        assert step(a) == b == step(a)
