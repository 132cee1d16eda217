import json

import pytest

from afflang.denotation import sem_elems
from afflang.library import corpus_types
from afflang.oracle import (
    SUITES, GenConfig, brute_count_values, brute_values, check_theorem,
    gen_well_typed_config, materialize,
)
from afflang.oracle.brute import annotation_pool
from afflang.oracle.generate import BIT_LIST, NAT, gen_program, term_kinds
from afflang.syntax import BIT, UNIT, Atomic, AtomSpec, Sum, seq
from afflang.typecheck import check_configuration, check_term
from afflang.interpreter import Configuration, run


def test_gen_config_validation():
    with pytest.raises(ValueError):
        GenConfig(size_bound=0)
    with pytest.raises(ValueError):
        GenConfig(fuel=-1)


def test_generated_configuration_is_well_formed():
    m, store, gamma = gen_well_typed_config(GenConfig(seed=1))
    check_configuration(m, store, gamma)


def test_generation_is_deterministic():
    cfg = GenConfig(seed=5)
    assert gen_well_typed_config(cfg, 3) == gen_well_typed_config(cfg, 3)
    assert gen_well_typed_config(cfg, 3) != gen_well_typed_config(cfg, 4)
    assert gen_program(cfg, 2) == gen_program(cfg, 2)


def test_thousand_configurations_cover_every_constructor():
    cfg = GenConfig()
    kinds = set()
    for i in range(1000):
        m, store, gamma = gen_well_typed_config(cfg, i)
        check_configuration(m, store, gamma)
        kinds |= term_kinds(m)
    assert len(kinds) == 12


def test_planted_loops_diverge():
    cfg = GenConfig()
    for i in range(10):
        m, store, _ = gen_well_typed_config(cfg, i, closed=True, divergent=True)
        assert store == {}
        assert type(run(Configuration(m, store), 2000)).__name__ == "OutOfFuel"


def test_materialize_builds_the_value():
    names = iter(f"t{i}" for i in range(100))
    for a in (NAT, BIT_LIST, Sum(BIT, NAT)):
        for v in sem_elems(a, 9):
            m = seq(*materialize(v, "out", lambda: next(names)))
            assert check_term({}, m) == {"out": a}
            assert run(Configuration(m, {})).store == {"out": v}


def test_brute_counts():
    assert brute_count_values(BIT, 2) == 2
    assert brute_count_values(NAT, 7) == 3
    assert brute_count_values(BIT_LIST, 8) == 3
    atoms = {"Q": AtomSpec(2)}
    assert brute_count_values(Sum(Atomic("Q"), UNIT), 2, atoms) == 3


def test_brute_matches_enumerator_on_corpus():
    for a in corpus_types():
        assert set(brute_values(a, 12)) == set(sem_elems(a, 12))


def test_annotation_pool_is_closed_under_unfolding():
    pool = annotation_pool(BIT_LIST)
    assert BIT_LIST in pool and BIT_LIST.unfolding() in pool and BIT in pool


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suites_pass_small(name):
    cfg = GenConfig(seed=3, instances={n: 15 for n in SUITES})
    r = check_theorem(name, cfg)
    assert r.passed, r.text()
    assert r.instances > 0


def test_unknown_suite():
    with pytest.raises(KeyError):
        check_theorem("confluence")


def test_reports_are_reproducible():
    cfg = GenConfig(seed=11, instances={n: 10 for n in SUITES})
    a = check_theorem("soundness", cfg)
    b = check_theorem("soundness", cfg)
    assert a.text() == b.text() and a.json_lines() == b.json_lines()
    rec = json.loads(a.json_lines()[0])
    assert rec["suite"] == "soundness" and rec["seed"] == 11 and rec["ok"] is True


def test_report_lists_counterexamples():
    from afflang.oracle.suites import Report

    r = Report("demo", 0)
    r.record(0, True)
    r.record(1, False, "boom")
    assert not r.passed
    assert "[FAIL] demo: 2 instances, 1 failures" in r.text()
    assert "counterexample 1: boom" in r.text()
    assert r.summary()["failures"] == 1
