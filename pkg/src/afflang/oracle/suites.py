"""Property suites for the metatheory, with reproducible reports.

Each suite returns a :class:`Report`: the number of instances checked, the
counterexamples found (empty when the property holds), coverage counters and
one record per instance.  Reports contain no timings, so the same
configuration always yields byte-identical output.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from ..denotation import (
    BOTTOM, affine_closed, denote_configuration, denote_value, discard,
    fold_iso, interpret, sem_elems, unfold_iso,
)
from ..interpreter import Configuration, OutOfFuel, StuckError, Terminated, run, step, trace
from ..library import corpus_types
from ..parser import parse_program
from ..printer import print_program, print_store, print_type, print_value
from ..syntax import (
    BIT, Atomic, AtomSpec, Mu, Seq, Skip, Sum, Tensor, Type, UnitT, While,
    substitute_type,
)
from ..typecheck import check_configuration, check_value
from ..values import STAR, FoldV, LeftV, PairV, RightV, Value
from .brute import brute_count_values
from .generate import (
    BIT_LIST, NAT, GenConfig, gen_closed_type, gen_program, gen_type,
    gen_well_typed_config, term_kinds,
)

DEFAULT_INSTANCES = {
    "subject-reduction": 1000,
    "progress": 1000,
    "soundness": 300,
    "adequacy": 300,
    "substitution": 60,
    "roundtrip": 1000,
    "discardability": 20,
    "fold-unfold": 20,
    "enumeration": 10,
    "discard-uniqueness": 6,
}

# one program in every DIVERGENT_EVERY carries a loop that never exits
DIVERGENT_EVERY = 8


@dataclass
class Report:
    name: str
    seed: int
    instances: int = 0
    failures: list[str] = field(default_factory=list)
    coverage: dict[str, object] = field(default_factory=dict)
    records: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, instance, ok: bool, detail: str | None = None, **extra) -> None:
        self.instances += 1
        rec = {"suite": self.name, "seed": self.seed, "instance": instance, "ok": ok}
        if detail is not None:
            rec["detail"] = detail
        rec.update(extra)
        self.records.append(rec)
        if not ok:
            self.failures.append(f"{instance}: {detail}")

    def summary(self) -> dict:
        return {
            "suite": self.name,
            "seed": self.seed,
            "instances": self.instances,
            "failures": len(self.failures),
            "passed": self.passed,
            "coverage": self.coverage,
        }

    def text(self, max_failures: int = 10) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"[{status}] {self.name}: {self.instances} instances, "
                 f"{len(self.failures)} failures (seed {self.seed})"]
        if self.coverage:
            lines.append("  " + ", ".join(f"{k}={v}" for k, v in self.coverage.items()))
        for f in self.failures[:max_failures]:
            lines.append(f"  counterexample {f}")
        if len(self.failures) > max_failures:
            lines.append(f"  ... {len(self.failures) - max_failures} more")
        return "\n".join(lines)

    def json_lines(self) -> list[str]:
        return [json.dumps(r, sort_keys=True) for r in self.records]


def _count(cfg: GenConfig, name: str) -> int:
    return cfg.instances.get(name, DEFAULT_INSTANCES[name])


def _guard(report: Report, instance, check: Callable[[], str | None], **extra) -> None:
    # a check returns None on success or a description of the violation
    try:
        why = check()
    except Exception as e:  # a crash is a counterexample, not a suite error
        why = f"{type(e).__name__}: {e}"
    report.record(instance, why is None, why, **extra)


def _head(m):
    while isinstance(m, Seq) and not isinstance(m.first, Skip):
        m = m.first
    return m


def _stores_equal(a, b) -> bool:
    return dict(a) == dict(b)


# ---------------------------------------------------------------------------
# Operational suites
# ---------------------------------------------------------------------------


def subject_reduction(cfg: GenConfig) -> Report:
    rep = Report("subject-reduction", cfg.seed)
    kinds: set[str] = set()
    steps = 0
    for i in range(_count(cfg, rep.name)):
        m, store, gamma = gen_well_typed_config(cfg, i, divergent=i % DIVERGENT_EVERY == 0)
        kinds |= term_kinds(m)

        def check() -> str | None:
            nonlocal steps
            _, sigma = check_configuration(m, store, gamma)
            c = Configuration(m, store)
            for k in range(cfg.trace_fuel):
                try:
                    c = step(c)
                except StuckError:
                    return None  # reported by the progress suite
                if c is None:
                    return None
                steps += 1
                _, sigma_k = check_configuration(c.term, c.store)
                if sigma_k != sigma:
                    return f"step {k + 1}: output context {sigma_k} differs from {sigma}"
            return None

        _guard(rep, i, check)
    rep.coverage = {"steps": steps, "constructors": f"{len(kinds)}/12"}
    return rep


def progress(cfg: GenConfig) -> Report:
    rep = Report("progress", cfg.seed)
    outcomes: Counter = Counter()
    for i in range(_count(cfg, rep.name)):
        m, store, gamma = gen_well_typed_config(cfg, i, divergent=i % DIVERGENT_EVERY == 0)

        def check() -> str | None:
            check_configuration(m, store, gamma)
            c = Configuration(m, store)
            for k in range(cfg.trace_fuel):
                if c.is_terminal():
                    outcomes["terminal"] += 1
                    return None
                try:
                    c = step(c)
                except StuckError as e:
                    return f"stuck after {k} steps: {e.reason}"
            outcomes["fuel-bounded"] += 1
            return None

        _guard(rep, i, check)
    rep.coverage = dict(sorted(outcomes.items()))
    return rep


# ---------------------------------------------------------------------------
# Denotational suites
# ---------------------------------------------------------------------------


def soundness(cfg: GenConfig) -> Report:
    """Denotations along a terminating trace all equal the final store.

    Each configuration is evaluated at exactly the number of steps left in
    the trace (defined) and at one less (undefined); the initial one is also
    evaluated in loop-unfolding fuel.
    """
    rep = Report("soundness", cfg.seed)
    want = _count(cfg, rep.name)
    configs = skipped = 0
    i = 0
    while rep.instances < want:
        m, store, gamma = gen_well_typed_config(cfg, i, divergent=False)
        i += 1
        start = Configuration(m, store)
        if not isinstance(run(start, cfg.fuel), Terminated):
            skipped += 1
            continue

        def check() -> str | None:
            nonlocal configs
            tr = trace(start, cfg.fuel)
            final = tr[-1].store
            total = len(tr) - 1
            whole = denote_configuration(m, store, cfg.fuel, declared=gamma)
            if whole is BOTTOM or not _stores_equal(whole, final):
                return f"denotation {whole} differs from final store {print_store(final)}"
            for j, c in enumerate(tr):
                configs += 1
                left = total - j
                got = denote_configuration(c.term, c.store, left)
                if got is BOTTOM or not _stores_equal(got, final):
                    return f"step {j}: denotation at fuel {left} is {got}"
                if left and denote_configuration(c.term, c.store, left - 1) is not BOTTOM:
                    return f"step {j}: denotation already defined at fuel {left - 1}"
            unfoldings = sum(isinstance(_head(c.term), While) for c in tr)
            got = denote_configuration(m, store, unfoldings, "unfoldings", declared=gamma)
            if got is BOTTOM or not _stores_equal(got, final):
                return f"undefined at {unfoldings} loop unfoldings"
            if unfoldings and denote_configuration(m, store, unfoldings - 1, "unfoldings",
                                                   declared=gamma) is not BOTTOM:
                return f"defined at {unfoldings - 1} loop unfoldings"
            return None

        _guard(rep, i - 1, check)
    rep.coverage = {"configurations": configs, "non-terminating-skipped": skipped}
    return rep


def adequacy(cfg: GenConfig) -> Report:
    """``run`` terminates within N steps iff the denotation is defined at N."""
    rep = Report("adequacy", cfg.seed)
    outcomes: Counter = Counter()
    n = cfg.fuel
    for i in range(_count(cfg, rep.name)):
        planted = i % DIVERGENT_EVERY == 0
        m, store, _ = gen_well_typed_config(cfg, i, closed=True, divergent=planted)

        def check() -> str | None:
            r = run(Configuration(m, store), n)
            d = denote_configuration(m, store, n)
            terminated = isinstance(r, Terminated)
            outcomes["terminated" if terminated else "out-of-fuel"] += 1
            if planted and terminated:
                return "planted divergent loop terminated"
            if terminated != (d is not BOTTOM):
                return f"run gave {type(r).__name__} but denotation is {d}"
            if terminated and not _stores_equal(d, r.store):
                return f"stores differ: {print_store(r.store)} vs {d}"
            if terminated and r.steps:
                # the biconditional is tight at the step count
                if denote_configuration(m, store, r.steps - 1) is not BOTTOM:
                    return f"denotation defined below {r.steps} steps"
                if not isinstance(run(Configuration(m, store), r.steps - 1), OutOfFuel):
                    return "run terminated early"
            return None

        _guard(rep, i, check, divergent=planted)
    rep.coverage = {"fuel": n, **dict(sorted(outcomes.items()))}
    return rep


# ---------------------------------------------------------------------------
# Type-level suites
# ---------------------------------------------------------------------------

ATOMS = {"Q": AtomSpec(2)}


def _suite_types(cfg: GenConfig, label: str, extra: int) -> list[tuple[Type, dict]]:
    out: list[tuple[Type, dict]] = [(a, {}) for a in corpus_types()]
    out += [(Atomic("Q"), ATOMS), (Sum(Atomic("Q"), NAT), ATOMS)]
    rng = cfg.rng(label)
    for _ in range(extra):
        out.append((gen_closed_type(rng, cfg.max_type_depth), {}))
    return out


def discardability(cfg: GenConfig) -> Report:
    rep = Report("discardability", cfg.seed)
    values = 0
    for a, atoms in _suite_types(cfg, rep.name, _count(cfg, rep.name)):

        def check() -> str | None:
            nonlocal values
            for v in sem_elems(a, cfg.size_bound, atoms):
                values += 1
                if not check_value(v, a, atoms):
                    return f"enumerated {print_value(v)} is not a value of {a}"
                p = denote_value(v, a)
                if p != v:
                    return f"denotation of {print_value(v)} is {print_value(p)}"
                if discard(a, p, atoms) != STAR:
                    return f"discard undefined on {print_value(v)}"
            return None

        _guard(rep, print_type(a), check)
    rep.coverage = {"values": values, "size-bound": cfg.size_bound}
    return rep


def fold_unfold(cfg: GenConfig) -> Report:
    rep = Report("fold-unfold", cfg.seed)
    checked = 0
    rng = cfg.rng(rep.name)
    mus = [a for a in corpus_types() if isinstance(a, Mu)]
    target = len(mus) + _count(cfg, rep.name)
    while len(mus) < target:
        a = gen_closed_type(rng, cfg.max_type_depth)
        if isinstance(a, Mu):
            mus.append(a)
    for mu in mus:

        def check() -> str | None:
            nonlocal checked
            body = mu.unfolding()
            carrier = affine_closed(mu).carrier
            for k in range(1, cfg.size_bound + 1):
                inner = sem_elems(body, k - 1) if k > 1 else []
                outer = sem_elems(mu, k)
                if carrier.upto(k) != outer:
                    return f"affine carrier differs from the plain one at size {k}"
                folded = [fold_iso(mu, v) for v in inner]
                if set(folded) != set(outer) or len(folded) != len(outer):
                    return f"fold is not a bijection at size {k}"
                for v, w in zip(inner, folded):
                    checked += 1
                    if unfold_iso(mu, w) != v:
                        return f"unfold(fold({print_value(v)})) != itself"
                    if discard(mu, w) != discard(body, v):
                        return f"discard does not commute with fold at {print_value(v)}"
                for w in outer:
                    if fold_iso(mu, unfold_iso(mu, w)) != w:
                        return f"fold(unfold({print_value(w)})) != itself"
            return None

        _guard(rep, print_type(mu), check)
    rep.coverage = {"values": checked, "size-bound": cfg.size_bound}
    return rep


def substitution(cfg: GenConfig) -> Report:
    """``A[B/X]`` enumerated directly equals ``X |- A`` interpreted at ``[[B]]``."""
    rep = Report("substitution", cfg.seed)
    rng = cfg.rng(rep.name)
    compared = 0
    for i in range(_count(cfg, rep.name)):
        a = gen_type(rng, cfg.max_type_depth, ("X",))
        while "X" not in a.free_vars:
            a = gen_type(rng, cfg.max_type_depth, ("X",))
        b = gen_closed_type(rng, max(1, cfg.max_type_depth - 1))

        def check() -> str | None:
            nonlocal compared
            direct = sem_elems(substitute_type(a, "X", b), cfg.size_bound)
            functorial = interpret(a, {"X": interpret(b, {})}).upto(cfg.size_bound)
            compared += len(direct)
            if set(direct) != set(functorial) or len(direct) != len(functorial):
                return (f"A = {a}, B = {b}: {len(direct)} direct vs "
                        f"{len(functorial)} functorial elements")
            return None

        _guard(rep, i, check, a=print_type(a), b=print_type(b))
    rep.coverage = {"elements": compared, "size-bound": cfg.size_bound}
    return rep


FIXED_COUNTS = ((BIT, 2, 2), (NAT, 7, 3), (BIT_LIST, 8, 3))


def enumeration(cfg: GenConfig) -> Report:
    """Carrier enumeration agrees with the brute-force counter."""
    rep = Report("enumeration", cfg.seed)
    for a, k, n in FIXED_COUNTS:
        _guard(rep, f"{print_type(a)}@{k}",
               lambda: None if (len(sem_elems(a, k)), brute_count_values(a, k)) == (n, n)
               else f"expected {n}, got {len(sem_elems(a, k))} / {brute_count_values(a, k)}")
    total = 0
    for a, atoms in _suite_types(cfg, rep.name, _count(cfg, rep.name)):

        def check() -> str | None:
            nonlocal total
            fast = sem_elems(a, cfg.size_bound, atoms)
            slow = brute_count_values(a, cfg.size_bound, atoms)
            total += slow
            if len(fast) != slow or len(set(fast)) != len(fast):
                return f"{len(fast)} enumerated vs {slow} brute-force values"
            return None

        _guard(rep, print_type(a), check)
    rep.coverage = {"values": total, "size-bound": cfg.size_bound}
    return rep


def discard_uniqueness(cfg: GenConfig) -> Report:
    """The synthesized discard is the only partial map solving its equations.

    For a ``mu`` type and a size-closed finite part of its carrier, every
    partial map ``g`` into ``I`` is tried against
    ``g(fold v) = discard_unfolding(v)``, where occurrences of the ``mu``
    type inside ``v`` are discarded by ``g`` itself.
    """
    rep = Report("discard-uniqueness", cfg.seed)
    mus = [a for a in corpus_types() if isinstance(a, Mu)]
    rng = cfg.rng(rep.name)
    target = len(mus) + _count(cfg, rep.name)
    for _ in range(50 * target):
        if len(mus) >= target:
            break
        a = gen_closed_type(rng, cfg.max_type_depth)
        if isinstance(a, Mu) and a not in mus:
            mus.append(a)
    maps = 0

    def structural(t: Type, v: Value, mu: Mu, g: dict) -> Value | None:
        if t == mu:
            return g[v]
        match t, v:
            case UnitT(), _:
                return STAR
            case Sum(l, _), LeftV(_, _, w):
                return structural(l, w, mu, g)
            case Sum(_, r), RightV(_, _, w):
                return structural(r, w, mu, g)
            case Tensor(l, r), PairV(x, y):
                a, b = structural(l, x, mu, g), structural(r, y, mu, g)
                return STAR if a is not None and b is not None else None
            case Mu(), FoldV(_, w):
                return structural(t.unfolding(), w, mu, g)
        raise ValueError(f"{v} is not a value of {t}")

    for mu in mus:

        def check() -> str | None:
            nonlocal maps
            k = 1
            while k < cfg.size_bound and len(sem_elems(mu, k + 1)) <= 10:
                k += 1
            carrier = sem_elems(mu, k)
            solutions = []
            for choice in product((STAR, None), repeat=len(carrier)):
                maps += 1
                g = dict(zip(carrier, choice))
                if all(g[w] == structural(mu.unfolding(), w.value, mu, g) for w in carrier):
                    solutions.append(g)
            if len(solutions) != 1:
                return f"{len(solutions)} solutions on {len(carrier)} elements"
            if any(solutions[0][w] != discard(mu, w) for w in carrier):
                return "the unique solution is not the synthesized discard"
            return None

        _guard(rep, print_type(mu), check)
    rep.coverage = {"candidate-maps": maps}
    return rep


def roundtrip(cfg: GenConfig) -> Report:
    rep = Report("roundtrip", cfg.seed)
    chars = 0
    for i in range(_count(cfg, rep.name)):
        p = gen_program(cfg, i)

        def check() -> str | None:
            nonlocal chars
            text = print_program(p)
            chars += len(text)
            q = parse_program(text)
            if q.term != p.term:
                return "term changed"
            if q.context != p.context or q.store != p.store:
                return "inputs changed"
            if q.abbreviations != p.abbreviations:
                return "abbreviations changed"
            if print_program(q) != text:
                return "printing is not stable"
            return None

        _guard(rep, i, check)
    rep.coverage = {"characters": chars}
    return rep


SUITES: dict[str, Callable[[GenConfig], Report]] = {
    "subject-reduction": subject_reduction,
    "progress": progress,
    "soundness": soundness,
    "adequacy": adequacy,
    "discardability": discardability,
    "substitution": substitution,
    "fold-unfold": fold_unfold,
    "enumeration": enumeration,
    "discard-uniqueness": discard_uniqueness,
    "roundtrip": roundtrip,
}


def check_theorem(name: str, cfg: GenConfig | None = None) -> Report:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](cfg or GenConfig())


def run_suites(names=None, cfg: GenConfig | None = None) -> list[Report]:
    cfg = cfg or GenConfig()
    return [check_theorem(n, cfg) for n in (names or SUITES)]
