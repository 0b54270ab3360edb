"""End-to-end acceptance suite.

Nine criteria covering differential semantics, axiom validity, the
worked validity example, noncompactness at desk scale, witness
soundness, sat/valid duality, model-based completeness probing, the
transition-discipline reports and the closure size bound.
"""

import functools
import random
import time

import pytest

from omega2tl import selftest
from omega2tl.checker import check_theory, holds, holds_oracle
from omega2tl.formula import (And, Not, Var, closure, desugar, length, parse)
from omega2tl.model import (LassoRow, PeriodicModel, TimeInstant,
                            constant_model)
from omega2tl.solver import Sat, SolverBounds, Unsat, sat, valid
from omega2tl.transitions import (check_transition_discipline,
                                  noncompactness_family,
                                  noncompactness_witness)

ORIGIN = TimeInstant(0, 0)


@pytest.fixture(scope="module")
def pool_300():
    """Shared 300-formula pool for witness soundness and duality."""
    rng = random.Random(7)
    return [selftest.random_core_formula(rng, rng.randint(1, 10), 2)
            for _ in range(300)]


@pytest.fixture(scope="module")
def duality_results(pool_300):
    """Complete-mode sat and valid-of-negation verdicts per pool formula."""
    bounds = SolverBounds(complete=True)
    return [(phi, sat(phi, bounds), valid(Not(phi), bounds))
            for phi in pool_300]


def test_criterion_1_differential_semantics():
    start = time.monotonic()
    failures = selftest.differential_suite(seed=0, cases=1000)
    elapsed = time.monotonic() - start
    assert failures == []
    assert elapsed < 60.0


def test_criterion_2_axiom_validity_suite():
    failures = selftest.axiom_suite(seed=0, falsification_models=200)
    assert failures == []


def test_criterion_3_worked_validity_example():
    assert valid(parse("[1][w]p0 <-> [w]p0")) is True


def test_criterion_4_noncompactness_desk_scale():
    start = time.monotonic()
    for n in range(5):
        family = noncompactness_family(n)
        result = sat(functools.reduce(And, family))
        assert isinstance(result, Sat), f"n={n}"
        for member in family:
            assert holds_oracle(result.witness, ORIGIN, desugar(member)), \
                f"n={n}: emitted witness fails {member!r}"
        constructed = noncompactness_witness(n)
        assert len(constructed.row_prefix) == n + 1
        assert check_theory(constructed, ORIGIN, family)
    assert time.monotonic() - start < 30.0


def test_criterion_5_witness_soundness(duality_results):
    # Sat results from the duality pool runs plus the noncompactness
    # conjunctions; every witness must verify under both checkers
    witnesses = [(phi, r.witness) for phi, r, _ in duality_results
                 if isinstance(r, Sat)]
    for n in range(5):
        phi = functools.reduce(And, noncompactness_family(n))
        result = sat(phi)
        assert isinstance(result, Sat)
        witnesses.append((desugar(phi), result.witness))
    assert len(witnesses) > 100
    for phi, witness in witnesses:
        assert holds(witness, ORIGIN, phi)
        assert holds_oracle(witness, ORIGIN, phi)


def test_criterion_6_sat_valid_duality(duality_results):
    for phi, satisfiable, refuted in duality_results:
        is_sat = isinstance(satisfiable, Sat)
        assert refuted is not None, f"complete mode undecided on {phi!r}"
        assert is_sat != (refuted is True), f"duality violated on {phi!r}"


def test_criterion_7_model_based_completeness():
    rng = random.Random(7)
    checked = 0
    for _ in range(200):
        model = selftest.random_model(rng)
        phi = selftest.random_core_formula(rng, rng.randint(1, 10), 3)
        if not holds(model, ORIGIN, phi):
            continue
        checked += 1
        assert not isinstance(sat(phi), Unsat), f"refuted satisfiable {phi!r}"
    assert checked >= 50


def test_criterion_8_transition_reports():
    tr1_model = PeriodicModel(
        (LassoRow((frozenset(),), (frozenset((0,)),)),),
        (LassoRow((), (frozenset(),)),),
        frozenset((0,)))
    report = check_transition_discipline(tr1_model)
    assert report.tr1_variable_violations == ((0, 0),)
    assert report.tr2_variable_violations == ()

    tr2_model = PeriodicModel(
        (),
        (LassoRow((frozenset((0,)), frozenset()), (frozenset((0,)),)),),
        frozenset((0,)))
    report = check_transition_discipline(tr2_model)
    assert report.tr1_variable_violations == ()
    assert len(report.tr2_variable_violations) == 1
    assert report.tr2_variable_violations[0][2] == 0

    assert check_transition_discipline(constant_model(frozenset((0, 1)))).clean


def test_criterion_9_closure_bound():
    rng = random.Random(9)
    for _ in range(1000):
        phi = selftest.random_core_formula(rng, rng.randint(1, 14), 3)
        assert len(closure(phi)) <= length(phi)
