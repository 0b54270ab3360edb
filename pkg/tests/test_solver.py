"""Satisfiability: atoms, linking, the lasso search and witness output."""

import functools
import random

import pytest

from omega2tl import selftest
from omega2tl.checker import holds, holds_oracle
from omega2tl.formula import (And, LocalUntil, Next1, Not, Until, Var, closure,
                              desugar, local_always, parse)
from omega2tl.model import TimeInstant
from omega2tl.solver import (Sat, SolverBounds, Unsat, UnsatWithinBounds,
                             boolean_consistent, entails, properly_linked,
                             sat, solver_closure, valid)
from omega2tl.transitions import noncompactness_family


def _atom(clo, *members) -> int:
    bits = 0
    for f in members:
        bits |= 1 << clo.index[f]
    return bits


# --- snapshots ------------------------------------------------------------


def test_boolean_consistency_on_conjunction():
    clo = closure(desugar(parse("p0 & p1")))
    both = And(Var(0), Var(1))
    assert boolean_consistent(_atom(clo, Var(0), Var(1), both), clo)
    # the conjunction bit cannot be set without both conjuncts
    assert not boolean_consistent(_atom(clo, both), clo)
    assert not boolean_consistent(_atom(clo, Var(0), both), clo)
    assert boolean_consistent(_atom(clo, Var(0)), clo)


def test_boolean_consistency_on_negation():
    clo = closure(desugar(parse("!p0")))
    assert boolean_consistent(_atom(clo, Not(Var(0))), clo)
    assert boolean_consistent(_atom(clo, Var(0)), clo)
    assert not boolean_consistent(_atom(clo, Var(0), Not(Var(0))), clo)
    assert not boolean_consistent(0, clo)


def test_empty_atom_over_single_variable_is_consistent():
    clo = closure(Var(0))
    assert boolean_consistent(0, clo)


# --- linking --------------------------------------------------------------


def test_column_step_bit_must_match_successor():
    clo = closure(desugar(parse("[1]p0")))
    here = _atom(clo, Next1(Var(0)))
    with_p0 = _atom(clo, Var(0))
    assert properly_linked(here, with_p0, 0, clo)
    assert not properly_linked(here, 0, 0, clo)
    # and the row-jump bit against the row successor
    clow = closure(desugar(parse("[w]p0")))
    herew = _atom(clow, parse("[w]p0"))
    assert properly_linked(herew, 0, _atom(clow, Var(0)), clow)
    assert not properly_linked(herew, 0, 0, clow)


def test_local_until_unfolds_along_the_column():
    clo = closure(desugar(parse("p0 u p1")))
    u = LocalUntil(Var(0), Var(1))
    # right argument now: satisfied regardless of the successor
    now = _atom(clo, Var(1), u)
    assert properly_linked(now, 0, 0, clo)
    # left holds, postponed to the successor
    later = _atom(clo, Var(0), u)
    assert properly_linked(later, _atom(clo, u), 0, clo)
    assert not properly_linked(later, 0, 0, clo)
    # claiming u with neither argument is never linked
    assert not properly_linked(_atom(clo, u), _atom(clo, u), 0, clo)


def test_global_until_needs_the_closure_companions():
    phi = desugar(parse("p0 U p1"))
    with pytest.raises(ValueError, match="solver_closure"):
        properly_linked(0, 0, 0, closure(phi))


def test_global_until_decomposes_per_row():
    phi = desugar(parse("p0 U p1"))
    clo = solver_closure(phi)
    u = Until(Var(0), Var(1))
    local = LocalUntil(Var(0), Var(1))
    guard = local_always(And(Var(0), Not(Var(1))))
    assert local in clo.index and guard in clo.index
    # discharged within the current row
    assert properly_linked(_atom(clo, Var(1), local, u), 0, 0, clo)
    # carried to the next row under the rest-of-row guard
    carried = _atom(clo, Var(0), guard, u)
    if boolean_consistent(carried, clo):
        assert properly_linked(carried, 0, _atom(clo, u), clo)
    # neither a local witness nor a guarded carry: not linked
    bare = _atom(clo, Var(0), u)
    assert not properly_linked(bare, 0, _atom(clo, u), clo)
    assert not properly_linked(bare, 0, 0, clo)


def test_solver_closure_requires_core_and_inserts_companions():
    with pytest.raises(ValueError):
        solver_closure(parse("p0 | p1"))
    plain = closure(desugar(parse("p0 U p1")))
    extended = solver_closure(desugar(parse("p0 U p1")))
    assert len(extended) > len(plain)


# --- satisfiability -------------------------------------------------------


def test_contradiction_is_unsat_at_default_bounds():
    assert sat(parse("p0 & !p0")) == Unsat()


def test_negated_validity_is_unsat():
    # [1][w]p0 <-> [w]p0 is valid, so its negation has no model
    assert sat(parse("!([1][w]p0 <-> [w]p0)")) == Unsat()


def test_sat_returns_a_verified_witness():
    phi = parse("F !p0 & p0 & [1]p0 & [w]p0")
    result = sat(phi)
    assert isinstance(result, Sat)
    assert holds(result.witness, TimeInstant(0, 0), phi)
    assert holds_oracle(result.witness, TimeInstant(0, 0), phi)


def test_global_until_discharged_in_a_later_row():
    phi = parse("(p0 U p1) & !p1 & g !p1")
    result = sat(phi)
    assert isinstance(result, Sat)
    assert holds(result.witness, TimeInstant(0, 0), phi)


def test_bounds_monotonicity_and_unsat_within_bounds():
    # every row up to index 2 must start with three p0 columns, yet p0
    # eventually fails: impossible with one-cell rows and loops
    family = noncompactness_family(2)
    phi = functools.reduce(And, family)
    tiny = SolverBounds(1, 1, 1, 1)
    assert sat(phi, tiny) == UnsatWithinBounds(tiny)
    wide = sat(phi)
    assert isinstance(wide, Sat)
    assert holds(wide.witness, TimeInstant(0, 0), desugar(phi))


def test_complete_mode_turns_exhaustion_into_unsat():
    family = noncompactness_family(1)
    phi = functools.reduce(And, family)
    tiny = SolverBounds(1, 1, 1, 1)
    assert isinstance(sat(phi, tiny), UnsatWithinBounds)
    assert isinstance(sat(phi, SolverBounds(complete=True)), Sat)


def test_complete_for_scales_with_formula_length():
    b = SolverBounds.complete_for(parse("p0 & p1"))
    assert b.complete
    assert b.max_outer_prefix == 2 ** 3
    assert b.max_outer_loop == 3 * 2 ** 3
    with pytest.warns(UserWarning, match="2\\^20"):
        SolverBounds.complete_for(parse(" & ".join(f"p{i}" for i in range(12))))


# --- validity and entailment ----------------------------------------------


def test_valid_three_valued():
    assert valid(parse("p0 -> p0")) is True
    assert valid(parse("p0")) is False
    family = noncompactness_family(2)
    phi = functools.reduce(And, family)
    assert valid(Not(phi), SolverBounds(1, 1, 1, 1)) is None


def test_row_jump_swallows_a_leading_column_step():
    assert valid(parse("[1][w]p0 <-> [w]p0")) is True


def test_entailment():
    assert entails([parse("G p0")], parse("[w]p0"),
                   SolverBounds(complete=True)) is True
    assert entails([parse("p0")], parse("p1")) is False
    # the row-to-row transition discipline is not a logical consequence
    assert entails([], parse("g p0 -> [w]p0")) is False


# --- randomized cross-checks ----------------------------------------------


def test_witnesses_verify_on_random_formulas():
    rng = random.Random(11)
    found = 0
    for _ in range(60):
        phi = selftest.random_core_formula(rng, rng.randint(1, 8), 2)
        result = sat(phi)
        if isinstance(result, Sat):
            found += 1
            assert holds(result.witness, TimeInstant(0, 0), phi)
            assert holds_oracle(result.witness, TimeInstant(0, 0), phi)
    assert found > 10


def test_model_checked_formulas_are_never_refuted():
    rng = random.Random(12)
    for _ in range(40):
        m = selftest.random_model(rng)
        phi = selftest.random_core_formula(rng, rng.randint(1, 8), 3)
        if holds(m, TimeInstant(0, 0), phi):
            assert not isinstance(sat(phi), Unsat)
