"""Seeded random generators and self-check suites.

Shared by the command-line ``selftest`` subcommand and the test suite:
random formulas, models and instants; the differential suite comparing
the fixpoint labeler against the literal oracle; and the axiom validity
suite (tautology substitutions plus the temporal axiom schemata, checked
in complete solver mode at small closure sizes and by random
falsification above that).
"""

from __future__ import annotations

import random

from omega2tl import checker, solver
from omega2tl.formula import (And, Formula, Iff, Implies, IterNext,
                              LocalAlways, LocalUntil, Next1, NextW, Not, Or,
                              Until, Var, closure, desugar, render)
from omega2tl.model import LassoRow, PeriodicModel, TimeInstant


# --- generators ----------------------------------------------------------


def random_core_formula(rng: random.Random, budget: int, nvars: int) -> Formula:
    """Random desugared formula with exactly ``budget`` symbols."""
    if budget <= 1:
        return Var(rng.randrange(nvars))
    if budget == 2 or rng.random() < 0.4:
        op = rng.choice((Not, Next1, NextW))
        return op(random_core_formula(rng, budget - 1, nvars))
    op = rng.choice((And, LocalUntil, Until))
    left = rng.randint(1, budget - 2)
    return op(random_core_formula(rng, left, nvars),
              random_core_formula(rng, budget - 1 - left, nvars))


def random_model(rng: random.Random, nvars: int = 3,
                 max_prefix_rows: int = 3, max_loop_rows: int = 3,
                 max_col_prefix: int = 3, max_col_loop: int = 3) -> PeriodicModel:
    def cell() -> frozenset[int]:
        return frozenset(v for v in range(nvars) if rng.random() < 0.5)

    def row() -> LassoRow:
        return LassoRow(
            tuple(cell() for _ in range(rng.randint(0, max_col_prefix))),
            tuple(cell() for _ in range(rng.randint(1, max_col_loop))))

    return PeriodicModel(
        tuple(row() for _ in range(rng.randint(0, max_prefix_rows))),
        tuple(row() for _ in range(rng.randint(1, max_loop_rows))),
        frozenset(range(nvars)))


def random_instant(rng: random.Random, limit: int = 10) -> TimeInstant:
    return TimeInstant(rng.randint(0, limit), rng.randint(0, limit))


# --- differential suite ---------------------------------------------------


def differential_suite(seed: int = 0, cases: int = 1000) -> list[str]:
    """Compares holds against holds_oracle on random triples; returns failures."""
    rng = random.Random(seed)
    failures = []
    for n in range(cases):
        model = random_model(rng)
        phi = random_core_formula(rng, rng.randint(1, 12), 3)
        t = random_instant(rng)
        fast = checker.holds(model, t, phi)
        slow = checker.holds_oracle(model, t, phi)
        if fast != slow:
            failures.append(
                f"case {n}: holds={fast} oracle={slow} at {tuple(t)} "
                f"for {render(phi)}")
    return failures


# --- axiom validity suite -------------------------------------------------

# substitution instances of length <= 4
_SMALL: tuple[Formula, ...] = (
    Var(0),
    Var(1),
    Not(Var(0)),
    Next1(Var(0)),
    NextW(Var(1)),
    And(Var(0), Var(1)),
    LocalUntil(Var(0), Var(1)),
    Until(Var(1), Var(0)),
)

_TAUTOLOGIES = (
    lambda a, b: Implies(a, a),
    lambda a, b: Implies(a, Implies(b, a)),
    lambda a, b: Implies(Implies(Not(a), Not(b)), Implies(b, a)),
    lambda a, b: Or(a, Not(a)),
    lambda a, b: Implies(And(a, b), a),
    lambda a, b: Implies(a, Or(a, b)),
    lambda a, b: Not(And(a, Not(a))),
    lambda a, b: Iff(Not(Or(a, b)), And(Not(a), Not(b))),
    lambda a, b: Implies(And(Implies(a, b), a), b),
    lambda a, b: Iff(a, Not(Not(a))),
)


def axiom_pools() -> dict[str, list[Formula]]:
    """Instance pools for the eight axiom schemata, deterministically built."""
    rng = random.Random(1)

    def pick() -> Formula:
        return _SMALL[rng.randrange(len(_SMALL))]

    pools: dict[str, list[Formula]] = {}
    pools["A1"] = [t(pick(), pick()) for _ in range(2) for t in _TAUTOLOGIES]
    pools["A2"] = [Iff(Next1(NextW(x)), NextW(x)) for x in (Var(0), Not(Var(1)))]
    pools["A3"] = [Iff(Not(step(x)), step(Not(x)))
                   for step in (Next1, NextW) for x in (Var(0), And(Var(0), Var(1)))]
    pools["A4"] = [Iff(step(op(Var(0), Var(1))), op(step(Var(0)), step(Var(1))))
                   for step in (Next1, NextW) for op in (And, Or, Implies, Iff)]
    pools["A5"] = [Implies(y, LocalUntil(x, y))
                   for x, y in ((Var(0), Var(1)), (Next1(Var(0)), Not(Var(1))))]
    pools["A6"] = [Implies(LocalUntil(x, y), Until(x, y))
                   for x, y in ((Var(0), Var(1)), (Not(Var(0)), Var(1)))]
    pools["A7"] = [_a7(n, Var(0), Var(1)) for n in range(3)]
    pools["A8"] = [_a8(n, Var(0), Var(1)) for n in range(2)]
    return pools


def _a7(n: int, phi: Formula, psi: Formula) -> Formula:
    body: Formula = IterNext("1", 0, And(phi, Not(psi)))
    for k in range(1, n + 1):
        body = And(body, IterNext("1", k, And(phi, Not(psi))))
    body = And(body, IterNext("1", n + 1, psi))
    return Implies(body, LocalUntil(phi, psi))


def _a8(n: int, phi: Formula, psi: Formula) -> Formula:
    body: Formula = IterNext("w", 0, LocalAlways(And(phi, Not(psi))))
    for k in range(1, n + 1):
        body = And(body, IterNext("w", k, LocalAlways(And(phi, Not(psi)))))
    body = And(body, IterNext("w", n + 1, LocalUntil(phi, psi)))
    return Implies(body, Until(phi, psi))


COMPLETE_CLOSURE_LIMIT = 16


def check_validity(phi: Formula, rng: random.Random,
                   falsification_models: int = 200) -> bool:
    """Complete-mode validity at small closure, falsification search above.

    The falsification path looks for a countermodel among random models
    and instants; finding none passes the instance.
    """
    negated = desugar(Not(phi))
    if len(closure(negated)) <= COMPLETE_CLOSURE_LIMIT:
        return solver.valid(phi, solver.SolverBounds(complete=True)) is True
    for _ in range(falsification_models):
        model = random_model(rng)
        for t in (TimeInstant(0, 0), random_instant(rng), random_instant(rng)):
            if not checker.holds(model, t, phi):
                return False
    return True


def axiom_suite(seed: int = 0, falsification_models: int = 200) -> list[str]:
    """Checks every axiom pool instance for validity; returns failures."""
    rng = random.Random(seed)
    failures = []
    for name, pool in axiom_pools().items():
        for phi in pool:
            if not check_validity(phi, rng, falsification_models):
                failures.append(f"{name}: not valid: {render(phi)}")
    return failures


def run(seed: int = 0, cases: int = 1000) -> tuple[bool, list[str]]:
    """Runs both suites; returns (all passed, report lines)."""
    lines = []
    ok = True
    diff = differential_suite(seed, cases)
    lines.append(f"differential suite: {cases} cases, {len(diff)} failures")
    lines.extend(diff[:10])
    ok = ok and not diff
    ax = axiom_suite(seed)
    lines.append(f"axiom suite: {len(ax)} failures")
    lines.extend(ax[:10])
    ok = ok and not ax
    return ok, lines
