"""Zero-time-transition discipline and the noncompactness family.

A system-state change is modeled as infinitely many micro steps inside
one row, so it takes no macro time.  Two disciplines make that reading
honest: whatever holds cofinally in a row carries over to the next row's
start (TR1), and a variable may switch off at most once per row (TR2).
Both are checked here at the variable level; schema instances over
arbitrary formulas are generated for the model checker.
"""

from __future__ import annotations

from dataclasses import dataclass

from omega2tl.formula import (And, Formula, Implies, IterNext, LocalAlways,
                              Next1, NextW, Not, Var, desugar)
from omega2tl.model import LassoRow, PeriodicModel


@dataclass(frozen=True)
class TransitionReport:
    """Variable-level violations of the two transition disciplines."""

    tr1_variable_violations: tuple[tuple[int, int], ...]  # (stored row, var)
    tr2_variable_violations: tuple[tuple[int, int, int], ...]  # (row, col, var)

    @property
    def clean(self) -> bool:
        return not self.tr1_variable_violations and not self.tr2_variable_violations


def check_transition_discipline(model: PeriodicModel) -> TransitionReport:
    """Checks every stored row of the model against TR1 and TR2.

    TR1: a variable true at every column of a row's loop (hence
    cofinally in the row) must be true at column 0 of the next row.
    TR2: within the row's finite unrolling (prefix plus two loop
    passes), once a variable falls from true to false it must stay
    false; the recorded column is where the forbidden revival occurs.
    """
    rows = model.stored_rows
    loop_row_start = len(model.row_prefix)
    tr1 = []
    tr2 = []
    for r, row in enumerate(rows):
        nxt = rows[r + 1 if r + 1 < len(rows) else loop_row_start]
        next_start = nxt.cell(0) if nxt.width else frozenset()
        for p in sorted(model.universe):
            if all(p in cell for cell in row.col_loop) and p not in next_start:
                tr1.append((r, p))
            fallen = False
            unrolled = list(row.col_prefix) + 2 * list(row.col_loop)
            for c in range(1, len(unrolled)):
                if p in unrolled[c - 1] and p not in unrolled[c]:
                    fallen = True
                elif fallen and p in unrolled[c]:
                    tr2.append((r, row.col_index(c), p))
                    break
    return TransitionReport(tuple(tr1), tuple(tr2))


def tr_instances(pool) -> list[Formula]:
    """Desugared TR1/TR2 schema instances for every formula in the pool.

    TR1: g phi -> [w]phi.  TR2: (phi & [1]!phi) -> g[1]!phi.
    """
    out: list[Formula] = []
    for phi in pool:
        out.append(desugar(Implies(LocalAlways(phi), NextW(phi))))
        out.append(desugar(Implies(And(phi, Next1(Not(phi))),
                                   LocalAlways(Next1(Not(phi))))))
    return out


def noncompactness_family(n: int) -> list[Formula]:
    """{F !p0} plus [w]^a[1]^b p0 for all a, b <= n.

    Every finite part of the full (unbounded) family is satisfiable yet
    the whole is not; these clipped families exhibit the mechanism.
    """
    from omega2tl.formula import Eventually

    family: list[Formula] = [Eventually(Not(Var(0)))]
    for a in range(n + 1):
        for b in range(n + 1):
            family.append(IterNext("w", a, IterNext("1", b, Var(0))))
    return family


def noncompactness_witness(n: int) -> PeriodicModel:
    """Model with n+1 rows of constant {p0} followed by an all-empty loop row.

    p0 holds everywhere before row n+1 and nowhere after, so every
    family member with a, b <= n holds at <0,0> while F !p0 is witnessed
    at <n+1, 0>.
    """
    on = LassoRow((), (frozenset((0,)),))
    off = LassoRow((), (frozenset(),))
    return PeriodicModel((on,) * (n + 1), (off,), frozenset((0,)))
