"""Truth evaluation on periodic models.

Two independent paths decide whether a formula holds at an instant:

* :func:`label` / :func:`holds` - bottom-up fixpoint labeling over the
  stored (canonical) positions, one bit row per subformula;
* :func:`holds_oracle` - a literal recursive reading of the satisfaction
  clauses, scanning forward with repetition cutoffs.

The differential test suite asserts exact agreement between the two.
"""

from __future__ import annotations

from dataclasses import dataclass

from omega2tl import kernels
from omega2tl.formula import (And, Closure, Formula, LocalUntil, Next1, NextW,
                              Not, Until, Var, closure, desugar, is_core)
from omega2tl.model import PeriodicModel, TimeInstant


@dataclass(frozen=True)
class LabelTable:
    """Truth bits for every closure formula at every stored position."""

    model: PeriodicModel
    closure: Closure
    bits: dict[Formula, tuple[bytearray, ...]]

    def bit(self, phi: Formula, stored_row: int, stored_col: int) -> bool:
        return bool(self.bits[phi][stored_row][stored_col])

    def at(self, phi: Formula, t: TimeInstant) -> bool:
        r, c = self.model.canonical_position(t)
        return self.bit(phi, r, c)


def label(model: PeriodicModel, phi: Formula) -> LabelTable:
    """Computes truth bits for every subformula of a desugared formula.

    Until bits are least fixpoints: column-local until within each row
    lasso, global until chained over the row lasso through the
    rest-of-row guard g(left and not right), itself evaluated as
    not(true u not(...)).
    """
    if not is_core(phi):
        raise ValueError("label requires a desugared formula")
    clo = closure(phi)
    rows = model.stored_rows
    loop_row_start = len(model.row_prefix)
    nrows = len(rows)

    def succ_row(r: int) -> int:
        return r + 1 if r + 1 < nrows else loop_row_start

    bits: dict[Formula, tuple[bytearray, ...]] = {}
    for f in clo.formulas:
        match f:
            case Var(v):
                out = tuple(bytearray(int(v in row.cell(c)) for c in range(row.width))
                            for row in rows)
            case Not(a):
                out = tuple(bytearray(1 - b for b in row) for row in bits[a])
            case And(a, b):
                out = tuple(bytearray(x & y for x, y in zip(ra, rb))
                            for ra, rb in zip(bits[a], bits[b]))
            case Next1(a):
                out = []
                for r, row in enumerate(rows):
                    ls = len(row.col_prefix)
                    sub = bits[a][r]
                    out.append(bytearray(
                        sub[c + 1 if c + 1 < row.width else ls]
                        for c in range(row.width)))
                out = tuple(out)
            case NextW(a):
                out = tuple(bytearray(bits[a][succ_row(r)][0] for _ in range(rows[r].width))
                            for r in range(nrows))
            case LocalUntil(a, b):
                out = tuple(
                    kernels.until_row(bits[a][r], bits[b][r], len(rows[r].col_prefix))
                    for r in range(nrows))
            case Until(a, b):
                out = _label_until(bits[a], bits[b], rows, loop_row_start)
            case _:
                raise AssertionError(f"non-core formula in closure: {f!r}")
        bits[f] = out
    return LabelTable(model, clo, bits)


def _label_until(psi_bits, theta_bits, rows, loop_row_start):
    nrows = len(rows)
    local = []  # psi u theta, per row
    guard = []  # g(psi and not theta), per row
    for r, row in enumerate(rows):
        ls = len(row.col_prefix)
        psi, theta = psi_bits[r], theta_bits[r]
        local.append(kernels.until_row(psi, theta, ls))
        not_chi = bytearray(1 - (p & (1 - t)) for p, t in zip(psi, theta))
        top = bytearray([1]) * row.width
        guard.append(bytearray(1 - b for b in kernels.until_row(top, not_chi, ls)))
    base = bytearray(local[r][0] for r in range(nrows))
    carry = bytearray(guard[r][0] for r in range(nrows))
    chained = kernels.lasso_fixpoint(base, carry, loop_row_start)
    out = []
    for r, row in enumerate(rows):
        nxt = r + 1 if r + 1 < nrows else loop_row_start
        y = chained[nxt]
        out.append(bytearray(local[r][c] | (guard[r][c] & y)
                             for c in range(row.width)))
    return tuple(out)


def holds(model: PeriodicModel, t: TimeInstant, phi: Formula) -> bool:
    """Fast path: label the desugared formula, read the canonical bit."""
    core = desugar(phi)
    return label(model, core).at(core, t)


def check_theory(model: PeriodicModel, t: TimeInstant, theory) -> bool:
    """True iff every formula of the finite theory holds at t."""
    return all(holds(model, t, phi) for phi in theory)


# --- reference path ------------------------------------------------------


def holds_oracle(model: PeriodicModel, t: TimeInstant, phi: Formula) -> bool:
    """Literal recursive evaluation of the satisfaction clauses.

    Until scans step forward and stop as soon as a canonical position
    repeats with nothing new established; periodicity makes that cutoff
    exact.  Kept free of the labeling machinery so the two paths are
    independent checks of each other.
    """
    core = phi if is_core(phi) else desugar(phi)
    return _eval(model, t.row, t.col, core)


def _eval(m: PeriodicModel, i: int, j: int, phi: Formula) -> bool:
    match phi:
        case Var(v):
            return m.lookup(TimeInstant(i, j), v)
        case Not(a):
            return not _eval(m, i, j, a)
        case And(a, b):
            return _eval(m, i, j, a) and _eval(m, i, j, b)
        case Next1(a):
            return _eval(m, i, j + 1, a)
        case NextW(a):
            return _eval(m, i + 1, 0, a)
        case LocalUntil(a, b):
            return _scan_row(m, i, j, a, b) is True
        case Until(a, b):
            return _eval_until(m, i, j, a, b)
    raise AssertionError(f"non-core formula: {phi!r}")


def _scan_row(m: PeriodicModel, i: int, j: int, a: Formula, b: Formula):
    """Scans columns j, j+1, ... of row i for a witness of b with a before.

    Returns True on a witness, False when a fails first, and None when
    the canonical columns are exhausted with a-and-not-b throughout
    (meaning: no witness in this row, but a holds for the rest of it).
    """
    row = m.stored_rows[m.row_index(i)]
    seen: set[int] = set()
    k = 0
    while True:
        c = row.col_index(j + k)
        if c in seen:
            return None
        seen.add(c)
        if _eval(m, i, j + k, b):
            return True
        if not _eval(m, i, j + k, a):
            return False
        k += 1


def _eval_until(m: PeriodicModel, i: int, j: int, a: Formula, b: Formula) -> bool:
    seen_rows: set[int] = set()
    cur_i, cur_j = i, j
    first = True
    while True:
        if not first:
            key = m.row_index(cur_i)
            if key in seen_rows:
                return False
            seen_rows.add(key)
        verdict = _scan_row(m, cur_i, cur_j, a, b)
        if verdict is not None:
            return verdict
        cur_i, cur_j, first = cur_i + 1, 0, False
