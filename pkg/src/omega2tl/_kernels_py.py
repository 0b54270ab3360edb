"""Pure-Python fixpoint kernels; twin of the compiled module in _kernels.pyx.

Both backends expose the same two functions and must return identical
results; the benchmark in benchmarks/bench_kernels.py compares them.
"""

from __future__ import annotations


def until_row(psi: bytearray, theta: bytearray, loop_start: int) -> bytearray:
    """Least fixpoint of X(c) = theta(c) or (psi(c) and X(succ c)) on a column lasso.

    Columns loop_start..end wrap back to loop_start.  Iterates from
    all-false to stability; at most len+1 sweeps are needed.
    """
    n = len(psi)
    out = bytearray(n)
    for _ in range(n + 1):
        changed = False
        for c in range(n - 1, -1, -1):
            nxt = c + 1 if c + 1 < n else loop_start
            bit = theta[c] or (psi[c] and out[nxt])
            if bit and not out[c]:
                out[c] = 1
                changed = True
        if not changed:
            break
    return out


def lasso_fixpoint(base: bytearray, carry: bytearray, loop_start: int) -> bytearray:
    """Least fixpoint of Y(r) = base(r) or (carry(r) and Y(succ r)) on a lasso.

    Same recurrence as until_row; kept separate so each call site names
    what it computes (row-level until chaining vs column-level until).
    """
    return until_row(carry, base, loop_start)
