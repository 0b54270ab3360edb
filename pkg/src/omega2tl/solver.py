"""Satisfiability, validity and entailment by atom-graph search.

An atom is a Boolean-consistent truth snapshot over the closure of the
goal formula, stored as an int bitset.  A satisfying run is an outer
lasso of rows, each row an inner lasso of column atoms, consecutive
atoms properly linked and every until obligation discharged inside its
loop.  The search is deterministic (atoms in ascending bitset order,
breadth-first over lasso shapes) and every Sat answer carries a witness
model that is re-verified by the model checker before being returned.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass

from omega2tl import checker
from omega2tl.formula import (And, Closure, Formula, LocalUntil, Next1, NextW,
                              Not, Until, Var, closure, desugar, is_core,
                              length, local_always, variables)
from omega2tl.model import LassoRow, PeriodicModel, TimeInstant


@dataclass(frozen=True)
class SolverBounds:
    """Caps on the lasso shapes explored.

    With ``complete`` set the caps are informational and the search runs
    to exhaustion of the finite atom-graph state space, which covers the
    periodicity-theorem bounds; an exhausted complete search proves
    unsatisfiability.
    """

    max_outer_prefix: int = 8
    max_outer_loop: int = 8
    max_inner_prefix: int = 8
    max_inner_loop: int = 8
    complete: bool = False

    @classmethod
    def complete_for(cls, phi: Formula) -> "SolverBounds":
        n = length(desugar(phi))
        prefix = 2 ** n
        loop = n * 2 ** n
        if loop > 2 ** 20:
            warnings.warn(
                f"complete-mode bounds for a formula of length {n} exceed "
                "2^20 states; the search may take very long", stacklevel=2)
        return cls(prefix, loop, prefix, loop, True)


@dataclass(frozen=True)
class Sat:
    witness: PeriodicModel


@dataclass(frozen=True)
class Unsat:
    pass


@dataclass(frozen=True)
class UnsatWithinBounds:
    bounds: SolverBounds


SatResult = Sat | Unsat | UnsatWithinBounds


class SolverError(RuntimeError):
    """Internal defect: an accepted run produced a non-verifying witness."""


# --- closure with until companions ---------------------------------------


def solver_closure(phi: Formula) -> Closure:
    """Closure of a desugared formula, extended for global-until linking.

    For every global until ``a U b`` the row-local ``a u b`` and the
    rest-of-row guard ``g(a & !b)`` (in desugared form) are inserted, so
    the linking clause can decompose ``U`` row by row.
    """
    if not is_core(phi):
        raise ValueError("solver_closure requires a desugared formula")
    extras: list[Formula] = []
    for f in closure(phi).formulas:
        if isinstance(f, Until):
            extras.append(LocalUntil(f.left, f.right))
            extras.append(local_always(And(f.left, Not(f.right))))
    return closure(phi, tuple(extras))


# --- atoms ---------------------------------------------------------------


def boolean_consistent(atom: int, clo: Closure) -> bool:
    """The three snapshot conditions: complement, negation, conjunction.

    With the bitset representation "psi in atom or not-psi in atom" and
    the exclusivity of the two hold by construction; the derived bits
    for negation and conjunction are checked explicitly.
    """
    bit = lambda i: (atom >> i) & 1
    for i, f in enumerate(clo.formulas):
        match f:
            case Not(a):
                if bit(i) != 1 - bit(clo.index[a]):
                    return False
            case And(a, b):
                if bit(i) != (bit(clo.index[a]) & bit(clo.index[b])):
                    return False
    return True


def properly_linked(present: int, next1: int, nextw: int, clo: Closure) -> bool:
    """Compatibility of one snapshot with its column and row successors.

    The global-until clause uses the row-local until and the rest-of-row
    guard inserted by :func:`solver_closure`; both must be in the
    closure.
    """
    bit = lambda atom, f: (atom >> clo.index[f]) & 1
    for f in clo.formulas:
        match f:
            case Next1(a):
                if bit(present, f) != bit(next1, a):
                    return False
            case NextW(a):
                if bit(present, f) != bit(nextw, a):
                    return False
            case LocalUntil(a, b):
                expected = bit(present, b) or (
                    bit(present, a) and not bit(present, b) and bit(next1, f))
                if bit(present, f) != expected:
                    return False
            case Until(a, b):
                local = LocalUntil(a, b)
                guard = local_always(And(a, Not(b)))
                if local not in clo.index or guard not in clo.index:
                    raise ValueError(
                        "closure lacks the until companions; build it with "
                        "solver_closure")
                expected = bit(present, local) or (
                    bit(present, guard) and bit(nextw, f))
                if bit(present, f) != expected:
                    return False
    return True


class AtomSpace:
    """Boolean-consistent snapshots over a closure, enumerated on demand.

    Variables and temporal formulas are the free bits; negation and
    conjunction bits are derived through the closure's gate structure,
    so every produced snapshot is consistent by construction.
    Constrained queries (goal bit set, successor bits forced by linking)
    propagate constraints through the gates before branching on the
    remaining free bits, so candidate sets stay small even when the full
    space would be astronomical.  For each atom the linking conditions
    are compiled to a present-only check plus forced-bit masks for the
    column and row successors.
    """

    MAX_ATOMS_PER_QUERY = 1 << 20

    def __init__(self, clo: Closure):
        self.clo = clo
        formulas = clo.formulas
        self.n = len(formulas)
        self.free = [i for i, f in enumerate(formulas)
                     if isinstance(f, (Var, Next1, NextW, LocalUntil, Until))]
        self.not_gates = [(i, clo.index[f.operand])
                          for i, f in enumerate(formulas) if isinstance(f, Not)]
        self.and_gates = [(i, clo.index[f.left], clo.index[f.right])
                          for i, f in enumerate(formulas) if isinstance(f, And)]
        self.var_bits = [(i, f.index) for i, f in enumerate(formulas)
                         if isinstance(f, Var)]
        self.next1_pairs = [(i, clo.index[f.operand])
                            for i, f in enumerate(formulas)
                            if isinstance(f, Next1)]
        self.nextw_pairs = [(i, clo.index[f.operand])
                            for i, f in enumerate(formulas)
                            if isinstance(f, NextW)]
        self.u_list = [(i, clo.index[f.left], clo.index[f.right])
                       for i, f in enumerate(formulas)
                       if isinstance(f, LocalUntil)]
        self.U_list = [(i, clo.index[f.left], clo.index[f.right],
                        clo.index[LocalUntil(f.left, f.right)],
                        clo.index[local_always(And(f.left, Not(f.right)))])
                       for i, f in enumerate(formulas)
                       if isinstance(f, Until)]
        self.nextw_node_mask = 0
        for i, _op in self.nextw_pairs:
            self.nextw_node_mask |= 1 << i
        self._link_cache: dict[int, tuple] = {}
        self._match_cache: dict[tuple, tuple[tuple[int, ...], bool]] = {}

    # -- constrained enumeration -------------------------------------------

    def nextw_val_from(self, w: int) -> int:
        """Row-jump bits an atom must carry when its row jumps to ``w``."""
        val = 0
        for i, op in self.nextw_pairs:
            val |= ((w >> op) & 1) << i
        return val

    def matching(self, mask: int, value: int,
                 limit: int | None) -> tuple[tuple[int, ...], bool]:
        """Consistent atoms with the constrained bits, ascending.

        Returns (atoms, truncated).  With a limit the enumeration stops
        early and reports truncation; without one it raises when the
        match set exceeds the absolute cap.
        """
        key = (mask, value, limit)
        cached = self._match_cache.get(key)
        if cached is None:
            bits: list[int | None] = [None] * self.n
            for i in range(self.n):
                if (mask >> i) & 1:
                    bits[i] = (value >> i) & 1
            out: list[int] = []
            truncated = not self._expand(bits, out, limit)
            out.sort()
            cached = (tuple(out), truncated)
            self._match_cache[key] = cached
        return cached

    def _expand(self, bits, out, limit) -> bool:
        """Collects matches; False means the enumeration was cut short."""
        if limit is not None and len(out) >= limit:
            return False
        if not self._propagate(bits):
            return True
        for pos in self.free:
            if bits[pos] is None:
                for v in (0, 1):
                    child = bits.copy()
                    child[pos] = v
                    if not self._expand(child, out, limit):
                        return False
                return True
        if len(out) >= self.MAX_ATOMS_PER_QUERY:
            raise ValueError(
                "snapshot enumeration exceeded the per-query cap; the "
                "formula's closure is too large for this solver")
        out.append(sum(1 << i for i, v in enumerate(bits) if v))
        return True

    def _propagate(self, bits) -> bool:
        """Gate-level constraint propagation; False means contradiction."""
        changed = True
        while changed:
            changed = False
            for i, a in self.not_gates:
                if bits[a] is not None:
                    if bits[i] is None:
                        bits[i] = 1 - bits[a]
                        changed = True
                    elif bits[i] != 1 - bits[a]:
                        return False
                elif bits[i] is not None:
                    bits[a] = 1 - bits[i]
                    changed = True
            for i, a, b in self.and_gates:
                va, vb, vi = bits[a], bits[b], bits[i]
                if va is not None and vb is not None:
                    want = va & vb
                elif va == 0 or vb == 0:
                    want = 0
                else:
                    want = None
                if want is not None:
                    if vi is None:
                        bits[i] = want
                        changed = True
                    elif vi != want:
                        return False
                    continue
                if vi == 1:
                    if va is None:
                        bits[a] = 1
                        changed = True
                    if vb is None:
                        bits[b] = 1
                        changed = True
                elif vi == 0:
                    if va == 1 and vb is None:
                        bits[b] = 0
                        changed = True
                    elif vb == 1 and va is None:
                        bits[a] = 0
                        changed = True
        return True

    # -- linking -----------------------------------------------------------

    def _link(self, a: int):
        cached = self._link_cache.get(a)
        if cached is None:
            cached = self._link_info(a)
            self._link_cache[a] = cached
        return cached

    def _link_info(self, a: int):
        """(present_ok, forced col-successor mask/value, forced row mask/value).

        A position forced to both values (a step operator and an until
        propagation disagreeing about the same successor bit) leaves the
        atom without any legal successor, so it is rejected outright.
        """
        bit = lambda i: (a >> i) & 1
        ok = True
        forced1: dict[int, int] = {}
        forcedw: dict[int, int] = {}

        def force(forced, pos, val) -> bool:
            if forced.setdefault(pos, val) != val:
                return False
            return True

        for i, op in self.next1_pairs:
            ok = ok and force(forced1, op, bit(i))
        for i, op in self.nextw_pairs:
            ok = ok and force(forcedw, op, bit(i))
        for i, left, right in self.u_list:
            if bit(right):
                ok = ok and bit(i) == 1
            elif bit(left):
                ok = ok and force(forced1, i, bit(i))
            else:
                ok = ok and bit(i) == 0
        for i, _left, _right, local, guard in self.U_list:
            if bit(local):
                ok = ok and bit(i) == 1
            elif bit(guard):
                ok = ok and force(forcedw, i, bit(i))
            else:
                ok = ok and bit(i) == 0
        m1 = v1 = mw = vw = 0
        for pos, val in forced1.items():
            m1 |= 1 << pos
            v1 |= val << pos
        for pos, val in forcedw.items():
            mw |= 1 << pos
            vw |= val << pos
        return ok, m1, v1, mw, vw

    def present_ok(self, a: int) -> bool:
        return self._link(a)[0]

    def col_successors(self, a: int, w: int,
                       limit: int | None) -> tuple[tuple[int, ...], bool]:
        """Candidates for the next column, their row-jump bits fixed by w."""
        _, m1, v1, _, _ = self._link(a)
        wval = self.nextw_val_from(w)
        if (v1 ^ wval) & m1 & self.nextw_node_mask:
            return (), False
        return self.matching(m1 | self.nextw_node_mask, v1 | wval, limit)

    def row_compatible(self, a: int, w: int) -> bool:
        ok, _, _, mw, vw = self._link(a)
        return ok and (w & mw) == vw

    def row_candidates(self, a: int,
                       limit: int | None) -> tuple[tuple[int, ...], bool]:
        _, _, _, mw, vw = self._link(a)
        return self.matching(mw, vw, limit)

    def closes_column_loop(self, last: int, loop_start_atom: int) -> bool:
        _, m1, v1, _, _ = self._link(last)
        return (loop_start_atom & m1) == v1

    def cells(self, atoms) -> tuple[frozenset[int], ...]:
        return tuple(
            frozenset(v for pos, v in self.var_bits if (a >> pos) & 1)
            for a in atoms)


# --- the search ----------------------------------------------------------


def _subsets_largest_first(items: frozenset[int]):
    ordered = sorted(items)
    subsets = []
    for mask in range(1 << len(ordered)):
        subsets.append(frozenset(ordered[k] for k in range(len(ordered))
                                 if (mask >> k) & 1))
    subsets.sort(key=lambda s: (-len(s), sorted(s)))
    return subsets


class _OutOfBudget(Exception):
    """Capped-mode work budget exhausted; the search stops early."""


class _Search:
    # capped-mode effort ceilings; exceeding either sets cap_hit, so an
    # exhausted search reports UnsatWithinBounds rather than Unsat
    CANDIDATE_LIMIT = 4096
    WORK_BUDGET = 3_000_000

    def __init__(self, space: AtomSpace, bounds: SolverBounds):
        self.space = space
        self.bounds = bounds
        self.capped = not bounds.complete
        self.limit = self.CANDIDATE_LIMIT if self.capped else None
        self.budget = self.WORK_BUDGET if self.capped else None
        self.work = 0
        self.succ_cache: dict[tuple[int, int], tuple[int, ...]] = {}
        self.cap_hit = False
        self.row_memo: dict[tuple[int, int, frozenset[int]], tuple | None] = {}
        theta = {}
        for i, _l, right in space.u_list:
            theta[i] = right
        for i, _l, right, _local, _guard in space.U_list:
            theta[i] = right
        self.theta_of = theta

    def _hits(self, atom: int, need: frozenset[int]) -> frozenset[int]:
        return frozenset(t for t in need if (atom >> t) & 1)

    def successors(self, atom: int, w: int) -> tuple[int, ...]:
        """Column successors of an atom under row jump w, filtered and cached."""
        key = (atom, w)
        got = self.succ_cache.get(key)
        if got is None:
            cands, truncated = self.space.col_successors(atom, w, self.limit)
            if truncated:
                self.cap_hit = True
            got = tuple(b for b in cands if self.space.row_compatible(b, w))
            self.succ_cache[key] = got
        self.work += len(got) + 1
        if self.budget is not None and self.work > self.budget:
            self.cap_hit = True
            raise _OutOfBudget
        return got

    # -- one row: inner column lasso --------------------------------------

    def row_run(self, entry: int, w: int, need: frozenset[int]):
        """First column lasso for a row entered at ``entry`` with row jump ``w``.

        ``need`` lists closure positions that must be true at some column
        (the right arguments of pending global untils).  Returns
        (prefix_atoms, loop_atoms) or None.
        """
        key = (entry, w, need)
        if key in self.row_memo:
            return self.row_memo[key]
        result = self._row_search(entry, w, need)
        self.row_memo[key] = result
        return result

    def _row_search(self, entry: int, w: int, need: frozenset[int]):
        space = self.space
        if not space.row_compatible(entry, w):
            return None
        pcap = self.bounds.max_inner_prefix if self.capped else None
        start = (entry, need - self._hits(entry, need))
        parents: dict[tuple[int, frozenset[int]], tuple | None] = {start: None}
        dist = {start: 0}
        queue = deque([start])
        while queue:
            state = queue.popleft()
            atom, rem = state
            walk = self._loop_walk(atom, rem, w)
            if walk is not None:
                prefix = []
                back = parents[state]
                while back is not None:
                    prev, _ = back
                    prefix.append(prev[0])
                    back = parents[prev]
                prefix.reverse()
                return tuple(prefix), walk
            if pcap is not None and dist[state] >= pcap:
                self.cap_hit = True
                continue
            for b in self.successors(atom, w):
                nxt = (b, rem - self._hits(b, rem))
                if nxt not in dist:
                    dist[nxt] = dist[state] + 1
                    parents[nxt] = (state, b)
                    queue.append(nxt)
        return None

    def _loop_walk(self, s: int, extra_need: frozenset[int], w: int):
        """Shortest closed walk s -> ... -> s discharging the obligations of s.

        Obligations are the row-local untils true at the loop start; each
        needs its right argument true at some loop column, as does every
        position in ``extra_need``.
        """
        space = self.space
        lcap = self.bounds.max_inner_loop if self.capped else None
        req = set(extra_need)
        for i, _l, right in space.u_list:
            if (s >> i) & 1:
                req.add(right)
        start = (s, frozenset(req) - self._hits(s, frozenset(req)))
        parents: dict[tuple[int, frozenset[int]], tuple | None] = {start: None}
        dist = {start: 0}
        queue = deque([start])
        while queue:
            state = queue.popleft()
            atom, rem = state
            if not rem and space.closes_column_loop(atom, s):
                if lcap is not None and dist[state] + 1 > lcap:
                    self.cap_hit = True
                else:
                    walk = []
                    back = state
                    while back is not None:
                        walk.append(back[0])
                        prev = parents[back]
                        back = prev[0] if prev else None
                    walk.reverse()
                    return tuple(walk)
            if lcap is not None and dist[state] + 2 > lcap:
                self.cap_hit = True
                continue
            for b in self.successors(atom, w):
                nxt = (b, rem - self._hits(b, rem))
                if nxt not in dist:
                    dist[nxt] = dist[state] + 1
                    parents[nxt] = (state, b)
                    queue.append(nxt)
        return None

    # -- rows: outer lasso -------------------------------------------------

    def run(self, goal_pos: int):
        """Searches for an accepting outer lasso; returns row runs and k."""
        space = self.space
        kcap = self.bounds.max_outer_prefix if self.capped else None
        start_cands, truncated = space.matching(
            1 << goal_pos, 1 << goal_pos, self.limit)
        if truncated:
            self.cap_hit = True
        starts = [a for a in start_cands if space.present_ok(a)]
        parents: dict[int, tuple | None] = {}
        dist: dict[int, int] = {}
        queue = deque()
        for a in starts:
            if a not in dist:
                dist[a] = 0
                parents[a] = None
                queue.append(a)
        while queue:
            entry = queue.popleft()
            loop_rows = self._outer_loop(entry)
            if loop_rows is not None:
                prefix_rows = []
                back = parents[entry]
                while back is not None:
                    prev, run = back
                    prefix_rows.append(run)
                    back = parents[prev]
                prefix_rows.reverse()
                return prefix_rows, loop_rows
            if kcap is not None and dist[entry] >= kcap:
                self.cap_hit = True
                continue
            cands, truncated = space.row_candidates(entry, self.limit)
            if truncated:
                self.cap_hit = True
            for w in cands:
                if w in dist:
                    continue
                run = self.row_run(entry, w, frozenset())
                if run is None:
                    continue
                dist[w] = dist[entry] + 1
                parents[w] = (entry, run)
                queue.append(w)
        return None

    def _outer_loop(self, s_out: int):
        """Closed row walk at ``s_out`` discharging its global untils."""
        space = self.space
        mcap = self.bounds.max_outer_loop if self.capped else None
        pending = frozenset(i for i, *_ in space.U_list if (s_out >> i) & 1)
        start = (s_out, pending)
        parents: dict[tuple[int, frozenset[int]], tuple | None] = {start: None}
        dist = {start: 0}
        queue = deque([start])
        while queue:
            state = queue.popleft()
            entry, rem = state
            closing_need = frozenset(self.theta_of[i] for i in rem)
            run = self.row_run(entry, s_out, closing_need)
            if run is not None:
                if mcap is not None and dist[state] + 1 > mcap:
                    self.cap_hit = True
                else:
                    rows = [run]
                    back = parents[state]
                    while back is not None:
                        prev, prev_run = back
                        rows.append(prev_run)
                        back = parents[prev]
                    rows.reverse()
                    return rows
            if mcap is not None and dist[state] + 2 > mcap:
                self.cap_hit = True
                continue
            cands, truncated = space.row_candidates(entry, self.limit)
            if truncated:
                self.cap_hit = True
            for discharge in _subsets_largest_first(rem):
                need = frozenset(self.theta_of[i] for i in discharge)
                for w in cands:
                    nxt = (w, rem - discharge)
                    if nxt in dist:
                        continue
                    run = self.row_run(entry, w, need)
                    if run is None:
                        continue
                    dist[nxt] = dist[state] + 1
                    parents[nxt] = (state, run)
                    queue.append(nxt)
        return None


# --- public entry points --------------------------------------------------


def sat(phi: Formula, bounds: SolverBounds | None = None) -> SatResult:
    """Decides satisfiability; Sat answers carry a verified witness model.

    With default (capped) bounds an exhausted search reports Unsat only
    when no cap was ever hit, otherwise UnsatWithinBounds.
    """
    core = desugar(phi)
    if bounds is None:
        bounds = SolverBounds()
    clo = solver_closure(core)
    space = AtomSpace(clo)
    search = _Search(space, bounds)
    try:
        found = search.run(clo.index[core])
    except _OutOfBudget:
        found = None
    if found is None:
        if bounds.complete or not search.cap_hit:
            return Unsat()
        return UnsatWithinBounds(bounds)
    prefix_rows, loop_rows = found
    witness = _assemble(space, prefix_rows, loop_rows, core)
    if not checker.holds(witness, TimeInstant(0, 0), core):
        raise SolverError(
            "accepted run assembled a witness that fails verification; "
            f"formula: {core!r}")
    return Sat(witness)


def _assemble(space: AtomSpace, prefix_rows, loop_rows, core) -> PeriodicModel:
    def row(run) -> LassoRow:
        prefix_atoms, loop_atoms = run
        return LassoRow(space.cells(prefix_atoms), space.cells(loop_atoms))

    return PeriodicModel(
        tuple(row(r) for r in prefix_rows),
        tuple(row(r) for r in loop_rows),
        variables(core))


def valid(phi: Formula, bounds: SolverBounds | None = None) -> bool | None:
    """True/False, or None when undecided within capped bounds."""
    result = sat(Not(phi), bounds)
    match result:
        case Sat():
            return False
        case Unsat():
            return True
        case UnsatWithinBounds():
            return None


def entails(theory, phi: Formula, bounds: SolverBounds | None = None) -> bool | None:
    """Finite entailment: the theory conjoined with the negation is unsatisfiable."""
    goal: Formula = Not(phi)
    for t in reversed(list(theory)):
        goal = And(t, goal)
    result = sat(goal, bounds)
    match result:
        case Sat():
            return False
        case Unsat():
            return True
        case UnsatWithinBounds():
            return None
