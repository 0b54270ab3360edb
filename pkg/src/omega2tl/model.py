"""Finitely represented ultimately periodic valuations over the two-level time flow.

A model assigns truth values to variables at every instant <i,j> of the
lexicographically ordered grid.  Rows (first coordinate) follow an outer
lasso; each stored row follows its own column lasso.  This shape is
sufficient for every satisfiability question the solver answers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple


class TimeInstant(NamedTuple):
    """Grid position; tuple ordering is exactly the lexicographic order."""

    row: int
    col: int


Cell = frozenset[int]  # variable indices true at one stored position


@dataclass(frozen=True)
class LassoRow:
    col_prefix: tuple[Cell, ...]
    col_loop: tuple[Cell, ...]

    @property
    def width(self) -> int:
        return len(self.col_prefix) + len(self.col_loop)

    def col_index(self, j: int) -> int:
        """Stored column index for actual column j."""
        lp = len(self.col_prefix)
        if j < lp:
            return j
        return lp + (j - lp) % len(self.col_loop)

    def cell(self, c: int) -> Cell:
        lp = len(self.col_prefix)
        return self.col_prefix[c] if c < lp else self.col_loop[c - lp]


@dataclass(frozen=True)
class PeriodicModel:
    row_prefix: tuple[LassoRow, ...]
    row_loop: tuple[LassoRow, ...]
    universe: frozenset[int]

    @property
    def stored_rows(self) -> tuple[LassoRow, ...]:
        return self.row_prefix + self.row_loop

    def row_index(self, i: int) -> int:
        """Stored row index for actual row i."""
        rp = len(self.row_prefix)
        if i < rp:
            return i
        return rp + (i - rp) % len(self.row_loop)

    def canonical_position(self, t: TimeInstant) -> tuple[int, int]:
        r = self.row_index(t.row)
        return r, self.stored_rows[r].col_index(t.col)

    def lookup(self, t: TimeInstant, var_index: int) -> bool:
        """Variables outside the universe read false everywhere."""
        r, c = self.canonical_position(t)
        return var_index in self.stored_rows[r].cell(c)


def constant_model(cell: Cell, universe: frozenset[int] | None = None) -> PeriodicModel:
    """Model assigning the same cell at every instant."""
    row = LassoRow((), (cell,))
    return PeriodicModel((), (row,), universe if universe is not None else cell)


def validate(model: PeriodicModel) -> list[str]:
    """Invariant check; returns a list of violations (empty means ok)."""
    violations = []
    if not model.row_loop:
        violations.append("row_loop must be nonempty")
    for label, rows in (("row_prefix", model.row_prefix),
                        ("row_loop", model.row_loop)):
        for i, row in enumerate(rows):
            if not row.col_loop:
                violations.append(f"{label}[{i}].col_loop must be nonempty")
            for part, cells in (("col_prefix", row.col_prefix),
                                ("col_loop", row.col_loop)):
                for j, cell in enumerate(cells):
                    stray = cell - model.universe
                    if stray:
                        names = ", ".join(f"p{v}" for v in sorted(stray))
                        violations.append(
                            f"{label}[{i}].{part}[{j}]: {names} outside universe")
    return violations


# --- JSON persistence ----------------------------------------------------


def _var_name_to_index(name: str, path: str) -> int:
    if not (isinstance(name, str) and name.startswith("p") and name[1:].isdigit()):
        raise ModelFormatError(f"{path}: expected a variable name like 'p0', got {name!r}")
    return int(name[1:])


class ModelFormatError(ValueError):
    pass


def _cell_from_json(data, path: str) -> Cell:
    if not isinstance(data, list):
        raise ModelFormatError(f"{path}: expected a list of variable names")
    return frozenset(_var_name_to_index(name, f"{path}[{k}]")
                     for k, name in enumerate(data))


def _row_from_json(data, path: str) -> LassoRow:
    if not isinstance(data, dict):
        raise ModelFormatError(f"{path}: expected an object")
    for key in ("col_prefix", "col_loop"):
        if key not in data or not isinstance(data[key], list):
            raise ModelFormatError(f"{path}.{key}: expected a list")
    if not data["col_loop"]:
        raise ModelFormatError(f"{path}.col_loop: must be nonempty")
    prefix = tuple(_cell_from_json(c, f"{path}.col_prefix[{k}]")
                   for k, c in enumerate(data["col_prefix"]))
    loop = tuple(_cell_from_json(c, f"{path}.col_loop[{k}]")
                 for k, c in enumerate(data["col_loop"]))
    return LassoRow(prefix, loop)


def from_json_dict(data) -> PeriodicModel:
    if not isinstance(data, dict):
        raise ModelFormatError("$: expected an object")
    for key in ("universe", "row_prefix", "row_loop"):
        if key not in data or not isinstance(data[key], list):
            raise ModelFormatError(f"$.{key}: expected a list")
    if not data["row_loop"]:
        raise ModelFormatError("$.row_loop: must be nonempty")
    universe = frozenset(_var_name_to_index(n, f"$.universe[{k}]")
                         for k, n in enumerate(data["universe"]))
    prefix = tuple(_row_from_json(r, f"$.row_prefix[{k}]")
                   for k, r in enumerate(data["row_prefix"]))
    loop = tuple(_row_from_json(r, f"$.row_loop[{k}]")
                 for k, r in enumerate(data["row_loop"]))
    model = PeriodicModel(prefix, loop, universe)
    problems = validate(model)
    if problems:
        raise ModelFormatError("; ".join(problems))
    return model


def to_json_dict(model: PeriodicModel) -> dict:
    def cell(c: Cell) -> list[str]:
        return [f"p{v}" for v in sorted(c)]

    def row(r: LassoRow) -> dict:
        return {"col_prefix": [cell(c) for c in r.col_prefix],
                "col_loop": [cell(c) for c in r.col_loop]}

    return {"universe": [f"p{v}" for v in sorted(model.universe)],
            "row_prefix": [row(r) for r in model.row_prefix],
            "row_loop": [row(r) for r in model.row_loop]}


def load(path) -> PeriodicModel:
    with open(path, encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))


def save(model: PeriodicModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(model), fh, indent=2, sort_keys=True)
        fh.write("\n")
