"""Periodic model representation, canonicalization and persistence."""

import json

import pytest
from hypothesis import given, strategies as st

from omega2tl.model import (Cell, LassoRow, ModelFormatError, PeriodicModel,
                            TimeInstant, constant_model, from_json_dict,
                            to_json_dict, validate)


def _model() -> PeriodicModel:
    # row 0: cols {p0}, then loop ({}, {p1}); loop rows: ({p0 p1}) and ({}, {p0})
    return PeriodicModel(
        row_prefix=(LassoRow((frozenset((0,)),), (frozenset(), frozenset((1,)))),),
        row_loop=(LassoRow((), (frozenset((0, 1)),)),
                  LassoRow((frozenset(),), (frozenset((0,)),))),
        universe=frozenset((0, 1)))


def test_time_instant_orders_lexicographically():
    assert TimeInstant(0, 5) < TimeInstant(1, 0)
    assert TimeInstant(2, 1) < TimeInstant(2, 3)


def test_canonical_position_wraps_both_levels():
    m = _model()
    # row 0 prefix col, then column loop of width 2 starting at stored col 1
    assert m.canonical_position(TimeInstant(0, 0)) == (0, 0)
    assert m.canonical_position(TimeInstant(0, 1)) == (0, 1)
    assert m.canonical_position(TimeInstant(0, 2)) == (0, 2)
    assert m.canonical_position(TimeInstant(0, 3)) == (0, 1)
    # rows 1, 2 stored; row 3 wraps to stored row 1
    assert m.canonical_position(TimeInstant(3, 0)) == (1, 0)
    assert m.canonical_position(TimeInstant(4, 7)) == (2, 1)


@given(st.integers(0, 50), st.integers(0, 50))
def test_lookup_is_periodic(i, j):
    m = _model()
    rp, lp = len(m.row_prefix), len(m.row_loop)
    for v in (0, 1):
        if i >= rp:
            assert m.lookup(TimeInstant(i, j), v) == \
                m.lookup(TimeInstant(i + lp, j), v)
        row = m.stored_rows[m.row_index(i)]
        cp, cl = len(row.col_prefix), len(row.col_loop)
        if j >= cp:
            assert m.lookup(TimeInstant(i, j), v) == \
                m.lookup(TimeInstant(i, j + cl), v)


def test_lookup_outside_universe_is_false():
    m = constant_model(frozenset((0,)))
    assert m.lookup(TimeInstant(3, 3), 0)
    assert not m.lookup(TimeInstant(3, 3), 99)


def test_validate_flags_structure_and_universe():
    assert validate(_model()) == []
    bad = PeriodicModel((), (), frozenset())
    assert "row_loop must be nonempty" in validate(bad)
    bad = PeriodicModel((), (LassoRow((), ()),), frozenset())
    assert any("col_loop must be nonempty" in v for v in validate(bad))
    bad = PeriodicModel((), (LassoRow((), (frozenset((7,)),)),), frozenset((0,)))
    assert any("outside universe" in v for v in validate(bad))


def test_json_round_trip():
    m = _model()
    assert from_json_dict(to_json_dict(m)) == m
    # stable shapes
    doc = to_json_dict(m)
    assert doc["universe"] == ["p0", "p1"]
    assert doc["row_prefix"][0]["col_prefix"] == [["p0"]]


def test_json_errors_name_the_path():
    with pytest.raises(ModelFormatError, match=r"\$\.row_loop"):
        from_json_dict({"universe": [], "row_prefix": [], "row_loop": []})
    with pytest.raises(ModelFormatError, match=r"\$\.universe\[0\]"):
        from_json_dict({"universe": ["x1"], "row_prefix": [], "row_loop":
                        [{"col_prefix": [], "col_loop": [[]]}]})
    with pytest.raises(ModelFormatError, match=r"col_loop"):
        from_json_dict({"universe": [], "row_prefix": [], "row_loop":
                        [{"col_prefix": [], "col_loop": []}]})
    with pytest.raises(ModelFormatError, match="expected an object"):
        from_json_dict([])


def test_save_load(tmp_path):
    from omega2tl.model import load, save
    path = tmp_path / "m.json"
    save(_model(), path)
    assert load(path) == _model()
    # file is plain JSON
    json.loads(path.read_text())
