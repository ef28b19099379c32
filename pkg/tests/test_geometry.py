from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectbin.geometry import (
    BinLayout,
    Instance,
    Item,
    Packing,
    Placement,
    scalar,
    transpose_instance,
    transpose_layout,
    transpose_packing,
    validate_bin,
    validate_packing,
)
from support import dims_strategy, independent_bin_check, make_instance, rational


def test_scalar_accepts_exact_forms():
    assert scalar(1) == 1
    assert scalar("3/7") == Fraction(3, 7)
    assert scalar("0.25") == Fraction(1, 4)
    assert scalar(Fraction(2, 5)) == Fraction(2, 5)


def test_scalar_rejects_floats():
    with pytest.raises(TypeError):
        scalar(0.25)


def test_item_bounds_enforced():
    with pytest.raises(ValueError):
        Item(0, Fraction(0), Fraction(1, 2))
    with pytest.raises(ValueError):
        Item(0, Fraction(1, 2), Fraction(3, 2))
    with pytest.raises(TypeError):
        Item(0, 0.5, Fraction(1, 2))


def test_instance_rejects_duplicate_ids():
    a = Item(1, Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(ValueError):
        Instance([a, Item(1, Fraction(1, 4), Fraction(1, 4))])


def test_empty_layout_ok():
    assert validate_bin(BinLayout(), {}).ok


def test_two_big_items_overlap():
    items = make_instance([(Fraction(6, 10), Fraction(6, 10))] * 2).by_id()
    layout = BinLayout()
    layout.add(0, 0, 0)
    layout.add(1, Fraction(4, 10), Fraction(4, 10))
    report = validate_bin(layout, items)
    assert not report.ok
    assert any(v.kind == "overlap" for v in report.violations)


def test_boundary_contact_is_fine():
    items = make_instance([(Fraction(1, 2), Fraction(1, 2))] * 2).by_id()
    layout = BinLayout()
    layout.add(0, 0, 0)
    layout.add(1, Fraction(1, 2), Fraction(1, 2))
    assert validate_bin(layout, items).ok


def test_out_of_bounds_flagged():
    items = make_instance([(Fraction(3, 4), Fraction(1, 4))]).by_id()
    layout = BinLayout()
    layout.add(0, Fraction(1, 2), 0)
    report = validate_bin(layout, items)
    assert [v.kind for v in report.violations] == ["out_of_bounds"]


def test_all_violations_reported():
    items = make_instance([(Fraction(3, 4), Fraction(3, 4))] * 3).by_id()
    layout = BinLayout()
    layout.add(0, 0, 0)
    layout.add(1, 0, 0)
    layout.add(2, Fraction(1, 2), Fraction(1, 2))
    layout.add(99, 0, 0)
    report = validate_bin(layout, items)
    kinds = sorted(v.kind for v in report.violations)
    assert "unknown_item" in kinds
    assert "out_of_bounds" in kinds
    assert kinds.count("overlap") == 3


def test_packing_missing_and_duplicate():
    inst = make_instance([(Fraction(1, 4), Fraction(1, 4))] * 3)
    b1 = BinLayout()
    b1.add(0, 0, 0)
    b2 = BinLayout()
    b2.add(0, 0, 0)
    report = validate_packing(Packing([b1, b2]), inst)
    kinds = {v.kind for v in report.violations}
    assert "missing_item" in kinds  # items 1 and 2 never placed
    assert "duplicate_item" in kinds  # item 0 in two bins


def test_transpose_examples():
    it = Item(0, Fraction(3, 4), Fraction(1, 4))
    assert it.transposed() == Item(0, Fraction(1, 4), Fraction(3, 4))
    p = Placement(0, Fraction(1, 8), Fraction(1, 2))
    layout = BinLayout(1, 1, [p])
    flipped = transpose_layout(layout)
    assert flipped.placements[0] == Placement(0, Fraction(1, 2), Fraction(1, 8))


@given(st.lists(dims_strategy(), min_size=0, max_size=6))
def test_transpose_involution(dims):
    inst = make_instance(dims)
    assert transpose_instance(transpose_instance(inst)) == inst
    layout = BinLayout()
    for it in inst.items:
        layout.add(it.id, 0, 0)
    packing = Packing([layout])
    assert transpose_packing(transpose_packing(packing)) == packing


@settings(max_examples=200)
@given(
    st.lists(
        st.tuples(dims_strategy(max_den=16), rational(max_den=16), rational(max_den=16)),
        min_size=1,
        max_size=5,
    )
)
def test_validator_agrees_with_independent_checker(rows):
    inst = make_instance([d for d, _, _ in rows])
    layout = BinLayout()
    for it, (_, x, y) in zip(inst.items, rows):
        layout.add(it.id, x, y)
    report = validate_bin(layout, inst.by_id())
    contained, disjoint = independent_bin_check(layout, inst.by_id())
    has_oob = any(v.kind == "out_of_bounds" for v in report.violations)
    has_overlap = any(v.kind == "overlap" for v in report.violations)
    assert has_oob == (not contained)
    assert has_overlap == (not disjoint)


@settings(max_examples=200)
@given(
    st.lists(
        st.tuples(dims_strategy(max_den=16), rational(max_den=16), rational(max_den=16)),
        min_size=1,
        max_size=5,
    )
)
def test_transpose_preserves_validity(rows):
    inst = make_instance([d for d, _, _ in rows])
    layout = BinLayout()
    for it, (_, x, y) in zip(inst.items, rows):
        layout.add(it.id, x, y)
    direct = validate_bin(layout, inst.by_id())
    flipped = validate_bin(transpose_layout(layout), transpose_instance(inst).by_id())
    assert direct.ok == flipped.ok
    assert len(direct.violations) == len(flipped.violations)


@given(rational(), rational())
def test_scalar_arithmetic_exact(a, b):
    assert (a + b) - b == a
    if b != 0:
        assert (a * b) / b == a
