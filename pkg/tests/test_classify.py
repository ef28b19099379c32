from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectbin.classify import (
    XI,
    area_guarantee_check,
    classify,
    delta_sets,
    delta_threshold,
    find_feasible_delta,
    h_max,
    total_height,
    total_width,
    vol,
    w_max,
)
from rectbin.errors import PreconditionViolated
from support import dims_strategy, make_instance

EPS = Fraction(1, 256)


def test_classify_wide_only():
    classes = classify(make_instance([(Fraction(6, 10), Fraction(3, 10))]))
    assert len(classes.wide) == 1
    assert classes.high == [] and classes.small == [] and classes.big == []
    assert len(classes.wide_only) == 1


def test_classify_big():
    classes = classify(make_instance([(Fraction(6, 10), Fraction(6, 10))]))
    assert len(classes.wide) == 1 and len(classes.high) == 1 and len(classes.big) == 1
    assert classes.wide_only == [] and classes.high_only == []


def test_classify_boundary_small():
    # exactly 1/2 on both sides is small, wide/high need strict excess
    classes = classify(make_instance([(Fraction(1, 2), Fraction(1, 2))]))
    assert len(classes.small) == 1
    assert classes.wide == [] and classes.high == []


@given(st.lists(dims_strategy(), max_size=10))
def test_partition_property(dims):
    classes = classify(make_instance(dims))
    n = len(dims)
    wide_only = len(classes.wide) - len(classes.big)
    high_only = len(classes.high) - len(classes.big)
    assert wide_only + high_only + len(classes.big) + len(classes.small) == n
    assert len(classes.wide_only) == wide_only
    assert len(classes.high_only) == high_only


def test_aggregates():
    items = make_instance([(Fraction(1, 2), Fraction(1, 3)), (Fraction(1, 4), Fraction(1, 5))]).items
    assert vol(items) == Fraction(1, 6) + Fraction(1, 20)
    assert total_width(items) == Fraction(3, 4)
    assert total_height(items) == Fraction(1, 3) + Fraction(1, 5)
    assert w_max(items) == Fraction(1, 2)
    assert h_max(items) == Fraction(1, 3)
    assert w_max([]) == 0 and h_max([]) == 0


def test_delta_threshold_known_value():
    # gamma at delta = 1/2, eps = 1/256
    assert delta_threshold(Fraction(1, 2), EPS) == Fraction(127, 512)


def test_delta_no_wide_items():
    inst = make_instance([(Fraction(1, 4), Fraction(1, 4))])
    assert find_feasible_delta(inst, EPS, "width") == Fraction(1, 2)


def test_delta_single_wide_item():
    inst = make_instance([(Fraction(9, 10), Fraction(1, 2))])
    assert find_feasible_delta(inst, EPS, "width") == Fraction(1, 10)


def test_delta_smallest_candidate_wins():
    inst = make_instance([(Fraction(95, 100), Fraction(1, 2))])
    assert find_feasible_delta(inst, EPS, "width") == Fraction(1, 20)


def test_delta_not_found():
    # width within eps of 1 removes its own breakpoint from the candidate set,
    # so the item sits in W_delta at every remaining candidate and the
    # height-1/2 stack beats gamma <= 1/4 everywhere
    inst = make_instance([(Fraction(255, 256), Fraction(1, 2))])
    assert find_feasible_delta(inst, EPS, "width") is None
    # same shape short enough to clear the 1/2 threshold stays feasible
    inst2 = make_instance([(Fraction(255, 256), Fraction(1, 5))])
    assert find_feasible_delta(inst2, EPS, "width") == Fraction(1, 2)


def test_delta_eps_range_enforced():
    inst = make_instance([(Fraction(1, 4), Fraction(1, 4))])
    with pytest.raises(ValueError):
        find_feasible_delta(inst, Fraction(1, 200), "width")
    with pytest.raises(ValueError):
        find_feasible_delta(inst, Fraction(0), "width")
    with pytest.raises(ValueError):
        find_feasible_delta(inst, EPS, "diagonal")


def test_delta_sets_membership_strict():
    inst = make_instance([(Fraction(19, 20), Fraction(1, 10)), (Fraction(96, 100), Fraction(1, 10))])
    ds = delta_sets(inst, Fraction(1, 20), EPS)
    # width must exceed 19/20 strictly
    assert [it.id for it in ds.w_delta] == [1]
    assert ds.h_delta == []
    assert ds.gamma == delta_threshold(Fraction(1, 20), EPS)


@settings(max_examples=200)
@given(st.lists(dims_strategy(), min_size=1, max_size=8))
def test_delta_search_agrees_with_step_scan(dims):
    """Independent check: returned delta is feasible and no candidate below it is."""
    inst = make_instance(dims)
    for axis, along, across in (
        ("width", lambda r: r.width, lambda r: r.height),
        ("height", lambda r: r.height, lambda r: r.width),
    ):
        cands = sorted(
            {Fraction(1, 2)}
            | {
                1 - along(it)
                for it in inst.items
                if along(it) > Fraction(1, 2) and EPS < 1 - along(it) < Fraction(1, 2)
            }
        )
        feasible = [
            d
            for d in cands
            if sum((across(it) for it in inst.items if along(it) > 1 - d), Fraction(0))
            <= (d - EPS) / (1 + 2 * d)
        ]
        expected = feasible[0] if feasible else None
        assert find_feasible_delta(inst, EPS, axis) == expected


@given(st.integers(1, 400).map(lambda k: Fraction(k, 800)))
def test_gamma_at_most_quarter(delta):
    assert delta_threshold(delta, EPS) <= Fraction(1, 4)


def test_area_guarantee_requires_failed_search():
    inst = make_instance([(Fraction(1, 4), Fraction(1, 4))])
    with pytest.raises(PreconditionViolated):
        area_guarantee_check(classify(inst), EPS)


def test_area_guarantee_on_tall_wide_stacks():
    # two items per axis, each stack far over every threshold
    dims = [
        (Fraction(255, 256), Fraction(1, 2)),
        (Fraction(127, 128), Fraction(1, 2)),
        (Fraction(1, 2), Fraction(255, 256)),
        (Fraction(1, 2), Fraction(127, 128)),
    ]
    inst = make_instance(dims)
    assert find_feasible_delta(inst, EPS, "width") is None
    assert find_feasible_delta(inst, EPS, "height") is None
    classes = classify(inst)
    assert area_guarantee_check(classes, EPS)
    lhs = vol(classes.wide + [it for it in classes.high if it not in classes.wide])
    assert lhs >= 2 * XI + (total_width(classes.high) + total_height(classes.wide)) / 2
