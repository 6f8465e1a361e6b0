import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from persistkit.core import (
    CENSORED,
    PathSample,
    first_return,
    has_unit_increments,
    path_stats,
    persistence_event,
)

unit_steps = st.lists(st.integers(-1, 1), min_size=1, max_size=60)


def int_path(values):
    return PathSample(np.array(values), integer_valued=True)


def test_pathsample_validation():
    with pytest.raises(ValueError):
        PathSample(np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        PathSample(np.array([]))
    with pytest.raises(ValueError):
        PathSample(np.array([0.0, 0.5]), integer_valued=True)
    p = PathSample(np.array([0.0, 2.0, -1.0]), integer_valued=True)
    assert p.values.dtype == np.int64 and p.length == 2
    with pytest.raises(ValueError):
        p.values[0] = 3


def test_stats_descending_path():
    st_ = path_stats(int_path([0, -1, -2]))
    assert (st_.max_1n, st_.min_1n) == (-1, -2)
    assert st_.first_return is CENSORED and st_.survived
    assert st_.range_count == 3


def test_stats_return_at_two():
    st_ = path_stats(int_path([0, 1, 0]))
    assert st_.first_return == 2
    assert st_.range_count == 2


def test_stats_unit_step_range():
    st_ = path_stats(int_path([0, -1, 0, 1]))
    assert st_.range_count == 3 == st_.max_1n - st_.min_1n + 1


def test_all_27_three_step_paths():
    for steps in itertools.product((-1, 0, 1), repeat=3):
        path = PathSample.from_increments(np.array(steps), integer_valued=True)
        z = path.values
        st_ = path_stats(path)
        assert st_.range_count == z.max() - z.min() + 1
        assert persistence_event(st_, -1) == (st_.survived and z[1] <= -1)


def test_degenerate_path():
    with pytest.raises(ValueError, match="degenerate path"):
        path_stats(PathSample(np.array([0])))
    with pytest.raises(ValueError, match="degenerate path"):
        first_return(PathSample(np.array([0]), integer_valued=True))


def test_real_paths_have_no_return_time():
    p = PathSample(np.array([0.0, -0.5, 0.7]))
    st_ = path_stats(p)
    assert st_.first_return is None and st_.range_count is None
    assert st_.floor_range == 2  # floors 0, -1, 0
    with pytest.raises(ValueError):
        first_return(p)


def test_floor_range_counts_exact_integers_in_own_cell():
    p = PathSample(np.array([0.0, -1.0, -0.5, 1.5]))
    # floors: 0, -1, -1, 1
    assert path_stats(p).floor_range == 3


def test_persistence_event_examples():
    assert persistence_event(path_stats(int_path([0, -1])), -1)
    assert not persistence_event(path_stats(int_path([0, -1, 0])), -1)


def test_simple_walk_two_steps_quarter():
    hits = 0
    for steps in itertools.product((-1, 1), repeat=2):
        hits += persistence_event(path_stats(PathSample.from_increments(np.array(steps), True)), -1)
    assert hits == 1


@given(unit_steps)
def test_unit_increment_identities(steps):
    path = PathSample.from_increments(np.array(steps), integer_valued=True)
    assert has_unit_increments(path)
    z = path.values
    st_ = path_stats(path)
    assert st_.range_count == max(st_.max_1n, 0) - min(st_.min_1n, 0) + 1
    assert persistence_event(st_, -1) == (st_.survived and z[1] <= -1)


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=40))
def test_range_bounded_by_span(steps):
    path = PathSample.from_increments(np.array(steps), integer_valued=True)
    z = path.values
    assert path_stats(path).range_count <= z.max() - z.min() + 1


@given(unit_steps, st.data())
def test_first_return_monotone_under_truncation(steps, data):
    path = PathSample.from_increments(np.array(steps), integer_valued=True)
    m = data.draw(st.integers(1, path.length))
    prefix = PathSample(path.values[: m + 1], integer_valued=True)
    full, short = first_return(path), first_return(prefix)
    if short is CENSORED:
        assert full is CENSORED or full > m
    else:
        assert full == short
