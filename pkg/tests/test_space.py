import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from prefspace.space import (
    PreferenceError,
    cardinal_points,
    coalition_position,
    cycle_permutation,
    extreme_point,
    from_angles,
    grid,
    monte_carlo,
    normalize_rows,
    permutation_point,
    repeat_samples,
    replace_row,
    sample,
    to_angles,
)

S = 1 / math.sqrt(2)


def test_normalize_examples():
    np.testing.assert_array_equal(normalize_rows([[2, 0], [0, 5]]), np.eye(2))
    np.testing.assert_allclose(normalize_rows([[1, 1], [1, -1]]), [[S, S], [S, -S]])


def test_normalize_zero_row():
    with pytest.raises(PreferenceError, match="undefined direction"):
        normalize_rows([[0, 0], [1, 0]])


nonzero_rows = hnp.arrays(float, (3, 3), elements=st.floats(-10, 10)).filter(
    lambda m: np.all(np.linalg.norm(m, axis=1) > 1e-3))


@settings(max_examples=100, deadline=None)
@given(nonzero_rows, st.floats(1e-3, 1e3))
def test_normalize_unit_rows_and_scale_invariance(raw, lam):
    V = normalize_rows(raw)
    np.testing.assert_allclose(np.linalg.norm(V, axis=1), 1, atol=1e-12)
    np.testing.assert_allclose(normalize_rows(lam * raw), V, atol=1e-12)


@pytest.mark.parametrize("angles, expected", [
    ((0, math.pi / 2), [[1, 0], [0, 1]]),
    ((math.pi / 2, 0), [[0, 1], [1, 0]]),
    ((math.pi, 3 * math.pi / 2), [[-1, 0], [0, -1]]),
])
def test_from_angles_special_points(angles, expected):
    np.testing.assert_allclose(from_angles(*angles), expected, atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 2 * math.pi, exclude_max=True), st.floats(0, 2 * math.pi, exclude_max=True))
def test_angle_round_trip(a, b):
    V = from_angles(a, b)
    np.testing.assert_allclose(from_angles(*to_angles(V)), V, atol=1e-12)


def test_to_angles_needs_two_players():
    with pytest.raises(PreferenceError):
        to_angles(np.eye(3))


def test_cardinal_counts():
    assert len(cardinal_points(2)) == 16
    K3 = cardinal_points(3)
    assert len(K3) == 216
    assert any(np.array_equal(V, np.eye(3)) for V in K3)
    assert any(np.array_equal(V, -np.eye(3)) for V in K3)


@settings(max_examples=20, deadline=None)
@given(st.permutations([0, 1, 2]))
def test_permutation_points_are_cardinal(perm):
    K3 = cardinal_points(3)
    assert any(np.array_equal(permutation_point(perm), V) for V in K3)


def test_extreme_points():
    np.testing.assert_array_equal(extreme_point(2, 0, 1), [[1, 0], [1, 0]])
    np.testing.assert_array_equal(extreme_point(2, 1, -1), [[0, -1], [0, -1]])
    np.testing.assert_array_equal(extreme_point(3, 1, 1), [[0, 1, 0]] * 3)
    with pytest.raises(PreferenceError):
        extreme_point(2, 2)


def test_permutation_points():
    np.testing.assert_array_equal(permutation_point([0, 1]), np.eye(2))
    np.testing.assert_array_equal(permutation_point([1, 0]), [[0, 1], [1, 0]])
    three_cycle = permutation_point(cycle_permutation([0, 1, 2], 3))
    np.testing.assert_array_equal(three_cycle, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    with pytest.raises(PreferenceError):
        permutation_point([0, 0])


def test_coalition_positions():
    np.testing.assert_allclose(coalition_position({0, 1}, 2), [[S, S], [S, S]])
    np.testing.assert_array_equal(coalition_position({0}, 2), np.eye(2))
    np.testing.assert_allclose(coalition_position({0, 1}, 3), [[S, S, 0], [S, S, 0], [0, 0, 1]])
    with pytest.raises(PreferenceError):
        coalition_position(set(), 2)


def test_replace_row():
    np.testing.assert_array_equal(replace_row(np.eye(2), 0, [0, 1]), [[0, 1], [0, 1]])
    np.testing.assert_array_equal(replace_row(np.eye(2), 0, [-1, 0]), [[-1, 0], [0, 1]])
    np.testing.assert_array_equal(replace_row(np.eye(3), 2, [3, 0, 0]), replace_row(np.eye(3), 2, [1, 0, 0]))
    with pytest.raises(PreferenceError):
        replace_row(np.eye(2), 0, [0, 0])


def test_grid_small():
    s = sample(2, "grid", 4)
    assert len(s) == 16
    np.testing.assert_allclose(s.weights, 1 / 16)
    np.testing.assert_allclose(np.linalg.norm(s.points, axis=-1), 1)


def test_grid_avoids_cardinal_angles():
    s = grid(90)
    quarter = np.mod(s.angles, math.pi / 2)
    assert np.all(np.minimum(quarter, math.pi / 2 - quarter) > 1e-3)
    assert len(s) == 8100


def test_grid_swap_symmetric_when_divisible_by_four():
    s = grid(96)
    swapped = set(map(tuple, np.round(np.mod(math.pi / 2 - s.angles[:, ::-1], 2 * math.pi), 9)))
    assert swapped == set(map(tuple, np.round(s.angles, 9)))


def test_grid_only_for_two_players():
    with pytest.raises(PreferenceError):
        sample(3, "grid", 10)


def test_monte_carlo_deterministic():
    a = sample(3, "monte-carlo", 1000, 7)
    b = sample(3, "monte-carlo", 1000, 7)
    np.testing.assert_array_equal(a.points, b.points)
    assert not np.array_equal(a.points, sample(3, "monte-carlo", 1000, 8).points)


def test_sample_sets_are_immutable():
    s = monte_carlo(2, 10, 0)
    with pytest.raises(ValueError):
        s.points[0, 0, 0] = 1.0


@pytest.mark.parametrize("n", [2, 3, 5])
def test_monte_carlo_marginals(n):
    count = 20000
    P = monte_carlo(n, count, 3).points
    np.testing.assert_allclose(np.linalg.norm(P, axis=-1), 1, atol=1e-12)
    assert np.all(np.abs(P.mean(axis=0)) < 4 / math.sqrt(count))
    assert np.all(np.abs((P ** 2).mean(axis=0) - 1 / n) < 5 / math.sqrt(count))


def test_repeat_seeds():
    sets = repeat_samples(3, 50, 10, 3)
    assert [s.seed for s in sets] == [10, 11, 12]


@pytest.mark.parametrize("res", [4, 8, 90, 91, 93, 96])
def test_grid_offsets_avoid_cardinals_and_keep_symmetry(res):
    s = grid(res)
    quarter = np.mod(s.angles, math.pi / 2)
    assert np.all(np.minimum(quarter, math.pi / 2 - quarter) > 1e-9)
    swapped = set(map(tuple, np.round(np.mod(math.pi / 2 - s.angles[:, ::-1], 2 * math.pi), 8)))
    assert swapped == set(map(tuple, np.round(s.angles, 8)))
