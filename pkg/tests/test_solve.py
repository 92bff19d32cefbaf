from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefspace.catalog import battle_of_sexes, matching_pennies, prisoners_dilemma, three_player_game
from prefspace.games import make_finite_game, subjective_game
from prefspace.solve import (
    NoEquilibriumError,
    best_response_dynamics,
    equilibrium_profiles,
    expected_payoff,
    expected_payoffs,
    mu,
    mu_from_subjective,
    nash_support_enumeration,
    outcome_distributions,
    pareto_filter,
    pure_nash,
)
from prefspace.space import coalition_position, extreme_point, from_angles, uniform_rows

from oracles import brute_pure_ne, deviation_gain, mixed_2x2


def _bimatrix(g):
    return g.payoffs[..., 0], g.payoffs[..., 1]


def test_pd_support_enumeration(pd):
    eqs = nash_support_enumeration(*_bimatrix(pd))
    assert len(eqs) == 1 and eqs[0].outcome == (1, 1)


def test_matching_pennies_mixed(mp):
    eqs = nash_support_enumeration(*_bimatrix(mp))
    assert len(eqs) == 1
    x, y = eqs[0].strategies
    ref = mixed_2x2(*_bimatrix(mp))
    np.testing.assert_allclose(x, [float(p) for p in ref[0]], atol=1e-12)
    np.testing.assert_allclose(y, [float(p) for p in ref[1]], atol=1e-12)


def test_bos_three_equilibria(bos):
    eqs = nash_support_enumeration(*_bimatrix(bos))
    pure = sorted(e.outcome for e in eqs if e.is_pure)
    assert pure == [(0, 0), (1, 1)]
    mixed = [e for e in eqs if not e.is_pure]
    assert len(mixed) == 1
    assert mixed_2x2(*_bimatrix(bos)) == ((Fraction(3, 5), Fraction(2, 5)), (Fraction(2, 5), Fraction(3, 5)))
    np.testing.assert_allclose(mixed[0].strategies[0], [0.6, 0.4], atol=1e-12)
    np.testing.assert_allclose(mixed[0].strategies[1], [0.4, 0.6], atol=1e-12)
    np.testing.assert_allclose(mixed[0].payoff(bos.payoffs), [1.2, 1.2], atol=1e-12)


def test_equilibrium_support_and_distribution(bos):
    mixed = [e for e in nash_support_enumeration(*_bimatrix(bos)) if not e.is_pure][0]
    assert mixed.support == ((0, 1), (0, 1))
    np.testing.assert_allclose(mixed.outcome_distribution.sum(), 1)
    np.testing.assert_allclose(mixed.outcome_distribution, [0.24, 0.36, 0.16, 0.24], atol=1e-12)


def test_degenerate_flag():
    flat = np.ones((2, 2))
    _, deg = nash_support_enumeration(flat, flat, return_degenerate=True)
    assert deg
    _, deg = nash_support_enumeration(*_bimatrix(prisoners_dilemma()), return_degenerate=True)
    assert not deg


def test_pure_nash_examples(pd, mp, three):
    assert [e.outcome for e in pure_nash(three.payoffs)] == [(0, 0, 1)]
    assert [e.outcome for e in pure_nash(pd.payoffs)] == [(1, 1)]
    assert pure_nash(mp.payoffs) == []


def test_pure_nash_counts_ties():
    assert len(pure_nash(np.ones((2, 2, 2, 3)))) == 8


def test_pareto_filter_bos(bos):
    eqs = nash_support_enumeration(*_bimatrix(bos))
    kept = pareto_filter(eqs, bos.payoffs)
    assert sorted(e.outcome for e in kept) == [(0, 0), (1, 1)]


def test_pareto_filter_keeps_ties_at_extreme_point(pd):
    S = subjective_game(pd, extreme_point(2, 0))
    eqs = pure_nash(S)
    kept = pareto_filter(eqs, S)
    assert len(kept) == len(eqs) >= 1
    assert all(S[e.outcome][0] == 3 for e in kept)


def test_pareto_filter_single(pd):
    eqs = pure_nash(pd.payoffs)
    assert pareto_filter(eqs, pd.payoffs) == eqs


def test_mu_examples(pd, bos):
    np.testing.assert_array_equal(mu(pd, np.eye(2)).probabilities, [0, 0, 0, 1])
    np.testing.assert_array_equal(mu(pd, extreme_point(2, 0)).probabilities, [0, 0, 1, 0])
    np.testing.assert_allclose(mu(bos, coalition_position({0, 1}, 2)).probabilities, [0.5, 0, 0, 0.5])


def test_mu_no_equilibrium_marker():
    # 3-player game without pure equilibria: a cyclic matching game
    T = np.zeros((2, 2, 2, 3))
    for s in np.ndindex(2, 2, 2):
        a, b, c = s
        T[s] = [a == b, b != c, c == a]
    g = make_finite_game((2, 2, 2), T)
    assert pure_nash(g.payoffs) == []
    d = mu(g, np.eye(3))
    assert not d.has_equilibrium and d.probabilities.sum() == 0
    with pytest.raises(NoEquilibriumError):
        expected_payoff(g, np.eye(3), 0)


def test_expected_payoff_examples(pd):
    assert expected_payoff(pd, np.eye(2), 0) == 1
    assert expected_payoff(pd, extreme_point(2, 0), 0) == 3
    assert expected_payoff(pd, extreme_point(2, 0, -1), 0) == 0


def test_batched_matches_single(bos, rng):
    pts = uniform_rows(rng, 40, 2)
    probs, has = outcome_distributions(bos, pts)
    for k in range(40):
        np.testing.assert_allclose(probs[k], mu(bos, pts[k]).probabilities, atol=1e-12)
    assert has.all()
    np.testing.assert_allclose(probs.sum(1), 1, atol=1e-9)


# --------------------------------------------------------------------------
# property suites


def _random_games(seed, count, shape):
    rng = np.random.default_rng(seed)
    return [rng.uniform(0, 10, size=shape + (2,)) for _ in range(count)]


@pytest.mark.parametrize("shape", [(2, 2), (2, 3)])
def test_support_enumeration_pure_matches_brute_force(shape):
    for T in _random_games(7, 250, shape):
        # integer payoffs create ties, exercising degenerate cases too
        T = np.round(T / 3)
        eqs = nash_support_enumeration(T[..., 0], T[..., 1])
        pure = sorted(e.outcome for e in eqs if e.is_pure)
        assert pure == sorted(brute_pure_ne(T))
        for e in eqs:
            assert deviation_gain(T[..., 0], T[..., 1], *e.strategies) <= 1e-9
            for s in e.strategies:
                assert abs(s.sum() - 1) <= 1e-9 and (s >= 0).all()


def test_mixed_equilibria_match_exact_oracle():
    for T in _random_games(11, 200, (2, 2)):
        ref = mixed_2x2(T[..., 0], T[..., 1])
        mixed = [e for e in nash_support_enumeration(T[..., 0], T[..., 1]) if not e.is_pure]
        if ref is None:
            assert mixed == []
        else:
            assert len(mixed) == 1
            np.testing.assert_allclose(mixed[0].strategies[0], [float(p) for p in ref[0]], atol=1e-9)
            np.testing.assert_allclose(mixed[0].strategies[1], [float(p) for p in ref[1]], atol=1e-9)


def test_extreme_points_attain_payoff_extremes():
    for T in _random_games(3, 200, (2, 2)):
        g = make_finite_game((2, 2), T)
        for j in range(2):
            assert expected_payoff(g, extreme_point(2, j, 1), j) == T[..., j].max()
            assert expected_payoff(g, extreme_point(2, j, -1), j) == T[..., j].min()


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(0, 10), min_size=8, max_size=8),
    st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi),
    st.floats(0.1, 10), st.floats(-10, 10), st.integers(0, 1),
)
def test_mu_affine_invariance(payoffs, a, b, scale, shift, player):
    g = make_finite_game((2, 2), np.reshape(payoffs, (2, 2, 2)))
    S = subjective_game(g, from_angles(a, b))
    T = S.copy()
    T[..., player] = scale * T[..., player] + shift
    p, q = mu_from_subjective(S), mu_from_subjective(T)
    assert p.has_equilibrium == q.has_equilibrium
    assert 0.5 * np.abs(p.probabilities - q.probabilities).sum() < 1e-6


# --------------------------------------------------------------------------
# continuous games


def test_cournot_selfish_from_origin(cournot):
    r = best_response_dynamics(cournot, np.eye(2), start=[0, 0])
    assert r.converged
    np.testing.assert_allclose(r.profile, [8 / 3, 8 / 3], atol=1e-6)


def test_cournot_selfish_from_corner(cournot):
    r = best_response_dynamics(cournot, np.eye(2), start=[4, 4])
    np.testing.assert_allclose(r.profile, [8 / 3, 8 / 3], atol=1e-6)


@pytest.mark.parametrize("update", ["simultaneous", "round-robin"])
def test_cournot_both_serve_firm_b(cournot, update):
    r = best_response_dynamics(cournot, [[0, 1], [0, 1]], start=[0, 0], update=update)
    np.testing.assert_allclose(r.profile, [0, 4], atol=1e-6)


def test_cournot_fixed_point_is_grid_optimum(cournot):
    # independent check: each firm's profit at the fixed point beats a fine grid of deviations
    q = best_response_dynamics(cournot, np.eye(2), start=[0, 0]).profile
    xs = np.linspace(0, 4, 4001)
    assert q[0] * (8 - q.sum()) >= (xs * (8 - xs - q[1])).max() - 1e-9


def test_cournot_nonconvergence_flag(cournot):
    r = best_response_dynamics(cournot, np.eye(2), start=[0, 0], max_iter=2)
    assert not r.converged and r.iterations == 2


def test_cournot_expected_payoffs_batch(cournot, rng):
    pts = uniform_rows(rng, 30, 2)
    E, has = expected_payoffs(cournot, pts)
    assert E.shape == (30, 2) and has.all()
    assert (E >= -1e-12).all()
    q, _, _ = equilibrium_profiles(cournot, pts)
    np.testing.assert_allclose(E, cournot.payoffs(q))
