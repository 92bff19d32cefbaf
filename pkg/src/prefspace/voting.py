"""Voting power from pivotality in weighted binary votes.

A player is pivotal in a vote profile when flipping their vote flips the
collective outcome. Averaging pivotality over independent fair-coin votes
gives the raw Banzhaf index; averaging over profiles whose yes-coalition
size is uniform gives the Shapley-Shubik index.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .games import VotingGame, _check_votes

EXACT_SHAPLEY_LIMIT = 10
DEFAULT_VOTING_SAMPLES = 100_000


def pivotality(vg: VotingGame, vote_profile, i: int) -> int:
    votes = _check_votes(vote_profile, vg.n_players)
    if not 0 <= i < vg.n_players:
        raise ValueError(f"player {i} out of range")
    flipped = votes.copy()
    flipped[i] = 1 - flipped[i]
    return int(vg.outcome(votes) != vg.outcome(flipped))


def pivotal_matrix(vg: VotingGame, profiles) -> np.ndarray:
    """Pivotality (N, n) of every player in every profile of a (N, n) array."""
    P = np.asarray(profiles, dtype=float)
    w = np.asarray(vg.weights)
    total = P @ w
    # flipping i changes the yes-weight by +w_i (was no) or -w_i (was yes)
    flipped = total[:, None] + w * (1 - 2 * P)
    return ((total[:, None] >= vg.quota) != (flipped >= vg.quota)).astype(int)


def all_profiles(n: int) -> np.ndarray:
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=int)


def banzhaf_index(vg: VotingGame) -> np.ndarray:
    """Raw Banzhaf index: swings divided by ``2**(n-1)``."""
    n = vg.n_players
    # each swing is counted twice over all profiles: once from each side
    return pivotal_matrix(vg, all_profiles(n)).sum(axis=0) / 2.0 ** n


def shapley_shubik_index(vg: VotingGame, n_samples: int = DEFAULT_VOTING_SAMPLES, seed: int = 0) -> np.ndarray:
    """Shapley-Shubik index; exact for up to 10 players, sampled orders above."""
    n = vg.n_players
    w = np.asarray(vg.weights)
    if n <= EXACT_SHAPLEY_LIMIT:
        weight = [math.factorial(s) * math.factorial(n - s - 1) / math.factorial(n) for s in range(n)]
        P = all_profiles(n)
        total = P @ w
        sizes = P.sum(axis=1)
        phi = np.zeros(n)
        for i in range(n):
            out = P[:, i] == 0
            swing = out & (total < vg.quota) & (total + w[i] >= vg.quota)
            phi[i] = sum(weight[s] for s in sizes[swing])
        return phi
    rng = np.random.default_rng(seed)
    counts = np.zeros(n)
    for _ in range(n_samples):
        order = rng.permutation(n)
        cum = np.cumsum(w[order])
        counts[order[np.searchsorted(cum, vg.quota)]] += 1
    return counts / n_samples


@dataclass(frozen=True, eq=False)
class PowerEstimate:
    """Monte Carlo mean pivotality per player with its standard error."""

    values: np.ndarray
    errors: np.ndarray
    n_samples: int


def _estimate(vg, profiles) -> PowerEstimate:
    piv = pivotal_matrix(vg, profiles)
    k = len(piv)
    err = piv.std(axis=0, ddof=1) / math.sqrt(k) if k > 1 else np.zeros(vg.n_players)
    return PowerEstimate(piv.mean(axis=0), err, k)


def impartial_profiles(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Independent fair-coin votes."""
    return np.random.default_rng(seed).integers(0, 2, size=(count, n))


def size_uniform_profiles(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Yes-coalition size uniform on ``0..n``, then a uniform coalition of that size."""
    rng = np.random.default_rng(seed)
    sizes = rng.integers(0, n + 1, size=count)
    ranks = np.argsort(rng.random((count, n)), axis=1)
    return (ranks < sizes[:, None]).astype(int)


def banzhaf_estimate(vg: VotingGame, n_samples: int = DEFAULT_VOTING_SAMPLES, seed: int = 0,
                     profiles=None) -> PowerEstimate:
    if profiles is None:
        profiles = impartial_profiles(vg.n_players, n_samples, seed)
    return _estimate(vg, profiles)


def shapley_shubik_estimate(vg: VotingGame, n_samples: int = DEFAULT_VOTING_SAMPLES, seed: int = 0,
                            profiles=None) -> PowerEstimate:
    if profiles is None:
        profiles = size_uniform_profiles(vg.n_players, n_samples, seed)
    return _estimate(vg, profiles)


def ratio_spread(estimate, exact) -> float:
    """Relative spread ``(max - min) / mean`` of estimate/exact over non-null players.

    Zero means the estimate is exactly proportional to the index.
    """
    est = np.asarray(estimate, dtype=float)
    ex = np.asarray(exact, dtype=float)
    live = ex > 0
    if not live.any():
        raise ValueError("every player is null")
    r = est[live] / ex[live]
    return float((r.max() - r.min()) / r.mean())
