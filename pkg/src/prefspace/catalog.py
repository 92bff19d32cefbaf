"""Named example games used throughout the tests and notebooks."""

from __future__ import annotations

import numpy as np

from .games import CournotGame, FiniteGame, VotingGame, make_finite_game


def prisoners_dilemma() -> FiniteGame:
    return make_finite_game((2, 2), [[[2, 2], [0, 3]], [[3, 0], [1, 1]]])


def battle_of_sexes() -> FiniteGame:
    return make_finite_game((2, 2), [[[3, 2], [0, 0]], [[0, 0], [2, 3]]])


def self_harm_game() -> FiniteGame:
    """Asymmetric 2x2 game where the row player gains by turning against itself."""
    return make_finite_game((2, 2), [[[1, 1], [3, 0]], [[0, 2], [2, 3]]])


def matching_pennies() -> FiniteGame:
    return make_finite_game((2, 2), [[[1, 0], [0, 1]], [[0, 1], [1, 0]]])


def rock_paper_scissors() -> FiniteGame:
    return make_finite_game(
        (3, 3),
        [[[1, 1], [0, 2], [2, 0]],
         [[2, 0], [1, 1], [0, 2]],
         [[0, 2], [2, 0], [1, 1]]],
    )


def three_player_game() -> FiniteGame:
    """Player 1 picks U/D, player 2 L/R, player 3 A/B; (U, L, B) is dominant."""
    a = np.array([[[3, 1, 0], [1, 0, 0]], [[2, 3, 1], [0, 2, 1]]])
    b = np.array([[[4, 1, 2], [2, 0, 2]], [[3, 3, 3], [1, 2, 3]]])
    return make_finite_game((2, 2, 2), np.stack([a, b], axis=2))


def cournot_duopoly() -> CournotGame:
    return CournotGame(a=10.0, c=2.0)


def majority_vote() -> VotingGame:
    return VotingGame((1, 1, 1), 2)


CATALOG = {
    "prisoners-dilemma": prisoners_dilemma,
    "battle-of-sexes": battle_of_sexes,
    "self-harm": self_harm_game,
    "matching-pennies": matching_pennies,
    "rock-paper-scissors": rock_paper_scissors,
    "three-player": three_player_game,
    "cournot": cournot_duopoly,
}
