"""Game representations: finite normal-form games, continuous duopolies and
weighted voting games.

Finite games store payoffs as a tensor of shape ``(*strategy_counts, n)``;
outcomes are always enumerated in lexicographic order of strategy indices
(row-major order of the tensor).
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np


class GameError(ValueError):
    """Raised when a game definition is invalid."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteGame:
    """Finite n-player normal-form game with nonnegative objective payoffs."""

    payoffs: np.ndarray
    names: tuple[str, ...] = field(default=())

    @property
    def n_players(self) -> int:
        return self.payoffs.shape[-1]

    @property
    def strategy_counts(self) -> tuple[int, ...]:
        return self.payoffs.shape[:-1]

    @property
    def n_outcomes(self) -> int:
        return int(np.prod(self.strategy_counts))

    def outcomes(self) -> list[tuple[int, ...]]:
        """All strategy profiles in lexicographic order."""
        return list(itertools.product(*(range(k) for k in self.strategy_counts)))

    def outcome_index(self, outcome) -> int:
        outcome = tuple(int(s) for s in outcome)
        if len(outcome) != self.n_players or any(
            not 0 <= s < k for s, k in zip(outcome, self.strategy_counts)
        ):
            raise GameError(f"invalid outcome {outcome} for strategies {self.strategy_counts}")
        return int(np.ravel_multi_index(outcome, self.strategy_counts))

    def payoff_matrix(self) -> np.ndarray:
        """Objective payoffs as an ``(n_outcomes, n_players)`` array."""
        return self.payoffs.reshape(self.n_outcomes, self.n_players)

    def is_constant(self, player: int) -> bool:
        """True when the player's payoff is the same at every outcome."""
        u = self.payoffs[..., player]
        return bool(np.all(u == u.flat[0]))

    def player_name(self, i: int) -> str:
        if self.names:
            return self.names[i]
        return chr(ord("a") + i) if self.n_players <= 26 else str(i + 1)


def make_finite_game(strategy_counts, payoff_tensor, names=()) -> FiniteGame:
    """Validate a payoff tensor and build a :class:`FiniteGame`.

    ``payoff_tensor`` is nested by player-1 strategy, then player-2 strategy,
    and so on, with the innermost level holding the n-vector of payoffs.
    """
    counts = tuple(int(k) for k in strategy_counts)
    n = len(counts)
    if n < 2:
        raise GameError("a game needs at least 2 players")
    if any(k < 2 for k in counts):
        raise GameError(f"each player needs at least 2 strategies, got {counts}")
    try:
        payoffs = np.asarray(payoff_tensor, dtype=float)
    except (TypeError, ValueError) as exc:
        raise GameError(f"payoff tensor is not rectangular: {exc}") from None
    if payoffs.shape != counts + (n,):
        raise GameError(
            f"payoff tensor shape {payoffs.shape} does not match strategies {counts} "
            f"with {n} payoffs per outcome"
        )
    if not np.all(np.isfinite(payoffs)):
        raise GameError("payoff tensor contains NaN or Inf")
    if np.any(payoffs < 0):
        raise GameError("negative payoff entry")
    if names and len(names) != n:
        raise GameError("one name per player required")
    return FiniteGame(_frozen(payoffs), tuple(names))


def subjective_game(game: FiniteGame, V) -> np.ndarray:
    """Subjective payoff tensor ``(V u)_i(o) = sum_j v_ij u_j(o)``.

    ``V`` may also be a stack of matrices of shape ``(N, n, n)``, in which case
    the result has shape ``(N, *strategy_counts, n)``.
    """
    V = np.asarray(V, dtype=float)
    n = game.n_players
    if V.shape[-2:] != (n, n):
        raise GameError(f"preference matrix must be {n}x{n}, got {V.shape[-2:]}")
    if V.ndim == 2:
        return game.payoffs @ V.T
    flat = game.payoff_matrix()  # (O, n)
    out = np.einsum("oj,kij->koi", flat, V)
    return out.reshape((V.shape[0],) + game.strategy_counts + (n,))


class ContinuousGame(ABC):
    """A game with interval strategy sets, evaluated pointwise.

    Implementations provide payoffs at a profile and each player's scalar best
    response to a weighted sum of payoffs. Both operate on batches: profiles
    have shape ``(N, n)`` and weights ``(N, n)``.
    """

    n_players: int = 2

    @property
    @abstractmethod
    def bounds(self) -> np.ndarray:
        """Array of shape ``(n, 2)`` with lower/upper strategy bounds."""

    @abstractmethod
    def payoffs(self, profiles) -> np.ndarray:
        """Objective payoffs, shape ``(N, n)`` for profiles ``(N, n)``."""

    @abstractmethod
    def best_response(self, player: int, weights, profiles) -> np.ndarray:
        """Maximiser of ``weights @ payoffs`` over the player's own strategy."""

    def start_profile(self) -> np.ndarray:
        return self.bounds[:, 0].copy()


@dataclass(frozen=True)
class CournotGame(ContinuousGame):
    """Linear-demand Cournot duopoly: ``P = a - q1 - q2``, unit cost ``c``."""

    a: float = 10.0
    c: float = 2.0
    quantity_bounds: tuple | None = None

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.c)):
            raise GameError("Cournot parameters must be finite")
        if self.a <= 0:
            raise GameError("demand intercept a must be positive")
        if not 0 <= self.c < self.a:
            raise GameError("unit cost c must satisfy 0 <= c < a")
        cap = (self.a - self.c) / 2
        if self.quantity_bounds is None:
            object.__setattr__(self, "quantity_bounds", ((0.0, cap), (0.0, cap)))
        b = np.asarray(self.quantity_bounds, dtype=float)
        if b.shape != (2, 2) or np.any(b[:, 0] < 0) or np.any(b[:, 1] > cap + 1e-12) or np.any(b[:, 0] > b[:, 1]):
            raise GameError(f"quantity bounds must lie within [0, {cap}]")
        object.__setattr__(self, "quantity_bounds", tuple(map(tuple, b.tolist())))

    @property
    def bounds(self) -> np.ndarray:
        return np.array(self.quantity_bounds, dtype=float)

    def payoffs(self, profiles) -> np.ndarray:
        q = np.atleast_2d(np.asarray(profiles, dtype=float))
        margin = self.a - self.c - q.sum(axis=1, keepdims=True)
        return q * margin

    def best_response(self, player, weights, profiles):
        # objective in own quantity x: w_self*x*(s - x - y) + w_other*y*(s - x - y)
        # = -w_self*x^2 + (w_self*(s - y) - w_other*y)*x + const
        w = np.atleast_2d(np.asarray(weights, dtype=float))
        q = np.atleast_2d(np.asarray(profiles, dtype=float))
        other = 1 - player
        s = self.a - self.c
        w_self, w_other = w[:, player], w[:, other]
        y = q[:, other]
        lo, hi = self.quantity_bounds[player]
        lin = w_self * (s - y) - w_other * y

        def value(x):
            return -w_self * x * x + lin * x

        concave = w_self > 0
        with np.errstate(divide="ignore", invalid="ignore"):
            vertex = np.clip(lin / (2 * np.where(concave, w_self, 1.0)), lo, hi)
        endpoint = np.where(value(hi) > value(lo), hi, lo)
        return np.where(concave, vertex, endpoint)


def cournot_profits(game: CournotGame, quantities) -> np.ndarray:
    """Profits ``q_i (a - q_1 - q_2 - c)`` at a quantity pair."""
    q = np.asarray(quantities, dtype=float)
    if q.shape != (2,):
        raise GameError("Cournot profile needs two quantities")
    b = game.bounds
    if np.any(q < b[:, 0] - 1e-12) or np.any(q > b[:, 1] + 1e-12):
        raise GameError(f"quantities {q.tolist()} outside bounds {b.tolist()}")
    return game.payoffs(q)[0]


@dataclass(frozen=True)
class VotingGame:
    """Weighted binary vote: the motion passes when the yes-weight reaches the quota."""

    weights: tuple[float, ...]
    quota: float

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "quota", float(self.quota))
        if len(w) < 2:
            raise GameError("a voting game needs at least 2 players")
        if any(not np.isfinite(x) or x <= 0 for x in w):
            raise GameError("voting weights must be positive")
        if not self.quota > 0:
            raise GameError("quota must be positive")
        if self.quota > sum(w):
            raise GameError("quota exceeds total weight")

    @property
    def n_players(self) -> int:
        return len(self.weights)

    def outcome(self, votes) -> int:
        votes = _check_votes(votes, self.n_players)
        return int(np.dot(self.weights, votes) >= self.quota)

    def to_finite_game(self, preferences) -> FiniteGame:
        """Normal-form game where strategies are votes and each player's
        payoff is 1 when the collective outcome equals their preferred one."""
        prefs = _check_votes(preferences, self.n_players)
        n = self.n_players
        payoffs = np.zeros((2,) * n + (n,))
        for profile in itertools.product((0, 1), repeat=n):
            o = self.outcome(profile)
            payoffs[profile] = (prefs == o).astype(float)
        return make_finite_game((2,) * n, payoffs)


def _check_votes(votes, n) -> np.ndarray:
    v = np.asarray(votes)
    if v.shape != (n,) or not np.all((v == 0) | (v == 1)):
        raise GameError(f"vote profile must be {n} values in {{0, 1}}")
    return v.astype(int)


def voting_payoffs(game: VotingGame, vote_profile) -> np.ndarray:
    """Binary payoffs: 1 for each player whose vote matches the collective outcome."""
    votes = _check_votes(vote_profile, game.n_players)
    return (votes == game.outcome(votes)).astype(int)
