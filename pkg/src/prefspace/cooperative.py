"""Coalition games induced by a strategic game, and cycle reciprocity.

A coalition ``C`` is evaluated at the position where its members weigh the
coalition's payoffs equally while outsiders stay selfish; ``v(C)`` is the sum
of the members' expected payoffs there.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .games import FiniteGame, GameError, subjective_game
from .solve import TOL, _pure_ne_mask, expected_payoffs
from .space import coalition_position, cycle_permutation, permutation_point

MAX_COALITION_PLAYERS = 12


def _coalitions(n: int):
    for size in range(1, n + 1):
        yield from itertools.combinations(range(n), size)


@dataclass(frozen=True)
class CharacteristicFunction:
    """Value of every non-empty coalition; ``values`` is keyed by sorted tuples.

    ``flagged`` lists coalitions whose position had no equilibrium; their
    value is recorded as NaN.
    """

    n_players: int
    values: dict
    flagged: tuple = ()

    def __post_init__(self):
        expected = 2 ** self.n_players - 1
        if len(self.values) != expected:
            raise ValueError(f"characteristic function needs {expected} coalitions, got {len(self.values)}")

    def __call__(self, coalition) -> float:
        key = tuple(sorted(int(i) for i in coalition))
        if not key:
            return 0.0
        return self.values[key]

    @property
    def grand(self) -> float:
        return self.values[tuple(range(self.n_players))]


def characteristic_function(n: int, value) -> CharacteristicFunction:
    """Build a characteristic function from a callable on coalition tuples."""
    return CharacteristicFunction(n, {c: float(value(c)) for c in _coalitions(n)})


def coalition_game(game, tol: float = TOL, **dynamics) -> CharacteristicFunction:
    n = game.n_players
    if n > MAX_COALITION_PLAYERS:
        raise GameError(f"coalition enumeration limited to {MAX_COALITION_PLAYERS} players")
    coalitions = list(_coalitions(n))
    points = np.stack([coalition_position(c, n) for c in coalitions])
    E, has = expected_payoffs(game, points, tol, **dynamics)
    values, flagged = {}, []
    for k, c in enumerate(coalitions):
        if has[k]:
            values[c] = float(E[k, list(c)].sum())
        else:
            values[c] = math.nan
            flagged.append(c)
    return CharacteristicFunction(n, values, tuple(flagged))


def shapley_value(cf: CharacteristicFunction) -> np.ndarray:
    """Average marginal contribution over all orders, via coalition-size weights."""
    n = cf.n_players
    phi = np.zeros(n)
    for i in range(n):
        others = [p for p in range(n) if p != i]
        for size in range(n):
            weight = math.factorial(size) * math.factorial(n - size - 1) / math.factorial(n)
            for S in itertools.combinations(others, size):
                phi[i] += weight * (cf(S + (i,)) - cf(S))
    return phi


def core_check(cf: CharacteristicFunction, allocation, tol: float = TOL) -> bool:
    """True when ``allocation`` is efficient and no coalition can improve on it."""
    x = np.asarray(allocation, dtype=float)
    if x.shape != (cf.n_players,):
        raise ValueError(f"allocation must have {cf.n_players} entries")
    if abs(x.sum() - cf.grand) > tol * max(1.0, abs(cf.grand)):
        return False
    return all(x[list(c)].sum() >= v - tol for c, v in cf.values.items())


def _cycle_points(cycle, n: int, fixed):
    cycle = [int(c) for c in cycle]
    if len(cycle) < 2:
        raise ValueError("a reciprocity cycle needs at least two players")
    base = np.eye(n) if fixed is None else np.array(fixed, dtype=float)
    if base.shape != (n, n):
        raise ValueError(f"fixed rows must form a {n}x{n} matrix")
    perm = cycle_permutation(cycle, n)
    points, power = [], list(range(n))
    for _ in range(len(cycle)):
        V = base.copy()
        P = permutation_point(power)
        V[cycle] = P[cycle]
        points.append(V)
        power = [perm[p] for p in power]
    return points


def reciprocity_check(game: FiniteGame, cycle, fixed=None, tol: float = TOL) -> set:
    """Outcomes that are pure equilibria at every rotation of ``cycle``.

    Players outside the cycle keep their rows from ``fixed`` (identity by
    default).
    """
    if not isinstance(game, FiniteGame):
        raise GameError("reciprocity needs a finite game")
    keep = None
    for V in _cycle_points(cycle, game.n_players, fixed):
        mask = _pure_ne_mask(subjective_game(game, V)[None], tol)[0]
        keep = mask if keep is None else keep & mask
    return {tuple(int(s) for s in idx) for idx in zip(*np.nonzero(keep))}
