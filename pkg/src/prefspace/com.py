"""Centers of mass of fields on the preference space.

A field assigns a nonnegative weight to each sampled position; its center
of mass is the weighted average position. Payoff, outcome and strategy
fields come from the outcome mapping. Passing a list of Monte Carlo sample
sets (one per seed) averages the per-seed results and reports their spread.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from .games import ContinuousGame, FiniteGame, GameError
from .indices import IndexReport, default_threshold, indices
from .solve import TOL, expected_payoffs, outcome_distributions
from .space import SampleSet


class ZeroMassError(ValueError):
    """The field vanishes on every sample point."""


@dataclass(frozen=True, eq=False)
class CoMMatrix:
    """Center of mass; rows are generally not unit vectors.

    ``statistical_error`` is the standard error of the entries, taken as the
    largest per-entry standard deviation across repeat seeds divided by the
    square root of the number of repeats (0 for grids or a single set).
    ``replicates`` holds the per-seed matrices when repeats were used.
    """

    entries: np.ndarray
    statistical_error: float = 0.0
    replicates: np.ndarray | None = None
    no_equilibrium_fraction: float = 0.0

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def row_norms(self) -> np.ndarray:
        return np.linalg.norm(self.entries, axis=1)

    @property
    def threshold(self) -> float:
        return default_threshold(self.n, self.statistical_error)

    @property
    def degenerate_flags(self) -> np.ndarray:
        return self.row_norms <= self.threshold

    def indices(self) -> IndexReport:
        """Indices of the normalised rows, with standard errors from replicates."""
        rep = indices(self.entries, self.threshold)
        if self.replicates is None or len(self.replicates) < 2:
            return rep
        per_seed = [indices(m, self.threshold, degenerate=self.degenerate_flags) for m in self.replicates]
        k = len(per_seed)
        errors = {
            name: float(np.std([getattr(r, name) for r in per_seed], ddof=1) / math.sqrt(k))
            for name in ("D", "H", "R", "R_plus", "R_minus")
        }
        return IndexReport(rep.D, rep.H, rep.R, rep.R_plus, rep.R_minus, rep.degenerate_rows, errors)


def _as_sets(samples) -> list[SampleSet]:
    if isinstance(samples, SampleSet):
        return [samples]
    sets = list(samples)
    if not sets:
        raise ValueError("no sample sets given")
    return sets


def _weighted_mean(values: np.ndarray, s: SampleSet) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != (len(s),):
        raise ValueError(f"field has shape {values.shape}, expected ({len(s)},)")
    if not np.all(np.isfinite(values)):
        raise ValueError("field values must be finite")
    if np.any(values < 0):
        raise ValueError("field must be nonnegative")
    w = s.weights * values
    mass = w.sum()
    if mass <= 0:
        raise ZeroMassError("zero mass: field vanishes on every sample")
    # fixed-order reduction keeps results bit-stable for a given sample
    return np.einsum("k,kij->ij", w, s.points) / mass


def _combine(mats: list[np.ndarray], noeq: float = 0.0) -> CoMMatrix:
    mats = np.array(mats)
    if len(mats) == 1:
        return CoMMatrix(mats[0], 0.0, None, noeq)
    err = float(mats.std(axis=0, ddof=1).max() / math.sqrt(len(mats)))
    return CoMMatrix(mats.mean(axis=0), err, mats, noeq)


def center_of_mass(field, samples) -> CoMMatrix:
    """Weighted average position ``sum w f(V) V / sum w f(V)``.

    ``field`` is either a callable mapping a stack of positions (N, n, n) to
    N nonnegative values, or (for a single sample set) the array of values.
    """
    sets = _as_sets(samples)
    mats = []
    for s in sets:
        values = field(s.points) if isinstance(field, Callable) else field
        mats.append(_weighted_mean(values, s))
    return _combine(mats)


# --------------------------------------------------------------------------
# fields induced by a game


def payoff_field(game, points, tol: float = TOL, **dynamics):
    """Expected payoffs (N, n) at each position plus an equilibrium-exists mask."""
    return expected_payoffs(game, points, tol, **dynamics)


def _check_player(game, i: int):
    if not 0 <= i < game.n_players:
        raise GameError(f"player {i} out of range")


def _game_com(samples, select) -> CoMMatrix:
    mats, noeq = [], []
    for s in _as_sets(samples):
        values, has = select(s.points)
        mats.append(_weighted_mean(values, s))
        noeq.append(float(np.dot(s.weights, ~np.asarray(has, bool))))
    return _combine(mats, float(np.mean(noeq)))


def payoff_com(game, i: int, samples, tol: float = TOL, **dynamics) -> CoMMatrix:
    """Center of mass of player ``i``'s expected objective payoff."""
    _check_player(game, i)

    def select(points):
        E, has = payoff_field(game, points, tol, **dynamics)
        return E[:, i], has

    return _game_com(samples, select)


def outcome_com(game: FiniteGame, outcome, samples, tol: float = TOL) -> CoMMatrix:
    """Center of mass of the probability that ``outcome`` is realised."""
    if isinstance(game, ContinuousGame):
        raise GameError("outcome centers of mass need a finite game")
    k = game.outcome_index(outcome)

    def select(points):
        probs, has = outcome_distributions(game, points, tol)
        return probs[:, k], has

    return _game_com(samples, select)


def strategy_com(game: FiniteGame, player: int, strategy: int, samples, tol: float = TOL) -> CoMMatrix:
    """Center of mass of the probability that ``player`` uses ``strategy``."""
    if isinstance(game, ContinuousGame):
        raise GameError("strategy centers of mass need a finite game")
    _check_player(game, player)
    if not 0 <= strategy < game.strategy_counts[player]:
        raise GameError(f"strategy {strategy} out of range for player {player}")
    mask = np.array([o[player] == strategy for o in game.outcomes()], float)

    def select(points):
        probs, has = outcome_distributions(game, points, tol)
        return probs @ mask, has

    return _game_com(samples, select)


def payoff_coms(game, samples, tol: float = TOL, **dynamics) -> list[CoMMatrix]:
    """Payoff centers of mass of every player from a single field evaluation."""
    n = game.n_players
    per_player = [[] for _ in range(n)]
    noeq = []
    for s in _as_sets(samples):
        E, has = payoff_field(game, s.points, tol, **dynamics)
        if np.any(E < -1e-12):
            raise ValueError("payoff centers of mass need nonnegative payoffs")
        for i in range(n):
            per_player[i].append(_weighted_mean(np.clip(E[:, i], 0, None), s))
        noeq.append(float(np.dot(s.weights, ~np.asarray(has, bool))))
    return [_combine(m, float(np.mean(noeq))) for m in per_player]


def gcom_from_coms(coms: Sequence[CoMMatrix]) -> CoMMatrix:
    """Assemble the self-rows of per-player payoff centers of mass."""
    n = len(coms)
    entries = np.array([coms[i].entries[i] for i in range(n)])
    reps = None
    if all(c.replicates is not None for c in coms):
        reps = np.array([[c.replicates[r][i] for i, c in enumerate(coms)] for r in range(len(coms[0].replicates))])
    err = max(c.statistical_error for c in coms)
    if reps is not None:
        err = float(reps.std(axis=0, ddof=1).max() / math.sqrt(len(reps)))
    return CoMMatrix(entries, err, reps, coms[0].no_equilibrium_fraction)


def gcom(game, samples, tol: float = TOL, **dynamics) -> CoMMatrix:
    """Global center of mass: row ``i`` is the self-row of player ``i``'s payoff CoM."""
    return gcom_from_coms(payoff_coms(game, samples, tol, **dynamics))
