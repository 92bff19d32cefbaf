"""Bargaining power: how far one player's stance moves another's payoff.

``rho_local(game, i, j)`` compares player ``j``'s expected payoff when only
``i`` switches from pure favour (``e_j``) to pure harm (``-e_j``), starting
from the selfish baseline, against the full range ``E_j(1 e_j^T) -
E_j(-1 e_j^T)``. ``rho_integral`` averages the same swing over uniformly
drawn stances of the other players.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .solve import TOL, NoEquilibriumError, expected_payoffs
from .space import extreme_point, replace_row, uniform_rows, unit

DEFAULT_RHO_SAMPLES = 10_000


class UndefinedPowerError(ValueError):
    """Player j's payoff range is zero, so bargaining power is undefined."""


def payoff_range(game, j: int, tol: float = TOL, **dynamics) -> float:
    """``E_j(1 e_j^T) - E_j(-1 e_j^T)``: the widest swing of j's payoff."""
    n = game.n_players
    pts = np.stack([extreme_point(n, j, 1), extreme_point(n, j, -1)])
    E, has = expected_payoffs(game, pts, tol, **dynamics)
    if not has.all():
        raise NoEquilibriumError("no equilibrium at an extreme point")
    return float(E[0, j] - E[1, j])


def _denominator(game, j, tol, **dynamics) -> float:
    den = payoff_range(game, j, tol, **dynamics)
    if abs(den) <= tol:
        raise UndefinedPowerError(f"player {j} has a degenerate payoff range")
    return den


def rho_local(game, i: int, j: int, tol: float = TOL, **dynamics) -> float:
    """Local bargaining power of ``i`` over ``j`` around the selfish position.

    For ``i == j`` the favour point is the identity itself, so this is the
    self-power ``[E_i(I) - E_i(I with row i = -e_i)] / range``.
    """
    n = game.n_players
    den = _denominator(game, j, tol, **dynamics)
    eye = np.eye(n)
    pts = np.stack([replace_row(eye, i, unit(n, j)), replace_row(eye, i, unit(n, j, -1.0))])
    E, has = expected_payoffs(game, pts, tol, **dynamics)
    if not has.all():
        raise NoEquilibriumError("no equilibrium at a replaced-row position")
    return float((E[0, j] - E[1, j]) / den)


@dataclass(frozen=True, eq=False)
class RhoMatrix:
    """``entries[i, j]`` is rho_ij; NaN where ``undefined_flags[i, j]``."""

    entries: np.ndarray
    undefined_flags: np.ndarray


def rho_matrix(game, tol: float = TOL, **dynamics) -> RhoMatrix:
    n = game.n_players
    vals = np.full((n, n), np.nan)
    undefined = np.zeros((n, n), bool)
    for j in range(n):
        try:
            _denominator(game, j, tol, **dynamics)
        except UndefinedPowerError:
            undefined[:, j] = True
            continue
        for i in range(n):
            vals[i, j] = rho_local(game, i, j, tol, **dynamics)
    return RhoMatrix(vals, undefined)


@dataclass(frozen=True)
class RhoEstimate:
    value: float
    stderr: float
    n_samples: int
    no_equilibrium: int = 0


def rho_integral(game, i: int, j: int, n_samples: int = DEFAULT_RHO_SAMPLES, seed: int = 0,
                 positions=None, tol: float = TOL, **dynamics) -> RhoEstimate:
    """Bargaining power of ``i`` over ``j`` averaged over the other players' stances.

    By default the other rows are drawn uniformly on the sphere; pass
    ``positions`` (N, n, n) to supply them explicitly (row ``i`` is
    overwritten). Positions without an equilibrium on either side are
    dropped and counted.
    """
    n = game.n_players
    den = _denominator(game, j, tol, **dynamics)
    if positions is None:
        rng = np.random.default_rng(seed)
        positions = uniform_rows(rng, int(n_samples), n)
    positions = np.asarray(positions, dtype=float)
    if positions.ndim == 2:
        positions = positions[None]
    favour = replace_row(positions, i, unit(n, j))
    harm = replace_row(positions, i, unit(n, j, -1.0))
    Ef, hf = expected_payoffs(game, favour, tol, **dynamics)
    Eh, hh = expected_payoffs(game, harm, tol, **dynamics)
    ok = hf & hh
    if not ok.any():
        raise NoEquilibriumError("no sampled position has equilibria on both sides")
    swing = (Ef[ok, j] - Eh[ok, j]) / den
    k = len(swing)
    err = float(swing.std(ddof=1) / math.sqrt(k)) if k > 1 else 0.0
    return RhoEstimate(float(swing.mean()), err, k, int((~ok).sum()))


@dataclass(frozen=True)
class SelfHarmScan:
    """Players whose self-power is negative, and those where it is undefined."""

    players: list
    undefined: list
    rho: dict


def self_harm_scan(game, tol: float = TOL, **dynamics) -> SelfHarmScan:
    negative, undefined, rho = [], [], {}
    for i in range(game.n_players):
        try:
            r = rho_local(game, i, i, tol, **dynamics)
        except UndefinedPowerError:
            undefined.append(i)
            continue
        rho[i] = r
        if r < -tol:
            negative.append(i)
    return SelfHarmScan(negative, undefined, rho)
