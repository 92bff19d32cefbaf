"""Outcome mapping: equilibria of the subjective game, Pareto refinement and
expected objective payoffs.

Two-player finite games are solved by support enumeration (mixed equilibria
included); games with three or more players use pure equilibria only.
Continuous games are solved by best-response iteration. Every routine has a
batched form operating on a stack of preference positions, which is what
the integration code uses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .games import ContinuousGame, FiniteGame, GameError, subjective_game

TOL = 1e-9
SUPPORT_TOL = 1e-9
RCOND = 1e-10
DEFAULT_MAX_ITER = 200
DEFAULT_STEP_TOL = 1e-8
_CHUNK = 4096


class NoEquilibriumError(RuntimeError):
    """The outcome mapping found no equilibrium at a position."""


@dataclass(frozen=True, eq=False)
class Equilibrium:
    """A (possibly mixed) strategy profile, one probability vector per player."""

    strategies: tuple

    @property
    def support(self) -> tuple:
        return tuple(tuple(int(k) for k in np.flatnonzero(s > SUPPORT_TOL)) for s in self.strategies)

    @property
    def outcome_distribution(self) -> np.ndarray:
        dist = self.strategies[0]
        for s in self.strategies[1:]:
            dist = np.multiply.outer(dist, s)
        return np.asarray(dist).ravel()

    @property
    def is_pure(self) -> bool:
        return all(len(s) == 1 for s in self.support)

    @property
    def outcome(self) -> tuple:
        """Strategy profile of a pure equilibrium."""
        if not self.is_pure:
            raise ValueError("mixed equilibrium has no single outcome")
        return tuple(s[0] for s in self.support)

    def payoff(self, tensor) -> np.ndarray:
        """Expected payoff vector under ``tensor`` of shape ``(*counts, n)``."""
        t = np.asarray(tensor, dtype=float)
        return self.outcome_distribution @ t.reshape(-1, t.shape[-1])


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Probabilities over outcomes in lexicographic order.

    When no equilibrium exists, ``has_equilibrium`` is False and all
    probabilities are zero.
    """

    probabilities: np.ndarray
    has_equilibrium: bool = True

    def __getitem__(self, k):
        return self.probabilities[k]


# --------------------------------------------------------------------------
# two players: support enumeration


def _nonempty_subsets(k: int):
    for size in range(1, k + 1):
        yield from itertools.combinations(range(k), size)


def _indifference(M: np.ndarray):
    """Mixtures over columns making the rows of ``M`` (N, r, c) indifferent.

    Returns probabilities (N, c), a solvable mask and a singular mask. The
    system is [M, -1; 1, 0] (p, v) = (0, 1); underdetermined systems are
    skipped, and rank-deficient square ones that remain consistent (a
    continuum of solutions) are reported as singular.
    """
    N, r, c = M.shape
    if r < c:
        return np.zeros((N, c)), np.zeros(N, bool), np.zeros(N, bool)
    mat = np.zeros((N, r + 1, c + 1))
    mat[:, :r, :c] = M
    mat[:, :r, c] = -1.0
    mat[:, r, :c] = 1.0
    rhs = np.zeros(r + 1)
    rhs[r] = 1.0
    if r == c:
        square, b = mat, np.broadcast_to(rhs, (N, r + 1))
    else:
        square = np.swapaxes(mat, 1, 2) @ mat
        b = np.swapaxes(mat, 1, 2) @ rhs
    # |det| relative to the Hadamard bound detects (near-)singular systems
    scale = np.prod(np.linalg.norm(square, axis=2), axis=1)
    full_rank = np.abs(np.linalg.det(square)) > RCOND * scale
    safe = np.where(full_rank[:, None, None], square, np.eye(c + 1))
    sol = np.linalg.solve(safe, b[..., None])[..., 0]
    consistent = np.abs(np.einsum("kij,kj->ki", mat, sol) - rhs).max(1) <= TOL
    ok = full_rank & consistent
    # a singular square system only signals degeneracy when it still has solutions
    singular = np.zeros(N, bool)
    if r == c and (~full_rank).any():
        idx = np.flatnonzero(~full_rank)
        ls = np.linalg.pinv(mat[idx]) @ rhs
        singular[idx] = np.abs(np.einsum("kij,kj->ki", mat[idx], ls) - rhs).max(1) <= TOL
    return sol[:, :c], ok, singular


def _bimatrix_candidates(A: np.ndarray, B: np.ndarray, tol: float = TOL):
    """Candidate equilibria from every support pair, batched over N games.

    Returns ``X`` (N, P, m), ``Y`` (N, P, n), a validity mask (N, P) and a
    per-game degeneracy mask.
    """
    N, m, n = A.shape
    pairs = [(I, J) for I in _nonempty_subsets(m) for J in _nonempty_subsets(n)]
    P = len(pairs)
    X = np.zeros((N, P, m))
    Y = np.zeros((N, P, n))
    valid = np.zeros((N, P), bool)
    degenerate = np.zeros(N, bool)
    for p, (I, J) in enumerate(pairs):
        Ii, Jj = np.array(I), np.array(J)
        y_sub, y_ok, y_sing = _indifference(A[:, Ii][:, :, Jj])
        x_sub, x_ok, x_sing = _indifference(np.swapaxes(B[:, Ii][:, :, Jj], 1, 2))
        degenerate |= y_sing | x_sing
        # a consistent overdetermined system means more ties than support size;
        # its underdetermined partner is skipped, so continua are not enumerated
        if len(I) > len(J):
            degenerate |= y_ok
        elif len(J) > len(I):
            degenerate |= x_ok
        ok = y_ok & x_ok & (y_sub >= -tol).all(1) & (x_sub >= -tol).all(1)
        x = np.zeros((N, m))
        y = np.zeros((N, n))
        x[:, Ii] = np.clip(x_sub, 0, None)
        y[:, Jj] = np.clip(y_sub, 0, None)
        sx = x.sum(1, keepdims=True)
        sy = y.sum(1, keepdims=True)
        ok &= (sx[:, 0] > 0) & (sy[:, 0] > 0)
        x = x / np.where(sx > 0, sx, 1)
        y = y / np.where(sy > 0, sy, 1)
        Ay = np.einsum("kij,kj->ki", A, y)
        xB = np.einsum("ki,kij->kj", x, B)
        ok &= Ay.max(1) <= (x * Ay).sum(1) + tol
        ok &= xB.max(1) <= (xB * y).sum(1) + tol
        X[:, p], Y[:, p], valid[:, p] = x, y, ok
    # merge duplicates (the same profile reached from several support pairs)
    for p in range(P):
        for q in range(p):
            if not (valid[:, p] & valid[:, q]).any():
                continue
            same = (
                valid[:, q]
                & (np.abs(X[:, p] - X[:, q]).max(1) <= 1e-7)
                & (np.abs(Y[:, p] - Y[:, q]).max(1) <= 1e-7)
            )
            valid[:, p] &= ~same
    return X, Y, valid, degenerate


def nash_support_enumeration(A, B, tol: float = TOL, return_degenerate: bool = False):
    """All equilibria of the bimatrix game ``(A, B)`` found by support enumeration.

    Every pair of supports (equal and unequal sizes) is tried; the
    indifference systems are solved and solutions kept when probabilities are
    nonnegative and no pure strategy outside the support does better by more
    than ``tol``. With ``return_degenerate`` a second value reports whether
    the game looked degenerate: a square support system was singular yet
    solvable, or an overdetermined one was still consistent.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.ndim != 2 or A.shape != B.shape:
        raise GameError("payoff matrices must be 2-D and of equal shape")
    X, Y, valid, degenerate = _bimatrix_candidates(A[None], B[None], tol)
    eqs = [Equilibrium((X[0, p], Y[0, p])) for p in np.flatnonzero(valid[0])]
    if return_degenerate:
        return eqs, bool(degenerate[0])
    return eqs


# --------------------------------------------------------------------------
# n players: pure equilibria


def _pure_ne_mask(S: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Mask (N, *counts) of pure profiles with no deviation better by > tol."""
    n = S.shape[-1]
    ne = np.ones(S.shape[:-1], bool)
    for p in range(n):
        u = S[..., p]
        best = u.max(axis=1 + p, keepdims=True)
        ne &= u >= best - tol
    return ne


def pure_nash(S, tol: float = TOL) -> list[Equilibrium]:
    """Pure equilibria of a subjective payoff tensor of shape ``(*counts, n)``.

    Ties count as equilibria; an empty list is a legal result.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim < 3 or S.shape[-1] != S.ndim - 1:
        raise GameError("expected tensor of shape (*strategy_counts, n)")
    counts = S.shape[:-1]
    mask = _pure_ne_mask(S[None], tol)[0]
    eqs = []
    for profile in zip(*np.nonzero(mask)):
        strategies = tuple(np.eye(k)[s] for k, s in zip(counts, profile))
        eqs.append(Equilibrium(strategies))
    return eqs


def _pareto_keep(payoffs: np.ndarray, valid: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Mask of valid candidates not strictly dominated by another valid one.

    ``payoffs`` has shape (N, P, n).
    """
    keep = valid.copy()
    P = payoffs.shape[1]
    for q in range(P):
        other = payoffs[:, q : q + 1, :]
        geq = (other >= payoffs - tol).all(-1)
        gt = (other > payoffs + tol).any(-1)
        keep &= ~(valid[:, q : q + 1] & geq & gt)
    return keep


def pareto_filter(equilibria, S, tol: float = TOL) -> list[Equilibrium]:
    """Keep equilibria whose expected subjective payoff vector is undominated."""
    eqs = list(equilibria)
    if not eqs:
        return []
    pay = np.array([e.payoff(S) for e in eqs])[None]
    keep = _pareto_keep(pay, np.ones((1, len(eqs)), bool), tol)[0]
    return [e for e, k in zip(eqs, keep) if k]


# --------------------------------------------------------------------------
# outcome mapping


def _distributions_chunk(game: FiniteGame, points: np.ndarray, tol: float):
    S = subjective_game(game, points)  # (N, *counts, n)
    N = len(points)
    n = game.n_players
    if n == 2:
        A, B = S[..., 0], S[..., 1]
        X, Y, valid, _ = _bimatrix_candidates(A, B, tol)
        pay = np.stack(
            [np.einsum("kpi,kij,kpj->kp", X, A, Y), np.einsum("kpi,kij,kpj->kp", X, B, Y)], -1
        )
        keep = _pareto_keep(pay, valid, tol)
        joint = np.einsum("kpi,kpj->kpij", X, Y).reshape(N, X.shape[1], -1)
        cnt = keep.sum(1)
        probs = np.einsum("kp,kpo->ko", keep.astype(float), joint)
    else:
        mask = _pure_ne_mask(S, tol).reshape(N, -1)
        flat = S.reshape(N, -1, n)
        keep = _pareto_keep(flat, mask, tol)
        cnt = keep.sum(1)
        probs = keep.astype(float)
    has = cnt > 0
    probs = probs / np.where(has, cnt, 1)[:, None]
    return probs, has


def outcome_distributions(game: FiniteGame, points, tol: float = TOL):
    """Batched outcome mapping.

    Returns ``(probs, has_eq)`` with ``probs`` of shape (N, n_outcomes): a
    uniform mixture over the Pareto-efficient equilibria at each position.
    Rows without an equilibrium are all zero and flagged False.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 2:
        points = points[None]
    out_p, out_h = [], []
    for start in range(0, len(points), _CHUNK):
        p, h = _distributions_chunk(game, points[start : start + _CHUNK], tol)
        out_p.append(p)
        out_h.append(h)
    return np.concatenate(out_p), np.concatenate(out_h)


def mu(game: FiniteGame, V, tol: float = TOL) -> OutcomeDistribution:
    """Outcome distribution induced by the subjective game at position ``V``."""
    if isinstance(game, ContinuousGame):
        raise GameError("continuous games have no finite outcome set; use best_response_dynamics")
    probs, has = outcome_distributions(game, np.asarray(V, dtype=float)[None], tol)
    return OutcomeDistribution(probs[0], bool(has[0]))


def mu_from_subjective(S, tol: float = TOL) -> OutcomeDistribution:
    """Outcome mapping applied directly to a subjective payoff tensor."""
    S = np.asarray(S, dtype=float)
    n = S.shape[-1]
    if n == 2:
        eqs = nash_support_enumeration(S[..., 0], S[..., 1], tol)
    else:
        eqs = pure_nash(S, tol)
    eqs = pareto_filter(eqs, S, tol)
    if not eqs:
        return OutcomeDistribution(np.zeros(int(np.prod(S.shape[:-1]))), False)
    probs = np.mean([e.outcome_distribution for e in eqs], axis=0)
    return OutcomeDistribution(probs, True)


# --------------------------------------------------------------------------
# continuous games


@dataclass(frozen=True, eq=False)
class DynamicsResult:
    profile: np.ndarray
    converged: bool
    iterations: int


def equilibrium_profiles(
    game: ContinuousGame,
    points,
    start=None,
    max_iter: int = DEFAULT_MAX_ITER,
    step_tol: float = DEFAULT_STEP_TOL,
    update: str = "simultaneous",
):
    """Batched best-response iteration.

    Player ``i`` best-responds to the weighted payoff ``sum_j v_ij pi_j``.
    ``update="simultaneous"`` moves all players from the previous profile;
    ``"round-robin"`` lets later players see earlier players' new moves.
    Returns profiles (N, n), a convergence mask and iteration counts.
    """
    if update not in ("simultaneous", "round-robin"):
        raise ValueError(f"unknown update rule {update!r}")
    points = np.asarray(points, dtype=float)
    if points.ndim == 2:
        points = points[None]
    N, n = len(points), game.n_players
    b = game.bounds
    q0 = game.start_profile() if start is None else np.asarray(start, dtype=float)
    if q0.shape != (n,) or np.any(q0 < b[:, 0] - 1e-12) or np.any(q0 > b[:, 1] + 1e-12):
        raise GameError("start profile outside strategy bounds")
    q = np.tile(q0, (N, 1))
    active = np.ones(N, bool)
    iters = np.zeros(N, int)
    for _ in range(max_iter):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        cur = q[idx]
        new = cur.copy()
        for i in range(n):
            basis = new if update == "round-robin" else cur
            new[:, i] = game.best_response(i, points[idx, i, :], basis)
        step = np.abs(new - cur).max(1)
        q[idx] = new
        iters[idx] += 1
        active[idx[step < step_tol]] = False
    return q, ~active, iters


def best_response_dynamics(
    game: ContinuousGame,
    V,
    start=None,
    max_iter: int = DEFAULT_MAX_ITER,
    step_tol: float = DEFAULT_STEP_TOL,
    update: str = "simultaneous",
) -> DynamicsResult:
    """Iterate best responses at a single position until both moves are below
    ``step_tol`` or ``max_iter`` rounds have run."""
    q, conv, it = equilibrium_profiles(game, np.asarray(V, dtype=float)[None], start, max_iter, step_tol, update)
    return DynamicsResult(q[0], bool(conv[0]), int(it[0]))


# --------------------------------------------------------------------------
# expected payoffs


def expected_payoffs(game, points, tol: float = TOL, **dynamics):
    """Expected objective payoffs (N, n) and an equilibrium-exists mask (N,)."""
    points = np.asarray(points, dtype=float)
    if points.ndim == 2:
        points = points[None]
    if isinstance(game, ContinuousGame):
        q, _, _ = equilibrium_profiles(game, points, **dynamics)
        return game.payoffs(q), np.ones(len(points), bool)
    probs, has = outcome_distributions(game, points, tol)
    return probs @ game.payoff_matrix(), has


def expected_payoff(game, V, i: int, tol: float = TOL, **dynamics) -> float:
    """``E_i(V)``: player ``i``'s objective payoff averaged under the outcome mapping."""
    E, has = expected_payoffs(game, V, tol, **dynamics)
    if not has[0]:
        raise NoEquilibriumError("no equilibrium at this position")
    return float(E[0, i])
