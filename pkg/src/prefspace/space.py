"""Points of the preference space: n x n matrices with unit-norm rows.

Row ``i`` of a preference matrix is player ``i``'s attitude vector; entry
``v_ij`` weighs player ``j``'s objective payoff. Rows are only defined up to a
positive scale factor, so every constructor normalises.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2 * math.pi
DEFAULT_RESOLUTION = 90
DEFAULT_SAMPLES = 20_000
DEFAULT_REPEATS = 8


class PreferenceError(ValueError):
    pass


def normalize_rows(raw) -> np.ndarray:
    """Scale each row to unit Euclidean norm. Works on stacks ``(..., n, n)``."""
    V = np.asarray(raw, dtype=float)
    if V.ndim < 2 or V.shape[-1] != V.shape[-2]:
        raise PreferenceError(f"expected square matrix, got shape {V.shape}")
    norms = np.linalg.norm(V, axis=-1, keepdims=True)
    if np.any(norms == 0) or not np.all(np.isfinite(norms)):
        raise PreferenceError("zero row: undefined direction")
    return V / norms


def from_angles(alpha, beta) -> np.ndarray:
    """Two-player position with rows ``(cos a, sin a)`` and ``(cos b, sin b)``.

    Accepts scalars or equal-shaped arrays; array input yields a stack.
    """
    a = np.mod(np.asarray(alpha, dtype=float), TWO_PI)
    b = np.mod(np.asarray(beta, dtype=float), TWO_PI)
    V = np.stack(
        [np.stack([np.cos(a), np.sin(a)], -1), np.stack([np.cos(b), np.sin(b)], -1)], -2
    )
    return V


def to_angles(V) -> tuple:
    """Inverse of :func:`from_angles`; angles in ``[0, 2*pi)``."""
    V = np.asarray(V, dtype=float)
    if V.shape[-2:] != (2, 2):
        raise PreferenceError("angle parametrisation exists only for 2 players")
    ang = np.mod(np.arctan2(V[..., 1], V[..., 0]), TWO_PI)
    return ang[..., 0], ang[..., 1]


def cardinal_points(n: int) -> list[np.ndarray]:
    """All positions whose rows are each ``+e_k`` or ``-e_k``; there are ``(2n)**n``."""
    if n < 2:
        raise PreferenceError("n >= 2 required")
    eye = np.eye(n)
    rows = [s * eye[k] for k in range(n) for s in (1.0, -1.0)]
    return [np.array(choice) for choice in itertools.product(rows, repeat=n)]


def extreme_point(n: int, j: int, sign: int = 1) -> np.ndarray:
    """``sign * 1 e_j^T``: every player weighs only player ``j``'s payoff."""
    if not 0 <= j < n:
        raise PreferenceError(f"player {j} out of range for n={n}")
    if sign not in (1, -1):
        raise PreferenceError("sign must be +1 or -1")
    V = np.zeros((n, n))
    V[:, j] = sign
    return V


def permutation_point(perm) -> np.ndarray:
    """Row ``i`` is ``e_{perm[i]}``: player ``i`` evaluates outcomes by ``u_{perm[i]}``."""
    perm = [int(p) for p in perm]
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise PreferenceError(f"{perm} is not a permutation of 0..{n - 1}")
    return np.eye(n)[perm]


def cycle_permutation(cycle, n: int) -> list[int]:
    """Permutation mapping ``cycle[k] -> cycle[k+1]`` and fixing other players."""
    cycle = [int(c) for c in cycle]
    if len(set(cycle)) != len(cycle) or any(not 0 <= c < n for c in cycle):
        raise PreferenceError(f"invalid cycle {cycle} for n={n}")
    perm = list(range(n))
    for k, c in enumerate(cycle):
        perm[c] = cycle[(k + 1) % len(cycle)]
    return perm


def coalition_position(coalition, n: int) -> np.ndarray:
    """Members weigh the coalition's payoffs equally; outsiders stay selfish."""
    members = sorted({int(i) for i in coalition})
    if not members:
        raise PreferenceError("empty coalition")
    if members[0] < 0 or members[-1] >= n:
        raise PreferenceError(f"coalition {members} out of range for n={n}")
    V = np.eye(n)
    indicator = np.zeros(n)
    indicator[members] = 1 / math.sqrt(len(members))
    V[members] = indicator
    return V


def replace_row(V, i: int, direction) -> np.ndarray:
    """Copy of ``V`` with row ``i`` set to the normalised ``direction``."""
    V = np.array(V, dtype=float)
    d = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(d)
    if norm == 0:
        raise PreferenceError("zero direction")
    V[..., i, :] = d / norm
    return V


def unit(n: int, k: int, sign: float = 1.0) -> np.ndarray:
    e = np.zeros(n)
    e[k] = sign
    return e


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Weighted sample of preference positions.

    ``points`` has shape ``(N, n, n)``. Grid sets also carry their angle pairs.
    """

    points: np.ndarray
    weights: np.ndarray
    kind: str
    seed: int | None = None
    resolution: int | None = None
    angles: np.ndarray | None = None

    def __post_init__(self):
        for arr in (self.points, self.weights, self.angles):
            if arr is not None:
                arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def n_players(self) -> int:
        return self.points.shape[-1]


def grid_offset(resolution: int) -> float:
    """Fraction of a cell by which grid angles are shifted from ``k * 2 pi / resolution``."""
    return (1 + (resolution % 4) / 4) / 2


def grid(resolution: int = DEFAULT_RESOLUTION) -> SampleSet:
    """Uniform grid on the two-player torus, one point per cell.

    Points sit at ``(k + offset) * 2 pi / resolution``. For resolutions
    divisible by 4 the offset is 1/2 (cell centres); otherwise centres would
    hit ``pi/2`` or fall off the player-exchange symmetry, so the offset is
    shifted to ``(1 + (resolution mod 4) / 4) / 2``. Either way no grid
    angle is a multiple of ``pi/2`` and the set is invariant under
    ``alpha -> pi/2 - beta``.
    """
    resolution = int(resolution)
    if resolution < 4:
        raise PreferenceError("grid resolution must be >= 4")
    ang = (np.arange(resolution) + grid_offset(resolution)) * TWO_PI / resolution
    alpha, beta = np.meshgrid(ang, ang, indexing="ij")
    alpha, beta = alpha.ravel(), beta.ravel()
    pts = from_angles(alpha, beta)
    w = np.full(len(pts), 1.0 / len(pts))
    return SampleSet(pts, w, "grid", resolution=resolution, angles=np.stack([alpha, beta], 1))


def uniform_rows(rng: np.random.Generator, size: int, n: int, rows: int | None = None) -> np.ndarray:
    """``size`` stacks of ``rows`` independent uniform unit vectors in R^n."""
    rows = n if rows is None else rows
    g = rng.standard_normal((size, rows, n))
    norms = np.linalg.norm(g, axis=-1, keepdims=True)
    # a standard normal vector is zero with probability 0; redraw defensively
    while np.any(norms == 0):
        bad = norms[..., 0] == 0
        g[bad] = rng.standard_normal((int(bad.sum()), n))
        norms = np.linalg.norm(g, axis=-1, keepdims=True)
    return g / norms


def monte_carlo(n: int, count: int = DEFAULT_SAMPLES, seed: int = 0) -> SampleSet:
    """Independent uniform rows on ``S^{n-1}``, deterministic in ``seed``."""
    if n < 2:
        raise PreferenceError("n >= 2 required")
    if count < 1:
        raise PreferenceError("count must be >= 1")
    rng = np.random.default_rng(seed)
    pts = uniform_rows(rng, int(count), n)
    w = np.full(len(pts), 1.0 / len(pts))
    return SampleSet(pts, w, "monte-carlo", seed=int(seed))


def sample(n: int, kind: str = "grid", size: int | None = None, seed: int = 0) -> SampleSet:
    """Build a grid (``size`` = resolution) or Monte Carlo (``size`` = count) sample."""
    if kind == "grid":
        if n != 2:
            raise PreferenceError("grid sampling is only available for 2 players")
        return grid(DEFAULT_RESOLUTION if size is None else size)
    if kind in ("monte-carlo", "mc"):
        return monte_carlo(n, DEFAULT_SAMPLES if size is None else size, seed)
    raise PreferenceError(f"unknown sample kind {kind!r}")


def repeat_samples(n: int, count: int = DEFAULT_SAMPLES, seed: int = 0,
                   repeats: int = DEFAULT_REPEATS) -> list[SampleSet]:
    """Independent Monte Carlo sets with seeds ``seed, seed+1, ...``."""
    if repeats < 1:
        raise PreferenceError("repeats must be >= 1")
    return [monte_carlo(n, count, seed + r) for r in range(repeats)]
