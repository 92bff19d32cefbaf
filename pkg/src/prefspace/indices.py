"""Diagonalization, Hierarchy and Reciprocity indices of a preference matrix."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def default_threshold(n: int, statistical_error: float = 0.0) -> float:
    """Row-norm level below which a center-of-mass row is treated as degenerate."""
    return max(3.0 * statistical_error, 1e-3 * math.sqrt(n))


@dataclass(frozen=True)
class IndexReport:
    D: float
    H: float
    R: float
    R_plus: float
    R_minus: float
    degenerate_rows: tuple = ()
    errors: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"D": self.D, "H": self.H, "R": self.R, "R_plus": self.R_plus, "R_minus": self.R_minus}
        if self.degenerate_rows:
            out["degenerate_rows"] = list(self.degenerate_rows)
        if self.errors:
            out["errors"] = dict(self.errors)
        return out

    def vector(self) -> np.ndarray:
        """``(D, H, R_plus, R_minus)``."""
        return np.array([self.D, self.H, self.R_plus, self.R_minus])


def indices(M, threshold: float | None = None, degenerate=None) -> IndexReport:
    """Compute D, H, R (and the R+/R- split) of an n x n matrix.

    Rows are rescaled to unit length first. Rows whose norm is at most
    ``threshold`` (or flagged in ``degenerate``) carry no direction: they are
    zeroed and listed in ``degenerate_rows``.
    """
    M = np.array(M, dtype=float)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError(f"expected a square matrix, got {M.shape}")
    if threshold is None:
        threshold = default_threshold(n)
    norms = np.linalg.norm(M, axis=1)
    bad = norms <= threshold
    if degenerate is not None:
        bad |= np.asarray(degenerate, bool)
    M[bad] = 0.0
    M[~bad] /= norms[~bad, None]

    W = M * M
    Wt = np.sign(M) * W
    D = np.trace(W) / n
    iu = np.triu_indices(n, 1)
    asym = np.abs(Wt[iu] - Wt.T[iu])
    recip = W[iu] + W.T[iu] - asym
    H = asym.sum() / n
    pos = (M[iu] > 0) & (M.T[iu] > 0)
    neg = (M[iu] < 0) & (M.T[iu] < 0)
    R_plus = recip[pos].sum() / n
    R_minus = recip[neg].sum() / n
    R = recip.sum() / n
    return IndexReport(float(D), float(H), float(R), float(R_plus), float(R_minus),
                       tuple(int(i) for i in np.flatnonzero(bad)))


def pair_reciprocity(M, i: int, j: int) -> float:
    """Contribution of the pair ``(i, j)`` to R for a matrix with unit rows."""
    M = np.asarray(M, dtype=float)
    M = M / np.linalg.norm(M, axis=1, keepdims=True)
    n = M.shape[0]
    wij, wji = M[i, j] ** 2, M[j, i] ** 2
    return float((wij + wji - abs(np.sign(M[i, j]) * wij - np.sign(M[j, i]) * wji)) / n)
