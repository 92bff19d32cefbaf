"""Heatmap rasters of two-player landscapes.

Alpha runs left to right and beta bottom to top, both over ``[0, 2 pi)``.
Thin white lines mark the cardinal angles and a red dot marks the center of
mass of the (nonnegative) field.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.image
import numpy as np

from .indices import default_threshold
from .io import read_grid_csv
from .space import TWO_PI, from_angles

CARDINAL_ANGLES = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)
RED = np.array([255, 0, 0], np.uint8)
WHITE = np.array([255, 255, 255], np.uint8)


def grid_raster(alpha, beta, value) -> np.ndarray:
    """Arrange grid values as an image array ``[beta_row, alpha_col]`` (beta upward)."""
    alpha = np.mod(np.asarray(alpha, dtype=float), TWO_PI)
    beta = np.mod(np.asarray(beta, dtype=float), TWO_PI)
    value = np.asarray(value, dtype=float)
    if len(value) == 0:
        raise ValueError("empty grid")
    a_levels = np.unique(np.round(alpha, 9))
    b_levels = np.unique(np.round(beta, 9))
    if len(a_levels) * len(b_levels) != len(value):
        raise ValueError("grid is not a complete alpha x beta lattice")
    col = np.searchsorted(a_levels, np.round(alpha, 9))
    row = np.searchsorted(b_levels, np.round(beta, 9))
    img = np.full((len(b_levels), len(a_levels)), np.nan)
    img[row, col] = value
    if np.isnan(img).any():
        raise ValueError("grid has duplicate cells")
    return img[::-1]


def com_angles(alpha, beta, value):
    """Angles of the center-of-mass rows, or None when the field has no usable CoM."""
    value = np.asarray(value, dtype=float)
    if np.any(value < 0) or value.sum() <= 0:
        return None
    M = np.einsum("k,kij->ij", value, from_angles(alpha, beta)) / value.sum()
    norms = np.linalg.norm(M, axis=1)
    if np.any(norms <= default_threshold(2)):
        return None
    ang = np.mod(np.arctan2(M[:, 1], M[:, 0]), TWO_PI)
    return float(ang[0]), float(ang[1])


def render(alpha, beta, value, scale: int = 4, cmap: str = "viridis") -> np.ndarray:
    """RGB uint8 image with a linear colour scale between the grid min and max."""
    img = grid_raster(alpha, beta, value)
    lo, hi = float(img.min()), float(img.max())
    norm = np.zeros_like(img) if hi == lo else (img - lo) / (hi - lo)
    rgb = (matplotlib.colormaps[cmap](norm)[..., :3] * 255).round().astype(np.uint8)
    rgb = np.repeat(np.repeat(rgb, scale, axis=0), scale, axis=1)
    height, width = rgb.shape[:2]

    for theta in CARDINAL_ANGLES:
        x = min(int(round(theta / TWO_PI * width)), width - 1)
        y = height - 1 - min(int(round(theta / TWO_PI * height)), height - 1)
        rgb[:, x] = WHITE
        rgb[y, :] = WHITE

    com = com_angles(alpha, beta, value)
    if com is not None:
        cx = com[0] / TWO_PI * width
        cy = height - com[1] / TWO_PI * height
        yy, xx = np.mgrid[:height, :width]
        radius = max(2.0, 1.5 * scale)
        rgb[(xx + 0.5 - cx) ** 2 + (yy + 0.5 - cy) ** 2 <= radius ** 2] = RED
    return rgb


def emit_heatmap(csv_path, png_path=None, scale: int = 4) -> Path:
    """Render a grid CSV (``alpha,beta,value``) to a PNG next to it."""
    csv_path = Path(csv_path)
    png_path = csv_path.with_suffix(".png") if png_path is None else Path(png_path)
    alpha, beta, value = read_grid_csv(csv_path)
    matplotlib.image.imsave(png_path, render(alpha, beta, value, scale), format="png")
    return png_path
