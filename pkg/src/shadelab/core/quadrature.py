"""Deterministic stratified quadrature over the hemisphere.

The rule partitions the hemisphere about a given axis into equal-area
latitude bands crossed with uniform azimuth sectors and evaluates the
integrand at cell midpoints. No randomness is involved, so estimates are
bit-for-bit reproducible, and the midpoint rule converges at O(n^-1) in node
count for smooth integrands (O(B^-2) per axis).
"""
from __future__ import annotations

import math

import numpy as np

from .vec import normalize, orthonormal_basis


def node_counts(n_samples: int) -> tuple[int, int]:
    """Bands x azimuths used for a requested sample budget."""
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    bands = max(1, math.isqrt(n_samples))
    azimuths = max(1, n_samples // bands)
    return bands, azimuths


def hemisphere_nodes(normal: np.ndarray, n_samples: int) -> tuple[np.ndarray, float]:
    """Quadrature nodes and the shared cell weight for one hemisphere.

    Returns (directions, weight): directions is (M, 3) with every node on the
    hemisphere ``dot(d, normal) > 0``; summing f(directions) * weight
    estimates the (unweighted) integral of f over solid angle.
    """
    axis = normalize(np.asarray(normal, dtype=np.float64))
    bands, azimuths = node_counts(n_samples)
    u = (np.arange(bands, dtype=np.float64) + 0.5) / bands  # cos(theta), equal-area
    phi = (np.arange(azimuths, dtype=np.float64) + 0.5) * (2.0 * np.pi / azimuths)
    cos_t = np.repeat(u, azimuths)
    sin_t = np.sqrt(1.0 - cos_t * cos_t)
    phis = np.tile(phi, bands)
    t1, t2 = orthonormal_basis(axis)
    dirs = (
        (sin_t * np.cos(phis))[:, np.newaxis] * t1
        + (sin_t * np.sin(phis))[:, np.newaxis] * t2
        + cos_t[:, np.newaxis] * axis
    )
    weight = 2.0 * np.pi / (bands * azimuths)
    return dirs, weight


def hemisphere_quadrature(f, normal: np.ndarray, n_samples: int = 1_000_000) -> float:
    """Integral of ``f`` over the hemisphere about ``normal``.

    ``f`` must accept an (M, 3) array of unit directions and return (M,)
    values. The estimate is deterministic for fixed arguments.
    """
    dirs, weight = hemisphere_nodes(normal, n_samples)
    values = np.asarray(f(dirs), dtype=np.float64)
    if values.shape != (dirs.shape[0],):
        raise ValueError("integrand must return one value per direction")
    return float(values.sum() * weight)
