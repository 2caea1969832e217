"""Small vector helpers over numpy arrays.

Vectors are plain float64 arrays whose last axis has length 3. Every helper
broadcasts over leading axes so the same code path serves a single direction
and a full pixel grid.
"""
from __future__ import annotations

import numpy as np

EPSILON = 1e-12


def vec3(x: float, y: float, z: float) -> np.ndarray:
    return np.array([x, y, z], dtype=np.float64)


def dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dot product over the last axis, written as an explicit sum.

    The explicit x*x + y*y + z*z form keeps float evaluation order identical
    across call sites, which the byte-determinism guarantees rely on.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def norm(a: np.ndarray) -> np.ndarray:
    return np.sqrt(dot(a, a))


def normalize(a: np.ndarray) -> np.ndarray:
    """Unit vector along ``a``. Raises on (near-)zero input."""
    a = np.asarray(a, dtype=np.float64)
    n = norm(a)
    if np.any(n < EPSILON):
        raise ValueError("cannot normalize a zero-length vector")
    return a / n[..., np.newaxis]


def cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.cross(np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64))


def reflect(d: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Mirror direction ``d`` about unit axis ``n``: 2(d.n)n - d."""
    return 2.0 * dot(d, n)[..., np.newaxis] * np.asarray(n, dtype=np.float64) - np.asarray(
        d, dtype=np.float64
    )


def orthonormal_basis(axis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic tangent pair (t1, t2) completing unit ``axis``.

    Picks the global axis least aligned with ``axis`` as the helper vector, so
    the frame is a pure function of the input.
    """
    axis = np.asarray(axis, dtype=np.float64)
    helper = np.zeros(axis.shape, dtype=np.float64)
    idx = np.argmin(np.abs(axis), axis=-1)
    if axis.ndim == 1:
        helper[idx] = 1.0
    else:
        np.put_along_axis(helper, idx[..., np.newaxis], 1.0, axis=-1)
    t1 = normalize(np.cross(helper, axis))
    t2 = np.cross(axis, t1)
    return t1, t2
