"""Display transfer functions and the displayed-luminance model.

A transfer function maps linear radiance in [0, 1] to the encoded value
written into an image file. The display then raises the encoded value to the
display gamma, which is what actually reaches the eye. Keeping encode and
display separate is the whole point: summing *encoded* values and letting the
display exponentiate the sum is where the superadditivity artifact comes from.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _check_nonnegative(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if np.any(v < 0.0):
        raise ValueError("radiance values must be non-negative")
    return v


@dataclass(frozen=True)
class Identity:
    """No-op encoding: linear values are written as device values."""

    def encode(self, v: np.ndarray) -> np.ndarray:
        v = _check_nonnegative(v)
        return np.minimum(v, 1.0)

    def decode(self, e: np.ndarray) -> np.ndarray:
        return np.asarray(e, dtype=np.float64)


@dataclass(frozen=True)
class PowerLaw:
    """Pure power-law encoding v -> v^(1/gamma)."""

    gamma: float = 2.2

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")

    def encode(self, v: np.ndarray) -> np.ndarray:
        v = _check_nonnegative(v)
        return np.minimum(v, 1.0) ** (1.0 / self.gamma)

    def decode(self, e: np.ndarray) -> np.ndarray:
        return np.asarray(e, dtype=np.float64) ** self.gamma


@dataclass(frozen=True)
class SrgbPiecewise:
    """The piecewise sRGB encoding (linear toe, 2.4 exponent, 1.055 scale).

    Close to PowerLaw(2.2) but not identical; kept as a distinct type so the
    two are never silently conflated.
    """

    def encode(self, v: np.ndarray) -> np.ndarray:
        v = np.minimum(_check_nonnegative(v), 1.0)
        return np.where(v <= 0.0031308, 12.92 * v, 1.055 * v ** (1.0 / 2.4) - 0.055)

    def decode(self, e: np.ndarray) -> np.ndarray:
        e = np.asarray(e, dtype=np.float64)
        return np.where(e <= 0.04045, e / 12.92, ((e + 0.055) / 1.055) ** 2.4)


TransferFunction = Identity | PowerLaw | SrgbPiecewise


def encode(tf: TransferFunction, v: np.ndarray) -> np.ndarray:
    """Encode linear radiance with ``tf``; input is clamped to [0, 1] first."""
    return tf.encode(v)


def decode(tf: TransferFunction, e: np.ndarray) -> np.ndarray:
    return tf.decode(e)


def displayed_luminance(encoded: np.ndarray, display_gamma: float = 2.2) -> np.ndarray:
    """Luminance a display with the given gamma emits for an encoded value."""
    encoded = np.asarray(encoded, dtype=np.float64)
    if np.any(encoded < 0.0):
        raise ValueError("encoded values must be non-negative")
    if not display_gamma > 0:
        raise ValueError("display gamma must be positive")
    return encoded**display_gamma
