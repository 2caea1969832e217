"""Linear framebuffer with an out-of-range mask."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Framebuffer:
    """Unclamped linear RGB pixels plus the per-pixel overflow mask.

    ``pixels`` stays linear and unclamped so diagnostics can look at values
    the display never shows; ``overflow_mask`` flags pixels whose maximum
    channel exceeds 1 before any clamping.
    """

    pixels: np.ndarray
    overflow_mask: np.ndarray

    @classmethod
    def zeros(cls, width: int, height: int) -> "Framebuffer":
        if width <= 0 or height <= 0:
            raise ValueError("framebuffer dimensions must be positive")
        return cls(
            pixels=np.zeros((height, width, 3), dtype=np.float64),
            overflow_mask=np.zeros((height, width), dtype=bool),
        )

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def refresh_overflow(self) -> None:
        self.overflow_mask = self.pixels.max(axis=-1) > 1.0

    def clamped(self) -> np.ndarray:
        return np.clip(self.pixels, 0.0, 1.0)
