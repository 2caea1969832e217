"""Pinhole and orthographic cameras with per-pixel ray generation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .vec import cross, dot, normalize


@dataclass(frozen=True)
class Camera:
    """View description.

    kind
        "perspective" or "orthographic".
    fov_or_extent
        Horizontal full field of view in degrees (perspective) or horizontal
        extent in scene units (orthographic). Pixels are square; the vertical
        coverage follows from the aspect ratio.
    """

    kind: str
    position: np.ndarray
    view_dir: np.ndarray
    up: np.ndarray
    width: int
    height: int
    fov_or_extent: float
    _basis: tuple = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        if self.kind not in ("perspective", "orthographic"):
            raise ValueError(f"unknown camera kind {self.kind!r}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image dimensions must be positive")
        if self.kind == "perspective" and not 0.0 < self.fov_or_extent < 180.0:
            raise ValueError("perspective field of view must lie in (0, 180) degrees")
        if self.kind == "orthographic" and not self.fov_or_extent > 0.0:
            raise ValueError("orthographic extent must be positive")
        position = np.asarray(self.position, dtype=np.float64)
        forward = normalize(np.asarray(self.view_dir, dtype=np.float64))
        up_hint = np.asarray(self.up, dtype=np.float64)
        side = cross(forward, up_hint)
        if float(dot(side, side)) < 1e-12:
            raise ValueError("up vector must not be parallel to the view direction")
        right = normalize(side)
        true_up = cross(right, forward)
        object.__setattr__(self, "position", position)
        object.__setattr__(self, "view_dir", forward)
        object.__setattr__(self, "up", np.asarray(self.up, dtype=np.float64))
        object.__setattr__(self, "_basis", (right, true_up, forward))

    @property
    def basis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Orthonormal (right, up, forward) triple."""
        return self._basis

    def pixel_grid(self) -> tuple[np.ndarray, np.ndarray]:
        """Pixel-center offsets (px, py) in image-plane units.

        Row 0 is the top of the image; px grows rightward, py upward. The
        half-integer grid is scaled by a single pitch factor so orthographic
        cameras with power-of-two pitches produce exactly representable
        coordinates (several determinism tests lean on this).
        """
        if self.kind == "orthographic":
            pitch = self.fov_or_extent / self.width
        else:
            pitch = 2.0 * np.tan(np.radians(self.fov_or_extent) / 2.0) / self.width
        cols = (np.arange(self.width, dtype=np.float64) + 0.5) - self.width / 2.0
        rows = self.height / 2.0 - (np.arange(self.height, dtype=np.float64) + 0.5)
        px = cols * pitch
        py = rows * pitch
        return np.meshgrid(px, py)

    def rays(self) -> tuple[np.ndarray, np.ndarray]:
        """Primary rays as (origins, directions), each (height, width, 3).

        One ray per pixel through the pixel center; directions are unit length.
        """
        right, true_up, forward = self._basis
        px, py = self.pixel_grid()
        if self.kind == "orthographic":
            origins = (
                self.position
                + px[..., np.newaxis] * right
                + py[..., np.newaxis] * true_up
            )
            directions = np.broadcast_to(forward, origins.shape).copy()
        else:
            directions = normalize(
                forward + px[..., np.newaxis] * right + py[..., np.newaxis] * true_up
            )
            origins = np.broadcast_to(self.position, directions.shape).copy()
        return origins, directions

    def pixel_pitch(self) -> float:
        """Image-plane distance between adjacent pixel centers."""
        if self.kind == "orthographic":
            return self.fov_or_extent / self.width
        return 2.0 * np.tan(np.radians(self.fov_or_extent) / 2.0) / self.width
