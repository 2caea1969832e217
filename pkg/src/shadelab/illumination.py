"""Fixed-function Phong illumination: materials, lights, specular models.

The two specular variants differ only in how the lobe is attached to the
surface. The classic form emits max(R.V, 0)^m wherever the surface faces the
light and drops to zero the instant N.L crosses zero, which produces a hard
cutoff through any highlight that straddles the terminator. The modified form
multiplies the same lobe by max(N.L, 0), so it fades linearly to zero there
and stays continuous; its optional (m+2)/(2 pi) factor normalizes the
cosine-weighted lobe integral to 1 at normal incidence.

Directions follow one convention throughout: N is the unit surface normal, L
points from the surface toward the light, V from the surface toward the eye,
and R = 2(N.L)N - L is L mirrored about N. Every function broadcasts over
leading axes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core.quadrature import hemisphere_nodes, node_counts
from .core.vec import dot, normalize, orthonormal_basis, reflect


def _rgb(value) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim == 0:
        arr = np.full(3, float(arr))
    if arr.shape != (3,):
        raise ValueError("expected a scalar or an RGB triple")
    return arr


@dataclass(frozen=True)
class Material:
    """Phong material coefficients.

    ``seven_bit`` opts into the historical fixed-function limit where the
    shininess register holds 7 bits; with it set, exponents above 127 are
    rejected at construction.
    """

    k_ambient: np.ndarray = 0.0
    k_diffuse: np.ndarray = 0.0
    k_specular: np.ndarray = 0.0
    m_shiny: float = 1.0
    reflectivity: float = 0.0
    seven_bit: bool = False

    def __post_init__(self) -> None:
        for name in ("k_ambient", "k_diffuse", "k_specular"):
            value = _rgb(getattr(self, name))
            if np.any(value < 0.0):
                raise ValueError(f"{name} must be non-negative")
            object.__setattr__(self, name, value)
        if self.m_shiny < 0:
            raise ValueError("shininess exponent must be non-negative")
        if self.seven_bit and self.m_shiny > 127:
            raise ValueError("7-bit mode limits the shininess exponent to 127")
        if not 0.0 <= self.reflectivity <= 1.0:
            raise ValueError("reflectivity must lie in [0, 1]")


@dataclass(frozen=True)
class SpecularModel:
    """Choice of specular term: kind "classic" or "modified".

    ``normalized`` only applies to the modified kind and scales the lobe by
    (m+2)/(2 pi).
    """

    kind: str = "classic"
    normalized: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("classic", "modified"):
            raise ValueError(f"unknown specular kind {self.kind!r}")
        if self.normalized and self.kind == "classic":
            raise ValueError("normalization only applies to the modified kind")


@dataclass(frozen=True)
class Directional:
    """Collimated light. ``direction`` is the travel direction of the light."""

    direction: np.ndarray
    intensity: np.ndarray = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "direction", normalize(np.asarray(self.direction, dtype=np.float64)))
        object.__setattr__(self, "intensity", _rgb(self.intensity))


@dataclass(frozen=True)
class PointLight:
    position: np.ndarray
    intensity: np.ndarray = 1.0
    attenuation: str = "none"  # "none" | "inverse_square"

    def __post_init__(self) -> None:
        if self.attenuation not in ("none", "inverse_square"):
            raise ValueError(f"unknown attenuation {self.attenuation!r}")
        object.__setattr__(self, "position", np.asarray(self.position, dtype=np.float64))
        object.__setattr__(self, "intensity", _rgb(self.intensity))


@dataclass(frozen=True)
class Headlight:
    """Light riding on the camera: L is the view direction itself."""

    intensity: np.ndarray = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "intensity", _rgb(self.intensity))


@dataclass(frozen=True)
class Ambient:
    intensity: np.ndarray = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "intensity", _rgb(self.intensity))


@dataclass(frozen=True)
class OvercastSky:
    """Gradated overcast dome: radiance L_z (1 + 2 cos theta) / 3.

    theta is measured from ``up``; the zenith is three times as bright as the
    horizon and everything below the horizon is black.
    """

    zenith_radiance: float = 1.0
    up: np.ndarray = (0.0, 0.0, 1.0)

    def __post_init__(self) -> None:
        if self.zenith_radiance < 0:
            raise ValueError("zenith radiance must be non-negative")
        object.__setattr__(self, "up", normalize(np.asarray(self.up, dtype=np.float64)))


LightSource = Directional | PointLight | Headlight | Ambient | OvercastSky


@dataclass(frozen=True)
class EnvironmentMap:
    """Latitude-longitude radiance grid covering the full sphere.

    Row 0 spans the pole at ``up``; azimuth is measured from ``azimuth_ref``.
    Lookups are nearest-texel.
    """

    values: np.ndarray
    up: np.ndarray = (0.0, 1.0, 0.0)
    azimuth_ref: np.ndarray = (1.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 3 or values.shape[2] != 3 or values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError("environment map must be (height, width, 3)")
        up = normalize(np.asarray(self.up, dtype=np.float64))
        ref = np.asarray(self.azimuth_ref, dtype=np.float64)
        t1 = ref - dot(ref, up) * up
        t1 = normalize(t1)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "azimuth_ref", t1)

    def lookup(self, directions: np.ndarray) -> np.ndarray:
        d = np.asarray(directions, dtype=np.float64)
        t2 = np.cross(self.up, self.azimuth_ref)
        cos_t = np.clip(dot(d, self.up), -1.0, 1.0)
        theta = np.arccos(cos_t)
        phi = np.arctan2(dot(d, t2), dot(d, self.azimuth_ref))
        h, w = self.values.shape[:2]
        row = np.clip((theta / np.pi * h).astype(np.int64), 0, h - 1)
        col = ((phi + np.pi) / (2.0 * np.pi) * w).astype(np.int64) % w
        return self.values[row, col]


def horizon_gradient_map(height: int = 64, width: int = 8, top: float = 0.9,
                         bottom: float = 0.05, up=(0.0, 1.0, 0.0)) -> EnvironmentMap:
    """Procedural bright-top/dark-bottom gradient, linear in cos(theta)."""
    theta = (np.arange(height, dtype=np.float64) + 0.5) / height * np.pi
    shade = bottom + (top - bottom) * (np.cos(theta) + 1.0) / 2.0
    values = np.repeat(shade[:, np.newaxis], width, axis=1)[..., np.newaxis]
    return EnvironmentMap(values=np.repeat(values, 3, axis=2), up=up)


def lambert_term(normal: np.ndarray, light_dir: np.ndarray) -> np.ndarray:
    """Clamped cosine max(N.L, 0)."""
    return np.maximum(dot(normal, light_dir), 0.0)


def phong_specular(model: SpecularModel, normal, light_dir, view_dir, m_shiny: float) -> np.ndarray:
    """Specular lobe value for one light at one (batch of) surface point(s)."""
    nl = dot(normal, light_dir)
    r = reflect(light_dir, normal)
    lobe = np.maximum(dot(r, view_dir), 0.0) ** m_shiny
    if model.kind == "classic":
        return np.where(nl > 0.0, lobe, 0.0)
    factor = (m_shiny + 2.0) / (2.0 * np.pi) if model.normalized else 1.0
    return lobe * np.maximum(nl, 0.0) * factor


def sky_radiance(directions: np.ndarray, sky: OvercastSky) -> np.ndarray:
    """Radiance of the dome toward each direction; zero below the horizon."""
    cos_t = dot(directions, sky.up)
    value = sky.zenith_radiance * (1.0 + 2.0 * cos_t) / 3.0
    return np.where(cos_t >= 0.0, value, 0.0)


def sky_irradiance(normal, sky: OvercastSky, occluder_test=None, n_samples: int = 100_000) -> float:
    """Irradiance of the dome on a surface with the given normal.

    Quadrature of sky_radiance(w) * max(w.normal, 0) over the hemisphere about
    ``normal``. ``occluder_test`` takes an (M, 3) direction array and returns
    a boolean mask of blocked directions, whose contribution is dropped.
    For a horizontal surface the closed form is (7 pi / 9) L_z.
    """
    axis = normalize(np.asarray(normal, dtype=np.float64))
    dirs, weight = hemisphere_nodes(axis, n_samples)
    values = sky_radiance(dirs, sky) * np.maximum(dot(dirs, axis), 0.0)
    if occluder_test is not None:
        blocked = np.asarray(occluder_test(dirs), dtype=bool)
        values = np.where(blocked, 0.0, values)
    return float(values.sum() * weight)


def sky_irradiance_batch(normals: np.ndarray, sky: OvercastSky, occluder=None,
                         n_samples: int = 128) -> np.ndarray:
    """Per-point sky irradiance for a batch of normals, shape (..., 3) -> (...).

    Same stratified rule as sky_irradiance, evaluated node by node across the
    whole batch so renders stay vectorized. ``occluder`` takes the (..., 3)
    direction array for one node and returns the blocked mask; the caller
    binds the surface points.
    """
    normals = np.asarray(normals, dtype=np.float64)
    bands, azimuths = node_counts(n_samples)
    us = (np.arange(bands, dtype=np.float64) + 0.5) / bands
    phis = (np.arange(azimuths, dtype=np.float64) + 0.5) * (2.0 * np.pi / azimuths)
    t1, t2 = orthonormal_basis(normals)
    total = np.zeros(normals.shape[:-1], dtype=np.float64)
    for u in us:
        sin_t = np.sqrt(1.0 - u * u)
        for phi in phis:
            d = (sin_t * np.cos(phi)) * t1 + (sin_t * np.sin(phi)) * t2 + u * normals
            value = sky_radiance(d, sky) * u
            if occluder is not None:
                value = np.where(occluder(d), 0.0, value)
            total += value
    return total * (2.0 * np.pi / (bands * azimuths))


def env_reflection(view_dir, normal, env: EnvironmentMap) -> np.ndarray:
    """Radiance seen by mirroring the view direction about the normal."""
    return env.lookup(reflect(view_dir, normal))


def light_contribution(light: LightSource, point, normal, view_dir, material: Material,
                       model: SpecularModel, sky_occluder=None, sky_samples: int = 128) -> np.ndarray:
    """Linear RGB added by a single light at the given surface point(s)."""
    normal = np.asarray(normal, dtype=np.float64)
    view_dir = np.asarray(view_dir, dtype=np.float64)
    if isinstance(light, Ambient):
        shape = normal.shape[:-1] + (3,)
        return np.broadcast_to(material.k_ambient * light.intensity, shape).copy()
    if isinstance(light, OvercastSky):
        irradiance = sky_irradiance_batch(normal, light, occluder=sky_occluder,
                                          n_samples=sky_samples)
        return irradiance[..., np.newaxis] * (material.k_diffuse / np.pi)
    if isinstance(light, Directional):
        l = -light.direction
        falloff = 1.0
    elif isinstance(light, Headlight):
        l = view_dir
        falloff = 1.0
    elif isinstance(light, PointLight):
        offset = light.position - np.asarray(point, dtype=np.float64)
        dist2 = dot(offset, offset)
        l = offset / np.sqrt(dist2)[..., np.newaxis]
        falloff = 1.0 / dist2[..., np.newaxis] if light.attenuation == "inverse_square" else 1.0
    else:
        raise TypeError(f"not a light source: {light!r}")
    diffuse = material.k_diffuse * lambert_term(normal, l)[..., np.newaxis]
    specular = material.k_specular * phong_specular(model, normal, l, view_dir, material.m_shiny)[..., np.newaxis]
    return light.intensity * falloff * (diffuse + specular)


def shade_point(point, normal, view_dir, material: Material, lights, model: SpecularModel,
                env: EnvironmentMap | None = None, sky_occluder=None,
                sky_samples: int = 128) -> np.ndarray:
    """Unclamped linear RGB at a surface point: sum over lights plus mirror term.

    No visibility is considered here; shadowing is the renderer's job.
    """
    normal = np.asarray(normal, dtype=np.float64)
    total = np.zeros(normal.shape[:-1] + (3,), dtype=np.float64)
    for light in lights:
        total += light_contribution(light, point, normal, view_dir, material, model,
                                    sky_occluder=sky_occluder, sky_samples=sky_samples)
    if env is not None and material.reflectivity > 0.0:
        total += material.reflectivity * env_reflection(view_dir, normal, env)
    return total
