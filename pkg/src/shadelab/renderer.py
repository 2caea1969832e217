"""Deterministic tile-parallel ray-cast renderer.

One primary ray per pixel, nearest patch wins, local Phong shading, optional
shadow rays and per-sample sky occlusion. Work is partitioned into disjoint
row bands; every pixel's value is a pure function of its own ray, so the
worker count never changes a single byte of output.

Two superposition modes exist. ``linear_then_encode`` accumulates per-light
contributions linearly; the framebuffer stays linear and is encoded once at
write time. ``naive_encoded_sum`` clamps and encodes each light's
contribution with the output transfer first and sums the encoded values,
which is how fixed-function viewers without gamma handling behave; with the
identity transfer the framebuffer then holds summed device values.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core.camera import Camera
from .core.framebuffer import Framebuffer
from .core.geometry import SurfacePatch, intersect_batch
from .core.transfer import Identity, TransferFunction, encode
from .core.vec import dot, normalize
from .illumination import (
    Ambient,
    Directional,
    EnvironmentMap,
    Headlight,
    LightSource,
    Material,
    OvercastSky,
    PointLight,
    SpecularModel,
    env_reflection,
    light_contribution,
)

SHADOW_BIAS = 1e-6
THREADS_ENV_VAR = "SHADELAB_THREADS"


@dataclass(frozen=True)
class SceneObject:
    """A patch, its material, and optionally the light indices that reach it.

    ``lights=None`` means all scene lights apply. The filter exists so multi
    subject figures can give each subject its own lighting inside one scene.
    """

    patch: SurfacePatch
    material: Material
    lights: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Scene:
    camera: Camera
    objects: tuple[SceneObject, ...]
    lights: tuple[LightSource, ...]
    background: np.ndarray = (0.0, 0.0, 0.0)
    env: EnvironmentMap | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "lights", tuple(self.lights))
        bg = np.asarray(self.background, dtype=np.float64)
        if bg.ndim == 0:
            bg = np.full(3, float(bg))
        object.__setattr__(self, "background", bg)


@dataclass(frozen=True)
class RenderOptions:
    specular_model: SpecularModel = field(default_factory=SpecularModel)
    shadows: bool = False
    superposition_mode: str = "linear_then_encode"
    output_tf: TransferFunction = field(default_factory=Identity)
    sky_samples: int = 128

    def __post_init__(self) -> None:
        if self.superposition_mode not in ("linear_then_encode", "naive_encoded_sum"):
            raise ValueError(f"unknown superposition mode {self.superposition_mode!r}")
        if self.sky_samples < 1:
            raise ValueError("sky_samples must be at least 1")


def display_transfer(options: RenderOptions) -> TransferFunction:
    """Transfer to apply when writing a render's display image.

    Naive accumulation already encoded each light's contribution, so its
    framebuffer holds device values and must not be encoded again.
    """
    if options.superposition_mode == "naive_encoded_sum":
        return Identity()
    return options.output_tf


def resolve_workers(workers: int | None = None) -> int:
    """Explicit argument, then SHADELAB_THREADS, then machine parallelism."""
    if workers is not None:
        if workers < 1:
            raise ValueError("worker count must be at least 1")
        return workers
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        value = int(env)
        if value < 1:
            raise ValueError(f"{THREADS_ENV_VAR} must be at least 1")
        return value
    return os.cpu_count() or 1


def _any_hit(scene: Scene, origins: np.ndarray, dirs: np.ndarray,
             max_t: np.ndarray | None = None, tmin: float = SHADOW_BIAS) -> np.ndarray:
    """True where a ray hits any patch (before max_t when given)."""
    occluded = np.zeros(origins.shape[:-1], dtype=bool)
    for obj in scene.objects:
        hit, t, _ = intersect_batch(obj.patch, origins, dirs, tmin=tmin)
        if max_t is not None:
            hit = hit & (t < max_t)
        occluded |= hit
        if occluded.all():
            break
    return occluded


def shadow_batch(scene: Scene, points: np.ndarray, normals: np.ndarray,
                 light: LightSource) -> np.ndarray:
    """Occlusion mask for one light over a batch of surface points."""
    origins = points + SHADOW_BIAS * normals
    if isinstance(light, Directional):
        dirs = np.broadcast_to(-light.direction, origins.shape)
        return _any_hit(scene, origins, dirs)
    if isinstance(light, PointLight):
        offset = light.position - origins
        dist = np.sqrt(dot(offset, offset))
        dirs = offset / dist[..., np.newaxis]
        return _any_hit(scene, origins, dirs, max_t=dist - SHADOW_BIAS)
    # ambient, headlight and sky never use the single-ray path
    return np.zeros(origins.shape[:-1], dtype=bool)


def shadow_query(point: np.ndarray, light: LightSource, scene: Scene) -> bool:
    """Is the straight path from ``point`` toward ``light`` blocked?

    Directional and point lights cast a single ray (segment for point lights);
    ambient and headlight are never occluded here, and the sky is handled
    per quadrature sample during shading instead.
    """
    point = np.asarray(point, dtype=np.float64)
    zero = np.zeros(3)
    return bool(shadow_batch(scene, point[np.newaxis, :], zero[np.newaxis, :], light)[0])


def _lights_for(scene: Scene, obj: SceneObject):
    if obj.lights is None:
        return list(enumerate(scene.lights))
    return [(i, scene.lights[i]) for i in obj.lights]


def _shade_tile(scene: Scene, options: RenderOptions, origins: np.ndarray,
                dirs: np.ndarray) -> np.ndarray:
    shape = origins.shape[:-1]
    t_best = np.full(shape, np.inf)
    obj_idx = np.full(shape, -1, dtype=np.int64)
    normal_best = np.zeros(origins.shape)
    for k, obj in enumerate(scene.objects):
        hit, t, normals = intersect_batch(obj.patch, origins, dirs)
        closer = hit & (t < t_best)
        t_best = np.where(closer, t, t_best)
        obj_idx = np.where(closer, k, obj_idx)
        normal_best = np.where(closer[..., np.newaxis], normals, normal_best)

    pixels = np.empty(origins.shape, dtype=np.float64)
    pixels[...] = scene.background
    naive = options.superposition_mode == "naive_encoded_sum"

    for k, obj in enumerate(scene.objects):
        mask = obj_idx == k
        if not mask.any():
            continue
        pts = origins[mask] + t_best[mask][..., np.newaxis] * dirs[mask]
        nrm = normal_best[mask]
        view = -dirs[mask]
        accum = np.zeros_like(pts)
        sky_origins = None
        for _, light in _lights_for(scene, obj):
            occluder = None
            if isinstance(light, OvercastSky) and options.shadows:
                if sky_origins is None:
                    sky_origins = pts + SHADOW_BIAS * nrm
                occluder = lambda sample_dirs, o=sky_origins: _any_hit(scene, o, sample_dirs)
            contrib = light_contribution(light, pts, nrm, view, obj.material,
                                         options.specular_model, sky_occluder=occluder,
                                         sky_samples=options.sky_samples)
            if options.shadows and isinstance(light, (Directional, PointLight)):
                lit = ~shadow_batch(scene, pts, nrm, light)
                contrib = contrib * lit[..., np.newaxis]
            accum += encode(options.output_tf, contrib) if naive else contrib
        if scene.env is not None and obj.material.reflectivity > 0.0:
            mirror = obj.material.reflectivity * env_reflection(view, nrm, scene.env)
            accum += encode(options.output_tf, mirror) if naive else mirror
        pixels[mask] = accum
    return pixels


def render(scene: Scene, options: RenderOptions | None = None,
           workers: int | None = None) -> Framebuffer:
    """Render the scene; returns the linear framebuffer with overflow mask.

    ``workers`` splits the image into that many row bands rendered on a
    thread pool. Output is byte-identical for any worker count.
    """
    options = options or RenderOptions()
    count = resolve_workers(workers)
    origins, dirs = scene.camera.rays()
    fb = Framebuffer.zeros(scene.camera.width, scene.camera.height)
    bands = [b for b in np.array_split(np.arange(scene.camera.height), count) if b.size]
    if len(bands) <= 1:
        fb.pixels[...] = _shade_tile(scene, options, origins, dirs)
    else:
        def run(band):
            return band[0], _shade_tile(scene, options, origins[band], dirs[band])

        with ThreadPoolExecutor(max_workers=len(bands)) as pool:
            for start, tile in pool.map(run, bands):
                fb.pixels[start : start + tile.shape[0]] = tile
    fb.refresh_overflow()
    return fb
