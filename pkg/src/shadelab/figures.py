"""Procedural catalog of the illustrative scenes.

Two scene families plus three standalone setups:

* fig1a-fig1e: a sphere resting on a floor plane under five lighting rigs
  (headlight; one directional plus ambient; headlight with two directionals
  and a reflection map; eight directional lights on a view-side cone; the
  gradated overcast sky with shadows).
* fig2a-fig2e: a plate studded with raised and sunken spherical caps under
  the same five rigs, in "bump", "dent", and "mixed" layouts.
* fig5_pair: a matte white sphere rendered twice, once with a raw (identity)
  display transfer and once gamma-corrected.
* fig6_pair: three matte balls under two symmetric directional lights where
  the outer balls see one light each and the third sees both, rendered with
  naive per-light encoding and with linear accumulation.
* fig7: two identical glossy balls and an unattenuated point light whose
  rendered symbol matches the near ball's half-max highlight diameter; the
  far highlight comes out larger.

Ball centers and camera extents in fig6 are chosen on the dyadic pixel grid
(extent 8 over 512 pixels, spacing 2.5 = 160 pixels, centers on pixel
centers), which makes the right ball's pixels the exact float sum of the
other two balls' pixels in linear accumulation. Several tests assert that
equality bytewise.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core.camera import Camera
from .core.geometry import Plane, PolarCap, Sphere
from .core.transfer import Identity, PowerLaw
from .core.vec import normalize, vec3
from .diagnostics import ImageDifference, image_difference
from .illumination import (
    Ambient,
    Directional,
    Headlight,
    Material,
    OvercastSky,
    PointLight,
    horizon_gradient_map,
)
from .renderer import RenderOptions, Scene, SceneObject, render

FIGURE_IDS = (
    "fig1a", "fig1b", "fig1c", "fig1d", "fig1e",
    "fig2a", "fig2b", "fig2c", "fig2d", "fig2e",
    "fig5_pair", "fig6_pair", "fig7",
)

TITLES = {
    "fig1a": "sphere on a floor, single headlight",
    "fig1b": "sphere on a floor, one directional light plus ambient",
    "fig1c": "sphere on a floor, headlight + two directionals + reflection map",
    "fig1d": "sphere on a floor, eight directional lights on a view cone",
    "fig1e": "sphere on a floor under the gradated overcast sky, with shadows",
    "fig2a": "cap plate (raised/sunken), single headlight",
    "fig2b": "cap plate, one oblique directional light plus ambient",
    "fig2c": "cap plate, headlight + two directionals + reflection map",
    "fig2d": "cap plate, eight directional lights on a view cone",
    "fig2e": "cap plate under the gradated overcast sky, with shadows",
    "fig5_pair": "matte sphere, raw vs gamma-corrected display",
    "fig6_pair": "three balls sharing two lights, naive vs linear superposition",
    "fig7": "two glossy balls and a point light; the far highlight is bigger",
}


@dataclass(frozen=True)
class FigureSpec:
    """One catalog entry: the scene plus one or more render option sets.

    Single-look figures carry a lone "default" variant; the display-pipeline
    pairs carry "naive" and "gamma" variants over the identical scene.
    """

    figure_id: str
    title: str
    scene: Scene
    variants: dict


def _camera_direction(camera: Camera, cam_vec) -> np.ndarray:
    """Unit world vector from camera-frame (right, up, forward) components."""
    right, true_up, forward = camera.basis
    v = np.asarray(cam_vec, dtype=np.float64)
    return normalize(v[0] * right + v[1] * true_up + v[2] * forward)


def _ring_lights(camera: Camera, count: int = 8, half_angle_deg: float = 45.0,
                 intensity: float = 0.15):
    """Directional lights on a cone around the view axis, shining inward."""
    right, true_up, forward = camera.basis
    half = np.radians(half_angle_deg)
    lights = []
    for k in range(count):
        phi = 2.0 * np.pi * k / count
        travel = (np.cos(half) * forward
                  + np.sin(half) * (np.cos(phi) * right + np.sin(phi) * true_up))
        lights.append(Directional(direction=travel, intensity=intensity))
    return tuple(lights)


# ---------------------------------------------------------------------------
# fig1: sphere on a floor

_MATTE_GRAY = Material(k_ambient=0.8, k_diffuse=0.8)


def _fig1_scene(which: str, ambient: float, resolution: int) -> Scene:
    camera = Camera("perspective", vec3(0.0, 2.4, 6.0),
                    vec3(0.0, 0.7, 0.0) - vec3(0.0, 2.4, 6.0),
                    vec3(0.0, 1.0, 0.0), resolution, resolution, 50.0)
    glossy = Material(k_ambient=0.8, k_diffuse=0.8, k_specular=0.5, m_shiny=30,
                      seven_bit=True)
    floor = Plane(vec3(0.0, 0.0, 0.0), vec3(0.0, 1.0, 0.0))
    ball = Sphere(vec3(0.0, 1.0, 0.0), 1.0)
    env = None
    background = vec3(0.0, 0.0, 0.0)
    if which == "a":
        ball_mat = glossy
        lights = (Headlight(1.0),)
    elif which == "b":
        ball_mat = glossy
        lights = (Directional(_camera_direction(camera, (1.0, -1.0, 1.0))),
                  Ambient(ambient))
    elif which == "c":
        ball_mat = replace(glossy, reflectivity=0.25)
        env = horizon_gradient_map(up=(0.0, 1.0, 0.0))
        lights = (Headlight(0.5),
                  Directional(_camera_direction(camera, (1.0, -1.0, 1.0)), 0.35),
                  Directional(_camera_direction(camera, (-1.0, -1.0, 1.0)), 0.35))
    elif which == "d":
        ball_mat = replace(glossy, k_specular=0.8, m_shiny=60)
        lights = _ring_lights(camera)
    elif which == "e":
        ball_mat = _MATTE_GRAY
        lights = (OvercastSky(1.0, up=(0.0, 1.0, 0.0)),)
        background = vec3(1.0, 1.0, 1.0) / 3.0  # horizon radiance of the dome
    else:
        raise ValueError(f"unknown fig1 variant {which!r}")
    return Scene(camera=camera,
                 objects=(SceneObject(floor, _MATTE_GRAY), SceneObject(ball, ball_mat)),
                 lights=lights, background=background, env=env)


# ---------------------------------------------------------------------------
# fig2: plate of raised and sunken caps

CAP_GRID_X = (-1.5, -0.5, 0.5, 1.5)
CAP_GRID_Y = (-0.5, 0.5)
CAP_RADIUS = 0.4
CAP_POLAR = np.radians(80.0)


def _cap_orientation(layout: str, ix: int, iy: int) -> str:
    if layout == "bump":
        return "bump"
    if layout == "dent":
        return "dent"
    if layout == "mixed":
        return "bump" if (ix + iy) % 2 == 0 else "dent"
    raise ValueError(f"unknown cap layout {layout!r}; choose bump, dent, or mixed")


def _plate_objects(layout: str, material: Material):
    """Plate plane (with punch-outs) plus the 4x2 cap grid.

    The hole set is identical for every layout, so bump/dent twins differ
    only in cap orientation; both reuse the same squared-radius comparison
    the cap membership test reduces to, keeping the plate/cap pixel
    partition exactly complementary.
    """
    axis = vec3(0.0, 0.0, 1.0)
    rim_offset = CAP_RADIUS * np.cos(CAP_POLAR)
    rim_radius = CAP_RADIUS * np.sin(CAP_POLAR)
    holes = []
    caps = []
    for iy, gy in enumerate(CAP_GRID_Y):
        for ix, gx in enumerate(CAP_GRID_X):
            center = vec3(gx, gy, -rim_offset)
            cap = PolarCap(center, CAP_RADIUS, axis, CAP_POLAR,
                           orientation=_cap_orientation(layout, ix, iy))
            caps.append(SceneObject(cap, material))
            holes.append((vec3(gx, gy, 0.0), rim_radius))
    plate = Plane(vec3(0.0, 0.0, 0.0), axis, holes=tuple(holes))
    return (SceneObject(plate, material), *caps)


def _fig2_scene(which: str, layout: str, ambient: float, resolution: int,
                tilt: bool) -> Scene:
    if tilt:
        view = vec3(0.0, np.sin(np.radians(15.0)), -np.cos(np.radians(15.0)))
        camera = Camera("perspective", -6.0 * view, view, vec3(0.0, 1.0, 0.0),
                        resolution, resolution, 45.0)
    else:
        camera = Camera("orthographic", vec3(0.0, 0.0, 5.0), vec3(0.0, 0.0, -1.0),
                        vec3(0.0, 1.0, 0.0), resolution, resolution, 4.5)
    material = _MATTE_GRAY
    env = None
    background = vec3(0.0, 0.0, 0.0)
    if which == "a":
        lights = (Headlight(1.0),)
    elif which == "b":
        lights = (Directional(_camera_direction(camera, (1.0, -1.0, 1.0))),
                  Ambient(ambient))
    elif which == "c":
        material = replace(material, reflectivity=0.25)
        env = horizon_gradient_map(up=(0.0, 0.0, 1.0))
        lights = (Headlight(0.5),
                  Directional(_camera_direction(camera, (1.0, -1.0, 1.0)), 0.35),
                  Directional(_camera_direction(camera, (-1.0, -1.0, 1.0)), 0.35))
    elif which == "d":
        lights = _ring_lights(camera)
    elif which == "e":
        lights = (OvercastSky(1.0, up=(0.0, 0.0, 1.0)),)
        background = vec3(1.0, 1.0, 1.0) / 3.0
    else:
        raise ValueError(f"unknown fig2 variant {which!r}")
    return Scene(camera=camera, objects=_plate_objects(layout, material),
                 lights=lights, background=background, env=env)


# ---------------------------------------------------------------------------
# fig5 and fig6: display-pipeline pairs

DISPLAY_GAMMA = 2.2


def _fig5_scene(resolution: int) -> Scene:
    camera = Camera("orthographic", vec3(0.0, 0.0, 5.0), vec3(0.0, 0.0, -1.0),
                    vec3(0.0, 1.0, 0.0), resolution, resolution, 2.5)
    white = Material(k_diffuse=1.0)
    light = Directional(direction=normalize(vec3(1.0, -1.0, -0.35)))
    return Scene(camera=camera,
                 objects=(SceneObject(Sphere(vec3(0.0, 0.0, 0.0), 1.0), white),),
                 lights=(light,))


# Half a pixel at extent 8 over 512 columns; puts the ball centers exactly on
# pixel centers so the three balls sample identical normals 160 columns apart.
FIG6_EXTENT = 8.0
FIG6_OFFSET = 0.0078125
FIG6_SPACING = 2.5


def _fig6_scene(resolution: int) -> Scene:
    camera = Camera("orthographic", vec3(0.0, 0.0, 6.0), vec3(0.0, 0.0, -1.0),
                    vec3(0.0, 1.0, 0.0), resolution, resolution, FIG6_EXTENT)
    white = Material(k_diffuse=1.0)
    travel_a = normalize(vec3(1.0, -1.0, -1.0))
    travel_b = vec3(-travel_a[0], travel_a[1], travel_a[2])  # exact mirror in x
    lights = (Directional(travel_a, 0.5), Directional(travel_b, 0.5))
    y = FIG6_OFFSET
    balls = []
    for cx, seen in ((FIG6_OFFSET - FIG6_SPACING, (0,)),
                     (FIG6_OFFSET, (1,)),
                     (FIG6_OFFSET + FIG6_SPACING, None)):
        balls.append(SceneObject(Sphere(vec3(cx, y, 0.0), 1.0), white, lights=seen))
    return Scene(camera=camera, objects=tuple(balls), lights=lights)


# ---------------------------------------------------------------------------
# fig7: two balls and a point light


def _fig7_scene(resolution: int) -> Scene:
    camera = Camera("orthographic", vec3(0.0, 0.0, 8.0), vec3(0.0, 0.0, -1.0),
                    vec3(0.0, 1.0, 0.0), resolution, resolution, 6.0)
    radius = 1.0
    near_center = vec3(-1.75, 0.0, 0.0)
    far_center = vec3(1.75, 0.0, 0.0)
    light_pos = vec3(-2.9, 1.0, 1.8)
    glossy = Material(k_diffuse=0.3, k_specular=0.8, m_shiny=127, seven_bit=True)

    # Size the light symbol to the near ball's half-max highlight diameter:
    # the mirrored view vector turns at 2/r per unit of surface arc and the
    # incoming light direction at 1/d_s (surface-to-light distance), so the
    # half-max lobe angle alpha spans alpha / (2/r + 1/d_s) of arc.
    alpha = float(np.arccos(2.0 ** (-1.0 / glossy.m_shiny)))
    d_surf = float(np.linalg.norm(light_pos - near_center)) - radius
    symbol_radius = alpha / (2.0 / radius + 1.0 / d_surf)

    flat_white = Material(k_ambient=1.0)
    objects = (
        SceneObject(Sphere(near_center, radius), glossy, lights=(0,)),
        SceneObject(Sphere(far_center, radius), glossy, lights=(0,)),
        SceneObject(Sphere(light_pos, symbol_radius), flat_white, lights=(1,)),
    )
    lights = (PointLight(light_pos, intensity=1.0, attenuation="none"), Ambient(1.0))
    return Scene(camera=camera, objects=objects, lights=lights)


# ---------------------------------------------------------------------------
# catalog front door


def build(figure_id: str, *, layout: str | None = None, ambient: float = 0.2,
          resolution: int = 512, tilt: bool = False) -> FigureSpec:
    """Construct a catalog figure; deterministic for identical arguments.

    ``layout`` (bump/dent/mixed, default mixed) and ``tilt`` (a 15-degree
    perspective view for qualitative inspection) apply to fig2 entries only.
    """
    if figure_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure id {figure_id!r}; "
                         f"choose from {', '.join(FIGURE_IDS)}")
    is_fig2 = figure_id.startswith("fig2")
    if (layout is not None or tilt) and not is_fig2:
        raise ValueError("layout/tilt only apply to fig2 figures")

    default = {"default": RenderOptions()}
    if figure_id.startswith("fig1"):
        scene = _fig1_scene(figure_id[-1], ambient, resolution)
        variants = {"default": RenderOptions(shadows=True)} if figure_id == "fig1e" else default
    elif is_fig2:
        scene = _fig2_scene(figure_id[-1], layout or "mixed", ambient, resolution, tilt)
        variants = {"default": RenderOptions(shadows=True)} if figure_id == "fig2e" else default
    elif figure_id == "fig5_pair":
        scene = _fig5_scene(resolution)
        variants = {
            "naive": RenderOptions(output_tf=Identity()),
            "gamma": RenderOptions(output_tf=PowerLaw(DISPLAY_GAMMA)),
        }
    elif figure_id == "fig6_pair":
        scene = _fig6_scene(resolution)
        variants = {
            "naive": RenderOptions(superposition_mode="naive_encoded_sum",
                                   output_tf=Identity()),
            "gamma": RenderOptions(output_tf=PowerLaw(DISPLAY_GAMMA)),
        }
    else:
        scene = _fig7_scene(resolution)
        variants = default
    return FigureSpec(figure_id=figure_id, title=TITLES[figure_id], scene=scene,
                      variants=variants)


# ---------------------------------------------------------------------------
# figure-specific measurements


def bump_dent_difference(figure_id: str, resolution: int = 512,
                         workers: int | None = 1) -> ImageDifference:
    """Linear difference between all-raised and all-sunken twins of a fig2 entry."""
    if not figure_id.startswith("fig2"):
        raise ValueError("bump/dent twins exist for fig2 figures only")
    fbs = []
    for layout in ("bump", "dent"):
        spec = build(figure_id, layout=layout, resolution=resolution)
        options = next(iter(spec.variants.values()))
        fbs.append(render(spec.scene, options, workers=workers))
    return image_difference(*fbs)


def _center_column(camera: Camera, x: float) -> int:
    px, _ = camera.pixel_grid()
    return int(np.argmin(np.abs(px[0] - x)))


def fig6_superposition_measurement(display_gamma: float = DISPLAY_GAMMA,
                                   resolution: int = 512,
                                   workers: int | None = 1) -> float:
    """Displayed-luminance superposition ratio read off the three-ball render.

    Uses the naive variant's framebuffer (the per-light encoded sum): along
    the center columns of the single-light balls the two lights contribute
    the same value v, and the shared ball's center column holds 2v. The
    ratio displayed(2v) / (2 displayed(v)), averaged over rows with usable
    signal, is the image-path measurement of 2^(gamma-1).
    """
    from .core.transfer import displayed_luminance

    spec = build("fig6_pair", resolution=resolution)
    fb = render(spec.scene, spec.variants["naive"], workers=workers)
    camera = spec.scene.camera
    col_single = _center_column(camera, FIG6_OFFSET - FIG6_SPACING)
    col_both = _center_column(camera, FIG6_OFFSET + FIG6_SPACING)
    v = fb.pixels[:, col_single, 0]
    combined = fb.pixels[:, col_both, 0]
    usable = v > 0.05
    if not usable.any():
        raise RuntimeError("no usable pixels on the single-light ball's center column")
    ratio = (displayed_luminance(np.clip(combined[usable], 0.0, 1.0), display_gamma)
             / (2.0 * displayed_luminance(v[usable], display_gamma)))
    return float(ratio.mean())


def fig7_highlight_areas(resolution: int = 512,
                         workers: int | None = 1) -> tuple[int, int]:
    """Half-max highlight pixel areas (near ball, far ball) in the fig7 scene.

    Measured on a specular-only twin of the scene (diffuse and ambient
    stripped) so the half-max threshold applies to the lobe alone; each
    half-image is thresholded against its own peak.
    """
    spec = build("fig7", resolution=resolution)
    stripped = tuple(
        SceneObject(o.patch, replace(o.material, k_diffuse=0.0, k_ambient=0.0),
                    lights=o.lights)
        for o in spec.scene.objects
    )
    scene = Scene(camera=spec.scene.camera, objects=stripped,
                  lights=spec.scene.lights, background=spec.scene.background)
    fb = render(scene, workers=workers)
    value = fb.pixels[..., 0]
    mid = value.shape[1] // 2
    areas = []
    for half in (value[:, :mid], value[:, mid:]):
        peak = float(half.max())
        if peak <= 0.0:
            raise RuntimeError("no highlight found in one image half")
        areas.append(int((half >= 0.5 * peak).sum()))
    return areas[0], areas[1]
