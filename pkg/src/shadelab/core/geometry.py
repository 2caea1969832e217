"""Ray-intersectable surface patches: spheres, planes, spherical caps.

All intersectors are batched: origins and directions are (..., 3) arrays and
the results broadcast over the leading axes. Misses are reported with t = inf
so nearest-patch selection is a plain argmin.

The sphere quadratic is solved in the geometric (foot-of-perpendicular) form

    L = center - origin,  t_ca = L . d,  m = t_ca d - L,
    disc = r^2 - m . m,   t = t_ca -/+ sqrt(disc),
    surface offset = m -/+ sqrt(disc) d

rather than the abc form. For rays parallel to a cap's axis the axial part of
``m`` cancels exactly in IEEE arithmetic, which makes raised and sunken caps
produce bit-equal discriminants and membership tests. The sunken ("dent")
orientation reuses the raised-cap intersector on the ray mirrored through the
rim plane and flips the tangential normal components, so the two orientations
differ by exact sign changes only. Top-down renders of the two are therefore
byte-identical under a headlight, which one of the diagnostics depends on.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .vec import dot, normalize

DEFAULT_TMIN = 1e-9


@dataclass(frozen=True)
class Hit:
    t: float
    point: np.ndarray
    normal: np.ndarray


@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError("sphere radius must be positive")
        object.__setattr__(self, "center", np.asarray(self.center, dtype=np.float64))


@dataclass(frozen=True)
class Plane:
    """Infinite plane, optionally with circular punch-outs.

    ``holes`` is a tuple of (center, radius) pairs lying in the plane; hits
    inside a hole are discarded. Plates with sunken caps need the punch-outs,
    otherwise the plane in front would occlude the cap surface below it.
    """

    point: np.ndarray
    normal: np.ndarray
    holes: tuple = ()
    _hole_centers: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    _hole_r2: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "point", np.asarray(self.point, dtype=np.float64))
        object.__setattr__(self, "normal", normalize(np.asarray(self.normal, dtype=np.float64)))
        if self.holes:
            centers = np.array([np.asarray(c, dtype=np.float64) for c, _ in self.holes])
            radii = np.array([float(r) for _, r in self.holes], dtype=np.float64)
            if np.any(radii <= 0):
                raise ValueError("hole radii must be positive")
            object.__setattr__(self, "_hole_centers", centers)
            object.__setattr__(self, "_hole_r2", radii * radii)


@dataclass(frozen=True)
class PolarCap:
    """Spherical cap bounded by a maximum polar angle from ``axis``.

    ``center`` is the center of the underlying sphere for the raised ("bump")
    orientation; the cap is the set of sphere points within ``max_polar_angle``
    of ``axis``, its rim lying in the plane (p - center) . axis = r cos(angle).
    The sunken ("dent") orientation is the mirror image of that cap through
    the rim plane, parameterized by the same fields, and reports the visible
    (bowl-side) normal.
    """

    center: np.ndarray
    radius: float
    axis: np.ndarray
    max_polar_angle: float
    orientation: str = "bump"

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError("cap radius must be positive")
        if not 0.0 < self.max_polar_angle <= np.pi / 2.0:
            raise ValueError("max polar angle must lie in (0, pi/2]")
        if self.orientation not in ("bump", "dent"):
            raise ValueError(f"unknown cap orientation {self.orientation!r}")
        object.__setattr__(self, "center", np.asarray(self.center, dtype=np.float64))
        object.__setattr__(self, "axis", normalize(np.asarray(self.axis, dtype=np.float64)))

    @property
    def rim_offset(self) -> float:
        """Distance from the sphere center to the rim plane along the axis."""
        return self.radius * np.cos(self.max_polar_angle)

    @property
    def rim_radius(self) -> float:
        return self.radius * np.sin(self.max_polar_angle)


SurfacePatch = Sphere | Plane | PolarCap


def _sphere_roots(center, radius, origins, dirs):
    """Both quadratic roots plus the perpendicular offset decomposition."""
    big_l = center - origins
    t_ca = dot(big_l, dirs)
    foot = t_ca[..., np.newaxis] * dirs - big_l
    d2 = dot(foot, foot)
    disc = radius * radius - d2
    valid = disc >= 0.0
    thc = np.sqrt(np.maximum(disc, 0.0))
    return big_l, t_ca, foot, thc, valid


def _sphere_batch(patch: Sphere, origins, dirs, tmin):
    _, t_ca, foot, thc, valid = _sphere_roots(patch.center, patch.radius, origins, dirs)
    t_near = t_ca - thc
    t_far = t_ca + thc
    use_near = t_near > tmin
    t = np.where(use_near, t_near, t_far)
    hit = valid & (t > tmin)
    sign = np.where(use_near, -thc, thc)
    normals = (foot + sign[..., np.newaxis] * dirs) / patch.radius
    t = np.where(hit, t, np.inf)
    return hit, t, normals


def _plane_batch(patch: Plane, origins, dirs, tmin):
    denom = dot(dirs, patch.normal)
    parallel = np.abs(denom) < 1e-14
    safe = np.where(parallel, 1.0, denom)
    t = dot(patch.point - origins, patch.normal) / safe
    hit = (~parallel) & (t > tmin)
    if patch._hole_centers is not None and np.any(hit):
        points = origins + t[..., np.newaxis] * dirs
        inside = np.zeros(t.shape, dtype=bool)
        for hc, r2 in zip(patch._hole_centers, patch._hole_r2):
            delta = points - hc
            # 1e-9 relative slack keeps the punch-out at least as wide as cap
            # coverage so plate pixels are exactly cap-or-plane, never both
            inside |= dot(delta, delta) <= r2 * (1.0 + 1e-9)
        hit &= ~inside
    flip = np.where(denom > 0.0, -1.0, 1.0)
    normals = flip[..., np.newaxis] * np.broadcast_to(patch.normal, origins.shape)
    t = np.where(hit, t, np.inf)
    return hit, t, normals


def _cap_bump_batch(patch: PolarCap, origins, dirs, tmin):
    rim = patch.rim_offset
    _, t_ca, foot, thc, valid = _sphere_roots(patch.center, patch.radius, origins, dirs)
    foot_ax = dot(foot, patch.axis)
    dir_ax = dot(dirs, patch.axis)
    t_hit = np.full(t_ca.shape, np.inf)
    sign_hit = np.zeros(t_ca.shape)
    for sign in (-1.0, 1.0):
        t_root = t_ca + sign * thc
        axial = foot_ax + (sign * thc) * dir_ax
        ok = valid & (t_root > tmin) & (axial >= rim) & (t_root < t_hit)
        t_hit = np.where(ok, t_root, t_hit)
        sign_hit = np.where(ok, sign, sign_hit)
    hit = np.isfinite(t_hit)
    normals = (foot + (sign_hit * thc)[..., np.newaxis] * dirs) / patch.radius
    return hit, t_hit, normals


def _cap_batch(patch: PolarCap, origins, dirs, tmin):
    if patch.orientation == "bump":
        return _cap_bump_batch(patch, origins, dirs, tmin)
    # Mirror the ray through the rim plane, intersect the raised twin, then
    # mirror the normal back (and flip it inward so the bowl side is lit).
    # All three steps are exact sign changes for rays parallel to the axis.
    axis = patch.axis
    height = dot(origins, axis) - (dot(patch.center, axis) + patch.rim_offset)
    m_origins = origins - (2.0 * height)[..., np.newaxis] * axis
    m_dirs = dirs - (2.0 * dot(dirs, axis))[..., np.newaxis] * axis
    hit, t, m_normals = _cap_bump_batch(patch, m_origins, m_dirs, tmin)
    normals = (2.0 * dot(m_normals, axis))[..., np.newaxis] * axis - m_normals
    return hit, t, normals


def intersect_batch(patch: SurfacePatch, origins: np.ndarray, dirs: np.ndarray, tmin: float = DEFAULT_TMIN):
    """Intersect a ray bundle with one patch.

    Returns (hit, t, normals) with shapes (...), (...), (..., 3). ``t`` is inf
    where there is no hit; normals are unit outward (planes face the origin
    side, sunken caps face into the bowl).
    """
    origins = np.asarray(origins, dtype=np.float64)
    dirs = np.asarray(dirs, dtype=np.float64)
    if isinstance(patch, Sphere):
        return _sphere_batch(patch, origins, dirs, tmin)
    if isinstance(patch, Plane):
        return _plane_batch(patch, origins, dirs, tmin)
    if isinstance(patch, PolarCap):
        return _cap_batch(patch, origins, dirs, tmin)
    raise TypeError(f"not a surface patch: {patch!r}")


def intersect(origin: np.ndarray, direction: np.ndarray, patch: SurfacePatch, tmin: float = DEFAULT_TMIN) -> Hit | None:
    """Nearest intersection of a single ray with ``patch``, or None."""
    origin = np.asarray(origin, dtype=np.float64)
    direction = normalize(np.asarray(direction, dtype=np.float64))
    hit, t, normal = intersect_batch(patch, origin[np.newaxis, :], direction[np.newaxis, :], tmin)
    if not hit[0]:
        return None
    point = origin + t[0] * direction
    return Hit(t=float(t[0]), point=point, normal=normal[0])
