"""CPU renderer and diagnostics for the fixed-function lighting pipeline."""
from .core.camera import Camera
from .core.framebuffer import Framebuffer
from .core.geometry import Plane, PolarCap, Sphere
from .core.transfer import Identity, PowerLaw, SrgbPiecewise
from .core.vec import vec3
from .diagnostics import DiagnosticReport, run_full_report, run_report
from .figures import FIGURE_IDS, build
from .illumination import (
    Ambient,
    Directional,
    EnvironmentMap,
    Headlight,
    Material,
    OvercastSky,
    PointLight,
    SpecularModel,
)
from .renderer import RenderOptions, Scene, SceneObject, render

__version__ = "0.1.0"

__all__ = [
    "Ambient",
    "Camera",
    "DiagnosticReport",
    "Directional",
    "EnvironmentMap",
    "FIGURE_IDS",
    "Framebuffer",
    "Headlight",
    "Identity",
    "Material",
    "OvercastSky",
    "Plane",
    "PointLight",
    "PolarCap",
    "PowerLaw",
    "RenderOptions",
    "Scene",
    "SceneObject",
    "SpecularModel",
    "Sphere",
    "SrgbPiecewise",
    "build",
    "render",
    "run_full_report",
    "run_report",
    "vec3",
]
