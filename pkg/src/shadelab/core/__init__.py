from .camera import Camera
from .framebuffer import Framebuffer
from .geometry import Hit, Plane, PolarCap, Sphere, SurfacePatch, intersect, intersect_batch
from .imageio import quantize, read_pfm, read_ppm, write_image, write_linear
from .quadrature import hemisphere_nodes, hemisphere_quadrature, node_counts
from .transfer import (
    Identity,
    PowerLaw,
    SrgbPiecewise,
    TransferFunction,
    decode,
    displayed_luminance,
    encode,
)
from .vec import cross, dot, norm, normalize, orthonormal_basis, reflect, vec3

__all__ = [
    "Camera",
    "Framebuffer",
    "Hit",
    "Identity",
    "Plane",
    "PolarCap",
    "PowerLaw",
    "Sphere",
    "SrgbPiecewise",
    "SurfacePatch",
    "TransferFunction",
    "cross",
    "decode",
    "displayed_luminance",
    "dot",
    "encode",
    "hemisphere_nodes",
    "hemisphere_quadrature",
    "intersect",
    "intersect_batch",
    "node_counts",
    "norm",
    "normalize",
    "orthonormal_basis",
    "quantize",
    "read_pfm",
    "read_ppm",
    "reflect",
    "vec3",
    "write_image",
    "write_linear",
]
