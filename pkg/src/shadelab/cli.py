"""Command-line front door: render figures or ad-hoc scenes, run audits.

Exit codes: 0 success, 1 usage or I/O error, 2 audit failure under --strict.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import figures
from .core.camera import Camera
from .core.imageio import write_image, write_linear
from .core.transfer import Identity, PowerLaw, SrgbPiecewise
from .core.vec import vec3
from .diagnostics import AUDIT_SECTIONS, run_report
from .illumination import (
    Ambient,
    Directional,
    Headlight,
    Material,
    OvercastSky,
    PointLight,
    SpecularModel,
)
from .core.geometry import Plane, PolarCap, Sphere
from .renderer import RenderOptions, Scene, SceneObject, display_transfer, render


class _Parser(argparse.ArgumentParser):
    """Argument parser that exits 1 on usage errors (argparse defaults to 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


# ---------------------------------------------------------------------------
# scene files


def _floats(parts, count, line_no):
    if len(parts) != count:
        raise ValueError(f"line {line_no}: expected {count} numbers, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"line {line_no}: malformed number") from None


def _material(values):
    ka, kd, ks, m = values
    return Material(k_ambient=ka, k_diffuse=kd, k_specular=ks, m_shiny=m)


def parse_scene_file(path) -> Scene:
    """Line-oriented scene description, one primitive or light per line.

    Keywords (all coefficients grayscale):

        camera perspective|orthographic px py pz vx vy vz ux uy uz W H fov|extent
        background r g b
        sphere cx cy cz radius ka kd ks m
        plane px py pz nx ny nz ka kd ks m
        cap cx cy cz radius ax ay az polar_deg bump|dent ka kd ks m
        directional dx dy dz intensity
        point px py pz intensity [none|inverse_square]
        headlight intensity
        ambient intensity
        sky zenith ux uy uz

    Blank lines and ``#`` comments are ignored.
    """
    camera = None
    background = (0.0, 0.0, 0.0)
    objects: list[SceneObject] = []
    lights = []
    text = Path(path).read_text()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, *parts = line.split()
        if keyword == "camera":
            if len(parts) < 1 or parts[0] not in ("perspective", "orthographic"):
                raise ValueError(f"line {line_no}: camera kind must be "
                                 "perspective or orthographic")
            v = _floats(parts[1:], 12, line_no)
            camera = Camera(parts[0], vec3(*v[0:3]), vec3(*v[3:6]), vec3(*v[6:9]),
                            int(v[9]), int(v[10]), v[11])
        elif keyword == "background":
            background = tuple(_floats(parts, 3, line_no))
        elif keyword == "sphere":
            v = _floats(parts, 8, line_no)
            objects.append(SceneObject(Sphere(vec3(*v[0:3]), v[3]), _material(v[4:8])))
        elif keyword == "plane":
            v = _floats(parts, 10, line_no)
            objects.append(SceneObject(Plane(vec3(*v[0:3]), vec3(*v[3:6])),
                                       _material(v[6:10])))
        elif keyword == "cap":
            if len(parts) != 13 or parts[8] not in ("bump", "dent"):
                raise ValueError(f"line {line_no}: cap needs 8 numbers, an "
                                 "orientation (bump|dent), then 4 coefficients")
            v = _floats(parts[:8] + parts[9:], 12, line_no)
            cap = PolarCap(vec3(*v[0:3]), v[3], vec3(*v[4:7]), math.radians(v[7]),
                           orientation=parts[8])
            objects.append(SceneObject(cap, _material(v[8:12])))
        elif keyword == "directional":
            v = _floats(parts, 4, line_no)
            lights.append(Directional(vec3(*v[0:3]), v[3]))
        elif keyword == "point":
            attenuation = "none"
            if len(parts) == 5:
                attenuation = parts[4]
                parts = parts[:4]
                if attenuation not in ("none", "inverse_square"):
                    raise ValueError(f"line {line_no}: attenuation must be "
                                     "none or inverse_square")
            v = _floats(parts, 4, line_no)
            lights.append(PointLight(vec3(*v[0:3]), v[3], attenuation=attenuation))
        elif keyword == "headlight":
            lights.append(Headlight(_floats(parts, 1, line_no)[0]))
        elif keyword == "ambient":
            lights.append(Ambient(_floats(parts, 1, line_no)[0]))
        elif keyword == "sky":
            v = _floats(parts, 4, line_no)
            lights.append(OvercastSky(v[0], up=vec3(*v[1:4])))
        else:
            raise ValueError(f"line {line_no}: unknown keyword {keyword!r}")
    if camera is None:
        raise ValueError("scene file defines no camera")
    if not objects:
        raise ValueError("scene file defines no objects")
    if not lights:
        raise ValueError("scene file defines no lights")
    return Scene(camera=camera, objects=tuple(objects), lights=tuple(lights),
                 background=background)


# ---------------------------------------------------------------------------
# option plumbing


def _parse_transfer(text: str):
    if text == "none":
        return Identity()
    if text == "srgb":
        return SrgbPiecewise()
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"--gamma expects a number, 'srgb', or 'none', "
                         f"not {text!r}") from None
    return PowerLaw(value)


def _apply_overrides(options: RenderOptions, args) -> RenderOptions:
    if args.model or args.normalized:
        kind = args.model or options.specular_model.kind
        options = replace(options,
                          specular_model=SpecularModel(kind, normalized=bool(args.normalized)))
    if args.gamma is not None:
        options = replace(options, output_tf=_parse_transfer(args.gamma))
    if args.shadows is not None:
        options = replace(options, shadows=args.shadows == "on")
    if args.superposition is not None:
        mode = {"linear": "linear_then_encode", "naive": "naive_encoded_sum"}
        options = replace(options, superposition_mode=mode[args.superposition])
    return options


def _output_stem(out: str | None, fallback: str) -> Path:
    path = Path(out) if out else Path(f"{fallback}.ppm")
    return path.with_suffix("") if path.suffix in (".ppm", ".pfm") else path


def _write_pair(fb, options: RenderOptions, stem: Path, suffix: str) -> None:
    ppm = stem.with_name(stem.name + suffix + ".ppm")
    pfm = stem.with_name(stem.name + suffix + ".pfm")
    write_image(fb, display_transfer(options), ppm)
    write_linear(fb, pfm)
    print(f"wrote {ppm}")
    print(f"wrote {pfm}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_render(args, parser) -> int:
    if args.figure:
        spec = figures.build(args.figure, layout=args.layout,
                             resolution=args.resolution, tilt=args.tilt)
        stem = _output_stem(args.out, spec.figure_id)
        multi = len(spec.variants) > 1
        for name, options in spec.variants.items():
            options = _apply_overrides(options, args)
            fb = render(spec.scene, options, workers=args.workers)
            _write_pair(fb, options, stem, f"_{name}" if multi else "")
    else:
        scene = parse_scene_file(args.scene)
        options = _apply_overrides(RenderOptions(), args)
        fb = render(scene, options, workers=args.workers)
        _write_pair(fb, options, _output_stem(args.out, Path(args.scene).stem), "")
    return 0


def _cmd_audit(args, parser) -> int:
    sections = None if args.which == "all" else [args.which]
    report = run_report(sections, shininess=args.shininess,
                        display_gamma=args.gamma, resolution=args.resolution,
                        workers=args.workers)
    for line in report.format_lines():
        print(line)
    if args.json:
        Path(args.json).write_text(report.to_json())
        print(f"wrote {args.json}")
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
        print(f"wrote {args.csv}")
    if args.plots:
        from . import plots

        for path in plots.render_report_charts(report, args.plots,
                                               display_gamma=args.gamma):
            print(f"wrote {path}")
    if args.strict and not report.all_passed:
        return 2
    return 0


def _cmd_list_figures(args, parser) -> int:
    for figure_id in figures.FIGURE_IDS:
        print(f"{figure_id:<10} {figures.TITLES[figure_id]}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="shadelab",
                     description="Render the figure catalog and audit the "
                                 "fixed-function lighting pipeline.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="render a catalog figure or a scene file")
    target = p_render.add_mutually_exclusive_group(required=True)
    target.add_argument("--figure", metavar="ID", help="catalog figure id (see list-figures)")
    target.add_argument("--scene", metavar="FILE", help="line-oriented scene description")
    p_render.add_argument("--model", choices=("classic", "modified"),
                          help="specular model override")
    p_render.add_argument("--normalized", action="store_true",
                          help="normalize the modified lobe by (m+2)/(2 pi)")
    p_render.add_argument("--gamma", metavar="G|srgb|none",
                          help="display transfer override for the 8-bit output")
    p_render.add_argument("--shadows", choices=("on", "off"), help="shadow override")
    p_render.add_argument("--superposition", choices=("linear", "naive"),
                          help="sum lights linearly (then encode) or sum encoded values")
    p_render.add_argument("--layout", choices=("bump", "dent", "mixed"),
                          help="cap layout for fig2 figures (default mixed)")
    p_render.add_argument("--tilt", action="store_true",
                          help="15-degree perspective view for fig2 figures")
    p_render.add_argument("--resolution", type=int, default=512,
                          help="figure resolution in pixels (figures only; "
                               "scene files carry their own camera)")
    p_render.add_argument("--workers", type=int, default=None,
                          help="render worker count (default: SHADELAB_THREADS "
                               "or machine parallelism)")
    p_render.add_argument("--out", metavar="PATH",
                          help="output path stem; .ppm plus a .pfm linear twin")
    p_render.set_defaults(handler=_cmd_render)

    p_audit = sub.add_parser("audit", help="run diagnostics and write reports")
    p_audit.add_argument("which", choices=AUDIT_SECTIONS + ("all",),
                         help="diagnostic section to run")
    p_audit.add_argument("--shininess", type=float, default=None,
                         help="shininess exponent for energy/halfangle sections")
    p_audit.add_argument("--gamma", type=float, default=2.2,
                         help="display gamma for superposition/terminator sections")
    p_audit.add_argument("--resolution", type=int, default=512,
                         help="resolution for rendered diagnostics")
    p_audit.add_argument("--workers", type=int, default=None,
                         help="render worker count")
    p_audit.add_argument("--json", metavar="PATH", help="write the report as JSON")
    p_audit.add_argument("--csv", metavar="PATH", help="write the report as CSV")
    p_audit.add_argument("--plots", metavar="DIR", help="write summary charts here")
    p_audit.add_argument("--strict", action="store_true",
                         help="exit 2 if any metric fails")
    p_audit.set_defaults(handler=_cmd_audit)

    p_list = sub.add_parser("list-figures", help="list catalog figure ids")
    p_list.set_defaults(handler=_cmd_list_figures)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args, parser)
    except ValueError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
