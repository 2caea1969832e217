"""Chart output for audit reports.

Renders small matplotlib figures summarizing the measured pathologies next
to their closed forms. Uses the Agg canvas directly so importing this module
never touches an interactive backend.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .diagnostics import DiagnosticReport, closed_form_energy, energy_ratio, highlight_half_angle


def _save(fig: Figure, path: Path) -> None:
    FigureCanvasAgg(fig)
    fig.savefig(path, bbox_inches="tight")


def energy_chart(path: Path) -> None:
    """Lobe energy vs shininess, both conventions, with the unity crossing."""
    fig = Figure(figsize=(6.0, 4.0), dpi=120)
    ax = fig.subplots()
    m = np.linspace(0.0, 12.0, 200)
    ax.plot(m, 2.0 * np.pi / (m + 1.0), label="unweighted 2pi/(m+1)")
    ax.plot(m, 2.0 * np.pi / (m + 2.0), "--", label="cosine-weighted 2pi/(m+2)")
    samples = np.arange(0, 13)
    ax.plot(samples, [energy_ratio(s, n_samples=20_000) for s in samples], "k.",
            label="quadrature")
    ax.axhline(1.0, color="gray", lw=0.8)
    ax.axvspan(5.0, 6.0, color="orange", alpha=0.2, label="crossing interval")
    ax.set_xlabel("shininess exponent m")
    ax.set_ylabel("reflected / received energy")
    ax.set_title("Specular lobe energy at normal incidence")
    ax.legend()
    _save(fig, path)


def half_angle_chart(path: Path) -> None:
    """Half-max highlight width vs shininess on a log axis."""
    fig = Figure(figsize=(6.0, 4.0), dpi=120)
    ax = fig.subplots()
    m = np.logspace(0.0, 4.0, 300)
    ax.semilogx(m, np.degrees([highlight_half_angle(v) for v in m]))
    for mark in (127.0, 5000.0):
        deg = float(np.degrees(highlight_half_angle(mark)))
        ax.plot([mark], [deg], "ro")
        ax.annotate(f"m={mark:g}: {deg:.2f} deg", (mark, deg),
                    textcoords="offset points", xytext=(6, 6))
    ax.set_xlabel("shininess exponent m")
    ax.set_ylabel("half-max width (degrees)")
    ax.set_title("Highlight width arccos(2^(-1/m))")
    _save(fig, path)


def superposition_chart(path: Path, display_gamma: float = 2.2) -> None:
    """Displayed luminance of two summed lights, naive vs correct."""
    fig = Figure(figsize=(6.0, 4.0), dpi=120)
    ax = fig.subplots()
    v = np.linspace(0.0, 0.5, 200)
    ax.plot(v, (2.0 * v) ** display_gamma, label="encoded values summed")
    ax.plot(v, 2.0 * v**display_gamma, "--", label="luminances summed (correct)")
    ax.set_xlabel("per-light device value v")
    ax.set_ylabel("displayed luminance of the pair")
    ratio = 2.0 ** (display_gamma - 1.0)
    ax.set_title(f"Superposition at display gamma {display_gamma:g} "
                 f"(ratio {ratio:.3f})")
    ax.legend()
    _save(fig, path)


def terminator_chart(path: Path, display_gamma: float = 2.2) -> None:
    """Shading profile across the terminator, raw vs gamma-encoded."""
    fig = Figure(figsize=(6.0, 4.0), dpi=120)
    ax = fig.subplots()
    theta = np.linspace(0.0, 180.0, 721)
    lambert = np.maximum(np.cos(np.radians(theta)), 0.0)
    ax.plot(theta, lambert, label="linear value")
    ax.plot(theta, lambert ** (1.0 / display_gamma), "--",
            label=f"gamma {display_gamma:g} encoded")
    ax.axvline(90.0, color="gray", lw=0.8)
    ax.set_xlabel("polar angle from the light (degrees)")
    ax.set_ylabel("pixel value")
    ax.set_title("Terminator profile: encoding steepens the break at 90 deg")
    ax.legend()
    _save(fig, path)


def summary_chart(path: Path, report: DiagnosticReport) -> None:
    """One bar per metric, green for pass, red for fail."""
    names = list(report.entries)
    passed = [report.entries[n].passed for n in names]
    fig = Figure(figsize=(7.0, 0.32 * max(len(names), 4) + 1.2), dpi=120)
    ax = fig.subplots()
    y = np.arange(len(names))
    ax.barh(y, [1.0] * len(names),
            color=["#2a9d4e" if ok else "#d43d3d" for ok in passed])
    ax.set_yticks(y, names, fontsize=7)
    ax.invert_yaxis()
    ax.set_xticks([])
    ax.set_title(f"Audit verdicts: {sum(passed)}/{len(passed)} passed")
    _save(fig, path)


def render_report_charts(report: DiagnosticReport, out_dir,
                         display_gamma: float = 2.2) -> list[Path]:
    """Write the full chart set for a report; returns the file paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, fn in (
        ("energy_ratio.png", energy_chart),
        ("half_angle.png", half_angle_chart),
        ("superposition.png", lambda p: superposition_chart(p, display_gamma)),
        ("terminator.png", lambda p: terminator_chart(p, display_gamma)),
    ):
        target = out / name
        fn(target)
        written.append(target)
    target = out / "summary.png"
    summary_chart(target, report)
    written.append(target)
    return written
