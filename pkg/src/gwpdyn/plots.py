"""Static SVG renderings: vector fields, moment traces, Wigner heatmaps.

All figures are drawn through the Agg backend with a fixed hash salt, text
kept as text, and no embedded timestamps, so rerunning a scenario produces
byte-identical files.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from . import ermakov as ermakov_mod  # noqa: E402
from . import riccati as riccati_mod  # noqa: E402
from .wigner import PhaseSpaceGrid  # noqa: E402

_RC = {
    "svg.hashsalt": "gwpdyn",
    "svg.fonttype": "none",
    "figure.figsize": (6.4, 4.8),
    "figure.dpi": 100,
}


def _save_svg(fig, path) -> None:
    """Atomically write the figure as deterministic SVG."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".",
                               suffix=".svg")
    os.close(fd)
    try:
        fig.savefig(tmp, format="svg", metadata={"Date": None})
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    finally:
        plt.close(fig)


def riccati_vector_field_svg(omega0: float, path,
                             c_r_range=(-3.0, 3.0), c_i_range=(-3.0, 3.0),
                             n_grid: int = 21) -> None:
    """Flow of the inverse-width equation in the (C_R, C_I) plane."""
    with plt.rc_context(_RC):
        cr, ci, fr, fi = riccati_mod.vector_field(omega0, c_r_range,
                                                  c_i_range, n_grid)
        fig, ax = plt.subplots()
        speed = (fr**2 + fi**2) ** 0.25
        ax.quiver(cr, ci, fr / (speed + 1e-300), fi / (speed + 1e-300),
                  angles="xy", width=0.0035, color="#2060a0")
        for sign in (1.0, -1.0):
            ax.plot([0.0], [sign * omega0], "o", color="#c03020", ms=7)
            ax.annotate("fixed point", (0.0, sign * omega0),
                        textcoords="offset points", xytext=(8, 4),
                        color="#c03020")
        ax.set_xlabel("C_R")
        ax.set_ylabel("C_I")
        ax.set_title(f"inverse-width flow, omega0 = {omega0:g}")
        ax.set_xlim(*c_r_range)
        ax.set_ylim(*c_i_range)
        _save_svg(fig, path)


def ermakov_vector_field_svg(omega0: float, path,
                             alpha_range=(0.2, 3.0),
                             alpha_dot_range=(-3.0, 3.0),
                             n_grid: int = 21) -> None:
    """Flow of the amplitude equation in the (alpha, alpha') plane."""
    with plt.rc_context(_RC):
        a, ad, f1, f2 = ermakov_mod.vector_field(omega0, alpha_range,
                                                 alpha_dot_range, n_grid)
        fig, ax = plt.subplots()
        speed = (f1**2 + f2**2) ** 0.25
        ax.quiver(a, ad, f1 / (speed + 1e-300), f2 / (speed + 1e-300),
                  angles="xy", width=0.0035, color="#2060a0")
        if omega0 > 0.0:
            star = omega0 ** -0.5
            ax.plot([star], [0.0], "o", color="#c03020", ms=7)
            ax.annotate("fixed point", (star, 0.0),
                        textcoords="offset points", xytext=(8, 4),
                        color="#c03020")
        ax.set_xlabel("alpha")
        ax.set_ylabel("d alpha / dt")
        ax.set_title(f"amplitude flow, omega0 = {omega0:g}")
        ax.set_xlim(*alpha_range)
        ax.set_ylim(*alpha_dot_range)
        _save_svg(fig, path)


def moment_traces_svg(columns: dict, path) -> None:
    """sigma_xx, sigma_pp, sigma_xp versus time."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        t = columns["t"]
        ax.plot(t, columns["sigma_xx"], label="sigma_xx", color="#2060a0")
        ax.plot(t, columns["sigma_pp"], label="sigma_pp", color="#c03020")
        ax.plot(t, columns["sigma_xp"], label="sigma_xp", color="#208040")
        ax.set_xlabel("t")
        ax.set_ylabel("second moments")
        ax.legend(loc="upper right")
        ax.set_title("moment traces")
        _save_svg(fig, path)


def correlation_svg(columns: dict, path) -> None:
    """Correlation coefficient |sigma_xp| / sqrt(sigma_xx sigma_pp)."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(columns["t"], columns["Cor"], color="#2060a0")
        ax.set_xlabel("t")
        ax.set_ylabel("Cor")
        ax.set_ylim(0.0, 1.0)
        ax.set_title("correlation coefficient")
        _save_svg(fig, path)


def squeezing_svg(columns: dict, path, hbar: float = 1.0) -> None:
    """Width variances on a log scale against the symmetric-split line."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        t = columns["t"]
        ax.semilogy(t, columns["sigma_xx"], label="sigma_xx", color="#2060a0")
        ax.semilogy(t, columns["sigma_pp"], label="sigma_pp", color="#c03020")
        ax.axhline(hbar / 2.0, color="#606060", lw=0.8, ls="--",
                   label="hbar/2")
        ax.set_xlabel("t")
        ax.set_ylabel("variance")
        ax.legend(loc="upper right")
        ax.set_title("squeezing")
        _save_svg(fig, path)


def wigner_heatmap_svg(grid: PhaseSpaceGrid, path, time_label: float,
                       peak=None) -> None:
    """Phase-space density heatmap with the sampled peak marked."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        mesh = ax.pcolormesh(grid.x, grid.p, grid.values.T, cmap="viridis",
                             shading="auto", rasterized=True)
        fig.colorbar(mesh, ax=ax, label="W(x, p)")
        if peak is not None:
            ax.plot([peak[0]], [peak[1]], "+", color="#ffffff", ms=10)
        ax.set_xlabel("x")
        ax.set_ylabel("p")
        ax.set_title(f"phase-space density, t = {time_label:.6g}")
        _save_svg(fig, path)
