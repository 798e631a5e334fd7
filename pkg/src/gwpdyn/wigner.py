"""Phase-space (Wigner) representation of the Gaussian packet.

For a Gaussian packet the Wigner transform is the positive Gaussian

    W(x, p) = (1/pi hbar) exp{ -(2/hbar^2) [ sigma_pp (x - <x>)^2
                                             - 2 sigma_xp (x - <x>)(p - <p>)
                                             + sigma_xx (p - <p>)^2 ] },

i.e. (1/pi hbar) exp(-2 I(x, p)) with I the observable form of the motion
invariant evaluated at the phase-space point.  Its marginals are the position
and momentum densities, the peak rides the classical trajectory, and along
the evolution W obeys the classical continuity equation

    dW/dt + (p/m) dW/dx - V'(x) dW/dp = 0.
"""

from __future__ import annotations

import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    Centroid,
    SystemSpec,
    UncertaintyTriple,
    UnphysicalStateError,
)

DEFAULT_EXTENT_SIGMAS = 5.5
DEFAULT_POINTS = 201
_BINARY_MAGIC = b"GWPW"
_BINARY_VERSION = 1


def _n_threads() -> int:
    raw = os.environ.get("RD_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"RD_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"RD_THREADS must be a positive integer, got {n}")
    return n


def wigner_value(s: SystemSpec, c: Centroid, u: UncertaintyTriple, x, p):
    """Wigner density at phase-space point(s); broadcasts over x and p."""
    det = u.sigma_xx * u.sigma_pp - u.sigma_xp**2
    if not (det > 0.0):
        raise UnphysicalStateError(f"covariance matrix must be positive definite, det = {det}")
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    dx = x - c.x
    dp = p - c.p
    quad = u.sigma_pp * dx * dx - 2.0 * u.sigma_xp * dx * dp + u.sigma_xx * dp * dp
    return (1.0 / (math.pi * s.hbar)) * np.exp(-(2.0 / s.hbar**2) * quad)


@dataclass(frozen=True)
class PhaseSpaceGridSpec:
    """Rectangular grid extents and resolution."""

    x_min: float
    x_max: float
    n_x: int
    p_min: float
    p_max: float
    n_p: int

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ValueError("grid extents must have positive length")
        if self.n_x < 2 or self.n_p < 2:
            raise ValueError("grids need at least 2 points per axis")


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Sampled Wigner density: values[i, j] = W(x[i], p[j])."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])

    def normalization(self) -> float:
        """Riemann-sum integral over the grid (1 up to tail truncation)."""
        return float(np.sum(self.values) * self.dx * self.dp)

    def peak(self) -> tuple[float, float]:
        """(x, p) of the largest sampled value."""
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return float(self.x[i]), float(self.p[j])


def default_grid_spec(c: Centroid, u: UncertaintyTriple,
                      extent_sigmas: float = DEFAULT_EXTENT_SIGMAS,
                      n: int = DEFAULT_POINTS) -> PhaseSpaceGridSpec:
    """Centroid-centered box of +-extent_sigmas standard deviations.

    The default 5.5 sigma box carries all but ~4e-8 of the probability, so
    the grid normalization criterion of 1e-6 holds with margin.
    """
    sx = math.sqrt(u.sigma_xx)
    sp = math.sqrt(u.sigma_pp)
    return PhaseSpaceGridSpec(
        x_min=c.x - extent_sigmas * sx, x_max=c.x + extent_sigmas * sx, n_x=n,
        p_min=c.p - extent_sigmas * sp, p_max=c.p + extent_sigmas * sp, n_p=n,
    )


def wigner_grid(s: SystemSpec, c: Centroid, u: UncertaintyTriple,
                spec: PhaseSpaceGridSpec | None = None) -> PhaseSpaceGrid:
    """Sample the Wigner density on a rectangular grid.

    Row evaluation is distributed over RD_THREADS worker threads when that
    environment variable is set above 1; results are identical either way.
    """
    if spec is None:
        spec = default_grid_spec(c, u)
    x = np.linspace(spec.x_min, spec.x_max, spec.n_x)
    p = np.linspace(spec.p_min, spec.p_max, spec.n_p)
    values = np.empty((spec.n_x, spec.n_p))
    threads = _n_threads()

    def fill(rows):
        for i in rows:
            values[i, :] = wigner_value(s, c, u, x[i], p)

    if threads == 1:
        fill(range(spec.n_x))
    else:
        chunks = np.array_split(np.arange(spec.n_x), threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, chunks))
    return PhaseSpaceGrid(x=x, p=p, values=values)


@dataclass(frozen=True)
class MarginalDensity:
    """One-dimensional density sampled on uniform coordinates."""

    coords: np.ndarray
    density: np.ndarray

    @property
    def step(self) -> float:
        return float(self.coords[1] - self.coords[0])

    def mean(self) -> float:
        return float(np.sum(self.coords * self.density) * self.step)

    def variance(self) -> float:
        mu = self.mean()
        return float(np.sum((self.coords - mu) ** 2 * self.density) * self.step)


def marginals(grid: PhaseSpaceGrid) -> tuple[MarginalDensity, MarginalDensity]:
    """Position and momentum marginals of the sampled density."""
    rho_x = grid.values.sum(axis=1) * grid.dp
    rho_p = grid.values.sum(axis=0) * grid.dx
    return (MarginalDensity(coords=grid.x, density=rho_x),
            MarginalDensity(coords=grid.p, density=rho_p))


def continuity_residual(s: SystemSpec, centroids: list[Centroid],
                        uncertainties: list[UncertaintyTriple], t_grid,
                        grid_spec: PhaseSpaceGridSpec | None = None) -> float:
    """Max residual of the phase-space continuity equation along a trajectory.

    The time derivative uses centered differences between neighboring
    snapshots; the phase-space gradients of the Gaussian form are exact.
    Returns the largest |residual| relative to the peak density 1/(pi hbar).
    """
    t = np.asarray(t_grid, dtype=float)
    if not (len(centroids) == len(uncertainties) == t.size):
        raise ValueError("trajectory arrays must share one length")
    if t.size < 3:
        raise ValueError("need at least 3 snapshots for a centered time difference")
    steps = np.diff(t)
    dt = steps[0]
    if not np.allclose(steps, dt, rtol=1e-9, atol=0.0):
        raise ValueError("t_grid must be uniformly spaced")
    mid = t.size // 2
    if grid_spec is None:
        grid_spec = default_grid_spec(centroids[mid], uncertainties[mid])
    x = np.linspace(grid_spec.x_min, grid_spec.x_max, grid_spec.n_x)[:, None]
    p = np.linspace(grid_spec.p_min, grid_spec.p_max, grid_spec.n_p)[None, :]

    def w_at(j):
        return wigner_value(s, centroids[j], uncertainties[j], x, p)

    worst = 0.0
    for j in range(1, t.size - 1):
        c, u = centroids[j], uncertainties[j]
        w = w_at(j)
        dwdt = (w_at(j + 1) - w_at(j - 1)) / (2.0 * dt)
        dxv = x - c.x
        dpv = p - c.p
        pref = -2.0 / s.hbar**2
        dwdx = w * pref * (2.0 * u.sigma_pp * dxv - 2.0 * u.sigma_xp * dpv)
        dwdp = w * pref * (2.0 * u.sigma_xx * dpv - 2.0 * u.sigma_xp * dxv)
        v_prime = s.m * float(s.omega.omega_sq(t[j])) * x
        residual = dwdt + (p / s.m) * dwdx - v_prime * dwdp
        worst = max(worst, float(np.max(np.abs(residual))))
    return worst * math.pi * s.hbar


def classical_energy(s: SystemSpec, c: Centroid, omega0: float) -> float:
    """Classical energy of the centroid: p^2/2m + m w0^2 x^2/2."""
    return c.p**2 / (2.0 * s.m) + 0.5 * s.m * omega0**2 * c.x**2


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def grid_to_csv(grid: PhaseSpaceGrid, path) -> None:
    """Write rows (x, p, W) with 17 significant digits."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("x,p,W\n")
        for i, xv in enumerate(grid.x):
            for j, pv in enumerate(grid.p):
                f.write(f"{xv:.17g},{pv:.17g},{grid.values[i, j]:.17g}\n")


def grid_from_csv(path) -> PhaseSpaceGrid:
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    xs = np.unique(data[:, 0])
    ps = np.unique(data[:, 1])
    values = data[:, 2].reshape(xs.size, ps.size)
    return PhaseSpaceGrid(x=xs, p=ps, values=values)


def grid_to_binary(grid: PhaseSpaceGrid, path) -> None:
    """Row-major float64 dump with a fixed header (magic, version, nx, np, extents)."""
    header = _BINARY_MAGIC + struct.pack(
        "<III4d", _BINARY_VERSION, grid.x.size, grid.p.size,
        float(grid.x[0]), float(grid.x[-1]), float(grid.p[0]), float(grid.p[-1]),
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(grid.values, dtype="<f8").tobytes())


def grid_from_binary(path) -> PhaseSpaceGrid:
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != _BINARY_MAGIC:
            raise ValueError(f"not a phase-space grid file (magic {magic!r})")
        version, n_x, n_p, x0, x1, p0, p1 = struct.unpack("<III4d", f.read(12 + 32))
        if version != _BINARY_VERSION:
            raise ValueError(f"unsupported grid file version {version}")
        values = np.frombuffer(f.read(n_x * n_p * 8), dtype="<f8").reshape(n_x, n_p)
    return PhaseSpaceGrid(
        x=np.linspace(x0, x1, n_x),
        p=np.linspace(p0, p1, n_p),
        values=values.copy(),
    )
