"""Second-moment dynamics of the Gaussian packet.

For a quadratic Hamiltonian the three second moments close on themselves:

    d(sigma_xx)/dt = 2 sigma_xp / m
    d(sigma_pp)/dt = -2 m w(t)^2 sigma_xp
    d(sigma_xp)/dt = sigma_pp / m - m w(t)^2 sigma_xx

Eliminating sigma_pp and sigma_xp gives the third-order linear equation of
maximal symmetry for the position variance,

    d^3(sigma_xx)/dt^3 + 4 w^2 d(sigma_xx)/dt + 4 w w' sigma_xx = 0,

whose residual is a stringent trajectory check.  Closed forms for constant
frequency and free motion provide independent oracles for every route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .core import (
    Centroid,
    ErmakovState,
    FrequencyProfile,
    GridTooCoarseError,
    IntegratorConfig,
    SystemSpec,
    UncertaintyTriple,
)
from .integrate import integrate_grid


def ho_uncertainty_closed_form(s: SystemSpec, u0: UncertaintyTriple, omega0: float,
                               t: float) -> UncertaintyTriple:
    """Moments at time t for constant omega0 > 0.

    All three moments are pi/omega0-periodic; the covariance oscillates at
    twice the oscillator frequency.
    """
    if not (omega0 > 0.0):
        raise ValueError(f"omega0 must be positive, got {omega0}")
    sin, cos = math.sin(omega0 * t), math.cos(omega0 * t)
    m, w = s.m, omega0
    sxx = (u0.sigma_pp / (m * m * w * w)) * sin * sin + u0.sigma_xx * cos * cos \
        + (2.0 * u0.sigma_xp / (m * w)) * sin * cos
    spp = u0.sigma_pp * cos * cos + m * m * w * w * u0.sigma_xx * sin * sin \
        - 2.0 * m * w * u0.sigma_xp * sin * cos
    sxp = (u0.sigma_pp / (2.0 * m * w) - m * w * u0.sigma_xx / 2.0) * math.sin(2.0 * w * t) \
        + u0.sigma_xp * math.cos(2.0 * w * t)
    return UncertaintyTriple(sigma_xx=sxx, sigma_pp=spp, sigma_xp=sxp)


def free_motion_uncertainties(s: SystemSpec, u0: UncertaintyTriple, t: float) -> UncertaintyTriple:
    """Moments at time t for free motion: ballistic spreading of sigma_xx."""
    m = s.m
    return UncertaintyTriple(
        sigma_xx=u0.sigma_pp * t * t / (m * m) + u0.sigma_xx + 2.0 * u0.sigma_xp * t / m,
        sigma_pp=u0.sigma_pp,
        sigma_xp=u0.sigma_pp * t / m + u0.sigma_xp,
    )


def integrate_uncertainty_system(s: SystemSpec, u0: UncertaintyTriple, t_grid,
                                 cfg: IntegratorConfig | None = None,
                                 ) -> list[UncertaintyTriple]:
    """Integrate the coupled moment system on the given time grid."""
    t_grid = np.asarray(t_grid, dtype=float)

    def rhs(t, y):
        sxx, spp, sxp = y
        w2 = float(s.omega.omega_sq(t))
        return np.array([
            2.0 * sxp / s.m,
            -2.0 * s.m * w2 * sxp,
            spp / s.m - s.m * w2 * sxx,
        ])

    y0 = [u0.sigma_xx, u0.sigma_pp, u0.sigma_xp]
    bps = s.omega.breakpoints(float(t_grid[0]), float(t_grid[-1]))
    ys = integrate_grid(rhs, y0, t_grid, cfg, breakpoints=bps)
    return [UncertaintyTriple(sigma_xx=float(a), sigma_pp=float(b), sigma_xp=float(c))
            for a, b, c in ys]


def third_order_residual(t_grid, sigma_xx, profile: FrequencyProfile):
    """Residual of the third-order variance equation along a trajectory.

    Derivatives are taken with second-order centered differences on a uniform
    grid; non-uniform input is resampled first with a cubic spline.  Returns
    (t_interior, residual) for the interior points that admit the five-point
    stencil.  Raises GridTooCoarseError below seven samples.
    """
    t = np.asarray(t_grid, dtype=float)
    y = np.asarray(sigma_xx, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise ValueError("t_grid and sigma_xx must be matching one-dimensional arrays")
    if t.size < 7:
        raise GridTooCoarseError(f"need at least 7 samples, got {t.size}")
    steps = np.diff(t)
    if np.any(steps <= 0.0):
        raise ValueError("t_grid must be strictly increasing")
    h = steps[0]
    if not np.allclose(steps, h, rtol=1e-9, atol=0.0):
        spline = CubicSpline(t, y)
        t = np.linspace(t[0], t[-1], t.size)
        y = spline(t)
        h = t[1] - t[0]

    d1 = (y[3:-1] - y[1:-3]) / (2.0 * h)
    d3 = (y[4:] - 2.0 * y[3:-1] + 2.0 * y[1:-3] - y[:-4]) / (2.0 * h**3)
    tm = t[2:-2]
    w = np.asarray(profile.omega(tm), dtype=float)
    wdot = np.asarray(profile.omega_dot(tm), dtype=float)
    residual = d3 + 4.0 * w * w * d1 + 4.0 * w * wdot * y[2:-2]
    return tm, residual


def correlation_coefficient(u: UncertaintyTriple) -> float:
    """|sigma_xp| / (sigma_x sigma_p), in [0, 1) for a physical Gaussian."""
    return abs(u.sigma_xp) / math.sqrt(u.sigma_xx * u.sigma_pp)


@dataclass(frozen=True)
class VelocityFieldSample:
    """Local flow velocity of the probability density at position x, time t."""

    x: float
    t: float
    v: float


def velocity_field(s: SystemSpec, c: Centroid, e: ErmakovState, x, t: float = 0.0):
    """Velocity field v(x) = <p>/m + (alpha'/alpha)(x - <x>) of the density flow.

    The slope d v/d x equals the real Riccati component C_R; the field is
    exact for Gaussian densities of quadratic Hamiltonians.
    """
    x_arr = np.asarray(x, dtype=float)
    v = c.p / s.m + (e.alpha_dot / e.alpha) * (x_arr - c.x)
    if x_arr.ndim == 0:
        return VelocityFieldSample(x=float(x_arr), t=t, v=float(v))
    return [VelocityFieldSample(x=float(xi), t=t, v=float(vi))
            for xi, vi in zip(x_arr, v)]
