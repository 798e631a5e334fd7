"""Time-evolution kernel for quadratic Hamiltonians in Gaussian form.

The exact propagator from t' = 0 to t is a Gaussian in both arguments,

    G(x, x'; t) = sqrt( m / (2 pi i hbar alpha0 lambda_I) )
                  * exp{ (i m / 2 hbar) [ (lambda_I'/lambda_I) x^2
                                          - 2 x x' / (lambda_I alpha0)
                                          + (lambda_R/lambda_I) (x'/alpha0)^2 ] },

where lambda_R and lambda_I solve the classical equation lambda'' + w^2
lambda = 0 with lambda_R(0) = alpha0, lambda_R'(0) = 0, lambda_I(0) = 0,
lambda_I'(0) = 1/alpha0 (unit Wronskian, delta-function limit at t -> 0).
Applying the kernel to a Gaussian is a closed-form Gaussian integral, so an
initial packet evolves without any quadrature; the evolved quadratic
coefficient reproduces the complex width C(t) through the Wronskian identity.
At focal points (lambda_I = 0) the kernel degenerates to a delta function and
evaluation raises CausticError.

Evolution from a nonzero start time t' is obtained by shifting the frequency
profile so that the shifted problem starts at zero.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Centroid,
    CausticError,
    GaussianWavePacket,
    LambdaState,
    RiccatiState,
    SystemSpec,
)

FOCAL_TOL = 1e-9


@dataclass(frozen=True)
class InitialGaussian:
    """Initial packet exp{(i m/2 hbar)[C0 (x - x_c)^2 + 2 (p0/m)(x - x_c)]}.

    alpha0 fixes the width (Im C0 = 1/alpha0^2); alpha_dot0 adds an initial
    width velocity (Re C0 = alpha_dot0/alpha0); p0 boosts and x_center
    translates the packet.
    """

    alpha0: float
    p0: float = 0.0
    x_center: float = 0.0
    alpha_dot0: float = 0.0

    def __post_init__(self):
        if not (self.alpha0 > 0.0):
            raise ValueError(f"alpha0 must be positive, got {self.alpha0}")

    @property
    def c0(self) -> complex:
        return complex(self.alpha_dot0 / self.alpha0, 1.0 / self.alpha0**2)


def kernel_lambda_initial(alpha0: float) -> LambdaState:
    """The specific unit-Wronskian initial datum that makes G a delta at t=0."""
    if not (alpha0 > 0.0):
        raise ValueError(f"alpha0 must be positive, got {alpha0}")
    return LambdaState(lambda_r=alpha0, lambda_i=0.0,
                       lambda_r_dot=0.0, lambda_i_dot=1.0 / alpha0)


@dataclass(frozen=True)
class GaussianKernelParams:
    """Kernel in the form prefactor * exp(a_xx x^2 + a_xxp x x' + a_xpxp x'^2)."""

    prefactor: complex
    a_xx: complex
    a_xxp: complex
    a_xpxp: complex


def kernel_params(s: SystemSpec, l: LambdaState, alpha0: float,
                  focal_tol: float = FOCAL_TOL) -> GaussianKernelParams:
    """Kernel coefficients at one time, given the kernel lambda state there.

    Raises CausticError when |lambda_I| < focal_tol * |lambda| (focal point:
    the kernel collapses onto a delta function and the Gaussian form breaks
    down).
    """
    if not (alpha0 > 0.0):
        raise ValueError(f"alpha0 must be positive, got {alpha0}")
    mod = abs(l.value)
    if abs(l.lambda_i) < focal_tol * mod:
        raise CausticError(
            f"focal point: |lambda_I| = {abs(l.lambda_i):.3g} below {focal_tol:.1g} * |lambda|"
        )
    im_2h = 1j * s.m / (2.0 * s.hbar)
    prefactor = cmath.sqrt(s.m / (2.0j * math.pi * s.hbar * alpha0 * l.lambda_i))
    return GaussianKernelParams(
        prefactor=prefactor,
        a_xx=im_2h * (l.lambda_i_dot / l.lambda_i),
        a_xxp=-2.0 * im_2h / (l.lambda_i * alpha0),
        a_xpxp=im_2h * l.lambda_r / (l.lambda_i * alpha0**2),
    )


def kernel_value(params: GaussianKernelParams, x, xp):
    """Evaluate the kernel; broadcasts over x and x'."""
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    return params.prefactor * np.exp(
        params.a_xx * x * x + params.a_xxp * x * xp + params.a_xpxp * xp * xp
    )


def initial_gaussian_amplitude(s: SystemSpec, init: InitialGaussian, x):
    """Normalized initial packet amplitude at position(s) x."""
    x = np.asarray(x, dtype=float)
    dx = x - init.x_center
    norm = (s.m / (math.pi * s.hbar * init.alpha0**2)) ** 0.25
    im_2h = 1j * s.m / (2.0 * s.hbar)
    return norm * np.exp(im_2h * (init.c0 * dx * dx + 2.0 * (init.p0 / s.m) * dx))


def evolve_amplitude(s: SystemSpec, init: InitialGaussian, l: LambdaState,
                     ) -> tuple[complex, complex, complex]:
    """Closed-form kernel application: psi(x, t) = N exp(a x^2 + b x).

    The x' integral of kernel times initial Gaussian is done analytically
    (the integrand is a convergent complex Gaussian for any physical initial
    width), so the result is exact up to the accuracy of the lambda state.
    """
    params = kernel_params(s, l, init.alpha0)
    im_2h = 1j * s.m / (2.0 * s.hbar)
    c0, xc, p0 = init.c0, init.x_center, init.p0

    a_prime = params.a_xpxp + im_2h * c0
    beta = (2.0 * im_2h) * (p0 / s.m - c0 * xc)
    const0 = im_2h * (c0 * xc * xc - 2.0 * (p0 / s.m) * xc)

    # int exp(a' u^2 + (a_xxp x + beta) u) du = sqrt(-pi/a') exp((a_xxp x + beta)^2 / (-4 a'))
    inv = -1.0 / (4.0 * a_prime)
    a = params.a_xx + params.a_xxp**2 * inv
    b = 2.0 * params.a_xxp * beta * inv
    norm0 = (s.m / (math.pi * s.hbar * init.alpha0**2)) ** 0.25
    n = params.prefactor * norm0 * cmath.sqrt(-math.pi / a_prime) \
        * cmath.exp(beta * beta * inv + const0)
    return n, a, b


def density_integral(n: complex, a: complex, b: complex) -> float:
    """Integral of |N exp(a x^2 + b x)|^2 over the real line (norm check)."""
    u = -2.0 * a.real
    if not (u > 0.0):
        raise ValueError("amplitude is not normalizable (Re a >= 0)")
    return abs(n) ** 2 * math.sqrt(math.pi / u) * math.exp(b.real**2 / u)


def evolve_via_kernel(s: SystemSpec, init: InitialGaussian, l: LambdaState,
                      ) -> GaussianWavePacket:
    """Evolved packet (centroid and complex width) from the kernel state at time t."""
    n, a, b = evolve_amplitude(s, init, l)
    c = -2.0j * s.hbar / s.m * a
    eta = -b.real / (2.0 * a.real)
    p_mean = s.hbar * (2.0 * a.imag * eta + b.imag)
    return GaussianWavePacket(
        centroid=Centroid(x=eta, p=p_mean),
        riccati=RiccatiState(c_r=c.real, c_i=c.imag),
    )


def verify_kernel_satisfies_tdse(s: SystemSpec, l_traj: list[LambdaState], times,
                                 xs, alpha0: float, x_prime: float = 1.0) -> float:
    """Finite-difference residual of the evolution equation on the kernel.

    Evaluates G(x, x'; t) on the given x grid for each lambda state (x' held
    fixed), forms i hbar dG/dt + (hbar^2/2m) d2G/dx2 - V(x) G with centered
    differences in both t and x, and returns the maximum residual magnitude
    relative to the maximum kernel magnitude on the interior grid.
    """
    times = np.asarray(times, dtype=float)
    xs = np.asarray(xs, dtype=float)
    if times.size != len(l_traj):
        raise ValueError("times and l_traj must have matching length")
    if times.size < 3 or xs.size < 3:
        raise ValueError("need at least 3 time and 3 space samples")
    dts = np.diff(times)
    dt = dts[0]
    if not np.allclose(dts, dt, rtol=1e-9, atol=0.0):
        raise ValueError("times must be uniformly spaced")
    dxs = np.diff(xs)
    dx = dxs[0]
    if not np.allclose(dxs, dx, rtol=1e-9, atol=0.0):
        raise ValueError("xs must be uniformly spaced")

    g = np.empty((times.size, xs.size), dtype=complex)
    for j, l in enumerate(l_traj):
        g[j] = kernel_value(kernel_params(s, l, alpha0), xs, x_prime)

    g_t = (g[2:, 1:-1] - g[:-2, 1:-1]) / (2.0 * dt)
    g_xx = (g[1:-1, 2:] - 2.0 * g[1:-1, 1:-1] + g[1:-1, :-2]) / (dx * dx)
    w2 = np.asarray(s.omega.omega_sq(times[1:-1]), dtype=float)[:, None]
    v = 0.5 * s.m * w2 * xs[None, 1:-1] ** 2
    residual = 1j * s.hbar * g_t + (s.hbar**2 / (2.0 * s.m)) * g_xx - v * g[1:-1, 1:-1]
    return float(np.max(np.abs(residual)) / np.max(np.abs(g[1:-1, 1:-1])))
