"""Real amplitude (Ermakov) form of the width evolution.

Splitting C = alpha_dot/alpha + i/alpha^2 maps the complex Riccati equation
onto the nonlinear amplitude equation

    alpha'' + w(t)^2 alpha = 1/alpha^3,

whose inverse-cube term keeps alpha away from zero.  Together with the
centroid trajectory eta(t) (a classical solution of eta'' + w^2 eta = 0) the
amplitude carries an exact constant of motion

    I = (m/2 hbar) [ (eta' alpha - eta alpha')^2 + (eta/alpha)^2 ],

conserved for any time dependence of w(t), discontinuous switches included.
The amplitude also has a superposition principle: alpha^2 is a quadratic form
in any fundamental pair of classical solutions, which yields closed forms for
constant frequency and for free motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .core import (
    Centroid,
    ErmakovState,
    IntegratorConfig,
    NegativeRadicandError,
    NumericalFailure,
    SingularityError,
    SystemSpec,
    UncertaintyTriple,
)
from .integrate import Guard, integrate_grid

DEFAULT_ALPHA_FLOOR = 1e-8


def _ermakov_rhs(s: SystemSpec):
    def rhs(t, y):
        alpha, alpha_dot = y
        w2 = float(s.omega.omega_sq(t))
        return np.array([alpha_dot, -w2 * alpha + 1.0 / alpha**3])

    return rhs


def _alpha_guard(floor: float):
    return Guard(
        fn=lambda t, y: y[0] - floor,
        error=lambda t: SingularityError(
            f"alpha fell below the floor {floor:.3g} at t = {t:.6g}", time=t
        ),
    )


def integrate_ermakov(s: SystemSpec, e0: ErmakovState, t_grid,
                      cfg: IntegratorConfig | None = None,
                      alpha_floor: float = DEFAULT_ALPHA_FLOOR) -> list[ErmakovState]:
    """Integrate the amplitude equation on the given time grid."""
    t_grid = np.asarray(t_grid, dtype=float)
    bps = s.omega.breakpoints(float(t_grid[0]), float(t_grid[-1]))
    ys = integrate_grid(_ermakov_rhs(s), [e0.alpha, e0.alpha_dot], t_grid, cfg,
                        breakpoints=bps, guards=[_alpha_guard(alpha_floor)])
    return [ErmakovState(alpha=float(a), alpha_dot=float(ad)) for a, ad in ys]


def integrate_joint(s: SystemSpec, c0: Centroid, e0: ErmakovState, t_grid,
                    cfg: IntegratorConfig | None = None,
                    alpha_floor: float = DEFAULT_ALPHA_FLOOR,
                    ) -> tuple[list[Centroid], list[ErmakovState]]:
    """Integrate centroid and amplitude as one coupled system.

    The centroid obeys the classical equation eta'' + w^2 eta = 0 with
    eta(0) = x, eta'(0) = p/m; evolving both together keeps the invariant
    evaluation consistent at every output time.
    """
    t_grid = np.asarray(t_grid, dtype=float)

    def rhs(t, y):
        eta, eta_dot, alpha, alpha_dot = y
        w2 = float(s.omega.omega_sq(t))
        return np.array([eta_dot, -w2 * eta, alpha_dot, -w2 * alpha + 1.0 / alpha**3])

    guard = Guard(
        fn=lambda t, y: y[2] - alpha_floor,
        error=lambda t: SingularityError(
            f"alpha fell below the floor {alpha_floor:.3g} at t = {t:.6g}", time=t
        ),
    )
    y0 = [c0.x, c0.p / s.m, e0.alpha, e0.alpha_dot]
    bps = s.omega.breakpoints(float(t_grid[0]), float(t_grid[-1]))
    ys = integrate_grid(rhs, y0, t_grid, cfg, breakpoints=bps, guards=[guard])
    centroids = [Centroid(x=float(r[0]), p=float(s.m * r[1])) for r in ys]
    amplitudes = [ErmakovState(alpha=float(r[2]), alpha_dot=float(r[3])) for r in ys]
    return centroids, amplitudes


def ermakov_invariant(s: SystemSpec, c: Centroid, e: ErmakovState) -> float:
    """Exact constant of motion of the coupled centroid/amplitude system."""
    eta, eta_dot = c.x, c.p / s.m
    cross = eta_dot * e.alpha - eta * e.alpha_dot
    return (s.m / (2.0 * s.hbar)) * (cross * cross + (eta / e.alpha) ** 2)


class FundamentalPair:
    """Classical solution pair with eta1(0) = 0, eta1'(0) = -1/m, eta2(0) = 1, eta2'(0) = 0.

    The pair spans all solutions of eta'' + w^2 eta = 0; its Wronskian-like
    combination m*(eta1' eta2 - eta1 eta2') equals -1 for all times.
    """

    def __init__(self, eta1, eta1_dot, eta2, eta2_dot):
        self._eta1 = eta1
        self._eta1_dot = eta1_dot
        self._eta2 = eta2
        self._eta2_dot = eta2_dot

    def eta1(self, t):
        return self._eta1(np.asarray(t, dtype=float))

    def eta1_dot(self, t):
        return self._eta1_dot(np.asarray(t, dtype=float))

    def eta2(self, t):
        return self._eta2(np.asarray(t, dtype=float))

    def eta2_dot(self, t):
        return self._eta2_dot(np.asarray(t, dtype=float))

    @classmethod
    def constant(cls, m: float, omega0: float) -> "FundamentalPair":
        """Closed forms for constant frequency (omega0 = 0 gives free motion)."""
        if not (omega0 >= 0.0):
            raise ValueError(f"omega0 must be >= 0, got {omega0}")
        if omega0 == 0.0:
            return cls(
                eta1=lambda t: -t / m,
                eta1_dot=lambda t: np.full_like(t, -1.0 / m),
                eta2=lambda t: np.ones_like(t),
                eta2_dot=lambda t: np.zeros_like(t),
            )
        return cls(
            eta1=lambda t: -np.sin(omega0 * t) / (m * omega0),
            eta1_dot=lambda t: -np.cos(omega0 * t) / m,
            eta2=lambda t: np.cos(omega0 * t),
            eta2_dot=lambda t: -omega0 * np.sin(omega0 * t),
        )

    @classmethod
    def from_profile(cls, s: SystemSpec, t_span: tuple[float, float],
                     cfg: IntegratorConfig | None = None) -> "FundamentalPair":
        """Numerical pair for an arbitrary profile, valid on t_span."""
        cfg = cfg if cfg is not None else IntegratorConfig()
        t0, t1 = float(t_span[0]), float(t_span[1])
        if not t1 > t0:
            raise ValueError("t_span must have positive length")

        def rhs(t, y):
            w2 = float(s.omega.omega_sq(t))
            return [y[1], -w2 * y[0], y[3], -w2 * y[2]]

        sols = []
        bounds = [t0] + s.omega.breakpoints(t0, t1) + [t1]
        y = np.array([0.0, -1.0 / s.m, 1.0, 0.0])
        for a, b in zip(bounds[:-1], bounds[1:]):
            sol = solve_ivp(rhs, (a, b), y, method="DOP853", dense_output=True,
                            rtol=cfg.rel_tol, atol=cfg.abs_tol, max_step=cfg.max_step)
            if not sol.success:
                raise NumericalFailure(f"fundamental pair integration failed: {sol.message}")
            sols.append((a, b, sol.sol))
            y = sol.y[:, -1]

        def evaluate(t, row):
            t = np.asarray(t, dtype=float)
            if np.any(t < t0 - 1e-12) or np.any(t > t1 + 1e-12):
                raise ValueError(f"time outside the tabulated span [{t0}, {t1}]")
            flat = np.atleast_1d(t)
            out = np.empty_like(flat)
            for i, ti in enumerate(flat):
                ti = min(max(ti, t0), t1)
                for a, b, f in sols:
                    if a <= ti <= b:
                        out[i] = f(ti)[row]
                        break
            return out.reshape(t.shape) if t.ndim else float(out[0])

        return cls(
            eta1=lambda t: evaluate(t, 0),
            eta1_dot=lambda t: evaluate(t, 1),
            eta2=lambda t: evaluate(t, 2),
            eta2_dot=lambda t: evaluate(t, 3),
        )


def _alpha_from_radicand(radicand):
    radicand = np.asarray(radicand)
    if np.any(radicand <= 0.0):
        bad = float(np.min(radicand))
        raise NegativeRadicandError(
            f"amplitude reconstruction produced a nonpositive radicand (min {bad:.6g})"
        )
    return np.sqrt(radicand)


def ermakov_from_fundamental(s: SystemSpec, u0: UncertaintyTriple, pair: FundamentalPair,
                             t, alternate_branch: bool = False):
    """Amplitude from initial moments and a fundamental pair.

    alpha(t)^2 = (2m/hbar) [  sigma_pp(0) eta1^2 + sigma_xx(0) eta2^2
                             - 2 sigma_xp(0) eta1 eta2 ]

    The default cross-term sign reproduces d(sigma_xx)/dt = 2 sigma_xp / m at
    t = 0 (with eta1'(0) = -1/m); ``alternate_branch`` selects the mirrored
    solution with the initial covariance sign flipped.
    """
    t = np.asarray(t, dtype=float)
    e1, e2 = pair.eta1(t), pair.eta2(t)
    sign = +1.0 if alternate_branch else -1.0
    quad = u0.sigma_pp * e1 * e1 + u0.sigma_xx * e2 * e2 + sign * 2.0 * u0.sigma_xp * e1 * e2
    out = _alpha_from_radicand((2.0 * s.m / s.hbar) * quad)
    return float(out) if t.ndim == 0 else out


def ermakov_closed_form_ho(s: SystemSpec, u0: UncertaintyTriple, omega0: float,
                           t, alternate_branch: bool = False):
    """Closed-form amplitude for constant omega0 > 0."""
    if not (omega0 > 0.0):
        raise ValueError(f"omega0 must be positive, got {omega0}")
    t = np.asarray(t, dtype=float)
    sin, cos = np.sin(omega0 * t), np.cos(omega0 * t)
    sign = -1.0 if alternate_branch else +1.0
    quad = (u0.sigma_pp / (s.m**2 * omega0**2)) * sin * sin + u0.sigma_xx * cos * cos \
        + sign * (2.0 * u0.sigma_xp / (s.m * omega0)) * sin * cos
    out = _alpha_from_radicand((2.0 * s.m / s.hbar) * quad)
    return float(out) if t.ndim == 0 else out


def ermakov_free_motion(s: SystemSpec, u0: UncertaintyTriple, t,
                        alternate_branch: bool = False):
    """Closed-form amplitude for free motion (the omega0 -> 0 limit)."""
    t = np.asarray(t, dtype=float)
    sign = -1.0 if alternate_branch else +1.0
    quad = u0.sigma_pp * t * t / s.m**2 + u0.sigma_xx + sign * 2.0 * u0.sigma_xp * t / s.m
    out = _alpha_from_radicand((2.0 * s.m / s.hbar) * quad)
    return float(out) if t.ndim == 0 else out


@dataclass(frozen=True)
class QuadraticInvariantCoefficients:
    """Coefficients (A, B, C) of the quadratic constant of motion.

    A = 2 sigma_pp(0)/hbar^2, B = 2 sigma_xx(0)/hbar^2, cross = 2 sigma_xp(0)/hbar^2.
    For a pure Gaussian they satisfy A*B - cross^2 = 1/hbar^2.  ``cross``
    carries the sign of the initial covariance.
    """

    a: float
    b: float
    cross: float

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 0.0):
            raise ValueError("A and B must be positive")


def invariant_coefficients_from_initial(s: SystemSpec, u0: UncertaintyTriple,
                                        ) -> QuadraticInvariantCoefficients:
    h2 = s.hbar**2
    return QuadraticInvariantCoefficients(
        a=2.0 * u0.sigma_pp / h2,
        b=2.0 * u0.sigma_xx / h2,
        cross=2.0 * u0.sigma_xp / h2,
    )


def coefficient_identity_defect(s: SystemSpec, coeffs: QuadraticInvariantCoefficients) -> float:
    """A*B - cross^2 - 1/hbar^2 (zero exactly on the Gaussian family)."""
    return coeffs.a * coeffs.b - coeffs.cross**2 - 1.0 / s.hbar**2


def alpha_from_invariant_coefficients(s: SystemSpec, coeffs: QuadraticInvariantCoefficients,
                                      pair: FundamentalPair, t,
                                      alternate_branch: bool = False):
    """Amplitude reconstructed from the invariant coefficients.

    alpha(t) = sqrt( m hbar [A eta1^2 + B eta2^2 - 2 cross eta1 eta2] ), the
    positive root; equivalent to ``ermakov_from_fundamental`` with the same
    branch convention.
    """
    t = np.asarray(t, dtype=float)
    e1, e2 = pair.eta1(t), pair.eta2(t)
    sign = +1.0 if alternate_branch else -1.0
    quad = coeffs.a * e1 * e1 + coeffs.b * e2 * e2 + sign * 2.0 * coeffs.cross * e1 * e2
    out = _alpha_from_radicand(s.m * s.hbar * quad)
    return float(out) if t.ndim == 0 else out


def vector_field(omega0: float, alpha_range=(0.2, 3.0), alpha_dot_range=(-3.0, 3.0),
                 n_grid: int = 21):
    """Phase-plane field (d alpha/dt, d alpha_dot/dt) on a rectangular grid.

    Returns meshgrids (ALPHA, ALPHA_DOT, F1, F2) with F1 = alpha_dot and
    F2 = -omega0^2 alpha + 1/alpha^3.  For omega0 > 0 the single stationary
    point sits at (omega0^(-1/2), 0).
    """
    if n_grid < 2:
        raise ValueError("n_grid must be at least 2")
    if not (omega0 >= 0.0):
        raise ValueError(f"omega0 must be >= 0, got {omega0}")
    if not (alpha_range[0] > 0.0):
        raise ValueError("alpha_range must be strictly positive")
    a = np.linspace(alpha_range[0], alpha_range[1], n_grid)
    ad = np.linspace(alpha_dot_range[0], alpha_dot_range[1], n_grid)
    A, AD = np.meshgrid(a, ad, indexing="xy")
    F1 = AD
    F2 = -omega0**2 * A + 1.0 / A**3
    return A, AD, F1, F2
