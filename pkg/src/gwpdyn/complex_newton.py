"""Complex classical trajectory (lambda) form of the width evolution.

Substituting C = lambda'/lambda linearizes the complex Riccati equation into
the classical equation of motion

    lambda'' + w(t)^2 lambda = 0

for a complex-valued lambda whose real and imaginary parts are independent
real solutions normalized to unit Wronskian

    lambda_I' lambda_R - lambda_I lambda_R' = 1.

In polar form lambda = alpha e^(i phi) the modulus is the packet amplitude
and the phase winds at rate phi' = 1/alpha^2.  When the centroid moves, the
imaginary part is proportional to the centroid trajectory itself,
lambda_I = c * eta with c = sqrt(m / (2 hbar I)), which ties the width
evolution to observable first and second moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Centroid,
    ErmakovState,
    IntegratorConfig,
    LambdaState,
    RiccatiState,
    SystemSpec,
    UncertaintyTriple,
    WronskianError,
    ZeroCentroidError,
)
from .integrate import integrate_grid

WRONSKIAN_TOL = 1e-10


def integrate_lambda(s: SystemSpec, l0: LambdaState, t_grid,
                     cfg: IntegratorConfig | None = None) -> list[LambdaState]:
    """Integrate the complex classical equation on the given time grid.

    The initial datum must satisfy the unit-Wronskian normalization to within
    1e-10; the Wronskian is then a conserved quantity of the flow and its
    drift measures integration error.
    """
    if abs(l0.wronskian - 1.0) > WRONSKIAN_TOL:
        raise WronskianError(
            f"initial Wronskian must be 1, got {l0.wronskian!r}"
        )
    t_grid = np.asarray(t_grid, dtype=float)

    def rhs(t, y):
        lr, li, lrd, lid = y
        w2 = float(s.omega.omega_sq(t))
        return np.array([lrd, lid, -w2 * lr, -w2 * li])

    y0 = [l0.lambda_r, l0.lambda_i, l0.lambda_r_dot, l0.lambda_i_dot]
    bps = s.omega.breakpoints(float(t_grid[0]), float(t_grid[-1]))
    ys = integrate_grid(rhs, y0, t_grid, cfg, breakpoints=bps)
    return [LambdaState(lambda_r=float(a), lambda_i=float(b),
                        lambda_r_dot=float(c), lambda_i_dot=float(d))
            for a, b, c, d in ys]


def riccati_from_lambda(l: LambdaState) -> RiccatiState:
    """C = lambda'/lambda; defined wherever lambda != 0 (always, at unit Wronskian)."""
    c = l.velocity / l.value
    return RiccatiState(c_r=c.real, c_i=c.imag)


def width_lambda_initial(e0: ErmakovState) -> LambdaState:
    """Unit-Wronskian initial datum with lambda(0) = alpha(0) on the real axis.

    With this phase convention |lambda(t)| = alpha(t) for all times and
    lambda'/lambda reproduces the complex width C(t).
    """
    return LambdaState(
        lambda_r=e0.alpha,
        lambda_i=0.0,
        lambda_r_dot=e0.alpha_dot,
        lambda_i_dot=1.0 / e0.alpha,
    )


def lambda_r_from_eta_alpha(s: SystemSpec, c: Centroid, e: ErmakovState,
                            invariant: float) -> float:
    """Real part of lambda in the moving-centroid normalization.

    lambda_R = sqrt(m/(2 hbar I)) * alpha^2 * (eta' - (alpha'/alpha) eta),
    the sign fixed so that together with lambda_I = sqrt(m/(2 hbar I)) * eta
    the Wronskian equals +1.  Requires a positive motion invariant.
    """
    if not (invariant > 0.0):
        raise ZeroCentroidError(
            f"motion invariant must be positive to normalize lambda, got {invariant}"
        )
    cc = math.sqrt(s.m / (2.0 * s.hbar * invariant))
    eta, eta_dot = c.x, c.p / s.m
    return cc * e.alpha**2 * (eta_dot - (e.alpha_dot / e.alpha) * eta)


def lambda_from_observables(s: SystemSpec, c: Centroid, u: UncertaintyTriple,
                            invariant: float) -> LambdaState:
    """Full lambda state from first and second moments.

    lambda_I = cc <x>,                lambda_I' = cc <p>/m,
    lambda_R = (2 cc/hbar)(sigma_xx <p> - sigma_xp <x>),
    lambda_R' = (2 cc/(m hbar))(sigma_xp <p> - sigma_pp <x>),

    with cc = sqrt(m/(2 hbar I)).  The Wronskian equals +1 exactly when the
    supplied invariant is the observable form evaluated on (c, u).
    """
    if not (invariant > 0.0):
        raise ZeroCentroidError(
            f"motion invariant must be positive to normalize lambda, got {invariant}"
        )
    cc = math.sqrt(s.m / (2.0 * s.hbar * invariant))
    x, p = c.x, c.p
    return LambdaState(
        lambda_r=(2.0 * cc / s.hbar) * (u.sigma_xx * p - u.sigma_xp * x),
        lambda_i=cc * x,
        lambda_r_dot=(2.0 * cc / (s.m * s.hbar)) * (u.sigma_xp * p - u.sigma_pp * x),
        lambda_i_dot=cc * p / s.m,
    )


@dataclass(frozen=True)
class InvariantObservableForm:
    """Motion invariant as a quadratic form in the observables.

    value = (sigma_pp <x>^2 - 2 sigma_xp <x><p> + sigma_xx <p>^2) / hbar^2;
    components holds the three raw products before division by hbar^2.
    """

    value: float
    components: tuple[float, float, float]


def invariant_observable_form(s: SystemSpec, c: Centroid, u: UncertaintyTriple,
                              ) -> InvariantObservableForm:
    parts = (
        u.sigma_pp * c.x * c.x,
        -2.0 * u.sigma_xp * c.x * c.p,
        u.sigma_xx * c.p * c.p,
    )
    return InvariantObservableForm(value=sum(parts) / s.hbar**2, components=parts)


def phase_angles(states: list[LambdaState]) -> np.ndarray:
    """Unwrapped polar angle of lambda along a trajectory."""
    raw = np.array([math.atan2(l.lambda_i, l.lambda_r) for l in states])
    return np.unwrap(raw)
