"""Complex Riccati form of the Gaussian width evolution.

The width variable C(t) = C_R + i C_I obeys

    dC/dt + C^2 + w(t)^2 = 0,

a complex Riccati equation.  For constant frequency the equation has the two
constant solutions C = +i w0 and C = -i w0; only the upper one is physical
(C_I > 0 keeps the packet normalizable).  Around a known particular solution
the equation linearizes: writing C = C~ + 1/kappa turns it into
d(kappa)/dt - 2 C~ kappa = 1, solvable in closed form.  Trajectories that
reach the real axis run to infinity in finite time, which is the hallmark of
the unphysical region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BlowUpError,
    DegenerateInitialStateError,
    IntegratorConfig,
    RiccatiState,
    SingularityError,
    SystemSpec,
    UncertaintyTriple,
)
from .integrate import Guard, integrate_grid


@dataclass(frozen=True)
class ParticularSolution:
    """Constant solution C~ = sign * i * omega0 of the constant-frequency equation."""

    value: complex
    sign: int

    @property
    def is_physical(self) -> bool:
        return self.value.imag > 0.0


def particular_solutions(omega0: float) -> tuple[ParticularSolution, ParticularSolution]:
    """The two constant solutions +i*omega0 and -i*omega0.

    For omega0 = 0 both collapse onto C = 0.
    """
    if not (omega0 >= 0.0):
        raise ValueError(f"omega0 must be >= 0, got {omega0}")
    return (
        ParticularSolution(value=1j * omega0, sign=+1),
        ParticularSolution(value=-1j * omega0, sign=-1),
    )


@dataclass(frozen=True)
class BernoulliInitial:
    """Initial datum for the linearized equation, as V(0) or kappa(0) = 1/V(0).

    V(0) = 0 encodes "start exactly on the particular solution"; in that case
    kappa is undefined and the solution stays on C~ forever.
    """

    v0: complex

    @classmethod
    def from_v0(cls, v0: complex) -> "BernoulliInitial":
        return cls(v0=complex(v0))

    @classmethod
    def from_kappa0(cls, kappa0: complex) -> "BernoulliInitial":
        kappa0 = complex(kappa0)
        if kappa0 == 0:
            raise ValueError("kappa0 must be nonzero")
        return cls(v0=1.0 / kappa0)

    @property
    def kappa0(self) -> complex:
        if self.v0 == 0:
            raise DegenerateInitialStateError("V(0) = 0: kappa is undefined on a particular solution")
        return 1.0 / self.v0


def bernoulli_solution(ctilde, init: BernoulliInitial, t):
    """Closed-form deviation V(t) from the particular solution ctilde.

    V(t) = exp(-2 C~ t) / [kappa0 + (1 - exp(-2 C~ t)) / (2 C~)], degenerating
    to V(t) = 1/(kappa0 + t) when C~ = 0.  Raises SingularityError at real
    times where the denominator vanishes.
    """
    ct = ctilde.value if isinstance(ctilde, ParticularSolution) else complex(ctilde)
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)

    if init.v0 == 0:
        out = np.zeros(t_arr.shape, dtype=complex)
        return complex(out[0]) if scalar else out

    kappa0 = init.kappa0
    if ct == 0:
        denom = kappa0 + t_arr
        scale = max(abs(kappa0), float(np.max(np.abs(t_arr))), 1.0)
        decay = np.ones(t_arr.shape, dtype=complex)
    else:
        decay = np.exp(-2.0 * ct * t_arr)
        denom = kappa0 + (1.0 - decay) / (2.0 * ct)
        scale = max(abs(kappa0), abs(1.0 / (2.0 * ct)))

    bad = np.abs(denom) < 1e-12 * scale
    if np.any(bad):
        t_bad = float(t_arr[np.argmax(bad)])
        raise SingularityError(f"Bernoulli denominator vanishes at t = {t_bad:.6g}", time=t_bad)
    out = decay / denom
    return complex(out[0]) if scalar else out


def kappa0_from_initial_moments(s: SystemSpec, u0: UncertaintyTriple, omega0: float) -> complex:
    """Initial kappa for the physical particular solution from second moments.

    kappa0 = [sigma_xp/2 - i(hbar/4 - m w0 sigma_xx/2)]
             / [sigma_pp/2m + m w0^2 sigma_xx/2 - hbar w0/2]

    The denominator is the energy excess over the coherent ground state of the
    w0 well; it vanishes exactly when the initial state is that coherent
    state, in which case C sits on the particular solution and kappa is
    undefined (DegenerateInitialStateError).
    """
    if not (omega0 >= 0.0):
        raise ValueError(f"omega0 must be >= 0, got {omega0}")
    num = u0.sigma_xp / 2.0 - 1j * (s.hbar / 4.0 - s.m * omega0 * u0.sigma_xx / 2.0)
    den = u0.sigma_pp / (2.0 * s.m) + s.m * omega0**2 * u0.sigma_xx / 2.0 - s.hbar * omega0 / 2.0
    scale = u0.sigma_pp / (2.0 * s.m) + s.m * omega0**2 * u0.sigma_xx / 2.0 + s.hbar * omega0 / 2.0
    if abs(den) < 1e-12 * scale:
        raise DegenerateInitialStateError(
            "initial moments describe the coherent state of the w0 well; "
            "C(0) equals the particular solution and kappa0 is undefined"
        )
    return num / den


def riccati_closed_form(omega0: float, c0: complex, t):
    """C(t) for constant frequency via the Bernoulli linearization.

    Works for any complex initial value, both half-planes included.  Raises
    SingularityError at a real-time pole of the solution.
    """
    plus, _minus = particular_solutions(omega0)
    ct = plus.value
    c0 = complex(c0)
    if c0 == ct:
        t_arr = np.asarray(t, dtype=float)
        out = np.full(np.atleast_1d(t_arr).shape, ct, dtype=complex)
        return ct if t_arr.ndim == 0 else out
    init = BernoulliInitial.from_v0(c0 - ct)
    v = bernoulli_solution(ct, init, t)
    return ct + v


def _omega_bound(s: SystemSpec, t0: float, t1: float) -> float:
    probe = np.linspace(t0, t1, 513)
    extra = s.omega.breakpoints(t0, t1)
    if extra:
        probe = np.concatenate([probe, np.asarray(extra)])
    return float(np.max(s.omega.omega(probe)))


def integrate_riccati(s: SystemSpec, c0: RiccatiState, t_grid,
                      cfg: IntegratorConfig | None = None,
                      blow_up_bound: float | None = None) -> list[RiccatiState]:
    """Integrate the complex Riccati equation on the given time grid.

    Any initial value is accepted (the unphysical half-plane is reachable);
    trajectories whose magnitude exceeds ``blow_up_bound`` (default
    1e6 * max(1, max w)) raise BlowUpError with the crossing time.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if blow_up_bound is None:
        blow_up_bound = 1e6 * max(1.0, _omega_bound(s, float(t_grid[0]), float(t_grid[-1])))
    bound_sq = blow_up_bound**2

    def rhs(t, y):
        cr, ci = y
        w2 = float(s.omega.omega_sq(t))
        return np.array([-cr * cr + ci * ci - w2, -2.0 * cr * ci])

    guard = Guard(
        fn=lambda t, y: bound_sq - (y[0] ** 2 + y[1] ** 2),
        error=lambda t: BlowUpError(
            f"|C| exceeded {blow_up_bound:.3g} at t = {t:.6g} (divergent width trajectory)",
            time=t,
        ),
    )
    bps = s.omega.breakpoints(float(t_grid[0]), float(t_grid[-1]))
    ys = integrate_grid(rhs, [c0.c_r, c0.c_i], t_grid, cfg, breakpoints=bps, guards=[guard])
    return [RiccatiState(c_r=float(a), c_i=float(b)) for a, b in ys]


def vector_field(omega0: float, c_r_range=(-3.0, 3.0), c_i_range=(-3.0, 3.0),
                 n_grid: int = 21):
    """Phase-plane field (dC_R/dt, dC_I/dt) on a rectangular grid.

    Returns meshgrids (C_R, C_I, F_R, F_I) with
    F_R = -C_R^2 + C_I^2 - omega0^2 and F_I = -2 C_R C_I.  The stationary
    points sit at (0, +omega0) and (0, -omega0).
    """
    if n_grid < 2:
        raise ValueError("n_grid must be at least 2")
    if not (omega0 >= 0.0):
        raise ValueError(f"omega0 must be >= 0, got {omega0}")
    cr = np.linspace(c_r_range[0], c_r_range[1], n_grid)
    ci = np.linspace(c_i_range[0], c_i_range[1], n_grid)
    CR, CI = np.meshgrid(cr, ci, indexing="xy")
    FR = -CR**2 + CI**2 - omega0**2
    FI = -2.0 * CR * CI
    return CR, CI, FR, FI
