"""Shared types for Gaussian wave packet dynamics in quadratic potentials.

A Gaussian packet of a one-dimensional Hamiltonian H = p^2/2m + m w(t)^2 x^2/2
is fully described by its centroid (mean position and momentum) and one complex
width parameter.  The width can be carried in several equivalent forms: the
complex logarithmic derivative C = C_R + i C_I of the packet amplitude, the
real amplitude pair (alpha, alpha_dot), the uncertainty triple
(sigma_xx, sigma_pp, sigma_xp), or a complex classical trajectory lambda(t).
This module defines the value types, the time-dependent frequency profiles,
and the exact conversions between representations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

class UnphysicalStateError(ValueError):
    """State outside the physical domain (e.g. C_I <= 0, nonpositive width)."""


class DegenerateInitialStateError(ValueError):
    """Initial data sits exactly on a particular solution, so the linearizing
    variable kappa is undefined."""


class ZeroCentroidError(ValueError):
    """Operation requires a moving centroid (positive motion invariant)."""


class WronskianError(ValueError):
    """Lambda components do not satisfy the unit Wronskian normalization."""


class NegativeRadicandError(ValueError):
    """Width reconstruction produced a nonpositive radicand."""


class GridTooCoarseError(ValueError):
    """Grid has too few points for the requested stencil."""


class NumericalFailure(RuntimeError):
    """Base class for runtime failures of the evolution routines."""

    def __init__(self, message: str, time: float | None = None):
        super().__init__(message)
        self.time = time


class BlowUpError(NumericalFailure):
    """Trajectory magnitude exceeded the divergence guard."""


class SingularityError(NumericalFailure):
    """Closed-form denominator vanished (finite-time singularity)."""


class CausticError(NumericalFailure):
    """Kernel evaluation at a focal point (lambda_I = 0)."""


# ---------------------------------------------------------------------------
# frequency profiles
# ---------------------------------------------------------------------------

class FrequencyProfile:
    """Time-dependent oscillator frequency w(t) >= 0.

    Subclasses provide vectorized ``omega`` and the a.e. derivative
    ``omega_dot``; ``breakpoints`` lists interior times where the profile (or
    its slope) jumps, which integrators use to split the time domain.
    """

    def omega(self, t):
        raise NotImplementedError

    def omega_sq(self, t):
        w = self.omega(t)
        return w * w

    def omega_dot(self, t):
        raise NotImplementedError

    def breakpoints(self, t0: float, t1: float) -> list[float]:
        return []

    @property
    def constant_value(self) -> float | None:
        """The constant frequency, or None for genuinely time-dependent profiles."""
        return None


@dataclass(frozen=True)
class ConstantFrequency(FrequencyProfile):
    """w(t) = omega0 for all t.  omega0 = 0 describes free motion."""

    omega0: float

    def __post_init__(self):
        if not (self.omega0 >= 0.0) or not math.isfinite(self.omega0):
            raise ValueError(f"omega0 must be finite and >= 0, got {self.omega0}")

    def omega(self, t):
        return self.omega0 * np.ones_like(np.asarray(t, dtype=float))

    def omega_dot(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    @property
    def constant_value(self) -> float | None:
        return self.omega0


@dataclass(frozen=True)
class PiecewiseConstantFrequency(FrequencyProfile):
    """Piecewise constant w(t), given as (t_start, omega) segments.

    Segment i is active on [t_i, t_{i+1}); the last segment extends to
    +infinity and the first value also covers t < t_0.
    """

    segments: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.segments) == 0:
            raise ValueError("need at least one (t_start, omega) segment")
        starts = [s[0] for s in self.segments]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError("segment start times must be strictly increasing")
        if any(not (w >= 0.0) for _, w in self.segments):
            raise ValueError("frequencies must be >= 0")
        object.__setattr__(self, "segments", tuple((float(a), float(w)) for a, w in self.segments))

    def omega(self, t):
        t = np.asarray(t, dtype=float)
        starts = np.array([s[0] for s in self.segments])
        values = np.array([s[1] for s in self.segments])
        idx = np.clip(np.searchsorted(starts, t, side="right") - 1, 0, len(values) - 1)
        return values[idx]

    def omega_dot(self, t):
        # zero almost everywhere; the jumps are handled via breakpoints
        return np.zeros_like(np.asarray(t, dtype=float))

    def breakpoints(self, t0: float, t1: float) -> list[float]:
        return [a for a, _ in self.segments if t0 < a < t1]


@dataclass(frozen=True)
class SampledFrequency(FrequencyProfile):
    """w(t) linearly interpolated through sample points, clamped outside."""

    times: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        values = tuple(float(v) for v in self.values)
        if len(times) != len(values) or len(times) < 2:
            raise ValueError("need matching times/values with at least two samples")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("sample times must be strictly increasing")
        if any(not (v >= 0.0) for v in values):
            raise ValueError("frequencies must be >= 0")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def omega(self, t):
        return np.interp(np.asarray(t, dtype=float), self.times, self.values)

    def omega_dot(self, t):
        t = np.asarray(t, dtype=float)
        times = np.asarray(self.times)
        values = np.asarray(self.values)
        slopes = np.diff(values) / np.diff(times)
        idx = np.clip(np.searchsorted(times, t, side="right") - 1, 0, len(slopes) - 1)
        out = slopes[idx]
        return np.where((t < times[0]) | (t > times[-1]), 0.0, out)

    def breakpoints(self, t0: float, t1: float) -> list[float]:
        return [t for t in self.times if t0 < t < t1]


# ---------------------------------------------------------------------------
# system and state types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SystemSpec:
    """Mass, Planck constant and frequency profile of the quadratic system."""

    m: float = 1.0
    hbar: float = 1.0
    omega: FrequencyProfile = field(default_factory=lambda: ConstantFrequency(1.0))

    def __post_init__(self):
        if not (self.m > 0.0):
            raise ValueError(f"mass must be positive, got {self.m}")
        if not (self.hbar > 0.0):
            raise ValueError(f"hbar must be positive, got {self.hbar}")


@dataclass(frozen=True)
class Centroid:
    """Mean position x and mean momentum p of the packet."""

    x: float
    p: float


@dataclass(frozen=True)
class RiccatiState:
    """Complex width variable C = C_R + i C_I (units 1/time).

    C_I > 0 for physical (normalizable) packets; the type itself admits any
    real pair so that the unphysical half-plane can be explored.
    """

    c_r: float
    c_i: float

    @property
    def value(self) -> complex:
        return complex(self.c_r, self.c_i)

    @property
    def is_physical(self) -> bool:
        return self.c_i > 0.0


@dataclass(frozen=True)
class ErmakovState:
    """Amplitude alpha > 0 (dimensionless) and its time derivative."""

    alpha: float
    alpha_dot: float

    def __post_init__(self):
        if not (self.alpha > 0.0):
            raise UnphysicalStateError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class UncertaintyTriple:
    """Position variance, momentum variance and symmetrized covariance."""

    sigma_xx: float
    sigma_pp: float
    sigma_xp: float

    def __post_init__(self):
        if not (self.sigma_xx > 0.0) or not (self.sigma_pp > 0.0):
            raise UnphysicalStateError(
                f"variances must be positive, got ({self.sigma_xx}, {self.sigma_pp})"
            )


@dataclass(frozen=True)
class LambdaState:
    """Complex classical trajectory lambda = lambda_r + i lambda_i and velocity.

    For width evolution the two real components are independent solutions of
    the classical equation of motion normalized to unit Wronskian
    lambda_i_dot * lambda_r - lambda_i * lambda_r_dot = 1.
    """

    lambda_r: float
    lambda_i: float
    lambda_r_dot: float
    lambda_i_dot: float

    @property
    def value(self) -> complex:
        return complex(self.lambda_r, self.lambda_i)

    @property
    def velocity(self) -> complex:
        return complex(self.lambda_r_dot, self.lambda_i_dot)

    @property
    def wronskian(self) -> float:
        return self.lambda_i_dot * self.lambda_r - self.lambda_i * self.lambda_r_dot


@dataclass(frozen=True)
class GaussianWavePacket:
    """Gaussian packet: centroid plus complex width in Riccati form."""

    centroid: Centroid
    riccati: RiccatiState

    def __post_init__(self):
        if not self.riccati.is_physical:
            raise UnphysicalStateError(
                f"packet width requires C_I > 0, got {self.riccati.c_i}"
            )


@dataclass(frozen=True)
class IntegratorConfig:
    """Shared ODE integration contract.

    method "adaptive" is an embedded Runge-Kutta pair with per-step error
    control; "rk4" is the classical fixed-step fourth-order scheme used as an
    independent cross-check.  The default tolerances keep conserved
    quantities (Wronskian, motion invariant, uncertainty product) flat to
    better than 1e-9 over tens of periods.
    """

    method: str = "adaptive"
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_step: float = math.inf
    fixed_step: float = 1e-3

    def __post_init__(self):
        if self.method not in ("adaptive", "rk4"):
            raise ValueError(f"unknown method {self.method!r}")
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise ValueError("tolerances must be positive")
        if not (self.max_step > 0.0):
            raise ValueError("max_step must be positive")
        if not (self.fixed_step > 0.0):
            raise ValueError("fixed_step must be positive")


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------

def riccati_from_ermakov(e: ErmakovState) -> RiccatiState:
    """Map (alpha, alpha_dot) to C = alpha_dot/alpha + i/alpha^2."""
    return RiccatiState(c_r=e.alpha_dot / e.alpha, c_i=1.0 / e.alpha**2)


def ermakov_from_riccati(r: RiccatiState) -> ErmakovState:
    """Invert the width map; requires the physical half-plane C_I > 0."""
    if not (r.c_i > 0.0):
        raise UnphysicalStateError(f"C_I must be positive, got {r.c_i}")
    alpha = 1.0 / math.sqrt(r.c_i)
    return ErmakovState(alpha=alpha, alpha_dot=r.c_r * alpha)


def uncertainties_from_ermakov(s: SystemSpec, e: ErmakovState) -> UncertaintyTriple:
    """Moments of the packet in terms of the amplitude pair.

    sigma_xx = (hbar/2m) alpha^2, sigma_pp = (m hbar/2)(alpha_dot^2 + 1/alpha^2),
    sigma_xp = (hbar/2) alpha alpha_dot.  These satisfy
    sigma_xx sigma_pp - sigma_xp^2 = hbar^2/4 identically.
    """
    a, ad = e.alpha, e.alpha_dot
    return UncertaintyTriple(
        sigma_xx=(s.hbar / (2.0 * s.m)) * a * a,
        sigma_pp=(s.m * s.hbar / 2.0) * (ad * ad + 1.0 / (a * a)),
        sigma_xp=(s.hbar / 2.0) * a * ad,
    )


def ermakov_from_uncertainties(s: SystemSpec, u: UncertaintyTriple) -> ErmakovState:
    """Amplitude pair from moments: alpha = sqrt(2 m sigma_xx / hbar).

    Only sigma_xx and sigma_xp enter; sigma_pp is fixed by the minimum
    uncertainty of the Gaussian family.
    """
    alpha = math.sqrt(2.0 * s.m * u.sigma_xx / s.hbar)
    alpha_dot = u.sigma_xp * math.sqrt(2.0 / (s.hbar * s.m * u.sigma_xx))
    return ErmakovState(alpha=alpha, alpha_dot=alpha_dot)


def riccati_from_uncertainties(s: SystemSpec, u: UncertaintyTriple) -> RiccatiState:
    """C_R = sigma_xp/(m sigma_xx), C_I = hbar/(2 m sigma_xx)."""
    return RiccatiState(
        c_r=u.sigma_xp / (s.m * u.sigma_xx),
        c_i=s.hbar / (2.0 * s.m * u.sigma_xx),
    )


def schroedinger_robertson_defect(s: SystemSpec, u: UncertaintyTriple) -> float:
    """sigma_xx sigma_pp - sigma_xp^2 - hbar^2/4 (zero for a pure Gaussian)."""
    return u.sigma_xx * u.sigma_pp - u.sigma_xp**2 - s.hbar**2 / 4.0


def wavepacket_amplitude(s: SystemSpec, wp: GaussianWavePacket, x):
    """Complex amplitude of the normalized packet at position(s) x.

    Uses the convention of a real positive normalization factor and zero
    global phase:

        psi(x) = (m C_I / (pi hbar))^(1/4)
                 exp{ (i m / 2 hbar) C (x - <x>)^2 + (i/hbar) <p> (x - <x>) }
    """
    x = np.asarray(x, dtype=float)
    c = wp.riccati.value
    dx = x - wp.centroid.x
    norm = (s.m * wp.riccati.c_i / (math.pi * s.hbar)) ** 0.25
    phase = (1j * s.m / (2.0 * s.hbar)) * c * dx * dx + (1j / s.hbar) * wp.centroid.p * dx
    return norm * np.exp(phase)
