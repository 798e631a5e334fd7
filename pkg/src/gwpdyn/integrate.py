"""ODE driver shared by the evolution routines.

Two interchangeable methods sit behind one interface: an adaptive embedded
Runge-Kutta pair (eighth-order with error control, used as the default) and a
classical fixed-step RK4 that serves as an independent cross-check.  The
driver splits the time domain at profile discontinuities so that adaptive
error control never straddles a frequency switch, and supports guard
functions that abort the run when a trajectory leaves its admissible region
(divergence, vanishing amplitude).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .core import IntegratorConfig, NumericalFailure


@dataclass(frozen=True)
class Guard:
    """Abort condition: ``error(t)`` is raised once ``fn(t, y) <= 0``."""

    fn: Callable[[float, np.ndarray], float]
    error: Callable[[float], Exception]


def _segments(t0: float, t1: float, breakpoints) -> list[tuple[float, float]]:
    interior = sorted({float(b) for b in breakpoints if t0 < b < t1})
    pts = [t0] + interior + [t1]
    return list(zip(pts[:-1], pts[1:]))


def _scipy_event(guard: Guard):
    def event(t, y):
        return guard.fn(t, y)

    event.terminal = True
    event.direction = -1
    return event


def _adaptive(rhs, y0, t_grid, cfg, breakpoints, guards):
    out = np.empty((len(t_grid), len(y0)))
    out[0] = y0
    y = np.array(y0, dtype=float)
    events = [_scipy_event(g) for g in guards]
    filled = 1
    for a, b in _segments(t_grid[0], t_grid[-1], breakpoints):
        mask = (t_grid > a) & (t_grid <= b)
        t_eval = t_grid[mask]
        need_b = t_eval.size == 0 or t_eval[-1] < b
        te = np.append(t_eval, b) if need_b else t_eval
        sol = solve_ivp(
            rhs,
            (a, b),
            y,
            method="DOP853",
            t_eval=te,
            rtol=cfg.rel_tol,
            atol=cfg.abs_tol,
            max_step=cfg.max_step,
            events=events if events else None,
        )
        if sol.status == 1:
            for hits, guard in zip(sol.t_events, guards):
                if hits.size:
                    raise guard.error(float(hits[0]))
        if not sol.success:
            raise NumericalFailure(f"integration failed: {sol.message}")
        vals = sol.y.T
        n_out = t_eval.size
        out[filled:filled + n_out] = vals[:n_out]
        filled += n_out
        y = vals[-1]
    return out


def _rk4_step(rhs, t, y, h):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _rk4(rhs, y0, t_grid, cfg, breakpoints, guards):
    out = np.empty((len(t_grid), len(y0)))
    out[0] = y0
    y = np.array(y0, dtype=float)
    grid_set = {float(t) for t in t_grid}
    checkpoints = sorted(grid_set | {float(b) for b in breakpoints
                                     if t_grid[0] < b < t_grid[-1]})
    filled = 1
    for a, b in zip(checkpoints[:-1], checkpoints[1:]):
        n_sub = max(1, math.ceil((b - a) / cfg.fixed_step))
        h = (b - a) / n_sub
        t = a
        for _ in range(n_sub):
            y = _rk4_step(rhs, t, y, h)
            t += h
            if not np.all(np.isfinite(y)):
                raise NumericalFailure("non-finite state during fixed-step integration", time=t)
            for guard in guards:
                if guard.fn(t, y) <= 0.0:
                    raise guard.error(t)
        if b in grid_set:
            out[filled] = y
            filled += 1
    return out


def integrate_grid(rhs, y0, t_grid, cfg: IntegratorConfig | None = None,
                   breakpoints=(), guards=()) -> np.ndarray:
    """Integrate y' = rhs(t, y) and sample the solution on t_grid.

    Parameters
    ----------
    rhs : callable(t, y) -> array
        Right-hand side of the first-order system.
    y0 : array_like
        State at t_grid[0].
    t_grid : array_like
        Strictly increasing output times; integration runs over the full span.
    cfg : IntegratorConfig, optional
        Method and tolerances; defaults to the adaptive pair at 1e-10.
    breakpoints : iterable of float
        Interior times where the right-hand side is discontinuous.
    guards : iterable of Guard
        Abort conditions checked continuously (adaptive) or per step (rk4).

    Returns
    -------
    ndarray of shape (len(t_grid), len(y0)).
    """
    cfg = cfg if cfg is not None else IntegratorConfig()
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1:
        raise ValueError("t_grid must be a one-dimensional array of times")
    if np.any(np.diff(t_grid) <= 0.0):
        raise ValueError("t_grid must be strictly increasing")
    y0 = np.asarray(y0, dtype=float)
    if t_grid.size == 1:
        return y0[np.newaxis, :].copy()
    if cfg.method == "adaptive":
        return _adaptive(rhs, y0, t_grid, cfg, breakpoints, guards)
    return _rk4(rhs, y0, t_grid, cfg, breakpoints, guards)
