"""Scenario execution: time series, summaries, conservation checks, reports.

The evolve pipeline runs three independent integrations (centroid+amplitude,
second moments, inverse-width pair) so that the conservation columns in the
CSV compare genuinely distinct routes rather than re-derivations of one
solution.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .complex_newton import integrate_lambda, width_lambda_initial
from .core import Centroid, SystemSpec, UncertaintyTriple, schroedinger_robertson_defect
from .ermakov import ermakov_invariant, integrate_joint
from .propagator import (
    FOCAL_TOL,
    InitialGaussian,
    evolve_via_kernel,
    kernel_lambda_initial,
)
from .scenario import Scenario
from .uncertainty import correlation_coefficient, integrate_uncertainty_system

CSV_COLUMNS = ("t", "eta", "eta_dot", "alpha", "alpha_dot", "C_R", "C_I",
               "sigma_xx", "sigma_pp", "sigma_xp", "Cor", "I_ermakov",
               "SR_defect", "wronskian_defect")

# conservation thresholds applied by `check`, matching the library-wide
# accuracy targets (see tests/test_acceptance.py)
CHECK_SR_TOL = 1e-9
CHECK_INVARIANT_TOL = 1e-8
CHECK_WRONSKIAN_TOL = 1e-9
CHECK_ROUTE_TOL = 1e-7


def atomic_write_text(path, text: str) -> None:
    """Write text to path via a same-directory temp file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class EvolutionResult:
    """Column arrays (keyed per CSV_COLUMNS) plus the run summary."""

    scenario: Scenario
    columns: dict
    summary: dict


def time_grid(scenario: Scenario) -> np.ndarray:
    return np.linspace(0.0, scenario.t_end, scenario.n_steps + 1)


def run_evolution(scenario: Scenario) -> EvolutionResult:
    s = scenario.system
    t = time_grid(scenario)
    cfg = scenario.integrator

    centroids, ermakovs = integrate_joint(s, scenario.centroid,
                                          scenario.ermakov, t, cfg)
    moments = integrate_uncertainty_system(s, scenario.uncertainties, t, cfg)
    lambdas = integrate_lambda(s, width_lambda_initial(scenario.ermakov), t, cfg)

    alpha = np.array([e.alpha for e in ermakovs])
    alpha_dot = np.array([e.alpha_dot for e in ermakovs])
    columns = {
        "t": t,
        "eta": np.array([c.x for c in centroids]),
        "eta_dot": np.array([c.p / s.m for c in centroids]),
        "alpha": alpha,
        "alpha_dot": alpha_dot,
        "C_R": alpha_dot / alpha,
        "C_I": 1.0 / alpha**2,
        "sigma_xx": np.array([u.sigma_xx for u in moments]),
        "sigma_pp": np.array([u.sigma_pp for u in moments]),
        "sigma_xp": np.array([u.sigma_xp for u in moments]),
        "Cor": np.array([correlation_coefficient(u) for u in moments]),
        "I_ermakov": np.array([ermakov_invariant(s, c, e)
                               for c, e in zip(centroids, ermakovs)]),
        "SR_defect": np.array([schroedinger_robertson_defect(s, u)
                               for u in moments]),
        "wronskian_defect": np.array([l.wronskian - 1.0 for l in lambdas]),
    }

    sr_scale = s.hbar**2 / 4.0
    inv = columns["I_ermakov"]
    inv0 = float(inv[0])
    inv_drift = float(np.max(np.abs(inv - inv0)))
    if abs(inv0) > 1e-12:
        inv_drift /= abs(inv0)
    summary = {
        "scenario": scenario.name,
        "initial_kind": scenario.initial_kind,
        "t_end": scenario.t_end,
        "n_steps": scenario.n_steps,
        "max_sr_violation": float(np.max(np.abs(columns["SR_defect"]))) / sr_scale,
        "invariant_initial": inv0,
        "invariant_drift": inv_drift,
        "wronskian_drift": float(np.max(np.abs(columns["wronskian_defect"]))),
        "moments": {
            key: {"min": float(np.min(columns[key])),
                  "max": float(np.max(columns[key]))}
            for key in ("sigma_xx", "sigma_pp", "sigma_xp")
        },
        "cor": {"min": float(np.min(columns["Cor"])),
                "max": float(np.max(columns["Cor"]))},
    }
    return EvolutionResult(scenario=scenario, columns=columns, summary=summary)


def timeseries_csv_text(result: EvolutionResult) -> str:
    cols = [result.columns[name] for name in CSV_COLUMNS]
    lines = [",".join(CSV_COLUMNS)]
    for row in zip(*cols):
        lines.append(",".join("%.17g" % v for v in row))
    return "\n".join(lines) + "\n"


def summary_json_text(summary: dict) -> str:
    return json.dumps(summary, sort_keys=True, indent=2) + "\n"


def write_timeseries_csv(result: EvolutionResult, path) -> None:
    atomic_write_text(path, timeseries_csv_text(result))


def write_summary_json(summary: dict, path) -> None:
    atomic_write_text(path, summary_json_text(summary))


def check_violations(result: EvolutionResult) -> list[str]:
    """Conservation-law and cross-route violations for a finished run."""
    summary = result.summary
    violations = []
    if summary["max_sr_violation"] >= CHECK_SR_TOL:
        violations.append(
            f"uncertainty-product drift {summary['max_sr_violation']:.3e} "
            f"exceeds {CHECK_SR_TOL:g}")
    if summary["invariant_drift"] >= CHECK_INVARIANT_TOL:
        violations.append(
            f"invariant drift {summary['invariant_drift']:.3e} "
            f"exceeds {CHECK_INVARIANT_TOL:g}")
    if summary["wronskian_drift"] >= CHECK_WRONSKIAN_TOL:
        violations.append(
            f"wronskian drift {summary['wronskian_drift']:.3e} "
            f"exceeds {CHECK_WRONSKIAN_TOL:g}")
    s = result.scenario.system
    via_alpha = (s.hbar / (2.0 * s.m)) * result.columns["alpha"] ** 2
    route_gap = float(np.max(np.abs(via_alpha - result.columns["sigma_xx"])))
    if route_gap >= CHECK_ROUTE_TOL:
        violations.append(
            f"amplitude-route vs moment-route sigma_xx gap {route_gap:.3e} "
            f"exceeds {CHECK_ROUTE_TOL:g}")
    return violations


def propagate_report(scenario: Scenario, times=None) -> dict:
    """Compare kernel-convolution evolution against direct integration.

    On the scenario grid, points too close to a kernel focus (|lambda_I|
    below FOCAL_TOL relative to |lambda|) are skipped and counted; with an
    explicit `times` list every requested instant is evaluated, so hitting a
    focus raises CausticError. t = 0 is the identity kernel and always
    excluded from the default sweep.
    """
    s = scenario.system
    init = InitialGaussian(alpha0=scenario.ermakov.alpha,
                           p0=scenario.centroid.p,
                           x_center=scenario.centroid.x,
                           alpha_dot0=scenario.ermakov.alpha_dot)
    if times is None:
        t = time_grid(scenario)
        strict = False
    else:
        t = np.asarray(sorted(float(v) for v in times), dtype=float)
        if t.size == 0:
            raise ValueError("times list is empty")
        if t[0] < 0.0 or t[-1] > scenario.t_end:
            raise ValueError("times must lie within [0, t_end]")
        if t[0] > 0.0:
            t = np.concatenate(([0.0], t))
        strict = True
    cfg = scenario.integrator
    lambdas = integrate_lambda(s, kernel_lambda_initial(init.alpha0), t, cfg)
    centroids, ermakovs = integrate_joint(s, scenario.centroid,
                                          scenario.ermakov, t, cfg)

    n_skipped = 0
    max_dx = max_dp = max_dc = 0.0
    evaluated = []
    for ti, l, c, e in zip(t[1:], lambdas[1:], centroids[1:], ermakovs[1:]):
        if not strict and abs(l.lambda_i) < FOCAL_TOL * abs(l.value):
            n_skipped += 1
            continue
        packet = evolve_via_kernel(s, init, l)
        direct_c = complex(e.alpha_dot / e.alpha, 1.0 / e.alpha**2)
        max_dx = max(max_dx, abs(packet.centroid.x - c.x))
        max_dp = max(max_dp, abs(packet.centroid.p - c.p))
        max_dc = max(max_dc, abs(packet.riccati.value - direct_c))
        evaluated.append(float(ti))
    return {
        "scenario": scenario.name,
        "n_points": len(evaluated),
        "n_skipped_focal": n_skipped,
        "max_abs_dx": max_dx,
        "max_abs_dp": max_dp,
        "max_abs_dc": max_dc,
        "t_first": evaluated[0] if evaluated else None,
        "t_last": evaluated[-1] if evaluated else None,
    }


def wigner_snapshots(scenario: Scenario, times) -> list[dict]:
    """Evolve the scenario and build one Wigner grid record per time.

    Returns dicts with keys t, centroid, uncertainties, grid, peak, energy.
    """
    from .core import uncertainties_from_ermakov
    from .wigner import classical_energy, wigner_grid

    requested = [float(v) for v in times]
    if not requested:
        raise ValueError("times list is empty")
    if any(v < 0.0 for v in requested):
        raise ValueError("times must be non-negative")
    grid_times = sorted(set([0.0] + requested))
    t = np.asarray(grid_times, dtype=float)
    centroids, ermakovs = integrate_joint(scenario.system, scenario.centroid,
                                          scenario.ermakov, t,
                                          scenario.integrator)
    by_time = {float(ti): (c, e) for ti, c, e in zip(t, centroids, ermakovs)}
    omega0 = scenario.system.omega.constant_value
    records = []
    for ti in requested:
        c, e = by_time[ti]
        u = uncertainties_from_ermakov(scenario.system, e)
        grid = wigner_grid(scenario.system, c, u)
        records.append({
            "t": ti,
            "centroid": c,
            "uncertainties": u,
            "grid": grid,
            "peak": grid.peak(),
            "energy": (classical_energy(scenario.system, c, omega0)
                       if omega0 is not None else None),
        })
    return records
