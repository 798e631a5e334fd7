"""Scenario files: structured-text descriptions of one evolution run.

A scenario names the system (mass, hbar, frequency profile), exactly one
initial-state representation (second moments, amplitude pair, or inverse
width), the time grid, and optional integrator overrides and plot requests.
TOML is the native format; JSON with the same structure is accepted.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .core import (
    Centroid,
    ConstantFrequency,
    ErmakovState,
    FrequencyProfile,
    IntegratorConfig,
    PiecewiseConstantFrequency,
    RiccatiState,
    SampledFrequency,
    SystemSpec,
    UncertaintyTriple,
    ermakov_from_riccati,
    ermakov_from_uncertainties,
    riccati_from_ermakov,
    schroedinger_robertson_defect,
    uncertainties_from_ermakov,
)

# relative slack allowed on the minimum-uncertainty identity of a config's
# moment triple; anything looser cannot describe a single pure Gaussian
SR_CONFIG_TOL = 1e-9

ALLOWED_PLOTS = ("moments", "correlation", "squeezing")


class ScenarioParseError(ValueError):
    """The scenario file is missing or not decodable."""


class ScenarioValidationError(ValueError):
    """The scenario file decoded fine but describes an invalid run."""


@dataclass(frozen=True)
class Scenario:
    """A validated run description with all state forms pre-converted."""

    name: str
    system: SystemSpec
    centroid: Centroid
    ermakov: ErmakovState
    riccati: RiccatiState
    uncertainties: UncertaintyTriple
    t_end: float
    n_steps: int
    initial_kind: str
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    plots: tuple[str, ...] = ()


def bundled_scenario_dir():
    return resources.files("gwpdyn") / "scenarios"


def bundled_scenario_names() -> list[str]:
    return sorted(p.name for p in bundled_scenario_dir().iterdir()
                  if p.name.endswith(".toml"))


def resolve_scenario_path(name: str):
    """Interpret `name` as a filesystem path, else as a bundled scenario."""
    path = Path(name)
    if path.exists():
        return path
    if path.suffix in ("", ".toml") and "/" not in name:
        candidate = bundled_scenario_dir() / (
            name if name.endswith(".toml") else name + ".toml")
        if candidate.is_file():
            return candidate
    raise ScenarioParseError(f"scenario file not found: {name}")


def load_scenario(name: str) -> Scenario:
    path = resolve_scenario_path(name)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ScenarioParseError(f"{path}: not valid UTF-8 text ({exc})") from exc
    suffix = Path(str(path)).suffix.lower()
    if suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioParseError(f"{path}: invalid JSON ({exc})") from exc
    elif suffix == ".toml":
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ScenarioParseError(f"{path}: invalid TOML ({exc})") from exc
    else:
        raise ScenarioParseError(f"{path}: unsupported scenario format "
                                 f"(use .toml or .json)")
    if not isinstance(data, dict):
        raise ScenarioParseError(f"{path}: top level must be a table/object")
    return scenario_from_dict(data, name=Path(str(path)).stem)


def _as_float(table: dict, key: str, where: str) -> float:
    try:
        value = table[key]
    except KeyError:
        raise ScenarioValidationError(f"{where}: missing required key '{key}'")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioValidationError(f"{where}.{key}: expected a number")
    return float(value)


def _as_table(data: dict, key: str, required: bool = True) -> dict:
    value = data.get(key)
    if value is None:
        if required:
            raise ScenarioValidationError(f"missing required table [{key}]")
        return {}
    if not isinstance(value, dict):
        raise ScenarioValidationError(f"[{key}] must be a table")
    return value


def _reject_unknown(table: dict, allowed: set, where: str) -> None:
    unknown = set(table) - allowed
    if unknown:
        raise ScenarioValidationError(
            f"{where}: unknown key(s) {', '.join(sorted(unknown))}")


def _frequency_from_table(table: dict) -> FrequencyProfile:
    kind = table.get("kind", "constant")
    if kind == "constant":
        _reject_unknown(table, {"kind", "omega0"}, "system.omega")
        return ConstantFrequency(_as_float(table, "omega0", "system.omega"))
    if kind == "piecewise":
        _reject_unknown(table, {"kind", "segments"}, "system.omega")
        segments = table.get("segments")
        if (not isinstance(segments, list) or not segments
                or not all(isinstance(s, list) and len(s) == 2 for s in segments)):
            raise ScenarioValidationError(
                "system.omega.segments: expected a list of [start, omega] pairs")
        try:
            return PiecewiseConstantFrequency(
                tuple((float(a), float(b)) for a, b in segments))
        except (TypeError, ValueError) as exc:
            raise ScenarioValidationError(f"system.omega.segments: {exc}") from exc
    if kind == "sampled":
        _reject_unknown(table, {"kind", "times", "values"}, "system.omega")
        times, values = table.get("times"), table.get("values")
        if not isinstance(times, list) or not isinstance(values, list):
            raise ScenarioValidationError(
                "system.omega: sampled profiles need 'times' and 'values' lists")
        try:
            return SampledFrequency(tuple(float(t) for t in times),
                                    tuple(float(v) for v in values))
        except (TypeError, ValueError) as exc:
            raise ScenarioValidationError(f"system.omega: {exc}") from exc
    raise ScenarioValidationError(
        f"system.omega.kind: unknown kind '{kind}' "
        f"(expected constant, piecewise, or sampled)")


def _initial_states(table: dict, system: SystemSpec):
    kind = table.get("kind")
    if kind not in ("moments", "ermakov", "riccati"):
        raise ScenarioValidationError(
            "initial.kind: expected one of moments, ermakov, riccati")
    centroid = Centroid(_as_float(table, "x", "initial"),
                        _as_float(table, "p", "initial"))
    common = {"kind", "x", "p"}
    try:
        if kind == "moments":
            _reject_unknown(table, common | {"sigma_xx", "sigma_pp", "sigma_xp"},
                            "initial")
            u = UncertaintyTriple(_as_float(table, "sigma_xx", "initial"),
                                  _as_float(table, "sigma_pp", "initial"),
                                  _as_float(table, "sigma_xp", "initial"))
            defect = schroedinger_robertson_defect(system, u)
            scale = system.hbar**2 / 4.0
            if abs(defect) > SR_CONFIG_TOL * scale:
                raise ScenarioValidationError(
                    "initial: moment triple violates the minimum-uncertainty "
                    f"identity (relative defect {defect / scale:.3e}); "
                    "a pure Gaussian requires sigma_xx*sigma_pp - sigma_xp^2 "
                    "= hbar^2/4")
            e = ermakov_from_uncertainties(system, u)
            return centroid, e, riccati_from_ermakov(e), u, kind
        if kind == "ermakov":
            _reject_unknown(table, common | {"alpha", "alpha_dot"}, "initial")
            e = ErmakovState(_as_float(table, "alpha", "initial"),
                             _as_float(table, "alpha_dot", "initial"))
            return (centroid, e, riccati_from_ermakov(e),
                    uncertainties_from_ermakov(system, e), kind)
        _reject_unknown(table, common | {"c_r", "c_i"}, "initial")
        r = RiccatiState(_as_float(table, "c_r", "initial"),
                         _as_float(table, "c_i", "initial"))
        e = ermakov_from_riccati(r)
        return centroid, e, r, uncertainties_from_ermakov(system, e), kind
    except ScenarioValidationError:
        raise
    except ValueError as exc:
        raise ScenarioValidationError(f"initial: {exc}") from exc


def scenario_from_dict(data: dict, name: str = "scenario") -> Scenario:
    _reject_unknown(data, {"system", "initial", "time", "integrator", "outputs"},
                    "scenario")
    system_table = _as_table(data, "system")
    _reject_unknown(system_table, {"m", "hbar", "omega"}, "system")
    omega_table = _as_table(system_table, "omega")
    try:
        system = SystemSpec(
            m=float(system_table.get("m", 1.0)),
            hbar=float(system_table.get("hbar", 1.0)),
            omega=_frequency_from_table(omega_table),
        )
    except ScenarioValidationError:
        raise
    except (TypeError, ValueError) as exc:
        raise ScenarioValidationError(f"system: {exc}") from exc

    centroid, ermakov, riccati, uncertainties, kind = _initial_states(
        _as_table(data, "initial"), system)

    time_table = _as_table(data, "time")
    _reject_unknown(time_table, {"t_end", "n_steps"}, "time")
    t_end = _as_float(time_table, "t_end", "time")
    n_steps_raw = time_table.get("n_steps")
    if not isinstance(n_steps_raw, int) or isinstance(n_steps_raw, bool):
        raise ScenarioValidationError("time.n_steps: expected an integer")
    if not (t_end > 0.0 and math.isfinite(t_end)):
        raise ScenarioValidationError("time.t_end: must be a positive finite number")
    if n_steps_raw < 2:
        raise ScenarioValidationError("time.n_steps: need at least 2 steps")

    integ_table = _as_table(data, "integrator", required=False)
    _reject_unknown(integ_table,
                    {"method", "abs_tol", "rel_tol", "max_step", "fixed_step"},
                    "integrator")
    try:
        defaults = IntegratorConfig()
        integrator = IntegratorConfig(
            method=str(integ_table.get("method", defaults.method)),
            abs_tol=float(integ_table.get("abs_tol", defaults.abs_tol)),
            rel_tol=float(integ_table.get("rel_tol", defaults.rel_tol)),
            max_step=float(integ_table.get("max_step", defaults.max_step)),
            fixed_step=float(integ_table.get("fixed_step", defaults.fixed_step)),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioValidationError(f"integrator: {exc}") from exc

    outputs_table = _as_table(data, "outputs", required=False)
    _reject_unknown(outputs_table, {"plots"}, "outputs")
    plots_raw = outputs_table.get("plots", [])
    if not isinstance(plots_raw, list) or not all(isinstance(p, str)
                                                  for p in plots_raw):
        raise ScenarioValidationError("outputs.plots: expected a list of strings")
    for p in plots_raw:
        if p not in ALLOWED_PLOTS:
            raise ScenarioValidationError(
                f"outputs.plots: unknown plot '{p}' "
                f"(expected one of {', '.join(ALLOWED_PLOTS)})")

    return Scenario(
        name=name,
        system=system,
        centroid=centroid,
        ermakov=ermakov,
        riccati=riccati,
        uncertainties=uncertainties,
        t_end=t_end,
        n_steps=n_steps_raw,
        initial_kind=kind,
        integrator=integrator,
        plots=tuple(plots_raw),
    )
