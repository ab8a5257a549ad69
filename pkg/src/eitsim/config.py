"""Experiment configuration files.

INI-style, one file per experiment::

    [params]
    omega = 1 GHz
    g = 80 MHz
    ...

    [sweep]
    start = 0.8 GHz
    stop = 1.2 GHz
    points = 801
    routes = full, effective

Rates, detunings and times must carry a unit (GHz/MHz/kHz, ns/us);
bare numbers are rejected for those keys.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .hamiltonians import ParameterError, SystemParams, with_detuning_preset
from .semiclassical import Numerator, Route, SteadyMode

FREQ_UNITS = {"ghz": 1.0, "mhz": 1e-3, "khz": 1e-6}
TIME_UNITS = {"ns": 1.0, "us": 1e3, "µs": 1e3}
PRESETS = ("delta_eq_omega", "delta_eq_omega_minus_shift", "explicit")
OUTPUT_FORMATS = ("csv", "json", "both")

_RATE_KEYS = ("delta", "omega", "g", "omega_pu", "omega_pr", "gamma_d", "gamma_f", "gamma_r")

SCHEMA = {
    "params": {*_RATE_KEYS, "q_factor", "mu"},
    "sweep": {"start", "stop", "points", "routes", "steady_mode", "numerator",
              "detuning_preset", "oracle_stride"},
    "oracle": {"t_end", "dt", "window", "sample_every"},
    "dynamics": {"t_end", "dt", "stride", "fock_cutoff", "damped", "dephasing", "check_truncation"},
    "output": {"path", "format"},
}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-zµ]+)?\s*$")


class ConfigError(ValueError):
    """Carries every problem found in a configuration, not just the first."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


def parse_quantity(text: str, units: dict) -> float:
    """``"80 MHz"`` -> 0.08 (GHz). Raises ValueError for bare or unknown units."""
    m = _QUANTITY.match(text)
    if not m:
        raise ValueError(f"cannot parse {text!r} as a number with unit")
    value, unit = m.groups()
    if unit is None:
        raise ValueError(f"{text!r} needs a unit ({', '.join(sorted(units))})")
    scale = units.get(unit.lower())
    if scale is None:
        raise ValueError(f"unknown unit {unit!r} in {text!r}; expected one of {sorted(units)}")
    return float(value) * scale


@dataclass(frozen=True)
class OracleSettings:
    t_end: float = 5000.0
    dt: float = 0.1
    window: float = 600.0
    sample_every: int = 4


@dataclass(frozen=True)
class DynamicsSettings:
    t_end: float = 400.0
    dt: float = 0.001
    stride: float = 0.5
    fock_cutoff: int = 5
    damped: str = "both"  # "true", "false" or "both"
    dephasing: float = 0.0
    check_truncation: bool = True


@dataclass(frozen=True)
class SweepConfig:
    params: SystemParams
    start: float = 0.8
    stop: float = 1.2
    points: int = 801
    routes: tuple = (Route.FULL,)
    steady_mode: SteadyMode = SteadyMode.CORRECTED_OMEGA
    numerator: Numerator = Numerator.GAMMA_F
    detuning_preset: str = "delta_eq_omega"
    oracle_stride: int = 1
    oracle: OracleSettings = field(default_factory=OracleSettings)
    dynamics: DynamicsSettings = field(default_factory=DynamicsSettings)
    output_path: str | None = None
    output_format: str = "csv"

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    def describe(self) -> dict:
        """Flat, JSON-friendly view of every resolved setting."""
        p = self.params
        return {
            "delta": p.delta, "omega": p.omega, "g": p.g, "omega_pu": p.omega_pu,
            "omega_pr": p.omega_pr, "gamma_d": p.gamma_d, "gamma_f": p.gamma_f,
            "gamma_r": p.gamma_r, "q_factor": p.q_factor, "mu": p.mu,
            "start": self.start, "stop": self.stop, "points": self.points,
            "routes": ",".join(r.value for r in self.routes),
            "steady_mode": self.steady_mode.value, "numerator": self.numerator.value,
            "detuning_preset": self.detuning_preset, "oracle_stride": self.oracle_stride,
        }


def _line_numbers(text: str) -> dict:
    lines, section = {}, None
    for i, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s.startswith("[") and s.endswith("]"):
            section = s[1:-1].strip()
        elif section and "=" in s and not s.startswith(("#", ";")):
            lines.setdefault((section, s.split("=", 1)[0].strip().lower()), i)
    return lines


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "on", "1"):
        return True
    if t in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def validate_config(text: str, overrides: dict | None = None) -> SweepConfig:
    """Parse and validate a configuration; raises :class:`ConfigError` listing all problems.

    ``overrides`` maps ``(section, key)`` to raw strings and takes precedence
    over the file (used for command-line flags).
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError([f"syntax: {exc}"]) from exc
    for (sec, key), value in (overrides or {}).items():
        if not parser.has_section(sec):
            parser.add_section(sec)
        parser.set(sec, key, value)

    lines = _line_numbers(text)
    errors: list[str] = []

    def where(sec, key):
        n = lines.get((sec, key))
        return f"[{sec}] {key} (line {n})" if n else f"[{sec}] {key}"

    for sec in parser.sections():
        if sec not in SCHEMA:
            errors.append(f"unknown section [{sec}]")
            continue
        for key in parser[sec]:
            if key not in SCHEMA[sec]:
                errors.append(f"{where(sec, key)}: unknown key")

    def get(sec, key):
        return parser.get(sec, key) if parser.has_option(sec, key) else None

    def quantity(sec, key, units, default=None, minimum=None, strict_positive=False):
        raw = get(sec, key)
        if raw is None:
            return default
        try:
            v = parse_quantity(raw, units)
        except ValueError as exc:
            errors.append(f"{where(sec, key)}: {exc}")
            return default
        if strict_positive and not v > 0:
            errors.append(f"{where(sec, key)}: must be > 0, got {raw!r}")
        elif minimum is not None and v < minimum:
            errors.append(f"{where(sec, key)}: must be >= {minimum}, got {raw!r}")
        return v

    def number(sec, key, cast, default=None, minimum=None):
        raw = get(sec, key)
        if raw is None:
            return default
        try:
            v = cast(raw)
        except ValueError:
            errors.append(f"{where(sec, key)}: expected {cast.__name__}, got {raw!r}")
            return default
        if minimum is not None and v < minimum:
            errors.append(f"{where(sec, key)}: must be >= {minimum}, got {raw!r}")
        return v

    def choice(sec, key, options, default):
        raw = get(sec, key)
        if raw is None:
            return default
        v = raw.strip()
        if v not in options:
            errors.append(f"{where(sec, key)}: {v!r} not one of {sorted(options)}")
            return default
        return v

    # physical parameters
    p = {}
    for key in _RATE_KEYS:
        p[key] = quantity("params", key, FREQ_UNITS, minimum=None if key == "delta" else 0.0)
    q_factor = number("params", "q_factor", float)
    mu = number("params", "mu", float)
    if q_factor is not None and q_factor <= 0:
        errors.append(f"{where('params', 'q_factor')}: must be > 0")
        q_factor = None
    for key in ("omega", "g", "omega_pu", "gamma_d", "gamma_f"):
        if get("params", key) is None:
            errors.append(f"[params] {key}: required")
    if p["omega"] is not None and not p["omega"] > 0:
        errors.append(f"{where('params', 'omega')}: must be > 0")
    if p["gamma_r"] is None:
        if q_factor is not None and p["omega"]:
            p["gamma_r"] = p["omega"] / q_factor
        else:
            errors.append("[params] gamma_r: required (or give q_factor)")
    elif q_factor is not None and p["omega"] and p["gamma_r"] > 0:
        implied = p["omega"] / q_factor
        if abs(p["gamma_r"] - implied) / p["gamma_r"] > 1e-6:
            errors.append(
                f"{where('params', 'gamma_r')} and {where('params', 'q_factor')}: inconsistent, "
                f"omega/q_factor = {implied} GHz but gamma_r = {p['gamma_r']} GHz"
            )

    preset = choice("sweep", "detuning_preset", PRESETS, "delta_eq_omega")
    if preset == "explicit" and p["delta"] is None:
        errors.append("[params] delta: required when detuning_preset = explicit")
    if preset != "explicit" and get("params", "delta") is not None:
        errors.append(
            f"{where('params', 'delta')}: conflicts with {where('sweep', 'detuning_preset')} = {preset}; "
            "remove delta or use detuning_preset = explicit"
        )
    if p["omega_pr"] is None and p["omega_pu"] is not None:
        p["omega_pr"] = p["omega_pu"] / 100.0

    # sweep grid
    start = quantity("sweep", "start", FREQ_UNITS, 0.8)
    stop = quantity("sweep", "stop", FREQ_UNITS, 1.2)
    points = number("sweep", "points", int, 801)
    if points is not None and points < 2:
        errors.append(f"{where('sweep', 'points')}: need at least 2 points")
    if start is not None and stop is not None and not start < stop:
        errors.append(f"{where('sweep', 'start')}: start must be < stop")
    routes = ()
    raw_routes = get("sweep", "routes")
    if raw_routes is None:
        routes = (Route.FULL,)
    else:
        names = [r.strip() for r in raw_routes.split(",") if r.strip()]
        if not names:
            errors.append(f"{where('sweep', 'routes')}: at least one route required")
        valid = {r.value for r in Route}
        for name in names:
            if name not in valid:
                errors.append(f"{where('sweep', 'routes')}: unknown route {name!r}; choose from {sorted(valid)}")
        routes = tuple(r for r in Route if r.value in names)
    steady_mode = SteadyMode(choice("sweep", "steady_mode", {m.value for m in SteadyMode}, "corrected_omega"))
    numerator = Numerator(choice("sweep", "numerator", {n.value for n in Numerator}, "gamma_f"))
    oracle_stride = number("sweep", "oracle_stride", int, 1, minimum=1)

    oracle = OracleSettings(
        t_end=quantity("oracle", "t_end", TIME_UNITS, 5000.0, strict_positive=True),
        dt=quantity("oracle", "dt", TIME_UNITS, 0.1, strict_positive=True),
        window=quantity("oracle", "window", TIME_UNITS, 600.0, strict_positive=True),
        sample_every=number("oracle", "sample_every", int, 4, minimum=1),
    )
    damped_raw = get("dynamics", "damped")
    damped = "both"
    if damped_raw is not None:
        if damped_raw.strip().lower() == "both":
            damped = "both"
        else:
            try:
                damped = "true" if _bool(damped_raw) else "false"
            except ValueError as exc:
                errors.append(f"{where('dynamics', 'damped')}: {exc} or 'both'")
    check_trunc = True
    if get("dynamics", "check_truncation") is not None:
        try:
            check_trunc = _bool(get("dynamics", "check_truncation"))
        except ValueError as exc:
            errors.append(f"{where('dynamics', 'check_truncation')}: {exc}")
    dynamics = DynamicsSettings(
        t_end=quantity("dynamics", "t_end", TIME_UNITS, 400.0, minimum=0.0),
        dt=quantity("dynamics", "dt", TIME_UNITS, 0.001, strict_positive=True),
        stride=quantity("dynamics", "stride", TIME_UNITS, 0.5, strict_positive=True),
        fock_cutoff=number("dynamics", "fock_cutoff", int, 5, minimum=1),
        damped=damped,
        dephasing=quantity("dynamics", "dephasing", FREQ_UNITS, 0.0, minimum=0.0),
        check_truncation=check_trunc,
    )
    output_path = get("output", "path")
    output_format = choice("output", "format", set(OUTPUT_FORMATS), "csv")

    params = None
    if not errors:
        if preset != "explicit":
            p["delta"] = p["omega"]
        try:
            params = SystemParams(q_factor=q_factor, mu=mu, **p)
            params = with_detuning_preset(params, preset)
        except ParameterError as exc:
            errors.append(f"[params]: {exc}")
    if errors:
        raise ConfigError(errors)
    return SweepConfig(
        params=params, start=start, stop=stop, points=points, routes=routes,
        steady_mode=steady_mode, numerator=numerator, detuning_preset=preset,
        oracle_stride=oracle_stride, oracle=oracle, dynamics=dynamics,
        output_path=output_path, output_format=output_format,
    )


def preset_names() -> list[str]:
    return sorted(p.name[:-4] for p in resources.files("eitsim.presets").iterdir() if p.name.endswith(".cfg"))


def read_config_text(spec: str) -> str:
    """Read a config from a path, or a shipped preset by name (``fig2``, ``fig3``, ``fig5``)."""
    path = Path(spec)
    if path.is_file():
        return path.read_text()
    name = spec[:-4] if spec.endswith(".cfg") else spec
    res = resources.files("eitsim.presets") / f"{name}.cfg"
    if res.is_file():
        return res.read_text()
    raise ConfigError([f"config {spec!r} not found (presets: {', '.join(preset_names())})"])


def load_config(spec: str, overrides: dict | None = None) -> SweepConfig:
    return validate_config(read_config_text(spec), overrides)
