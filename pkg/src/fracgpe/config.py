"""YAML scenario files.

Schema (all keys except ``profile`` have defaults)::

    name: example1                 # free text, echoed into outputs
    potential: zero                # zero | plus-sin-squared | minus-sin-squared
    profile:
      kind: tanh                   # tanh | sech | cos
      amplitude: 1.0
      wavenumber: 1.0
    constants: {hbar: 1.0, mass: 1.0, g: 1.0, mu: 1.0}
    alpha: 1.0                     # in (0, 1]
    order: 12                      # >= 1
    backend: profile               # profile | grid
    nonlinearity: hermitian        # hermitian | frozen-density
    stencil_order: 4               # 2 | 4
    grid:                          # needed by the grid backend and the oracle
      x_min: -20
      x_max: 20                    # or  period: 2*pi  for periodic grids
      points: 401
      boundary: fixed-zero         # fixed-zero | periodic
    output:
      x: {min: -5, max: 5, points: 201}
      t: {min: 0, max: 1, points: 21}
      trace_x: 1.0                 # position of the time traces
      trace_t_max: 3.0
      alpha_surface: {min: 0.5, max: 1.0, points: 11}

Numbers may be written as multiples of pi: ``pi``, ``-pi``, ``2*pi``, ``pi/2``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import yaml

from .exceptions import ConfigError, FracGPEError
from .hpm import ScenarioConfig
from .model import Grid, PhysicalConstants, Potential, Profile

__all__ = ["Axis", "OutputSpec", "RunConfig", "parse_config", "load_config",
           "preset_path", "load_preset", "PRESETS"]

PRESETS = (1, 2, 3, 4)

_PI_RE = re.compile(r"^\s*([+-]?\s*\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def _number(value: Any, key: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _PI_RE.match(value)
        if m:
            head = m.group(1).replace(" ", "")
            factor = {"": 1.0, "+": 1.0, "-": -1.0}.get(head)
            if factor is None:
                factor = float(head)
            divisor = float(m.group(2)) if m.group(2) else 1.0
            return factor * math.pi / divisor
        try:
            return float(value)
        except ValueError:
            pass
    raise ConfigError(f"{key}: expected a number, got {value!r}")


def _integer(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    return value


def _section(data: Mapping, key: str, allowed: set[str]) -> dict:
    sec = data.get(key) or {}
    if not isinstance(sec, Mapping):
        raise ConfigError(f"{key}: expected a mapping")
    unknown = set(sec) - allowed
    if unknown:
        raise ConfigError(f"{key}: unknown keys {sorted(unknown)}")
    return dict(sec)


@dataclass(frozen=True)
class Axis:
    """Uniform sample axis ``linspace(min, max, points)``."""

    min: float
    max: float
    points: int

    def __post_init__(self):
        if self.points < 2 or not self.max > self.min:
            raise ConfigError(f"bad axis {self}")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class OutputSpec:
    """Sampling of emitted data."""

    x: Axis = Axis(-5.0, 5.0, 201)
    t: Axis = Axis(0.0, 1.0, 21)
    trace_x: float = 1.0
    trace_t_max: float = 3.0
    trace_points: int = 301
    alpha_surface: Axis = Axis(0.5, 1.0, 11)


@dataclass(frozen=True)
class RunConfig:
    """A named scenario plus output sampling."""

    name: str
    scenario: ScenarioConfig
    output: OutputSpec
    source: dict

    def with_overrides(self, *, alpha: float | None = None, order: int | None = None,
                       backend: str | None = None) -> "RunConfig":
        """Copy with command-line overrides applied (re-validated)."""
        changes = {}
        if alpha is not None:
            changes["alpha"] = alpha
        if order is not None:
            changes["order"] = order
        if backend is not None:
            changes["backend"] = backend
        if not changes:
            return self
        src = dict(self.source)
        src.update(changes)
        return parse_config(src)


def _axis(data: Mapping, key: str, default: Axis) -> Axis:
    if key not in data:
        return default
    sec = _section(data, key, {"min", "max", "points"})
    return Axis(_number(sec.get("min", default.min), f"{key}.min"),
                _number(sec.get("max", default.max), f"{key}.max"),
                _integer(sec.get("points", default.points), f"{key}.points"))


def _grid(sec: dict) -> Grid:
    boundary = sec.get("boundary", "fixed-zero")
    x_min = _number(sec.get("x_min", -20), "grid.x_min")
    points = _integer(sec.get("points", 401), "grid.points")
    if boundary == "periodic":
        if "period" in sec:
            return Grid.periodic(x_min, _number(sec["period"], "grid.period"), points)
        if "x_max" not in sec:
            raise ConfigError("periodic grid needs period or x_max")
    return Grid(x_min, _number(sec.get("x_max", 20), "grid.x_max"), points, boundary)


_TOP_KEYS = {"name", "description", "potential", "profile", "constants", "alpha", "order",
             "backend", "nonlinearity", "stencil_order", "grid", "output"}


def parse_config(data: Mapping) -> RunConfig:
    """Validate a mapping against the schema; raises :class:`ConfigError`."""
    if not isinstance(data, Mapping):
        raise ConfigError("config must be a mapping at the top level")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}")
    try:
        potential = Potential(data.get("potential", "zero"))
        if potential.kind == "custom":
            raise ConfigError("custom potentials cannot be given in a config file")
        if "profile" not in data:
            raise ConfigError("profile section is required")
        prof = _section(data, "profile", {"kind", "amplitude", "wavenumber"})
        if prof.get("kind") not in ("tanh", "sech", "cos"):
            raise ConfigError(f"profile.kind must be tanh, sech or cos, got {prof.get('kind')!r}")
        profile = Profile(prof["kind"], _number(prof.get("amplitude", 1.0), "profile.amplitude"),
                          _number(prof.get("wavenumber", 1.0), "profile.wavenumber"))
        const = _section(data, "constants", {"hbar", "mass", "g", "mu"})
        constants = PhysicalConstants(**{k: _number(v, f"constants.{k}") for k, v in const.items()})
        grid = None
        if data.get("grid") is not None:
            grid = _grid(_section(data, "grid", {"x_min", "x_max", "period", "points", "boundary"}))
        scenario = ScenarioConfig(
            potential=potential,
            constants=constants,
            profile=profile,
            alpha=_number(data.get("alpha", 1.0), "alpha"),
            order=_integer(data.get("order", 12), "order"),
            backend=data.get("backend", "profile"),
            grid=grid,
            stencil_order=_integer(data.get("stencil_order", 4), "stencil_order"),
            nonlinearity=data.get("nonlinearity", "hermitian"),
        )
        out = _section(data, "output", {"x", "t", "trace_x", "trace_t_max", "trace_points",
                                         "alpha_surface"})
        d = OutputSpec()
        output = OutputSpec(
            x=_axis(out, "x", d.x),
            t=_axis(out, "t", d.t),
            trace_x=_number(out.get("trace_x", d.trace_x), "output.trace_x"),
            trace_t_max=_number(out.get("trace_t_max", d.trace_t_max), "output.trace_t_max"),
            trace_points=_integer(out.get("trace_points", d.trace_points), "output.trace_points"),
            alpha_surface=_axis(out, "alpha_surface", d.alpha_surface),
        )
    except ConfigError:
        raise
    except (FracGPEError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if output.t.min < 0:
        raise ConfigError("output.t must start at t >= 0")
    if not 0 < output.alpha_surface.min <= output.alpha_surface.max <= 1:
        raise ConfigError("output.alpha_surface must lie in (0, 1]")
    return RunConfig(str(data.get("name", "scenario")), scenario, output, dict(data))


def load_config(path) -> RunConfig:
    """Read and validate a YAML scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(data)


def preset_path(example: int) -> Path:
    """Path of the shipped preset for worked example 1-4."""
    if example not in PRESETS:
        raise ConfigError(f"example must be one of {PRESETS}, got {example!r}")
    return Path(str(resources.files("fracgpe") / "presets" / f"example{example}.yaml"))


def load_preset(example: int, **overrides) -> RunConfig:
    return load_config(preset_path(example)).with_overrides(**overrides)
