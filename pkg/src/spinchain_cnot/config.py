"""Scenario configuration: INI-style file, sections and flat keys.

Frequencies and rates are given in units of 2 pi MHz (as in the NMR
literature) and converted to rad/us internally.  Example::

    [system]
    omega = 400, 200, 100
    j1 = 25
    j2 = 1
    rabi = 0.1

    [bath]
    temperature = 300
    preset = hi            ; or: gamma = 0.1

    [run]
    mode = quasi
    trailing_pulses = 2.5
    extra_time = 30        ; free evolution after the sequence, us
    seed = 0

    [integrator]
    method = lawson        ; or rk4
    points_per_period = 50
    sample_stride = 1000
    monitor_stride = 1000

    [output]
    dir = out
    plot = no
"""
from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .dissipators import DissipatorMode
from .errors import ConfigError
from .integrator import IntegratorConfig
from .model import TWO_PI, BathParams, SystemParams

OUT_DIR_ENV = "SPINCHAIN_CNOT_OUT"

# dissipation presets in units of 2 pi MHz: J' x 1e-3 and J' x 1e-1 for J' = 1
PRESETS = {"lo": 1e-3, "hi": 1e-1}

_SCHEMA = {
    "system": {"omega", "j1", "j2", "rabi"},
    "bath": {"temperature", "gamma", "preset"},
    "run": {"mode", "trailing_pulses", "extra_time", "horizon", "seed"},
    "integrator": {"dt", "points_per_period", "sample_stride", "monitor_stride", "method"},
    "output": {"dir", "plot"},
}


@dataclass(frozen=True)
class ScenarioConfig:
    system: SystemParams = field(default_factory=SystemParams)
    bath: BathParams = field(default_factory=BathParams)
    mode: DissipatorMode = DissipatorMode.QUASI
    trailing_pulses: float = 2.5
    extra_time: float = 30.0
    horizon: float | None = None
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    out_dir: Path = Path("out")
    plot: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.trailing_pulses < 0:
            raise ConfigError("trailing_pulses must be >= 0")
        if self.extra_time < 0:
            raise ConfigError("extra_time must be >= 0")
        if self.horizon is not None and not self.horizon > 0:
            raise ConfigError("horizon must be positive")
        try:
            self.integrator.resolve_dt(self.system)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def with_(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)


def _float(section, key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected a number, got {raw!r}") from None


def _int(section, key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected an integer, got {raw!r}") from None


def gamma_from_preset(name: str) -> float:
    try:
        return TWO_PI * PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown dissipation preset {name!r}; use one of {sorted(PRESETS)}") \
            from None


def parse_config(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        unknown = set(parser[section]) - _SCHEMA[section]
        if unknown:
            raise ConfigError(f"unknown keys in [{section}]: {', '.join(sorted(unknown))}")
    return _apply(parser, base or ScenarioConfig())


def _apply(parser, cfg: ScenarioConfig) -> ScenarioConfig:
    def get(section, key):
        if parser.has_section(section) and key in parser[section]:
            return parser[section][key]
        return None

    sysp = cfg.system
    omega_raw = get("system", "omega")
    values = {}
    if omega_raw is not None:
        values["omega"] = tuple(_float("system", "omega", w) * TWO_PI
                                for w in omega_raw.replace(",", " ").split())
    for key in ("j1", "j2", "rabi"):
        raw = get("system", key)
        if raw is not None:
            values[key] = _float("system", key, raw) * TWO_PI
    try:
        sysp = replace(sysp, **values) if values else sysp
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    bath = cfg.bath
    temp = get("bath", "temperature")
    gamma = get("bath", "gamma")
    preset = get("bath", "preset")
    if gamma is not None and preset is not None:
        raise ConfigError("[bath] give either gamma or preset, not both")
    try:
        if temp is not None:
            bath = replace(bath, temperature=_float("bath", "temperature", temp))
        if gamma is not None:
            bath = replace(bath, gamma_target=_float("bath", "gamma", gamma) * TWO_PI)
        if preset is not None:
            bath = replace(bath, gamma_target=gamma_from_preset(preset))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    changes = {"system": sysp, "bath": bath}
    mode = get("run", "mode")
    if mode is not None:
        try:
            changes["mode"] = DissipatorMode.parse(mode)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    for key in ("trailing_pulses", "extra_time", "horizon"):
        raw = get("run", key)
        if raw is not None:
            changes[key] = _float("run", key, raw)
    seed = get("run", "seed")
    if seed is not None:
        changes["seed"] = _int("run", "seed", seed)

    integ = cfg.integrator
    icfg = {}
    dt = get("integrator", "dt")
    ppp = get("integrator", "points_per_period")
    if dt is not None and ppp is not None:
        raise ConfigError("[integrator] give either dt or points_per_period")
    if dt is not None:
        icfg["dt"] = _float("integrator", "dt", dt)
    if ppp is not None:
        icfg["dt"] = TWO_PI / sum(sysp.omega) / _float("integrator", "points_per_period", ppp)
    for key in ("sample_stride", "monitor_stride"):
        raw = get("integrator", key)
        if raw is not None:
            icfg[key] = _int("integrator", key, raw)
    method = get("integrator", "method")
    if method is not None:
        icfg["method"] = method.strip().lower()
    try:
        changes["integrator"] = replace(integ, **icfg) if icfg else integ
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    out = get("output", "dir")
    if out is not None:
        changes["out_dir"] = Path(out)
    plot = get("output", "plot")
    if plot is not None:
        try:
            changes["plot"] = parser.getboolean("output", "plot")
        except ValueError:
            raise ConfigError(f"[output] plot: expected yes/no, got {plot!r}") from None
    try:
        return replace(cfg, **changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path, base: ScenarioConfig | None = None) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, base)


def apply_env(cfg: ScenarioConfig) -> ScenarioConfig:
    """Only the output directory may come from the environment."""
    out = os.environ.get(OUT_DIR_ENV)
    return cfg.with_(out_dir=Path(out)) if out else cfg


def scenario_horizon(cfg: ScenarioConfig, sequence_duration: float) -> float:
    if cfg.horizon is not None:
        return cfg.horizon
    return sequence_duration + cfg.extra_time


def describe(cfg: ScenarioConfig) -> str:
    s = cfg.system
    return (f"omega/2pi={tuple(round(w / TWO_PI, 6) for w in s.omega)} MHz, "
            f"J/2pi={s.j1 / TWO_PI:g}, J'/2pi={s.j2 / TWO_PI:g}, rabi/2pi={s.rabi / TWO_PI:g}, "
            f"T={cfg.bath.temperature:g} K, gamma/2pi={cfg.bath.gamma_target / TWO_PI:g}, "
            f"mode={cfg.mode.value}")


__all__ = ["ScenarioConfig", "PRESETS", "parse_config", "load_config", "apply_env",
           "gamma_from_preset", "scenario_horizon", "describe", "OUT_DIR_ENV"]
