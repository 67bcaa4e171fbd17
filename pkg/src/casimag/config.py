"""Flat key-value run configuration with mandatory unit suffixes.

Every dimensioned quantity must carry a unit (nm, um, m, K, eV, rad_s,
Pa); bare numbers are accepted only for dimensionless fields.  This is
enforced at parse time so a run can never silently misread a scale.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .constants import EV_TO_RAD_S
from .errors import ConfigurationError
from .lifshitz import DEFAULT_SETTINGS, CavityConfig, EngineSettings
from .materials import (
    Constant,
    Drude,
    Lorentz,
    Material,
    Oscillator,
    Plasma,
    QuasistaticMagnetic,
    default_yig_like,
    gold_drude,
    gold_plasma,
    load_optical_data,
    rescale_to_eps0,
    with_mu0,
)

LENGTH_UNITS = {"nm": 1e-9, "um": 1e-6, "m": 1.0}
TEMPERATURE_UNITS = {"K": 1.0}
FREQUENCY_UNITS = {"eV": EV_TO_RAD_S, "rad_s": 1.0}
PRESSURE_UNITS = {"Pa": 1.0}

_QUANTITY_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*([A-Za-z_]*)\s*$")

# canonical key for the aliases accepted in config files
ALIASES = {"b": "right_thickness", "T": "temperature", "d_t": "d_T"}

MATERIAL_NAMES = ("au_plasma", "au_drude", "yig_like")


def _parse_quantity(field_name: str, text: str, units: dict[str, float],
                    kind: str) -> float:
    m = _QUANTITY_RE.match(text)
    if not m:
        raise ConfigurationError(f"cannot parse {kind} value {text!r}", field_name)
    number, unit = m.groups()
    try:
        value = float(number)
    except ValueError as exc:
        raise ConfigurationError(f"bad number in {text!r}", field_name) from exc
    if not unit:
        raise ConfigurationError(
            f"missing unit suffix on {text!r} (expected one of "
            f"{', '.join(units)})",
            field_name,
        )
    if unit not in units:
        raise ConfigurationError(
            f"unknown unit {unit!r} (expected one of {', '.join(units)})",
            field_name,
        )
    return value * units[unit]


@dataclass
class RunConfig:
    """Parsed key-value configuration plus bookkeeping of consumed keys."""

    entries: dict[str, str]
    source: str = "<config>"
    _used: set = field(default_factory=set, repr=False)

    # -- raw access -------------------------------------------------------
    def _raw(self, key: str) -> str | None:
        self._used.add(key)
        return self.entries.get(key)

    def has(self, key: str) -> bool:
        return key in self.entries

    # -- typed accessors ---------------------------------------------------
    def get_str(self, key: str, default: str | None = None,
                required: bool = False) -> str | None:
        raw = self._raw(key)
        if raw is None:
            if required:
                raise ConfigurationError("required key is missing", key)
            return default
        return raw

    def get_float(self, key: str, default: float | None = None,
                  required: bool = False) -> float | None:
        """Dimensionless number; a unit suffix here is an error."""
        raw = self._raw(key)
        if raw is None:
            if required:
                raise ConfigurationError("required key is missing", key)
            return default
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigurationError(
                f"expected a dimensionless number, got {raw!r}", key
            ) from exc

    def get_int(self, key: str, default: int | None = None,
                required: bool = False) -> int | None:
        value = self.get_float(key, None if required else default, required)
        if value is None:
            return default
        if value != int(value):
            raise ConfigurationError(f"expected an integer, got {value!r}", key)
        return int(value)

    def _get_quantity(self, key, units, kind, default, required):
        raw = self._raw(key)
        if raw is None:
            if required:
                raise ConfigurationError("required key is missing", key)
            return default
        return _parse_quantity(key, raw, units, kind)

    def get_length(self, key, default=None, required=False):
        return self._get_quantity(key, LENGTH_UNITS, "length", default, required)

    def get_length_or_inf(self, key, default=None, required=False):
        raw = self._raw(key)
        if raw is None:
            if required:
                raise ConfigurationError("required key is missing", key)
            return default
        if raw.strip().lower() in ("inf", "infinity"):
            return math.inf
        return _parse_quantity(key, raw, LENGTH_UNITS, "length")

    def get_temperature(self, key, default=None, required=False):
        return self._get_quantity(key, TEMPERATURE_UNITS, "temperature",
                                  default, required)

    def get_frequency(self, key, default=None, required=False):
        return self._get_quantity(key, FREQUENCY_UNITS, "frequency",
                                  default, required)

    def get_pressure(self, key, default=None, required=False):
        return self._get_quantity(key, PRESSURE_UNITS, "pressure",
                                  default, required)

    def get_list(self, key, units: dict[str, float] | None = None,
                 required: bool = False) -> list[float] | None:
        """Comma-separated values, each with a unit when ``units`` is given."""
        raw = self._raw(key)
        if raw is None:
            if required:
                raise ConfigurationError("required key is missing", key)
            return None
        out = []
        for part in raw.split(","):
            part = part.strip()
            if not part:
                continue
            if units is None:
                try:
                    out.append(float(part))
                except ValueError as exc:
                    raise ConfigurationError(
                        f"expected dimensionless list entries, got {part!r}", key
                    ) from exc
            else:
                out.append(_parse_quantity(key, part, units, "list entry"))
        if not out:
            raise ConfigurationError("list is empty", key)
        return out

    def check_unused(self) -> None:
        unknown = sorted(set(self.entries) - self._used)
        if unknown:
            raise ConfigurationError(
                f"unknown configuration key(s): {', '.join(unknown)}"
            )


def parse_config(path) -> RunConfig:
    """Read a ``key = value`` file; ``#`` starts a comment."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, source=str(path))


def parse_config_text(text: str, source: str = "<config>") -> RunConfig:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(
                f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}"
            )
        key, _, value = line.partition("=")
        key = key.strip()
        key = ALIASES.get(key, key)
        value = value.strip()
        if not key or not value:
            raise ConfigurationError(
                f"{source}:{lineno}: empty key or value in {raw.strip()!r}"
            )
        if key in entries:
            raise ConfigurationError(f"{source}:{lineno}: duplicate key {key!r}")
        entries[key] = value
    return RunConfig(entries, source=source)


# ---------------------------------------------------------------------------
# material construction


def _parse_oscillators(key: str, raw: str) -> Lorentz:
    oscillators = []
    for part in raw.split(";"):
        part = part.strip()
        if not part:
            continue
        if "@" not in part:
            raise ConfigurationError(
                f"oscillator entry {part!r} must look like "
                f"'<strength> @ <frequency unit>'",
                key,
            )
        strength_s, _, freq_s = part.partition("@")
        try:
            strength = float(strength_s)
        except ValueError as exc:
            raise ConfigurationError(
                f"bad oscillator strength in {part!r}", key
            ) from exc
        omega = _parse_quantity(key, freq_s, FREQUENCY_UNITS, "frequency")
        oscillators.append(Oscillator(strength, omega))
    if not oscillators:
        raise ConfigurationError("no oscillators given", key)
    return Lorentz(tuple(oscillators))


def _inline_epsilon(cfg: RunConfig, side: str):
    key = f"{side}_epsilon_model"
    model = cfg.get_str(key)
    if model is None:
        return None
    if model == "plasma":
        return Plasma(cfg.get_frequency(f"{side}_epsilon_omega_p", required=True))
    if model == "drude":
        omega_p = cfg.get_frequency(f"{side}_epsilon_omega_p", required=True)
        gamma = cfg.get_frequency(f"{side}_epsilon_gamma")
        return Drude(omega_p, gamma) if gamma is not None else Drude(omega_p)
    if model == "constant":
        return Constant(cfg.get_float(f"{side}_epsilon_value", required=True))
    if model == "lorentz":
        raw = cfg.get_str(f"{side}_epsilon_oscillators", required=True)
        return _parse_oscillators(f"{side}_epsilon_oscillators", raw)
    if model == "tabulated":
        return load_optical_data(cfg.get_str(f"{side}_epsilon_path", required=True))
    raise ConfigurationError(
        f"unknown permittivity model {model!r} (plasma, drude, constant, "
        f"lorentz, tabulated)",
        key,
    )


def _inline_mu(cfg: RunConfig, side: str):
    key = f"{side}_mu_model"
    model = cfg.get_str(key)
    if model is None:
        return None
    if model == "constant":
        return Constant(cfg.get_float(f"{side}_mu_value", required=True))
    if model == "quasistatic":
        return QuasistaticMagnetic(cfg.get_float(f"{side}_mu0", required=True))
    raise ConfigurationError(
        f"unknown permeability model {model!r} (constant, quasistatic)", key
    )


def build_material(cfg: RunConfig, side: str) -> Material:
    """Material for one side from a named preset and/or inline keys."""
    name = cfg.get_str(f"{side}_material")
    epsilon = _inline_epsilon(cfg, side)
    mu = _inline_mu(cfg, side)
    if name is not None:
        if name == "au_plasma":
            base = gold_plasma()
        elif name == "au_drude":
            base = gold_drude()
        elif name == "yig_like":
            base = default_yig_like()
        else:
            raise ConfigurationError(
                f"unknown material {name!r} (known: {', '.join(MATERIAL_NAMES)}; "
                f"anything else needs inline model keys)",
                f"{side}_material",
            )
        epsilon = epsilon if epsilon is not None else base.epsilon
        mu = mu if mu is not None else base.mu
    if epsilon is None or mu is None:
        raise ConfigurationError(
            f"material for side {side!r} is incomplete: give "
            f"{side}_material or inline {side}_epsilon_model/{side}_mu_model"
        )
    material = Material(epsilon, mu)
    # convenience overrides on top of whatever was built
    eps0 = cfg.get_float(f"{side}_eps0")
    if eps0 is not None:
        material = Material(rescale_to_eps0(material.epsilon, eps0), material.mu)
    mu0 = cfg.get_float(f"{side}_mu0") if f"{side}_mu0" in cfg.entries else None
    if mu0 is not None and not cfg.get_str(f"{side}_mu_model"):
        material = with_mu0(material, mu0)
    return material


def build_cavity(cfg: RunConfig) -> CavityConfig:
    left = build_material(cfg, "left")
    right = build_material(cfg, "right")
    thickness = cfg.get_length_or_inf("right_thickness", required=True)
    temperature = cfg.get_temperature("temperature", required=True)
    try:
        return CavityConfig(left, right, thickness, temperature)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc


def build_settings(cfg: RunConfig, tol_override: float | None = None) -> EngineSettings:
    rel_tol = cfg.get_float("rel_tol", DEFAULT_SETTINGS.rel_tol)
    abs_tol = cfg.get_pressure("abs_tol", DEFAULT_SETTINGS.abs_tol)
    max_terms = cfg.get_int("max_matsubara_terms",
                            DEFAULT_SETTINGS.max_matsubara_terms)
    if tol_override is not None:
        rel_tol = tol_override
    try:
        return EngineSettings(rel_tol=rel_tol, abs_tol=abs_tol,
                              max_matsubara_terms=max_terms)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc
