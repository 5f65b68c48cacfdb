"""
Toolkit configuration files.

The primary format is an INI-style text file; JSON with the same sections
is accepted for programmatic use (chosen by the ``.json`` suffix).
Frequencies in files are in Hz (converted to rad/s on load); decay rates
are in 1/s.

Sections
--------
[trap]
    drive_freq_hz, species (``88Sr+``) or species_mass_u, and either
    ``grad_rf, grad_dc, asymmetry`` or ``secular_freqs_hz = fx, fy, fz``.
[states]
    ``label = polarizability`` (C m^2 / V), one line per state.  In JSON a
    list of ``{"label": ..., "polarizability": ...}``.
[offset]
    ``field_x``, ``field_y`` (V/m), optional.
[scheme]
    rabi_1_hz, rabi_2_hz, delta_intermediate_hz, delta_2photon_hz,
    gamma_e, gamma_r; optional ``<name>_sigma`` for Monte Carlo;
    lower_state, upper_state (state labels used for phonon shifts).
[defaults]
    micromotion_correction, fc_tolerance, integrator_rtol, seed.
"""

from __future__ import annotations

import configparser
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from scipy import constants

from .errors import ConfigError, PhysicsError
from .stark import PolarizableState, perturbation_ratios, PERTURBATION_THRESHOLD
from .trap import SR88_PLUS, IonSpecies, OffsetField, SecularFrequencies, TrapConfig, secular_from_gradients

__all__ = ["ToolkitConfig", "ConfigReport", "ENV_VAR", "SPECIES", "load_config", "parse_config",
           "validate_config", "resolve_config_path"]

ENV_VAR = "RYDION_CONFIG"
SPECIES = {"88Sr+": SR88_PLUS}

TWO_PI = 2 * math.pi
_GRADIENT_KEYS = ("grad_rf", "grad_dc", "asymmetry")
_SCHEME_HZ = ("rabi_1", "rabi_2", "delta_intermediate", "delta_2photon")
_SCHEME_RATE = ("gamma_e", "gamma_r")
_DEFAULTS = {"micromotion_correction": True, "fc_tolerance": 1e-8, "integrator_rtol": 1e-12, "seed": 0}


@dataclass(frozen=True)
class ToolkitConfig:
    trap: TrapConfig
    states: tuple
    offset: OffsetField = OffsetField()
    scheme: dict = field(default_factory=dict)
    defaults: dict = field(default_factory=lambda: dict(_DEFAULTS))
    source: str | None = None

    def state(self, label):
        for s in self.states:
            if s.label == label:
                return s
        raise ConfigError(f"no state labelled {label!r}; known: {[s.label for s in self.states]}")


@dataclass
class ConfigReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def as_dict(self):
        return {"ok": self.ok, "violations": list(self.violations), "warnings": list(self.warnings)}


def resolve_config_path(path=None):
    path = path or os.environ.get(ENV_VAR)
    if not path:
        raise ConfigError(f"no configuration given (use --config or set {ENV_VAR})")
    return Path(path)


def _read_raw(path):
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"configuration file not found: {path}")
    text = path.read_text()
    if path.suffix.lower() == ".json":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("top-level JSON value must be an object")
        return raw
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    raw = {name: dict(parser[name]) for name in parser.sections()}
    if "states" in raw:
        raw["states"] = [{"label": k, "polarizability": v} for k, v in raw["states"].items()]
    return raw


def _number(value, where, errors):
    try:
        out = float(value)
    except (TypeError, ValueError):
        errors.append(f"{where}: expected a number, got {value!r}")
        return None
    if not math.isfinite(out):
        errors.append(f"{where}: must be finite")
        return None
    return out


def _triple(value, where, errors):
    if isinstance(value, str):
        value = [v for v in value.replace(",", " ").split()]
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        errors.append(f"{where}: expected three values")
        return None
    nums = [_number(v, where, errors) for v in value]
    return None if None in nums else nums


def _flag(value):
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in ("1", "true", "yes", "on")


def _parse(raw, errors, source=None):
    unknown = set(raw) - {"trap", "states", "offset", "scheme", "defaults"}
    for name in sorted(unknown):
        errors.append(f"unknown section [{name}]")

    trap_raw = raw.get("trap")
    trap = None
    if not isinstance(trap_raw, dict):
        errors.append("missing [trap] section")
    else:
        trap = _parse_trap(trap_raw, errors)

    states = []
    seen = set()
    for i, entry in enumerate(raw.get("states", []) or []):
        if not isinstance(entry, dict) or "label" not in entry or "polarizability" not in entry:
            errors.append(f"states[{i}]: needs label and polarizability")
            continue
        alpha = _number(entry["polarizability"], f"states.{entry['label']}", errors)
        if entry["label"] in seen:
            errors.append(f"states: duplicate label {entry['label']!r}")
        seen.add(entry["label"])
        if alpha is not None:
            states.append(PolarizableState(str(entry["label"]), alpha))
    if not states:
        errors.append("at least one entry in [states] is required")

    off = raw.get("offset", {}) or {}
    fx = _number(off.get("field_x", 0.0), "offset.field_x", errors)
    fy = _number(off.get("field_y", 0.0), "offset.field_y", errors)
    offset = OffsetField(fx or 0.0, fy or 0.0)

    scheme = _parse_scheme(raw.get("scheme", {}) or {}, errors, seen)

    defaults = dict(_DEFAULTS)
    for key, value in (raw.get("defaults", {}) or {}).items():
        if key not in _DEFAULTS:
            errors.append(f"defaults: unknown key {key!r}")
        elif key == "micromotion_correction":
            defaults[key] = _flag(value)
        elif key == "seed":
            try:
                defaults[key] = int(value)
            except (TypeError, ValueError):
                errors.append(f"defaults.seed: expected an integer, got {value!r}")
        else:
            num = _number(value, f"defaults.{key}", errors)
            if num is not None:
                if num <= 0:
                    errors.append(f"defaults.{key}: must be positive")
                defaults[key] = num
    if errors:
        return None
    return ToolkitConfig(trap, tuple(states), offset, scheme, defaults, source)


def _parse_trap(t, errors):
    known = {"drive_freq_hz", "species", "species_mass_u", "secular_freqs_hz"} | set(_GRADIENT_KEYS)
    for key in sorted(set(t) - known):
        errors.append(f"trap: unknown key {key!r}")
    has_grad = any(k in t for k in _GRADIENT_KEYS)
    has_sec = "secular_freqs_hz" in t
    if has_grad and has_sec:
        errors.append("trap: gradients (grad_rf/grad_dc/asymmetry) and secular_freqs_hz are mutually exclusive")
        return None
    if not (has_grad or has_sec):
        errors.append("trap: give either grad_rf, grad_dc, asymmetry or secular_freqs_hz")
        return None
    if "drive_freq_hz" not in t:
        errors.append("trap: drive_freq_hz is required")
        return None
    drive = _number(t["drive_freq_hz"], "trap.drive_freq_hz", errors)
    if drive is not None and drive <= 0:
        errors.append("trap.drive_freq_hz: must be positive")
        return None

    if "species_mass_u" in t:
        mass_u = _number(t["species_mass_u"], "trap.species_mass_u", errors)
        if mass_u is None or mass_u <= 0:
            errors.append("trap.species_mass_u: must be positive")
            return None
        species = IonSpecies(str(t.get("species", "custom")), mass_u * constants.atomic_mass - constants.m_e)
    else:
        name = t.get("species", "88Sr+")
        if name not in SPECIES:
            errors.append(f"trap.species: unknown species {name!r} (known: {sorted(SPECIES)}; "
                          "or give species_mass_u)")
            return None
        species = SPECIES[name]
    if drive is None:
        return None

    if has_sec:
        freqs = _triple(t["secular_freqs_hz"], "trap.secular_freqs_hz", errors)
        if freqs is None:
            return None
        if min(freqs) <= 0:
            errors.append("trap.secular_freqs_hz: all frequencies must be positive")
            return None
        return TrapConfig.from_secular(SecularFrequencies.from_hz(*freqs), TWO_PI * drive, species)

    missing = [k for k in _GRADIENT_KEYS[:2] if k not in t]
    if missing:
        errors.append(f"trap: missing {missing}")
        return None
    A = _number(t["grad_rf"], "trap.grad_rf", errors)
    B = _number(t["grad_dc"], "trap.grad_dc", errors)
    eps = _number(t.get("asymmetry", 0.0), "trap.asymmetry", errors)
    if None in (A, B, eps):
        return None
    # stability is a physics question; load_config raises Unstable for it
    return TrapConfig(TWO_PI * drive, A, B, eps, species)


def _parse_scheme(s, errors, labels):
    out = {}
    names = set(_SCHEME_HZ) | set(_SCHEME_RATE)
    for key, value in s.items():
        if key in ("lower_state", "upper_state"):
            if value not in labels:
                errors.append(f"scheme.{key}: unknown state {value!r}")
            out[key] = value
            continue
        if key in ("nbar_sideband", "nbar_doppler", "t_max_us", "n_times", "mc_samples"):
            num = _number(value, f"scheme.{key}", errors)
            if num is not None:
                if num < 0:
                    errors.append(f"scheme.{key}: must be non-negative")
                out[key] = int(num) if key in ("n_times", "mc_samples") else num
            continue
        base = key[:-6] if key.endswith("_sigma") else key
        is_hz = base.endswith("_hz")
        name = base[:-3] if is_hz else base
        if name not in names or (name in _SCHEME_HZ) != is_hz:
            errors.append(f"scheme: unknown key {key!r}")
            continue
        num = _number(value, f"scheme.{key}", errors)
        if num is None:
            continue
        if key.endswith("_sigma") and num < 0:
            errors.append(f"scheme.{key}: must be non-negative")
        if name in ("rabi_1", "rabi_2", "gamma_e", "gamma_r") and num < 0:
            errors.append(f"scheme.{key}: must be non-negative")
        scale = TWO_PI if is_hz else 1.0
        out[name + ("_sigma" if key.endswith("_sigma") else "")] = num * scale
    return out


def parse_config(raw: dict, source=None) -> ToolkitConfig:
    errors = []
    cfg = _parse(raw, errors, source)
    if errors:
        raise ConfigError("; ".join(errors))
    return cfg


def load_config(path=None) -> ToolkitConfig:
    """
    Read, validate and return a configuration.

    Raises :class:`ConfigError` for schema problems and
    :class:`~rydion.errors.Unstable` for a trap without radial confinement.
    """
    path = resolve_config_path(path)
    cfg = parse_config(_read_raw(path), str(path))
    secular_from_gradients(cfg.trap)
    return cfg


def validate_config(path) -> ConfigReport:
    """Schema violations and physics warnings, without running anything."""
    report = ConfigReport()
    try:
        raw = _read_raw(path)
    except ConfigError as exc:
        report.violations.append(str(exc))
        return report
    cfg = _parse(raw, report.violations, str(path))
    if cfg is None:
        return report
    try:
        secular_from_gradients(cfg.trap)
    except PhysicsError as exc:
        report.violations.append(f"trap: {exc}")
        return report
    mm = cfg.defaults["micromotion_correction"]
    for state in cfg.states:
        try:
            rx, ry = perturbation_ratios(cfg.trap, state, mm)
        except PhysicsError as exc:
            report.violations.append(str(exc))
            continue
        worst = max(rx, ry)
        if worst > PERTURBATION_THRESHOLD:
            report.warnings.append(
                f"PerturbationInvalid: state {state.label!r} has |alpha A^2 c| = {worst:.3g} x M omega^2/2 "
                f"(threshold {PERTURBATION_THRESHOLD})")
        if worst >= 1:
            report.violations.append(f"state {state.label!r} is anti-trapped")
    return report


