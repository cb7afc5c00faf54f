"""Scenario-file schema: flat, sectioned key-value text (INI dialect).

Every key is validated against the schema below; unknown keys are hard
errors listing the valid keys.  Energy-like values accept unit suffixes
("80 GHz", "250 MHz", "8 kHz", "50 mK"); bare numbers mean the documented
default unit of that key.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field

from .circuit import SQUID, STS, CircuitParams
from .dissipation import FREQ_LABELS, BathSpec
from .errors import ConfigError
from .units import TWO_PI, khz_rate_to_per_us

COMMANDS = (
    "spectrum",
    "degeneracy",
    "floquet",
    "ramp",
    "lifetime",
    "steady",
    "wigner",
    "surface",
    "validity",
)

_ENERGY_UNITS = {"ghz": 1e3, "mhz": 1.0, "khz": 1e-3, "hz": 1e-9}  # -> MHz
_RATE_UNITS = {"ghz": 1e3, "mhz": 1.0, "khz": 1e-3, "hz": 1e-9}  # f/h -> us^-1 via khz rule
_TEMP_UNITS = {"k": 1.0, "mk": 1e-3, "uk": 1e-6}


def parse_energy_mhz(raw: str, key: str) -> float:
    """'80 GHz' / '250 MHz' / bare number (MHz) -> E/h in MHz."""
    parts = str(raw).split()
    try:
        if len(parts) == 1:
            return float(parts[0])
        if len(parts) == 2 and parts[1].lower() in _ENERGY_UNITS:
            return float(parts[0]) * _ENERGY_UNITS[parts[1].lower()]
    except ValueError:
        pass
    raise ConfigError(f"{key}: cannot parse energy {raw!r} (use e.g. '80 GHz' or MHz number)")


def parse_rate_per_us(raw: str, key: str) -> float:
    """'8 kHz' -> 8e-3 us^-1 (plain rate convention, no 2*pi); bare number
    means us^-1 directly."""
    parts = str(raw).split()
    try:
        if len(parts) == 1:
            return float(parts[0])
        if len(parts) == 2 and parts[1].lower() in _RATE_UNITS:
            return khz_rate_to_per_us(float(parts[0]) * _RATE_UNITS[parts[1].lower()] * 1e3)
    except ValueError:
        pass
    raise ConfigError(f"{key}: cannot parse rate {raw!r} (use e.g. '8 kHz' or us^-1 number)")


def parse_temperature_k(raw: str, key: str) -> float:
    parts = str(raw).split()
    try:
        if len(parts) == 1:
            return float(parts[0])
        if len(parts) == 2 and parts[1].lower() in _TEMP_UNITS:
            return float(parts[0]) * _TEMP_UNITS[parts[1].lower()]
    except ValueError:
        pass
    raise ConfigError(f"{key}: cannot parse temperature {raw!r} (use e.g. '50 mK' or kelvin)")


def parse_frequency_rad_us(raw: str, key: str):
    """Drive frequency: 'auto' -> resonance-solved; '12 GHz' -> 2*pi*f."""
    if str(raw).strip().lower() == "auto":
        return None
    return TWO_PI * parse_energy_mhz(raw, key)


def _parse_bool(raw: str, key: str) -> bool:
    v = str(raw).strip().lower()
    if v in ("true", "yes", "on", "1"):
        return True
    if v in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{key}: cannot parse boolean {raw!r}")


def _parse_float(raw: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse number {raw!r}") from None


def _parse_int(raw: str, key: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse integer {raw!r}") from None


# section -> key -> (kind, default); None default means required-if-section-used
SCHEMA = {
    "scenario": {
        "command": ("command", None),
        "name": ("str", None),
    },
    "circuit": {
        "topology": ("topology", STS),
        "E_J": ("energy", None),
        "E_J1": ("energy", None),
        "E_J2": ("energy", None),
        "E_J3": ("energy", None),
        "E_C": ("energy", None),
        "delta_phi": ("float", 0.0),
        "omega_d": ("frequency", "12 GHz"),
        "M": ("int", 1),
        "N": ("int", 1),
    },
    "bath": {
        "kappa": ("rate", None),
        "kappa_wd2": ("rate", None),
        "kappa_wd": ("rate", None),
        "kappa_3wd2": ("rate", None),
        "kappa_5wd2": ("rate", None),
        "kappa_7wd2": ("rate", None),
        "temperature": ("temperature", None),
        "temperature_wd2": ("temperature", None),
        "temperature_wd": ("temperature", None),
        "temperature_3wd2": ("temperature", None),
        "temperature_5wd2": ("temperature", None),
        "temperature_7wd2": ("temperature", None),
    },
    "sweep": {
        "axis": ("str", "eps2_ratio"),
        "start": ("float", None),
        "stop": ("float", None),
        "points": ("int", None),
    },
    "sweep2": {
        "axis": ("str", None),
        "start": ("float", None),
        "stop": ("float", None),
        "points": ("int", None),
    },
    "lifetime": {
        "dissipators": ("str", "o2-rwa"),
        "detuning_ratio": ("float", 0.0),
        "compensation": ("bool", False),
        "zero_lambda": ("bool", False),
        "gamma_phi": ("float", 0.0),
        "gamma_phi_over_k": ("float", None),
        "eps2_ratio": ("float", None),
    },
    "steady": {
        "gamma_over_k": ("float", 0.05),
        "n_th": ("float", 0.01),
        "detuning_ratio": ("float", 0.0),
        "dim": ("int", 40),
    },
    "wigner": {
        "eps2_ratio": ("float", 1.0),
        "detuning_ratio": ("float", 0.0),
        "gamma_over_k": ("float", 0.05),
        "n_th": ("float", 0.01),
        "dim": ("int", 40),
        "extent": ("float", 4.0),
        "points": ("int", 81),
    },
    "surface": {
        "eps2_ratio": ("float", 0.0),
        "detuning_ratio": ("float", 0.0),
        "lambda_ratio": ("float", 0.0),
        "extent": ("float", 3.0),
        "points": ("int", 121),
    },
    "spectrum": {
        "axis": ("str", "detuning_ratio"),
        "eps2_ratio": ("float", 2.0),
        "detuning_ratio": ("float", 0.0),
        "lambda_ratio": ("float", None),
        "n_pairs": ("int", 4),
        "dim": ("int", 40),
    },
    "degeneracy": {
        "eps2_ratio": ("float", 2.0),
        "lambda_ratio": ("float", None),
        "n_pairs": ("int", 4),
        "dim": ("int", 40),
    },
    "floquet": {
        "n_levels": ("int", 6),
        "dim": ("int", 60),
        "target_delta_ratio": ("float", 0.0),
    },
    "ramp": {
        "eps2_ratio": ("float", 4.0),
        "duration": ("str", "auto"),
        "dim": ("int", 40),
        "points": ("int", 161),
    },
    "validity": {
        "cat_n": ("float", 10.0),
    },
    "numerics": {
        "dim": ("int", None),
        "m_lv": ("int", None),
        "dim_max": ("int", 120),
    },
    "output": {
        "format": ("str", "csv"),
    },
}

_PARSERS = {
    "energy": parse_energy_mhz,
    "rate": parse_rate_per_us,
    "temperature": parse_temperature_k,
    "frequency": parse_frequency_rad_us,
    "float": _parse_float,
    "int": _parse_int,
    "bool": _parse_bool,
    "str": lambda raw, key: str(raw).strip(),
    "command": lambda raw, key: _check_command(raw, key),
    "topology": lambda raw, key: _check_topology(raw, key),
}


def _check_command(raw, key):
    v = str(raw).strip()
    if v not in COMMANDS:
        raise ConfigError(f"{key}: unknown command {v!r}; valid: {', '.join(COMMANDS)}")
    return v


def _check_topology(raw, key):
    v = str(raw).strip().upper()
    if v not in (STS, SQUID):
        raise ConfigError(f"{key}: topology must be STS or SQUID, got {raw!r}")
    return v


@dataclass
class Scenario:
    """Parsed and validated scenario with per-series override support."""

    command: str
    name: str
    sections: dict  # section -> {key: parsed value}
    series: dict = field(default_factory=dict)  # series name -> {dotted key: raw}
    raw: dict = field(default_factory=dict)  # section -> {key: raw string}

    def value(self, section: str, key: str):
        sec = self.sections.get(section, {})
        if key in sec:
            return sec[key]
        kind, default = SCHEMA[section][key]
        if default is None:
            return None
        if isinstance(default, str) and kind in ("energy", "rate", "temperature", "frequency"):
            return _PARSERS[kind](default, f"{section}.{key}")
        return default

    def with_overrides(self, overrides: dict) -> "Scenario":
        """Apply dotted-key overrides (raw strings) and re-validate."""
        raw = {s: dict(kv) for s, kv in self.raw.items()}
        for dotted, value in overrides.items():
            if "." not in dotted:
                raise ConfigError(f"override {dotted!r} must be section.key")
            section, key = dotted.split(".", 1)
            raw.setdefault(section, {})[key] = value
        return _from_raw(self.name, raw, dict(self.series))

    def circuit(self) -> CircuitParams:
        sec = self.sections.get("circuit", {})
        e_j = sec.get("E_J")
        e_j1 = sec.get("E_J1", e_j)
        e_j2 = sec.get("E_J2", e_j)
        e_j3 = sec.get("E_J3", e_j)
        if None in (e_j1, e_j2, e_j3):
            raise ConfigError("circuit: set E_J or all of E_J1/E_J2/E_J3")
        if "E_C" not in sec:
            raise ConfigError("circuit: E_C is required")
        return CircuitParams(
            E_J1=e_j1,
            E_J2=e_j2,
            E_J3=e_j3,
            E_C=sec["E_C"],
            delta_phi=self.value("circuit", "delta_phi"),
            omega_d=self.value("circuit", "omega_d"),
            M=self.value("circuit", "M"),
            N=self.value("circuit", "N"),
            topology=self.value("circuit", "topology"),
        )

    def bath(self, omega_d: float) -> BathSpec:
        sec = self.sections.get("bath", {})
        kappa_table = {}
        temp_table = {}
        for label in FREQ_LABELS:
            if f"kappa_{label}" in sec:
                kappa_table[label] = sec[f"kappa_{label}"]
            if f"temperature_{label}" in sec:
                temp_table[label] = sec[f"temperature_{label}"]
        return BathSpec(
            omega_d=omega_d,
            kappa_default=sec.get("kappa"),
            temperature_default=sec.get("temperature"),
            kappa_table=kappa_table,
            temperature_table=temp_table,
        )

    def sweep_values(self, section: str = "sweep"):
        import numpy as np

        sec = self.sections.get(section)
        if not sec:
            return None, None
        for key in ("start", "stop", "points"):
            if key not in sec:
                raise ConfigError(f"{section}: {key} is required")
        if sec["points"] < 1:
            raise ConfigError(f"{section}: points must be >= 1")
        if sec["points"] > 1 and sec["stop"] < sec["start"]:
            raise ConfigError(f"{section}: stop < start")
        axis = self.value(section, "axis")
        if section == "sweep2" and axis is None:
            raise ConfigError("sweep2: axis is required")
        return axis, np.linspace(sec["start"], sec["stop"], sec["points"])


def _from_raw(name: str, raw: dict, series: dict) -> Scenario:
    sections = {}
    for section, kv in raw.items():
        if section not in SCHEMA:
            raise ConfigError(
                f"unknown section [{section}]; valid: {', '.join(sorted(SCHEMA))}"
            )
        sections[section] = {}
        for key, value in kv.items():
            if key not in SCHEMA[section]:
                raise ConfigError(
                    f"unknown key {section}.{key}; valid keys: "
                    f"{', '.join(sorted(SCHEMA[section]))}"
                )
            kind, _ = SCHEMA[section][key]
            sections[section][key] = _PARSERS[kind](value, f"{section}.{key}")
    if "scenario" not in sections or "command" not in sections["scenario"]:
        raise ConfigError("scenario.command is required")
    command = sections["scenario"]["command"]
    name = sections["scenario"].get("name", name)
    for sname, kv in series.items():
        for dotted in kv:
            if "." not in dotted:
                raise ConfigError(f"series {sname}: key {dotted!r} must be section.key")
            section, key = dotted.split(".", 1)
            if section not in SCHEMA or key not in SCHEMA[section]:
                raise ConfigError(f"series {sname}: unknown key {dotted!r}")
    return Scenario(command=command, name=name, sections=sections, series=series, raw=raw)


def load_scenario(path) -> Scenario:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case-sensitive
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot parse scenario {path}: {exc}") from exc
    raw = {}
    series = {}
    for section in parser.sections():
        if section.startswith("series."):
            series[section.split(".", 1)[1]] = dict(parser[section])
        else:
            raw[section] = dict(parser[section])
    import os

    stem = os.path.splitext(os.path.basename(str(path)))[0]
    return _from_raw(stem, raw, series)


def serialize_scenario(sc: Scenario) -> str:
    """Canonical text form; parse -> serialize -> parse is the identity."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    for section in sorted(sc.raw):
        parser[section] = {k: str(v) for k, v in sorted(sc.raw[section].items())}
    for sname in sorted(sc.series):
        parser[f"series.{sname}"] = {
            k: str(v) for k, v in sorted(sc.series[sname].items())
        }
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
