"""Study configuration files: sectioned key = value text (configparser INI).

Sections: ``[system]``, ``[scenario]``, ``[study]``, ``[output]`` and one
``[fleet.<name>]`` per generator class. All MW figures are given at full size;
``study.scale`` shrinks ratings, loss, wind, demand and extra-inertia grids
together.
"""
from __future__ import annotations

import configparser
import hashlib
import logging
import re
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any

from .domain import GeneratorClass, PowerSystem, SystemParams, ValidationError, validate_fleet
from .scenario import QuantileSpec, WindProcess

log = logging.getLogger(__name__)

STUDY_KINDS = ("run", "annual", "instantaneous", "marginal")


class ConfigError(ValueError):
    """A configuration file could not be read; the message names file, line and field."""


@dataclass(frozen=True)
class StudySettings:
    kind: str = "run"
    scale: float = 1.0
    duration_hours: int = 168
    demand_peak: float = 45000.0
    demand_trough: float = 25000.0
    demand_csv: str = ""
    wind_csv: str = ""
    extra_inertia: float = 0.0
    wind_capacities: tuple[float, ...] = (15000.0, 30000.0, 45000.0, 60000.0)
    rocof_values: tuple[float, ...] = (0.25, 0.5)
    demand_grid: tuple[float, ...] = (25000.0, 30000.0, 35000.0, 40000.0, 45000.0, 50000.0)
    wind_grid: tuple[float, ...] = (0.0, 10000.0, 20000.0, 30000.0, 40000.0, 50000.0)
    extra_grid: tuple[float, ...] = (0.0, 1000.0, 2000.0, 3000.0, 4000.0, 5000.0, 6000.0, 8000.0)
    marginal_condition: tuple[float, ...] = ()  # (demand, wind) for a single-hour curve; empty = rolling
    epsilon: float = 1.0
    relax_commitment: bool = False
    backend: str = "highs"
    n_cuts: int = 16
    deterministic: bool = False
    horizon: int = 24


@dataclass(frozen=True)
class StudyConfig:
    classes: tuple[GeneratorClass, ...]
    params: SystemParams
    quantiles: QuantileSpec
    wind: WindProcess
    study: StudySettings
    output_dir: str = "out"
    provenance: tuple[str, ...] = field(default=(), compare=False)

    def system(self) -> PowerSystem:
        """Validated fleet at the study's scale."""
        return validate_fleet(list(self.classes), self.params).scaled(self.study.scale)

    def wind_process(self) -> WindProcess:
        return self.wind.with_capacity(self.wind.capacity * self.study.scale)

    def digest(self) -> str:
        return hashlib.sha256(serialize_config(self).encode()).hexdigest()


# --------------------------------------------------------------------------
# parsing

_FLEET_FIELDS = [f for f in fields(GeneratorClass) if f.name != "name"]
_PARAM_FIELDS = fields(SystemParams)
_WIND_FIELDS = [f for f in fields(WindProcess) if f.name != "capacity"]
_STUDY_FIELDS = fields(StudySettings)


def _convert(raw: str, kind: Any):
    kind = str(kind)
    raw = raw.strip()
    if kind in ("bool", "<class 'bool'>"):
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    if kind in ("int", "<class 'int'>"):
        v = float(raw)
        if v != int(v):
            raise ValueError(f"expected a whole number, got {raw!r}")
        return int(v)
    if kind in ("float", "<class 'float'>"):
        return float(raw)
    if kind.startswith("tuple"):
        return tuple(float(x) for x in raw.replace(",", " ").split())
    return raw


def _key_lines(text: str) -> dict[tuple[str, str], int]:
    """Line number of each (section, key), for error messages."""
    out: dict[tuple[str, str], int] = {}
    section = ""
    for i, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[(.+)\]$", s)
        if m:
            section = m.group(1).strip()
            out[(section, "")] = i
            continue
        m = re.match(r"([^=:#;\s][^=:]*?)\s*[=:]", s)
        if m and section:
            out[(section, m.group(1).strip().lower())] = i
    return out


def parse_config_text(text: str, source: str = "<config>") -> StudyConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    lines = _key_lines(text)
    provenance: list[str] = []

    def where(section: str, key: str = "") -> str:
        line = lines.get((section, key)) or lines.get((section, ""))
        return f"{source}:{line}" if line else source

    def read_block(section: str, flds, defaults: dict[str, Any]) -> dict[str, Any]:
        values: dict[str, Any] = {}
        known = {f.name for f in flds}
        if cp.has_section(section):
            for key in cp[section]:
                if key not in known:
                    raise ConfigError(f"{where(section, key)}: unknown field {section}.{key}")
        for f in flds:
            if cp.has_section(section) and f.name in cp[section]:
                try:
                    values[f.name] = _convert(cp[section][f.name], f.type)
                except ValueError as exc:
                    raise ConfigError(f"{where(section, f.name)}: field {section}.{f.name}: {exc}") from exc
            elif f.name in defaults:
                values[f.name] = defaults[f.name]
                provenance.append(f"{section}.{f.name} defaulted to {defaults[f.name]!r}")
        return values

    param_defaults = {f.name: f.default for f in _PARAM_FIELDS}
    params = SystemParams(**read_block("system", _PARAM_FIELDS, param_defaults))
    wind_defaults = {f.name: f.default for f in _WIND_FIELDS}
    wind_kw = read_block("wind", _WIND_FIELDS, wind_defaults)

    # scenario block holds the quantile list
    quantiles = QuantileSpec().quantiles
    if cp.has_section("scenario"):
        for key in cp["scenario"]:
            if key != "quantiles":
                raise ConfigError(f"{where('scenario', key)}: unknown field scenario.{key}")
        if "quantiles" in cp["scenario"]:
            try:
                quantiles = _convert(cp["scenario"]["quantiles"], "tuple")
            except ValueError as exc:
                raise ConfigError(f"{where('scenario', 'quantiles')}: field scenario.quantiles: {exc}") from exc
        else:
            provenance.append(f"scenario.quantiles defaulted to {quantiles!r}")
    else:
        provenance.append(f"scenario.quantiles defaulted to {quantiles!r}")
    try:
        qspec = QuantileSpec(quantiles)
    except ValueError as exc:
        raise ConfigError(f"{where('scenario', 'quantiles')}: field scenario.quantiles: {exc}") from exc

    study_defaults = {f.name: f.default for f in _STUDY_FIELDS}
    study = StudySettings(**read_block("study", _STUDY_FIELDS, study_defaults))
    if study.kind not in STUDY_KINDS:
        raise ConfigError(f"{where('study', 'kind')}: field study.kind must be one of {STUDY_KINDS}")
    if not study.scale > 0:
        raise ConfigError(f"{where('study', 'scale')}: field study.scale must be positive")
    if study.backend not in ("highs", "builtin"):
        raise ConfigError(f"{where('study', 'backend')}: field study.backend must be 'highs' or 'builtin'")

    output_dir = "out"
    if cp.has_section("output"):
        for key in cp["output"]:
            if key != "dir":
                raise ConfigError(f"{where('output', key)}: unknown field output.{key}")
        output_dir = cp["output"].get("dir", output_dir).strip()

    classes = []
    fleet_sections = [s for s in cp.sections() if s.startswith("fleet.")]
    if not fleet_sections:
        raise ConfigError(f"{source}: no [fleet.<name>] sections")
    for sec in fleet_sections:
        name = sec[len("fleet."):].strip()
        kw: dict[str, Any] = {"name": name}
        for key in cp[sec]:
            if key not in {f.name for f in _FLEET_FIELDS}:
                raise ConfigError(f"{where(sec, key)}: unknown field {sec}.{key}")
        for f in _FLEET_FIELDS:
            if f.name in cp[sec]:
                try:
                    kw[f.name] = _convert(cp[sec][f.name], f.type)
                except ValueError as exc:
                    raise ConfigError(f"{where(sec, f.name)}: field {sec}.{f.name}: {exc}") from exc
            elif f.name == "must_run":
                kw[f.name] = False
            else:
                raise ConfigError(f"{where(sec)}: field {sec}.{f.name} is missing")
        classes.append(GeneratorClass(**kw))

    wind_capacity = params.wind_capacity
    cfg = StudyConfig(tuple(classes), params, qspec, WindProcess(wind_capacity, **wind_kw), study, output_dir,
                      tuple(provenance))
    try:
        validate_fleet(list(cfg.classes), cfg.params)
    except ValidationError as exc:
        msg = str(exc)
        m = re.match(r"generator class '([^']+)': field '([^']+)'", msg)
        loc = where(f"fleet.{m.group(1)}", m.group(2)) if m else where("system")
        m2 = re.match(r"system params: field '([^']+)'", msg)
        if m2:
            loc = where("system", m2.group(1))
        raise ConfigError(f"{loc}: {msg}") from exc
    for note in provenance:
        log.info("config default: %s", note)
    return cfg


def parse_config(path) -> StudyConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"{path}: no such config file")
    return parse_config_text(p.read_text(), str(p))


def bundled_config_text(name: str = "gb_fleet") -> str:
    return resources.files("inertia_value").joinpath("data", f"{name}.ini").read_text()


def bundled_config(name: str = "gb_fleet") -> StudyConfig:
    return parse_config_text(bundled_config_text(name), f"<bundled {name}>")


# --------------------------------------------------------------------------
# writing


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple):
        return ", ".join(repr(float(x)) for x in v)
    return str(v)


def serialize_config(cfg: StudyConfig) -> str:
    out = ["[system]"]
    out += [f"{f.name} = {_fmt(getattr(cfg.params, f.name))}" for f in _PARAM_FIELDS]
    out += ["", "[wind]"]
    out += [f"{f.name} = {_fmt(getattr(cfg.wind, f.name))}" for f in _WIND_FIELDS]
    out += ["", "[scenario]", f"quantiles = {_fmt(cfg.quantiles.quantiles)}"]
    out += ["", "[study]"]
    out += [f"{f.name} = {_fmt(getattr(cfg.study, f.name))}" for f in _STUDY_FIELDS]
    out += ["", "[output]", f"dir = {cfg.output_dir}"]
    for g in cfg.classes:
        out += ["", f"[fleet.{g.name}]"]
        out += [f"{f.name} = {_fmt(getattr(g, f.name))}" for f in _FLEET_FIELDS]
    return "\n".join(out) + "\n"


def with_overrides(cfg: StudyConfig, **kw) -> StudyConfig:
    """Apply command-line style overrides (``None`` values are ignored)."""
    params, study, wind = cfg.params, cfg.study, cfg.wind
    if kw.get("rocof_max") is not None:
        params = replace(params, rocof_max=float(kw["rocof_max"]))
    if kw.get("seed") is not None:
        wind = replace(wind, seed=int(kw["seed"]))
    if kw.get("extra_inertia") is not None:
        study = replace(study, extra_inertia=float(kw["extra_inertia"]))
    if kw.get("duration_hours") is not None:
        study = replace(study, duration_hours=int(kw["duration_hours"]))
    out = replace(cfg, params=params, study=study, wind=wind,
                  output_dir=kw["out_dir"] if kw.get("out_dir") else cfg.output_dir)
    validate_fleet(list(out.classes), out.params)
    return out
