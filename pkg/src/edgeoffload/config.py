"""Run configuration: INI files with unit suffixes, and JSON manifests.

Values may carry a unit (``55 km/h``, ``2 GHz``, ``50 cm``); everything is
converted to SI on load. A run manifest written by the CLI can be loaded
back in place of the INI file and reproduces the same outputs.
"""

from __future__ import annotations

import configparser
import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import inference_model as im
from . import kinematics as kin
from .errors import ConfigError
from .simulator import (
    ChannelMode,
    InferenceConfig,
    PolicyBasis,
    RadioConfig,
    Scenario,
    SweepSpec,
    SweptParameter,
    TaskConfig,
)

_UNITS = {
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "km": 1e3},
    "speed": {"m/s": 1.0, "km/h": 1 / 3.6, "kmh": 1 / 3.6},
    "accel": {"m/s^2": 1.0, "m/s2": 1.0, "m/s²": 1.0},
    "rate": {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9, "cycles/s": 1.0},
    "power": {"w": 1.0, "mw": 1e-3},
    "bits": {"bit": 1.0, "bits": 1.0, "kbit": 1e3, "kbits": 1e3, "mbit": 1e6, "mbits": 1e6},
    "cycles": {"cycles": 1.0, "mcycles": 1e6, "gcycles": 1e9},
    "none": {},
}

_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(.*?)\s*$")

# section -> key -> (dimension, required)
_SCHEMA = {
    "geometry": {
        "d_vz": ("length", True),
        "d_pz": ("length", True),
        "l_p": ("length", True),
        "w_v": ("length", True),
        "v_p": ("speed", True),
        "v_v": ("speed", True),
        "a_v": ("accel", True),
        "l_v": ("length", False),
    },
    "radio": {
        "bandwidth_total": ("rate", True),
        "num_vehicles": ("int", True),
        "tx_power": ("power", True),
        "channel_gain": ("none", True),
        "noise_power": ("power", True),
        "mes_capacity": ("rate", True),
        "channel_mode": ("str", False),
    },
    "tasks": {
        "mean_input_bits": ("bits", True),
        "mean_cycles": ("cycles", True),
        "vehicle_cpu_rate": ("rate", True),
        "rate_mode": ("str", False),
        "policy_basis": ("str", False),
    },
    "inference": {
        "alpha": ("none", True),
        "quality": ("none", True),
        "capability_vehicle": ("none", True),
        "capability_server": ("none", True),
        "form": ("str", False),
        "table_vehicle": ("path", False),
        "table_server": ("path", False),
    },
}

_SWEEP_DIMENSION = {
    SweptParameter.VEHICLE_COUNT: "int",
    SweptParameter.MES_CAPACITY: "rate",
    SweptParameter.DATA_QUALITY: "none",
}

DEFAULT_TRIALS = 10_000


def parse_quantity(text: str, dimension: str, where: str = "value") -> float:
    m = _NUMBER.match(text)
    if not m:
        raise ConfigError(f"{where}: cannot parse number from {text!r}")
    number, unit = float(m.group(1)), m.group(2)
    if not unit:
        return number
    table = _UNITS[dimension]
    factor = table.get(unit) or table.get(unit.lower())
    if factor is None:
        raise ConfigError(f"{where}: unit {unit!r} not valid for a {dimension} quantity")
    return number * factor


def _parse_value(raw: str, kind: str, where: str, base: Path):
    if kind == "str":
        return raw.strip()
    if kind == "path":
        p = Path(raw.strip())
        return str(p if p.is_absolute() else base / p)
    if kind == "int":
        v = parse_quantity(raw, "none", where)
        if v != int(v):
            raise ConfigError(f"{where}: expected an integer, got {raw!r}")
        return int(v)
    return parse_quantity(raw, kind, where)


@dataclass(frozen=True)
class SweepSection:
    parameter: SweptParameter
    values: tuple


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario = field(default_factory=Scenario)
    sweep: SweepSection | None = None
    out_dir: str = "results"
    csv_name: str = "sweep.csv"
    seed: int = 0
    trials: int = DEFAULT_TRIALS
    workers: int = 1

    def sweep_spec(self) -> SweepSpec:
        if self.sweep is None:
            raise ConfigError("no [sweep] section and no --figure preset given")
        return SweepSpec(
            swept_parameter=self.sweep.parameter,
            values=self.sweep.values,
            trials_per_point=self.trials,
            base_config=self.scenario,
            seed=self.seed,
        )

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.to_dict(),
            "sweep": None
            if self.sweep is None
            else {"parameter": self.sweep.parameter.value, "values": list(self.sweep.values)},
            "output": {"directory": self.out_dir, "csv_name": self.csv_name},
            "seed": self.seed,
            "trials": self.trials,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        try:
            sweep = d.get("sweep")
            cfg = cls(
                scenario=Scenario.from_dict(d["scenario"]),
                sweep=None
                if sweep is None
                else SweepSection(SweptParameter(sweep["parameter"]), tuple(sweep["values"])),
                out_dir=d.get("output", {}).get("directory", "results"),
                csv_name=d.get("output", {}).get("csv_name", "sweep.csv"),
                seed=int(d.get("seed", 0)),
                trials=int(d.get("trials", DEFAULT_TRIALS)),
                workers=int(d.get("workers", 1)),
            )
            cfg.scenario.validate()
            return cfg
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid run config: {exc}") from exc

    def with_overrides(self, **kw) -> RunConfig:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _section(cp: configparser.ConfigParser, name: str, base: Path) -> dict:
    if not cp.has_section(name):
        raise ConfigError(f"missing required section [{name}]")
    sec = cp[name]
    schema = _SCHEMA[name]
    unknown = set(sec) - set(schema)
    if unknown:
        raise ConfigError(f"[{name}] unknown field(s): {', '.join(sorted(unknown))}")
    out = {}
    for key, (kind, required) in schema.items():
        if key not in sec or not sec[key].strip():
            if required:
                raise ConfigError(f"[{name}] missing required field '{key}'")
            continue
        out[key] = _parse_value(sec[key], kind, f"{name}.{key}", base)
    return out


def parse_ini(text: str, base: Path = Path(".")) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}".replace("\n", " ")) from exc

    g = _section(cp, "geometry", base)
    r = _section(cp, "radio", base)
    t = _section(cp, "tasks", base)
    i = _section(cp, "inference", base)
    try:
        scenario = Scenario(
            geometry=kin.ScenarioGeometry(**g),
            radio=RadioConfig(**{**r, "channel_mode": ChannelMode(r.get("channel_mode", "fixed"))}),
            tasks=TaskConfig(
                **{
                    **t,
                    "rate_mode": im.RateMode(t.get("rate_mode", "unit")),
                    "policy_basis": PolicyBasis(t.get("policy_basis", "mean")),
                }
            ),
            inference=InferenceConfig(**{**i, "form": im.MappingForm(i.get("form", "analytic"))}),
        )
        scenario.validate()
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc

    sweep = None
    trials = DEFAULT_TRIALS
    if cp.has_section("sweep"):
        sec = cp["sweep"]
        if "parameter" not in sec:
            raise ConfigError("[sweep] missing required field 'parameter'")
        try:
            param = SweptParameter(sec["parameter"].strip())
        except ValueError as exc:
            raise ConfigError(f"sweep.parameter: {exc}") from exc
        if "values" not in sec:
            raise ConfigError("[sweep] missing required field 'values'")
        kind = _SWEEP_DIMENSION[param]
        values = tuple(
            _parse_value(v, kind, "sweep.values", base) for v in sec["values"].split(",") if v.strip()
        )
        sweep = SweepSection(param, values)
        if "trials" in sec:
            trials = _parse_value(sec["trials"], "int", "sweep.trials", base)

    out_dir, csv_name = "results", "sweep.csv"
    if cp.has_section("output"):
        out_dir = cp["output"].get("directory", out_dir)
        csv_name = cp["output"].get("csv_name", csv_name)

    seed, workers = 0, 1
    if cp.has_section("run"):
        seed = _parse_value(cp["run"].get("seed", "0"), "int", "run.seed", base)
        workers = _parse_value(cp["run"].get("workers", "1"), "int", "run.workers", base)

    return RunConfig(scenario, sweep, out_dir, csv_name, seed, trials, workers)


def load_config(path: str | Path) -> RunConfig:
    """Load an INI config, or a JSON manifest/resolved config written earlier."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON config: {exc}") from exc
        return RunConfig.from_dict(data.get("config", data))
    return parse_ini(text, base=path.parent)
