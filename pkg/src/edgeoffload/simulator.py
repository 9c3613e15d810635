"""Monte Carlo harness comparing the proposed policy with the two benchmarks.

Each sweep point is simulated for ``trials`` rounds of ``M`` vehicles. A
vehicle plans its policy (pre-braking probability, offloading probability,
error threshold) from the mean task size and CPU load; every task then
draws its own input size, cycle count and realized local error, and is
offloaded when that error reaches the threshold.

Randomness: one Philox stream per (sweep point, scheme), keyed from the
root seed. Draws are laid out row-major over (trial, vehicle), so every task
owns a fixed slice of the counter space and results do not depend on how
points are scheduled across workers.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from enum import Enum
from pathlib import Path

import numpy as np

from . import inference_model as im
from . import kinematics as kin
from . import link_compute as lc
from . import policy as pol
from .errors import ConfigError


class SchemeKind(str, Enum):
    PROPOSED = "Proposed"
    LOCAL = "LocalInference"
    MES = "MesInference"


ALL_SCHEMES = (SchemeKind.PROPOSED, SchemeKind.LOCAL, SchemeKind.MES)


class SweptParameter(str, Enum):
    VEHICLE_COUNT = "VehicleCount"
    MES_CAPACITY = "MesCapacity"
    DATA_QUALITY = "DataQuality"


class ChannelMode(str, Enum):
    FIXED = "fixed"
    RAYLEIGH = "rayleigh"  # |h|^2 ~ Exp with mean channel_gain, per task


class PolicyBasis(str, Enum):
    MEAN = "mean"  # plan from the mean task, as the closed form assumes
    SAMPLED = "sampled"  # plan per task from its own sampled size and load


@dataclass(frozen=True)
class RadioConfig:
    bandwidth_total: float = 1e6
    num_vehicles: int = 20
    tx_power: float = 0.3
    channel_gain: float = 1.1e-9
    noise_power: float = 7.9e-13
    mes_capacity: float = 2e9
    channel_mode: ChannelMode = ChannelMode.FIXED

    def environment(self, channel_gain=None) -> lc.RadioEnvironment:
        return lc.RadioEnvironment(
            bandwidth_total=self.bandwidth_total,
            num_vehicles=self.num_vehicles,
            tx_power=self.tx_power,
            channel_gain=self.channel_gain if channel_gain is None else channel_gain,
            noise_power=self.noise_power,
            mes_capacity=self.mes_capacity,
        )


@dataclass(frozen=True)
class TaskConfig:
    mean_input_bits: float = 1e6
    mean_cycles: float = 3e8
    vehicle_cpu_rate: float = 1e9
    rate_mode: im.RateMode = im.RateMode.UNIT
    policy_basis: PolicyBasis = PolicyBasis.MEAN


@dataclass(frozen=True)
class InferenceConfig:
    alpha: float = 1.0
    quality: float = 0.05
    capability_vehicle: float = 1.0
    capability_server: float = 5.0
    form: im.MappingForm = im.MappingForm.ANALYTIC
    table_vehicle: str | None = None
    table_server: str | None = None

    def mapping(self) -> im.ErrorMapping:
        tables = {}
        if self.form is im.MappingForm.TABULATED:
            for cap, path, name in (
                (self.capability_vehicle, self.table_vehicle, "table_vehicle"),
                (self.capability_server, self.table_server, "table_server"),
            ):
                if not path:
                    raise ConfigError(f"inference.{name} is required for the tabulated mapping")
                tables[cap] = im.load_table(path)
        return im.ErrorMapping(alpha=self.alpha, form=self.form, tables=tables)


def _default_geometry() -> kin.ScenarioGeometry:
    return kin.ScenarioGeometry(d_vz=20.0, d_pz=3.0, l_p=0.5, w_v=1.5, v_p=1.0, v_v=55 / 3.6, a_v=-2.5)


@dataclass(frozen=True)
class Scenario:
    geometry: kin.ScenarioGeometry = field(default_factory=_default_geometry)
    radio: RadioConfig = field(default_factory=RadioConfig)
    tasks: TaskConfig = field(default_factory=TaskConfig)
    inference: InferenceConfig = field(default_factory=InferenceConfig)

    def validate(self) -> None:
        """Build every domain object once so bad values fail before any trial."""
        try:
            self.radio.environment()
            lc.TaskSpec(self.tasks.mean_input_bits, self.tasks.mean_cycles)
            lc.VehicleCompute(self.tasks.vehicle_cpu_rate)
            mapping = self.inference.mapping()
            im.error_rate(mapping, self.inference.quality, self.inference.capability_vehicle)
            im.error_rate(mapping, self.inference.quality, self.inference.capability_server)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def with_value(self, param: SweptParameter, value) -> Scenario:
        param = SweptParameter(param)
        if param is SweptParameter.VEHICLE_COUNT:
            return replace(self, radio=replace(self.radio, num_vehicles=int(value)))
        if param is SweptParameter.MES_CAPACITY:
            return replace(self, radio=replace(self.radio, mes_capacity=float(value)))
        return replace(self, inference=replace(self.inference, quality=float(value)))

    def to_dict(self) -> dict:
        return json.loads(json.dumps(asdict(self), default=_enum_value))

    @classmethod
    def from_dict(cls, d: dict) -> Scenario:
        try:
            return cls(
                geometry=kin.ScenarioGeometry(**d["geometry"]),
                radio=_build(RadioConfig, d["radio"], channel_mode=ChannelMode),
                tasks=_build(TaskConfig, d["tasks"], rate_mode=im.RateMode, policy_basis=PolicyBasis),
                inference=_build(InferenceConfig, d["inference"], form=im.MappingForm),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid scenario: {exc}") from exc


def _enum_value(obj):
    if isinstance(obj, Enum):
        return obj.value
    raise TypeError(repr(obj))


def _build(cls, d: dict, **enums):
    known = {f.name for f in fields(cls)}
    unknown = set(d) - known
    if unknown:
        raise ConfigError(f"unknown {cls.__name__} field(s): {', '.join(sorted(unknown))}")
    kwargs = dict(d)
    for name, enum in enums.items():
        if name in kwargs:
            kwargs[name] = enum(kwargs[name])
    return cls(**kwargs)


@dataclass(frozen=True)
class PointResult:
    swept_value: float
    scheme: SchemeKind
    mean_error: float
    mean_delay_s: float
    offload_fraction: float
    prebrake_prob: float
    infeasible_count: int
    trials: int
    stderr_error: float
    realized_delay_s: float
    stderr_realized_delay_s: float
    mean_rho_star: float
    effective_deadline_s: float


CSV_COLUMNS = [f.name for f in fields(PointResult)]


def _stream(seed: int, key: tuple[int, ...]) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def run_point(
    scenario: Scenario,
    scheme: SchemeKind,
    trials: int,
    seed: int,
    stream_key: tuple[int, ...] = (0,),
    swept_value: float = math.nan,
) -> PointResult:
    """Simulate ``trials`` rounds of every vehicle under one scheme.

    ``mean_delay_s`` is the policy's expected delay averaged over feasible
    tasks; ``realized_delay_s`` averages the delay of the execution each task
    actually took, with its sampled size and load.
    """
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    scenario.validate()
    scheme = SchemeKind(scheme)
    scheme_index = ALL_SCHEMES.index(scheme)
    rng = _stream(seed, (*stream_key, scheme_index))

    radio, tasks, inf = scenario.radio, scenario.tasks, scenario.inference
    shape = (trials, radio.num_vehicles)

    window = kin.time_gain(scenario.geometry)
    eta = pol.prebrake_probability(window)
    deadline = pol.effective_deadline(window, eta)

    mapping = inf.mapping()
    eps_local = im.error_rate(mapping, inf.quality, inf.capability_vehicle)
    eps_offload = im.error_rate(mapping, inf.quality, inf.capability_server)

    bits = rng.exponential(tasks.mean_input_bits, shape)
    cycles = rng.exponential(tasks.mean_cycles, shape)
    draws = im.sample_local_error(rng, eps_local, shape, tasks.rate_mode)
    if radio.channel_mode is ChannelMode.RAYLEIGH:
        gain = radio.channel_gain * rng.exponential(1.0, shape)
    else:
        gain = radio.channel_gain
    env = radio.environment(gain)
    veh = lc.VehicleCompute(tasks.vehicle_cpu_rate)

    sampled = lc.TaskSpec(bits, cycles)
    tl_real = np.broadcast_to(lc.local_delay(sampled, veh), shape)
    to_real = np.broadcast_to(lc.offload_delay(sampled, env), shape)
    if tasks.policy_basis is PolicyBasis.MEAN:
        mean_task = lc.TaskSpec(tasks.mean_input_bits, tasks.mean_cycles)
        tl_plan = np.broadcast_to(lc.local_delay(mean_task, veh), shape)
        to_plan = np.broadcast_to(lc.offload_delay(mean_task, env), shape)
    else:
        tl_plan, to_plan = tl_real, to_real

    rho_opt, feasible = pol.offload_probability_for_deadline(tl_plan, to_plan, deadline)
    if scheme is SchemeKind.PROPOSED:
        rho = rho_opt
    else:
        rho = np.full(shape, 0.0 if scheme is SchemeKind.LOCAL else 1.0)
    threshold = pol.optimal_threshold(rho)
    offload = pol.decide(draws, threshold).offload

    exp_delay, _ = pol.expected_outcomes(rho, tl_plan, to_plan, eps_local, eps_offload)
    if scheme is SchemeKind.PROPOSED and np.any(exp_delay[feasible] > deadline + 1e-9):
        raise RuntimeError("proposed policy exceeded the effective deadline on a feasible task")

    n = offload.size
    frac = float(np.count_nonzero(offload)) / n
    mean_error = eps_local - frac * (eps_local - eps_offload)
    stderr_error = abs(eps_local - eps_offload) * math.sqrt(frac * (1.0 - frac) / n)

    real_delay = np.where(offload, to_real, tl_real)[feasible]
    n_feasible = real_delay.size
    if n_feasible:
        mean_delay = float(np.mean(exp_delay[feasible]))
        realized = float(np.mean(real_delay))
        realized_se = float(np.std(real_delay) / math.sqrt(n_feasible))
    else:
        mean_delay = realized = realized_se = math.nan

    return PointResult(
        swept_value=swept_value,
        scheme=scheme,
        mean_error=float(mean_error),
        mean_delay_s=mean_delay,
        offload_fraction=frac,
        prebrake_prob=eta,
        infeasible_count=int(n - n_feasible),
        trials=trials,
        stderr_error=stderr_error,
        realized_delay_s=realized,
        stderr_realized_delay_s=realized_se,
        mean_rho_star=float(np.mean(rho)),
        effective_deadline_s=deadline,
    )


@dataclass(frozen=True)
class SweepSpec:
    swept_parameter: SweptParameter
    values: tuple
    trials_per_point: int
    base_config: Scenario
    seed: int
    schemes: tuple = ALL_SCHEMES

    def __post_init__(self):
        object.__setattr__(self, "swept_parameter", SweptParameter(self.swept_parameter))
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "schemes", tuple(SchemeKind(s) for s in self.schemes))
        if not self.values:
            raise ConfigError("sweep values must be non-empty")
        steps = np.diff(np.asarray(self.values, dtype=float))
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise ConfigError("sweep values must be strictly monotone")
        if self.trials_per_point < 1:
            raise ConfigError("trials_per_point must be >= 1")
        if self.swept_parameter is SweptParameter.VEHICLE_COUNT and any(
            int(v) != v or v < 1 for v in self.values
        ):
            raise ConfigError("vehicle counts must be positive integers")

    def to_dict(self) -> dict:
        return {
            "swept_parameter": self.swept_parameter.value,
            "values": list(self.values),
            "trials_per_point": self.trials_per_point,
            "seed": self.seed,
            "schemes": [s.value for s in self.schemes],
            "base_config": self.base_config.to_dict(),
        }


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: list[PointResult]

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.spec.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def select(self, scheme: SchemeKind) -> list[PointResult]:
        return [r for r in self.rows if r.scheme is SchemeKind(scheme)]

    def column(self, scheme: SchemeKind, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.select(scheme)], dtype=float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _run_job(args):
    scenario, scheme, trials, seed, key, value = args
    try:
        return run_point(scenario, scheme, trials, seed, key, value)
    except (ConfigError, ValueError) as exc:
        raise ConfigError(f"sweep point {value!r} ({SchemeKind(scheme).value}): {exc}") from exc


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Run every (value, scheme) pair; rows follow ``spec.values`` order.

    Each point's stream is keyed by its index in ``spec.values``, so the
    output is identical for any ``workers`` count.
    """
    for value in spec.values:
        spec.base_config.with_value(spec.swept_parameter, value).validate()
    jobs = [
        (spec.base_config.with_value(spec.swept_parameter, v), s, spec.trials_per_point, spec.seed, (i,), float(v))
        for i, v in enumerate(spec.values)
        for s in spec.schemes
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_run_job, jobs))
    else:
        rows = [_run_job(j) for j in jobs]
    return SweepResult(spec=spec, rows=rows)


def headline_comparison(scenario: Scenario, trials: int = 10_000, seed: int = 0) -> tuple[float, float]:
    """Percent error saving vs local inference and delay saving vs MES inference."""
    res = {s: run_point(scenario, s, trials, seed) for s in ALL_SCHEMES}
    p, loc, mes = res[SchemeKind.PROPOSED], res[SchemeKind.LOCAL], res[SchemeKind.MES]
    error_saving = 100.0 * (1.0 - p.mean_error / loc.mean_error) if loc.mean_error > 0 else 0.0
    delay_saving = 100.0 * (1.0 - p.mean_delay_s / mes.mean_delay_s)
    return error_saving, delay_saving


def write_csv(result: SweepResult, path: Path) -> None:
    Path(path).write_text(result.to_csv())
