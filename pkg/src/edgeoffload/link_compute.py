"""Uplink and computing delay models.

Every function here broadcasts over numpy arrays, so a whole batch of
sampled tasks (or per-vehicle channel gains) can be evaluated at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike


def _positive(name: str, value) -> None:
    if not np.all(np.asarray(value) > 0):
        raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True)
class RadioEnvironment:
    bandwidth_total: float  # Hz
    num_vehicles: int
    tx_power: float  # W
    channel_gain: ArrayLike  # linear, scalar or one per task/vehicle
    noise_power: float  # W
    mes_capacity: float  # cycles/s

    def __post_init__(self):
        _positive("bandwidth_total", self.bandwidth_total)
        if self.num_vehicles < 1:
            raise ValueError("num_vehicles must be >= 1")
        _positive("tx_power", self.tx_power)
        _positive("channel_gain", self.channel_gain)
        _positive("noise_power", self.noise_power)
        _positive("mes_capacity", self.mes_capacity)


@dataclass(frozen=True)
class TaskSpec:
    input_bits: ArrayLike
    cycles: ArrayLike
    deadline: ArrayLike = np.inf

    def __post_init__(self):
        _positive("input_bits", self.input_bits)
        _positive("cycles", self.cycles)
        _positive("deadline", self.deadline)


@dataclass(frozen=True)
class VehicleCompute:
    cpu_rate: float  # cycles/s

    def __post_init__(self):
        _positive("cpu_rate", self.cpu_rate)


def snr(env: RadioEnvironment):
    return env.tx_power * np.asarray(env.channel_gain) / env.noise_power


def uplink_rate(env: RadioEnvironment):
    """Per-vehicle Shannon rate in bit/s over an equal ``B/M`` sub-band."""
    return env.bandwidth_total / env.num_vehicles * np.log2(1.0 + snr(env))


def uplink_delay(task: TaskSpec, env: RadioEnvironment):
    return np.asarray(task.input_bits) / uplink_rate(env)


def local_delay(task: TaskSpec, veh: VehicleCompute):
    return np.asarray(task.cycles) / veh.cpu_rate


def offload_delay(task: TaskSpec, env: RadioEnvironment):
    # result download is neglected
    return uplink_delay(task, env) + np.asarray(task.cycles) / env.mes_capacity
