import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from edgeoffload import link_compute as lc


def env(**kw):
    base = dict(bandwidth_total=1e6, num_vehicles=1, tx_power=0.3, channel_gain=1e-6, noise_power=7.9e-13, mes_capacity=2e9)
    base.update(kw)
    return lc.RadioEnvironment(**base)


RATE = 1e6 * math.log2(1 + 0.3e-6 / 7.9e-13)


def test_uplink_rate_examples():
    assert lc.uplink_rate(env()) == pytest.approx(1.8535e7, rel=1e-4)
    assert lc.uplink_rate(env(num_vehicles=2)) == lc.uplink_rate(env()) / 2
    unit_snr = env(tx_power=1.0, channel_gain=7.9e-13, noise_power=7.9e-13)
    assert lc.uplink_rate(unit_snr) == 1e6


def test_uplink_delay_examples():
    task = lc.TaskSpec(1e6, 1e9)
    assert lc.uplink_delay(task, env()) == pytest.approx(1e6 / RATE, rel=1e-12)
    assert lc.uplink_delay(task, env()) == pytest.approx(0.05395, abs=1e-5)
    assert lc.uplink_delay(lc.TaskSpec(1e-9, 1e9), env()) < 1e-15
    assert lc.uplink_delay(task, env(num_vehicles=10)) == pytest.approx(10 * lc.uplink_delay(task, env()), rel=1e-14)


def test_local_delay_examples():
    veh = lc.VehicleCompute(1e9)
    assert lc.local_delay(lc.TaskSpec(1e6, 1e9), veh) == 1.0
    assert lc.local_delay(lc.TaskSpec(1e6, 0.5e9), veh) == 0.5
    assert lc.local_delay(lc.TaskSpec(1e6, 1e-6), veh) < 1e-14


def test_offload_delay_examples():
    task = lc.TaskSpec(1e6, 1e9)
    assert lc.offload_delay(task, env()) == pytest.approx(1e6 / RATE + 0.5, rel=1e-12)
    assert lc.offload_delay(task, env(mes_capacity=1e300)) == pytest.approx(lc.uplink_delay(task, env()))
    small = lc.TaskSpec(1e3, 1e9)
    assert lc.offload_delay(small, env()) < lc.local_delay(small, lc.VehicleCompute(1e9))


def test_rejects_invalid():
    with pytest.raises(ValueError):
        env(num_vehicles=0)
    with pytest.raises(ValueError):
        env(channel_gain=np.array([1e-6, 0.0]))
    with pytest.raises(ValueError):
        lc.TaskSpec(0, 1)
    with pytest.raises(ValueError):
        lc.VehicleCompute(-1)


def test_vectorized_over_tasks():
    bits = np.array([1e5, 1e6, 1e7])
    d = lc.offload_delay(lc.TaskSpec(bits, 1e9), env())
    assert d.shape == (3,) and np.all(np.diff(d) > 0)


@pytest.mark.parametrize(
    "field,values,direction",
    [
        ("num_vehicles", [1, 2, 5, 10, 20], +1),
        ("mes_capacity", [0.5e9, 1e9, 2e9, 5e9], -1),
        ("bandwidth_total", [0.5e6, 1e6, 2e6], -1),
        ("tx_power", [0.1, 0.3, 1.0], -1),
        ("channel_gain", [1e-9, 1e-8, 1e-6], -1),
    ],
)
def test_offload_delay_monotone_in_env(field, values, direction):
    task = lc.TaskSpec(1e6, 1e9)
    d = np.array([lc.offload_delay(task, env(**{field: v})) for v in values])
    assert np.all(direction * np.diff(d) >= 0)


def test_offload_delay_monotone_in_task():
    e = env()
    assert np.all(np.diff(lc.offload_delay(lc.TaskSpec(np.array([1e5, 1e6, 1e7]), 1e9), e)) > 0)
    assert np.all(np.diff(lc.offload_delay(lc.TaskSpec(1e6, np.array([1e8, 1e9, 1e10])), e)) > 0)


@given(st.floats(1e3, 1e8), st.floats(1e7, 1e10), st.integers(1, 50))
def test_offload_slower_with_equal_compute(bits, cycles, m):
    f = 1e9
    task = lc.TaskSpec(bits, cycles)
    assert lc.offload_delay(task, env(mes_capacity=f, num_vehicles=m)) > lc.local_delay(task, lc.VehicleCompute(f))


@given(st.floats(1e3, 1e9), st.integers(1, 50), st.floats(1e-10, 1e-5))
def test_delay_rate_round_trip(bits, m, h):
    e = env(num_vehicles=m, channel_gain=h)
    task = lc.TaskSpec(bits, 1e9)
    assert lc.uplink_delay(task, e) * lc.uplink_rate(e) == pytest.approx(bits, rel=1e-12)
