import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from edgeoffload import policy as pol
from edgeoffload.kinematics import Reachability, ToleranceWindow

UB = 5 - math.sqrt(24)  # theta_ub for v_v = 10 m/s, a_v = -2.5, d_vz = 20, tpc = 5


def window(theta_ub, theta_b):
    return ToleranceWindow(theta_b=theta_b, theta_ub=theta_ub, theta_ub_raw=theta_ub, reachability=Reachability.REACHABLE)


def test_prebrake_probability_examples():
    assert pol.prebrake_probability(window(0.0, 1.5)) == 1.0
    assert pol.prebrake_probability(window(UB, 4.0)) == pytest.approx(0.9039144894018473, abs=1e-12)
    assert pol.prebrake_probability(window(800.0, math.inf)) == 0.0


def test_effective_deadline_examples():
    w = window(UB, 4.0)
    assert pol.effective_deadline(w, 0.0) == UB
    assert pol.effective_deadline(w, 1.0) == 4.0
    eta = pol.prebrake_probability(w)
    assert pol.effective_deadline(w, eta) == pytest.approx(3.625364565317634, abs=1e-12)
    assert pol.effective_deadline(window(3.0, math.inf), 0.0) == 3.0
    assert math.isinf(pol.effective_deadline(window(3.0, math.inf), 0.05))


def test_optimal_offload_probability_examples():
    w = window(UB, 4.0)
    assert pol.optimal_offload_probability(1.0, 0.554, w) == (1.0, True)
    rho, ok = pol.optimal_offload_probability(0.2, 4.0, w)
    grid_rho, grid_ok = oracles.best_rho_grid(0.2, 4.0, UB, 4.0, 0.95, 0.19)
    assert ok and grid_ok
    assert rho == pytest.approx(0.9014117277151668, abs=1e-12)
    assert abs(rho - grid_rho) <= 1e-5
    deadline = pol.effective_deadline(w, pol.prebrake_probability(w))
    assert pol.optimal_offload_probability(deadline, deadline + 1.0, w) == (0.0, True)


def test_infeasible_and_edge_regimes():
    w = window(0.0, 1.0)
    assert pol.optimal_offload_probability(2.0, 3.0, w) == (0.0, False)
    assert pol.optimal_offload_probability(3.0, 2.0, w) == (1.0, False)
    assert pol.optimal_offload_probability(0.5, 0.5, w) == (1.0, True)
    assert pol.optimal_offload_probability(3.0, 0.8, w) == (1.0, True)
    assert pol.optimal_offload_probability(0.5, 9.0, window(2.0, math.inf)) == (1.0, True)
    with pytest.raises(ValueError):
        pol.optimal_offload_probability(0.0, 1.0, w)


def test_vectorized_matches_scalar():
    w = window(0.3, 2.0)
    tl = np.array([0.2, 0.5, 3.0, 1.0])
    to = np.array([4.0, 0.4, 3.5, 1.0])
    rho, ok = pol.optimal_offload_probability(tl, to, w)
    for i in range(4):
        assert (rho[i], ok[i]) == pol.optimal_offload_probability(tl[i], to[i], w)


def test_optimal_threshold_examples():
    assert pol.optimal_threshold(1.0) == 0.0
    assert pol.optimal_threshold(0.9014117277151668) == pytest.approx(0.10379315825423863, abs=1e-12)
    assert pol.optimal_threshold(math.exp(-1)) == pytest.approx(1.0, abs=1e-15)
    assert math.isinf(pol.optimal_threshold(0.0))


@given(st.floats(1e-300, 1.0))
def test_threshold_round_trip(rho):
    assert math.exp(-pol.optimal_threshold(rho)) == pytest.approx(rho, rel=1e-12)


def test_expected_outcomes_examples():
    assert pol.expected_outcomes(0.0, 0.2, 4.0, 0.95, 0.19) == (0.2, 0.95)
    d, e = pol.expected_outcomes(1.0, 0.2, 4.0, 0.95, 0.19)
    assert d == pytest.approx(4.0) and e == pytest.approx(0.19)
    rho = 0.9014117277151668
    d, e = pol.expected_outcomes(rho, 0.2, 4.0, 0.95, 0.19)
    assert d == pytest.approx(3.625364565317634, abs=1e-12)
    assert e == pytest.approx(0.95 - rho * 0.76, abs=1e-15)
    assert e == pytest.approx(0.2649, abs=1e-4)
    with pytest.warns(UserWarning):
        pol.expected_outcomes(0.5, 1.0, 2.0, 0.1, 0.2)


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_expected_error_decreasing_in_rho(r1, r2, eps_o):
    eps_l = eps_o + 0.1
    lo, hi = sorted((r1, r2))
    if hi - lo < 1e-9:
        return
    assert pol.expected_outcomes(hi, 1, 2, eps_l, eps_o)[1] < pol.expected_outcomes(lo, 1, 2, eps_l, eps_o)[1]


def test_decide_examples():
    assert pol.decide(0.95, 0.1038).offload is True
    assert pol.decide(0.0, 0.0).offload is True
    assert pol.decide(1e9, math.inf).offload is False
    with pytest.raises(ValueError):
        pol.decide(0.5, -0.1)


def test_decision_frequency_matches_rho():
    rho = 0.9014117277151668
    n = 100_000
    draws = np.random.default_rng(5).exponential(1.0, n)
    freq = pol.decide(draws, pol.optimal_threshold(rho)).offload.mean()
    assert abs(freq - rho) <= 3 * math.sqrt(rho * (1 - rho) / n)


@given(
    st.floats(0.01, 5), st.floats(0.01, 5), st.floats(0.0, 3), st.floats(0.0, 4),
)
def test_feasible_delay_within_deadline(tl, to, ub, gap):
    w = window(ub, ub + gap)
    sol = pol.solve(tl, to, w, 0.9, 0.2)
    assert 0.0 <= sol.rho_star <= 1.0 and 0.0 <= sol.eta <= 1.0
    assert sol.expected_error == 0.9 - sol.rho_star * (0.9 - 0.2)
    if sol.feasible:
        assert sol.expected_delay <= sol.effective_deadline + 1e-12
