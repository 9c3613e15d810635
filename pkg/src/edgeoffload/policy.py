"""Pre-braking, optimal offloading probability and the per-task threshold rule.

Functions accept scalars or numpy arrays of per-task delays; the tolerance
window is shared by every task of a vehicle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .kinematics import ToleranceWindow


@dataclass(frozen=True)
class PolicySolution:
    eta: float
    rho_star: np.ndarray | float
    eps_threshold: np.ndarray | float
    effective_deadline: float
    expected_delay: np.ndarray | float
    expected_error: np.ndarray | float
    feasible: np.ndarray | bool


@dataclass(frozen=True)
class OffloadDecision:
    offload: np.ndarray | bool
    realized_local_error: np.ndarray | float
    threshold_used: np.ndarray | float


def prebrake_probability(window: ToleranceWindow) -> float:
    if window.theta_ub < 0:
        raise ValueError("theta_ub must be clamped to >= 0 before use")
    return math.exp(-window.theta_ub)


def effective_deadline(window: ToleranceWindow, eta: float) -> float:
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if eta == 0.0:
        return window.theta_ub  # avoids 0 * inf when braking alone suffices
    return (1.0 - eta) * window.theta_ub + eta * window.theta_b


def optimal_offload_probability(tau_local, tau_offload, window: ToleranceWindow):
    """Largest offloading probability whose expected delay meets the deadline.

    Returns ``(rho, feasible)``. When offloading is no slower than local
    inference it dominates on both delay and error, so ``rho = 1``. A task
    is infeasible when neither execution site meets the deadline.
    """
    deadline = effective_deadline(window, prebrake_probability(window))
    return offload_probability_for_deadline(tau_local, tau_offload, deadline)


def offload_probability_for_deadline(tau_local, tau_offload, deadline):
    tl = np.asarray(tau_local, dtype=float)
    to = np.asarray(tau_offload, dtype=float)
    if np.any(tl <= 0) or np.any(to <= 0):
        raise ValueError("delays must be > 0")
    offload_faster = to <= tl
    gap = to - tl
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(offload_faster, 1.0, (deadline - tl) / np.where(offload_faster, 1.0, gap))
    rho = np.where(offload_faster, 1.0, np.clip(ratio, 0.0, 1.0))
    feasible = np.where(offload_faster, to <= deadline, tl <= deadline)
    if rho.ndim == 0:
        return float(rho), bool(feasible)
    return rho, feasible


def optimal_threshold(rho_star):
    """Error threshold ``ln(1/rho)``; ``inf`` for rho = 0 (never offload)."""
    rho = np.asarray(rho_star, dtype=float)
    if np.any((rho < 0) | (rho > 1)):
        raise ValueError("rho must lie in [0, 1]")
    with np.errstate(divide="ignore"):
        th = -np.log(rho)
    th = np.where(rho == 1.0, 0.0, th)
    return float(th) if th.ndim == 0 else th


def expected_outcomes(rho, tau_local, tau_offload, eps_local, eps_offload):
    if np.any(np.asarray(eps_offload) > np.asarray(eps_local)):
        warnings.warn("server error exceeds local error; offloading cannot help", stacklevel=2)
    delay = tau_local + rho * (tau_offload - tau_local)
    error = eps_local - rho * (eps_local - eps_offload)
    return delay, error


def decide(task_error_draw, threshold) -> OffloadDecision:
    if np.any(np.asarray(threshold) < 0):
        raise ValueError("threshold must be >= 0")
    offload = np.asarray(task_error_draw) >= threshold
    if offload.ndim == 0:
        offload = bool(offload)
    return OffloadDecision(offload=offload, realized_local_error=task_error_draw, threshold_used=threshold)


def solve(tau_local, tau_offload, window: ToleranceWindow, eps_local: float, eps_offload: float) -> PolicySolution:
    """Pre-braking probability, optimal offloading and threshold for one vehicle."""
    eta = prebrake_probability(window)
    deadline = effective_deadline(window, eta)
    rho, feasible = offload_probability_for_deadline(tau_local, tau_offload, deadline)
    delay, error = expected_outcomes(rho, tau_local, tau_offload, eps_local, eps_offload)
    return PolicySolution(
        eta=eta,
        rho_star=rho,
        eps_threshold=optimal_threshold(rho),
        effective_deadline=deadline,
        expected_delay=delay,
        expected_error=error,
        feasible=feasible,
    )
