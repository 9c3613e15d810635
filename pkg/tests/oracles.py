"""Independent reference computations used to check the closed forms."""

import numpy as np


def position(t, v0, a):
    """Distance travelled under constant acceleration, stopping at v = 0."""
    t_stop = v0 / -a
    t = np.minimum(t, t_stop)
    return v0 * t + 0.5 * a * t * t


def reach_time_bisect(distance, v0, a, iters=200):
    """Root of position(t) = distance by bisection; nan if never reached."""
    distance, v0, a = np.broadcast_arrays(*map(np.asarray, (distance, v0, a)))
    lo = np.zeros(distance.shape)
    hi = v0 / -a
    reached = position(hi, v0, a) >= distance
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        short = position(mid, v0, a) < distance
        lo = np.where(short, mid, lo)
        hi = np.where(short, hi, mid)
    return np.where(reached, 0.5 * (lo + hi), np.nan)


def latest_identification_bisect(v0, a, d_vz, t_clear, iters=200):
    """Latest time to start braking and still hold d_vz until t_clear.

    Position at t_clear after cruising until x and braking afterwards is
    x*v0 + v0*(t_clear - x) + a*(t_clear - x)**2 / 2; this is increasing in x
    on (-inf, t_clear], so bisect over a wide bracket.
    """
    def pos(x):
        r = t_clear - x
        return x * v0 + v0 * r + 0.5 * a * r * r

    lo = np.full(np.shape(v0), -1e4)
    hi = np.broadcast_to(np.asarray(t_clear, dtype=float), np.shape(v0)).copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = pos(mid) < d_vz
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def best_rho_grid(tau_l, tau_o, theta_ub, theta_b, eps_l, eps_o, step=1e-5):
    """Error-minimizing rho on a grid, subject to the expected-delay bound.

    Returns (rho, feasible); rho = 0 with feasible False when no grid point
    meets the bound.
    """
    grid = np.linspace(0.0, 1.0, int(round(1 / step)) + 1)
    eta = np.exp(-theta_ub)
    deadline = theta_ub if eta == 0 else (1 - eta) * theta_ub + eta * theta_b
    delay = (1 - grid) * tau_l + grid * tau_o
    error = (1 - grid) * eps_l + grid * eps_o
    ok = delay <= deadline
    if not ok.any():
        return 0.0, False
    idx = np.flatnonzero(ok)
    return float(grid[idx[np.argmin(error[idx])]]), True
