"""Pre-crash geometry for a vehicle going straight and a pedestrian crossing.

All times are measured from the instant the pedestrian enters the camera
view; distances in meters, speeds in m/s, accelerations in m/s^2 (braking
is a negative acceleration).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class Reachability(str, Enum):
    REACHABLE = "Reachable"
    STOPS_BEFORE_ZONE = "StopsBeforeZone"


class Avoidance(str, Enum):
    CONDITION_A = "ConditionA"  # vehicle arrives after pedestrian clears
    CONDITION_B = "ConditionB"  # vehicle clears before pedestrian arrives
    COLLISION = "Collision"


DEFAULT_VEHICLE_LENGTH = 4.5


@dataclass(frozen=True)
class ScenarioGeometry:
    d_vz: float
    d_pz: float
    l_p: float
    w_v: float
    v_p: float
    v_v: float
    a_v: float
    l_v: float = DEFAULT_VEHICLE_LENGTH

    def __post_init__(self):
        checks = {
            "d_vz": self.d_vz > 0,
            "d_pz": self.d_pz >= 0,
            "l_p": self.l_p > 0,
            "w_v": self.w_v > 0,
            "v_p": self.v_p > 0,
            "v_v": self.v_v > 0,
            "a_v": self.a_v < 0,
            "l_v": self.l_v >= 0,
        }
        bad = [name for name, ok in checks.items() if not ok]
        if bad:
            raise ValueError(f"invalid geometry field(s): {', '.join(bad)}")


@dataclass(frozen=True)
class ToleranceWindow:
    """Maximum tolerable identification delays with and without pre-braking.

    ``theta_ub`` is clamped to ``[0, theta_b]``; ``theta_ub_raw`` keeps the
    closed-form root, which goes negative when even an instant identification
    cannot avoid the crash without braking. ``theta_b`` is ``inf`` when
    braking alone stops the vehicle short of the zone.
    """

    theta_b: float
    theta_ub: float
    theta_ub_raw: float
    reachability: Reachability

    @property
    def t_delta(self) -> float:
        return self.theta_b - self.theta_ub


def pedestrian_reach_time(geom: ScenarioGeometry) -> float:
    return geom.d_pz / geom.v_p


def pedestrian_clear_time(geom: ScenarioGeometry) -> float:
    return (geom.d_pz + geom.l_p + geom.w_v) / geom.v_p


def _time_to_travel(distance: float, v0: float, a: float) -> tuple[float, Reachability]:
    disc = v0 * v0 + 2.0 * a * distance
    if disc < 0:
        return math.inf, Reachability.STOPS_BEFORE_ZONE
    if disc == 0:
        return v0 / -a, Reachability.REACHABLE
    return (-v0 + math.sqrt(disc)) / a, Reachability.REACHABLE


def vehicle_reach_time_braking(geom: ScenarioGeometry) -> tuple[float, Reachability]:
    """Time for the vehicle, braking from now, to reach the collision zone."""
    return _time_to_travel(geom.d_vz, geom.v_v, geom.a_v)


def max_delay_without_prebrake_raw(geom: ScenarioGeometry) -> float:
    """Closed-form latest identification time when the vehicle holds its speed.

    Solves ``t*V + V*(tpc - t) + a*(tpc - t)**2 / 2 = d_vz`` for the root
    that precedes the pedestrian clear time ``tpc``. If a constant-speed
    vehicle cannot reach the zone before ``tpc`` there is no deadline
    pressure and ``tpc`` itself is returned. The root treats braking as
    lasting until ``tpc`` even if the vehicle would have stopped by then;
    :func:`latest_braking_start` drops that assumption.
    """
    tpc = pedestrian_clear_time(geom)
    slack = geom.v_v * tpc - geom.d_vz
    if slack < 0:
        return tpc
    return tpc - math.sqrt(2.0 * slack / -geom.a_v)


def closed_form_is_physical(geom: ScenarioGeometry) -> bool:
    """True when the vehicle is still moving at ``tpc`` at the closed-form root."""
    tpc = pedestrian_clear_time(geom)
    return tpc - max_delay_without_prebrake_raw(geom) <= geom.v_v / -geom.a_v


def latest_braking_start(geom: ScenarioGeometry) -> float:
    """Latest braking start that keeps the vehicle out of the zone until ``tpc``.

    Same as the closed form while the vehicle is still moving at ``tpc``;
    otherwise the vehicle halts first and the limit is the last instant from
    which its stopping distance still fits before the zone. May be negative.
    """
    if closed_form_is_physical(geom):
        return max_delay_without_prebrake_raw(geom)
    stopping = geom.v_v**2 / (-2.0 * geom.a_v)
    return (geom.d_vz - stopping) / geom.v_v


def max_delay_without_prebrake(geom: ScenarioGeometry) -> float:
    """Closed-form root clamped to ``[0, theta_b]``.

    The upper clamp only binds where the closed form is unphysical: braking
    later can never leave more slack than braking now.
    """
    theta_b, _ = vehicle_reach_time_braking(geom)
    return min(max(0.0, max_delay_without_prebrake_raw(geom)), theta_b)


def time_gain(geom: ScenarioGeometry) -> ToleranceWindow:
    theta_b, reach = vehicle_reach_time_braking(geom)
    return ToleranceWindow(
        theta_b=theta_b,
        theta_ub=max_delay_without_prebrake(geom),
        theta_ub_raw=max_delay_without_prebrake_raw(geom),
        reachability=reach,
    )


def vehicle_clear_time(geom: ScenarioGeometry, braking: bool) -> float:
    """Time for the vehicle's rear to leave the zone (``inf`` if it stops first)."""
    distance = geom.d_vz + geom.l_p + geom.l_v
    if not braking:
        return distance / geom.v_v
    return _time_to_travel(distance, geom.v_v, geom.a_v)[0]


def vehicle_reach_time(geom: ScenarioGeometry, braking: bool) -> float:
    if not braking:
        return geom.d_vz / geom.v_v
    return vehicle_reach_time_braking(geom)[0]


def classify_avoidance(geom: ScenarioGeometry, t_v_reach: float, t_v_clear: float) -> Avoidance:
    if t_v_clear < t_v_reach:
        raise ValueError("vehicle clear time precedes reach time")
    if t_v_reach >= pedestrian_clear_time(geom):
        return Avoidance.CONDITION_A
    if t_v_clear <= pedestrian_reach_time(geom):
        return Avoidance.CONDITION_B
    return Avoidance.COLLISION
