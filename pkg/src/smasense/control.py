"""Supervisory temperature saturation and the motor-babbling PI driver.

The SMA temperature obeys the affine model T' = a1*T + a2*u + a3.  The
supervisor clips any nominal input to u = min(u_nom, gamma*u*), where
u*(T) = (T_adj - a1*T - a3)/a2 is the input that lands exactly on the
discounted limit next step.  That keeps T(k) <= T_max for all k from
any T(0) <= T_max, for any nominal input sequence.

Data collection drives the limb with PI feedback on random bend-angle
setpoints ("motor babbling"); the supervisor sits between the babbler
and the plant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def adjusted_max_temp(t_max: float, gamma: float, a1: float, a3: float) -> float:
    """Discounted temperature target T_adj; equals t_max at gamma = 1."""
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must be in (0, 1]")
    r = (1.0 - gamma) / gamma
    return (1.0 / gamma - a1 * r) * t_max - a3 * r


@dataclass(frozen=True)
class SafetyParams:
    """Thermal model coefficients plus the supervised limit."""

    a1: float
    a2: float
    a3: float
    t_max: float
    gamma: float = 0.9
    t_max_adj: float = field(init=False)

    def __post_init__(self):
        if self.a2 <= 0.0:
            raise ValueError("a2 must be > 0")
        object.__setattr__(
            self, "t_max_adj", adjusted_max_temp(self.t_max, self.gamma, self.a1, self.a3)
        )


def thermal_step(T: float, u: float, a1: float, a2: float, a3: float) -> float:
    """One tick of the affine thermal model."""
    return a1 * T + a2 * u + a3


def saturation_limit(T: float, p: SafetyParams) -> float:
    """Dynamic input ceiling u*(T); negative once T is past the limit."""
    return (p.t_max_adj - p.a1 * T - p.a3) / p.a2


def apply_supervisor(u_nom: float, T: float, p: SafetyParams) -> float:
    """Saturated input max(0, min(u_nom, gamma*u*)).

    The min() can go negative when the plant is hot; a Joule heater
    cannot cool, so the result is clipped at zero (which only lowers T
    and cannot break invariance).
    """
    if u_nom < 0.0:
        raise ValueError("u_nom must be >= 0")
    return max(0.0, min(u_nom, p.gamma * saturation_limit(T, p)))


@dataclass
class BabblerParams:
    """PI gains and input bounds, calibrated against the default plant."""

    k_p: float = 40.0       # V per rad of angle error
    k_i: float = 10.0       # V per rad*s of accumulated error
    u_floor: float = 0.4    # keeps the sense current alive at zero error
    u_ceil: float = 12.0    # power-supply ceiling


@dataclass
class BabblerState:
    """Setpoint tracking state; one owner, stepped once per tick."""

    params: BabblerParams
    schedule: list[tuple[float, int]]   # (setpoint rad, hold ticks)
    position: int = 0
    ticks_into_hold: int = 0
    integral: float = 0.0               # rad*s, clamped for anti-windup

    @property
    def setpoint(self) -> float:
        return self.schedule[min(self.position, len(self.schedule) - 1)][0]

    @property
    def exhausted(self) -> bool:
        return self.position >= len(self.schedule)


def babble_step(theta_meas: float, state: BabblerState, dt: float) -> float:
    """PI control toward the current setpoint; advances the schedule.

    Returns the nominal input clamped to [u_floor, u_ceil].  The
    integral accumulator is clamped to [0, u_ceil/k_i] so persistent
    saturation (e.g. an unreachable setpoint) cannot wind up.
    """
    p = state.params
    err = state.setpoint - theta_meas
    state.integral = min(max(state.integral + err * dt, 0.0), p.u_ceil / p.k_i)
    u_nom = p.k_p * err + p.k_i * state.integral
    u_nom = min(max(u_nom, p.u_floor), p.u_ceil)

    state.ticks_into_hold += 1
    if not state.exhausted and state.ticks_into_hold >= state.schedule[state.position][1]:
        state.position += 1
        state.ticks_into_hold = 0
    return u_nom


def random_setpoint_schedule(
    n: int, theta_lo: float, theta_hi: float, hold: int, seed: int
) -> list[tuple[float, int]]:
    """n uniform setpoints in [theta_lo, theta_hi] rad, each held `hold` ticks."""
    if theta_lo >= theta_hi:
        raise ValueError("theta_lo must be < theta_hi")
    rng = np.random.default_rng(seed)
    return [(float(t), hold) for t in rng.uniform(theta_lo, theta_hi, size=n)]
