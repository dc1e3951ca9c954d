"""Phenomenological SMA soft-limb plant.

Stands in for the physical limb: affine thermal dynamics driven by the
supply voltage, cosine-kinetics phase transformation with reversal-point
minor loops, muscle force proportional to austenite fraction, beam
statics against an optional contact plate (or a human tip push), a
phase- and temperature-dependent electrical resistance, and noisy
measurement of (R, T, theta).

None of the constants below come from hardware; they are desk-scale
stand-ins chosen so the downstream pipeline sees the same qualitative
structure (hysteresis below the transformation band, resistance
saturation above it, sub-newton contact forces).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .beam import LimbParams, contact_statics, tip_statics_with_push
from .control import SafetyParams, apply_supervisor, thermal_step

HEATING = "heating"
COOLING = "cooling"

AMBIENT_C = 22.0


def default_limb() -> LimbParams:
    """Simulated limb: prototype geometry with a 30x stiffer elastomer.

    The softer bench material (E = 1.79 N/mm^2) makes the tip so
    compliant that sub-newton pushes flatten the limb completely and
    become unobservable; scaling E keeps every formula intact while
    putting 0..1.5 N contact forces inside the observable range.
    """
    return LimbParams(elastic_modulus=53.7, width=60.0, thickness=3.5, length=105.0, moment_arm=3.5)


@dataclass(frozen=True)
class PlantParams:
    """All simulator constants; every field is a stand-in, not hardware."""

    # affine thermal model (a1 dimensionless, a2 degC/V, a3 degC)
    a1: float = 0.99
    a2: float = 0.153
    a3: float = 0.22
    # transformation band, degC (M_f < M_s <= A_s < A_f)
    m_f: float = 55.0
    m_s: float = 75.0
    a_s: float = 80.0
    a_f: float = 95.0
    # electrical resistance, ohm: martensite/austenite endpoints plus a
    # temperature slope that drags hot-range R back through cold-range
    # values (the "resistance stops being informative" regime)
    r_mart: float = 2.2
    r_aust: float = 1.5
    beta_t: float = 0.014
    # muscle force at full austenite, N
    f_max: float = 90.0
    limb: LimbParams = field(default_factory=default_limb)
    # measurement noise (1 sigma)
    sigma_t: float = 0.5
    sigma_r: float = 0.01
    sigma_theta: float = math.radians(0.2)
    # sense-current floor, A: keeps R = V/i well defined at all times
    i_min: float = 0.2
    ambient: float = AMBIENT_C

    def __post_init__(self):
        if not 0.0 < self.a1 < 1.0:
            raise ValueError("a1 must be in (0, 1) for a stable thermal pole")
        if self.a2 <= 0.0:
            raise ValueError("a2 must be > 0")
        if not self.m_f < self.m_s <= self.a_s < self.a_f:
            raise ValueError("transition temps must satisfy M_f < M_s <= A_s < A_f")
        if not self.r_mart > self.r_aust > 0.0:
            raise ValueError("resistances must satisfy R_M > R_A > 0")


@dataclass(frozen=True)
class PlantState:
    """Full simulator state after a tick."""

    T: float
    xi: float
    xi_rev: float          # fraction at the last heating/cooling reversal
    t_rev: float           # temperature at that reversal (minor-loop anchor)
    direction: str
    theta: float
    delta: float
    f_sma: float
    f_ext: float
    r_true: float
    in_contact: bool


@dataclass(frozen=True)
class SampleFrame:
    """One timestep of logged signals."""

    v_volts: float
    i_amps: float
    r_ohm: float
    t_degc: float
    theta_rad: float
    f_ext_n: float
    contact: bool


@dataclass(frozen=True)
class Scenario:
    """One simulation run: pacing, constraint geometry, and control limits."""

    duration: int
    setpoint_schedule: tuple[tuple[float, int], ...]
    seed: int
    tick: float = 0.1
    plate_dist: float | None = None
    t_max_limit: float = 135.0
    gamma: float = 0.9

    def __post_init__(self):
        if self.plate_dist is not None and self.plate_dist <= 0.0:
            raise ValueError("plate_dist must be > 0 when present")
        for sp, _hold in self.setpoint_schedule:
            if not 0.0 <= sp < math.pi / 2.0:
                raise ValueError("setpoints must lie in [0, pi/2)")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must be in (0, 1]")


def initial_state(params: PlantParams) -> PlantState:
    return PlantState(
        T=params.ambient,
        xi=0.0,
        xi_rev=0.0,
        t_rev=params.ambient,
        direction=HEATING,
        theta=0.0,
        delta=0.0,
        f_sma=0.0,
        f_ext=0.0,
        r_true=resistance_model(params.ambient, 0.0, params),
        in_contact=False,
    )


def phase_update(state: PlantState, t_new: float, params: PlantParams) -> PlantState:
    """Advance the austenite fraction to temperature t_new.

    Cosine transformation kinetics with minor-loop support: each
    heating/cooling reversal records (xi, T) and the transformation
    curve is re-anchored there, so minor loops leave continuously from
    the reversal point and major loops reduce to the textbook curves
    anchored at A_s / M_s.
    """
    xi, xi_rev, t_rev, direction = state.xi, state.xi_rev, state.t_rev, state.direction
    dT = t_new - state.T
    if dT > 0.0:
        if direction == COOLING:
            xi_rev, t_rev, direction = xi, state.T, HEATING
        start = min(max(params.a_s, t_rev), params.a_f)
        if t_new >= params.a_f:
            cand = 1.0
        elif t_new <= start or start >= params.a_f:
            cand = xi_rev
        else:
            cand = xi_rev + (1.0 - xi_rev) / 2.0 * (
                1.0 + math.cos(math.pi * (params.a_f - t_new) / (params.a_f - start))
            )
        xi = min(1.0, max(xi, cand))
    elif dT < 0.0:
        if direction == HEATING:
            xi_rev, t_rev, direction = xi, state.T, COOLING
        start = max(min(params.m_s, t_rev), params.m_f)
        if t_new <= params.m_f:
            cand = 0.0
        elif t_new >= start or start <= params.m_f:
            cand = xi_rev
        else:
            cand = xi_rev / 2.0 * (
                1.0 + math.cos(math.pi * (start - t_new) / (start - params.m_f))
            )
        xi = max(0.0, min(xi, cand))
    return replace(state, T=t_new, xi=xi, xi_rev=xi_rev, t_rev=t_rev, direction=direction)


def resistance_model(T: float, xi: float, params: PlantParams) -> float:
    """Phase mixture resistance with a linear temperature slope, ohm."""
    if not 0.0 <= xi <= 1.0:
        raise ValueError("xi must be in [0, 1]")
    return (1.0 - xi) * params.r_mart + xi * params.r_aust + params.beta_t * (T - params.ambient)


def safety_for(scenario: Scenario, params: PlantParams) -> SafetyParams:
    return SafetyParams(
        a1=params.a1, a2=params.a2, a3=params.a3,
        t_max=scenario.t_max_limit, gamma=scenario.gamma,
    )


def step(
    state: PlantState,
    u_nom: float,
    scenario: Scenario,
    params: PlantParams,
    rng: np.random.Generator,
    human_force: float = 0.0,
) -> tuple[PlantState, SampleFrame]:
    """Advance the plant one tick under nominal input u_nom.

    Update order: supervisor saturation (with the sense-current floor),
    thermal step, phase kinetics, muscle force, beam statics against
    the plate or the human push, resistance, then noisy measurement.
    The human push channel is only meaningful without a plate
    (multi-contact is out of scope); ground-truth external force is the
    plate reaction or the commanded push.
    """
    u = apply_supervisor(u_nom, state.T, safety_for(scenario, params))
    u = max(u, params.i_min * state.r_true)

    t_new = thermal_step(state.T, u, params.a1, params.a2, params.a3)
    state = phase_update(state, t_new, params)
    f_sma = params.f_max * state.xi

    if human_force > 0.0:
        theta, delta = tip_statics_with_push(f_sma, human_force, params.limb)
        f_ext = human_force
    else:
        theta, delta, f_ext = contact_statics(f_sma, scenario.plate_dist, params.limb)

    r_true = resistance_model(state.T, state.xi, params)
    state = replace(
        state,
        theta=theta, delta=delta, f_sma=f_sma, f_ext=f_ext,
        r_true=r_true, in_contact=f_ext > 0.0,
    )

    v = u
    i = u / r_true
    r_meas = v / i + rng.normal(0.0, params.sigma_r)
    t_meas = state.T + rng.normal(0.0, params.sigma_t)
    theta_meas = theta + rng.normal(0.0, params.sigma_theta)
    theta_meas = min(max(theta_meas, 0.0), math.pi / 2.0)

    frame = SampleFrame(
        v_volts=v, i_amps=i, r_ohm=r_meas, t_degc=t_meas,
        theta_rad=theta_meas, f_ext_n=f_ext, contact=state.in_contact,
    )
    return state, frame
