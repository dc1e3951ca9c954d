"""Motor-babbling data collection for the no-contact and contact sets.

The no-contact set samples one settled frame per setpoint hold; the
contact set logs the running time series over a grid of (plate
distance x temperature limit) cells.  Default babble bounds reach past
the bench-typical 10-40 degree window because the synthetic plant maps
that window entirely onto the cold operating branch; wider setpoints
(including a few unreachable ones that ride the thermal limit) are what
exercise the hot branch here.  All bounds are plan fields, so the
narrow window remains one config edit away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np

from . import fileio
from .control import BabblerParams, BabblerState, random_setpoint_schedule, babble_step
from .plant import PlantParams, Scenario, SampleFrame, initial_state, step

PLATE_GRID_MM = (20.0, 30.0, 40.0, 50.0)
TMAX_GRID_C = (85.0, 100.0, 115.0, 130.0)


@dataclass(frozen=True)
class NoContactPlan:
    """600 settled holds by default: 60 trials of 10 random setpoints."""

    trials: int = 60
    setpoints_per_trial: int = 10
    hold_ticks: int = 150
    theta_lo: float = math.radians(10.0)
    theta_hi: float = math.radians(70.0)
    t_max: float = 135.0
    gamma: float = 0.9
    seed: int = 0

    @property
    def n_rows(self) -> int:
        return self.trials * self.setpoints_per_trial


@dataclass(frozen=True)
class ContactPlan:
    """Grid of (plate distance x temperature limit) babbling cells."""

    plate_grid: tuple[float, ...] = PLATE_GRID_MM
    tmax_grid: tuple[float, ...] = TMAX_GRID_C
    setpoints_per_cell: int = 10
    hold_ticks: int = 150
    theta_lo: float = math.radians(10.0)
    theta_hi: float = math.radians(70.0)
    gamma: float = 0.9
    seed: int = 0
    log_every: int = 1        # 1 = full scale (24k rows), 10 = CI scale (2.4k)

    @property
    def cells(self) -> list[tuple[float, float]]:
        return [(d, t) for d in self.plate_grid for t in self.tmax_grid]


def ci_scale(plan: ContactPlan) -> ContactPlan:
    """Same simulated physics, every 10th frame logged."""
    return ContactPlan(**{**asdict(plan), "log_every": 10})


@dataclass
class BabbleLog:
    frames: list[SampleFrame] = field(default_factory=list)
    times: list[float] = field(default_factory=list)
    max_true_t: float = float("-inf")


def run_babble(
    scenario: Scenario,
    params: PlantParams,
    babbler: BabblerParams,
    sample_mode: str = "every",
    log_every: int = 1,
) -> BabbleLog:
    """Drive the plant with PI babbling over the scenario's schedule.

    sample_mode 'every' logs each log_every-th frame; 'hold_end' logs
    exactly one frame per setpoint hold (the last tick of the hold).
    """
    if sample_mode not in ("every", "hold_end"):
        raise ValueError("sample_mode must be 'every' or 'hold_end'")
    state = initial_state(params)
    bab = BabblerState(babbler, list(scenario.setpoint_schedule))
    rng = np.random.default_rng(scenario.seed)
    log = BabbleLog()
    theta_meas = 0.0
    tick = 0
    while not bab.exhausted and tick < scenario.duration:
        pos_before = bab.position
        u_nom = babble_step(theta_meas, bab, scenario.tick)
        state, frame = step(state, u_nom, scenario, params, rng)
        theta_meas = frame.theta_rad
        log.max_true_t = max(log.max_true_t, state.T)
        hold_ended = bab.position != pos_before
        if (sample_mode == "every" and tick % log_every == log_every - 1) or (
            sample_mode == "hold_end" and hold_ended
        ):
            log.frames.append(frame)
            log.times.append((tick + 1) * scenario.tick)
        tick += 1
    if log.max_true_t > scenario.t_max_limit + 1e-6:
        raise RuntimeError(
            f"plant exceeded the supervised limit ({log.max_true_t:.3f} > "
            f"{scenario.t_max_limit}); supervisor misconfigured"
        )
    return log


def _frames_to_dataset(
    meta: dict[str, str], frames: list[SampleFrame], times: list[float]
) -> fileio.Dataset:
    rows = [
        (
            k,
            times[k],
            f.v_volts,
            f.i_amps,
            f.r_ohm,
            f.t_degc,
            f.theta_rad,
            f.f_ext_n,
            1.0 if f.contact else 0.0,
        )
        for k, f in enumerate(frames)
    ]
    return fileio.dataset_from_rows(meta, rows)


def _base_meta(params: PlantParams, seed: int, tick: float, t_max: float, plan_desc) -> dict:
    return {
        "seed": str(seed),
        "tick_s": repr(tick),
        "scenario_hash": fileio.content_hash(plan_desc),
        "sigma_t": repr(params.sigma_t),
        "sigma_r": repr(params.sigma_r),
        "sigma_theta": repr(params.sigma_theta),
        "ambient_degc": repr(params.ambient),
        "t_max_degc": repr(t_max),
    }


def generate_nocontact_dataset(
    plan: NoContactPlan, params: PlantParams | None = None, babbler: BabblerParams | None = None
) -> fileio.Dataset:
    """The free-motion set: one settled row per hold, no plate."""
    params = params or PlantParams()
    babbler = babbler or BabblerParams()
    schedule = []
    for trial in range(plan.trials):
        schedule.extend(
            random_setpoint_schedule(
                plan.setpoints_per_trial,
                plan.theta_lo,
                plan.theta_hi,
                plan.hold_ticks,
                seed=plan.seed * 100003 + trial,
            )
        )
    scenario = Scenario(
        duration=len(schedule) * plan.hold_ticks + 1,
        setpoint_schedule=tuple(schedule),
        seed=plan.seed,
        t_max_limit=plan.t_max,
        gamma=plan.gamma,
    )
    log = run_babble(scenario, params, babbler, sample_mode="hold_end")
    meta = _base_meta(params, plan.seed, scenario.tick, plan.t_max, asdict(plan))
    meta["kind"] = "nocontact"
    ds = _frames_to_dataset(meta, log.frames, log.times)
    fileio.validate_dataset(ds)
    return ds


def generate_contact_dataset(
    plan: ContactPlan, params: PlantParams | None = None, babbler: BabblerParams | None = None
) -> fileio.Dataset:
    """The contact set over the full (plate x T_max) grid.

    Cells are simulated independently (and could run in parallel); rows
    are concatenated in (cell index, tick) order with a global running
    index k, so the output is deterministic regardless of scheduling.
    """
    params = params or PlantParams()
    babbler = babbler or BabblerParams()
    cells = plan.cells
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(plan.seed).spawn(len(cells))]
    frames: list[SampleFrame] = []
    times: list[float] = []
    cell_spans = []
    t_offset = 0.0
    for (plate, t_max), cell_seed in zip(cells, seeds):
        schedule = random_setpoint_schedule(
            plan.setpoints_per_cell, plan.theta_lo, plan.theta_hi, plan.hold_ticks, seed=cell_seed
        )
        scenario = Scenario(
            duration=plan.setpoints_per_cell * plan.hold_ticks,
            setpoint_schedule=tuple(schedule),
            seed=cell_seed,
            plate_dist=plate,
            t_max_limit=t_max,
            gamma=plan.gamma,
        )
        log = run_babble(scenario, params, babbler, sample_mode="every", log_every=plan.log_every)
        cell_spans.append(
            {"plate_mm": plate, "t_max_degc": t_max, "rows": [len(frames), len(frames) + len(log.frames)]}
        )
        frames.extend(log.frames)
        times.extend(t + t_offset for t in log.times)
        t_offset += scenario.duration * scenario.tick
    meta = _base_meta(params, plan.seed, 0.1, max(plan.tmax_grid), asdict(plan))
    meta["kind"] = "contact"
    meta["log_every"] = str(plan.log_every)
    meta["cells"] = fileio.content_hash(cell_spans)
    ds = _frames_to_dataset(meta, frames, times)
    fileio.validate_dataset(ds)
    return ds


def generate_contact_cell(
    plate_mm: float,
    t_max: float,
    plan: ContactPlan | None = None,
    params: PlantParams | None = None,
    babbler: BabblerParams | None = None,
) -> fileio.Dataset:
    """A single grid cell, for quick runs and determinism checks."""
    plan = plan or ContactPlan()
    single = ContactPlan(**{**asdict(plan), "plate_grid": (plate_mm,), "tmax_grid": (t_max,)})
    return generate_contact_dataset(single, params, babbler)
