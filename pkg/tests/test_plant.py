import math
from dataclasses import replace

import numpy as np
import pytest

from smasense import beam
from smasense.plant import (
    PlantParams,
    Scenario,
    initial_state,
    phase_update,
    resistance_model,
    step,
)
from smasense.control import thermal_step


def noiseless(params: PlantParams | None = None) -> PlantParams:
    params = params or PlantParams()
    return replace(params, sigma_t=0.0, sigma_r=0.0, sigma_theta=0.0)


class TestThermal:
    def test_ambient_fixed_point(self):
        # a3 = (1 - a1) * 22 keeps 22 degC the u=0 equilibrium
        assert thermal_step(22.0, 0.0, 0.99, 0.153, 0.22) == pytest.approx(22.0)

    def test_constant_input_limit(self):
        a1, a2, a3, u = 0.99, 0.153, 0.22, 5.0
        T = 22.0
        for _ in range(2000):
            T = thermal_step(T, u, a1, a2, a3)
        assert T == pytest.approx((a2 * u + a3) / (1 - a1), abs=0.1)

    def test_nine_volts_near_160(self):
        p = PlantParams()
        assert (p.a2 * 9.0 + p.a3) / (1 - p.a1) == pytest.approx(160.0, abs=1.0)


class TestPhaseKinetics:
    P = PlantParams()

    def heat_to(self, state, T, n=500):
        for t in np.linspace(state.T, T, n)[1:]:
            state = phase_update(state, t, self.P)
        return state

    def test_full_austenite_above_af(self):
        st = self.heat_to(initial_state(self.P), self.P.a_f + 5)
        assert st.xi == 1.0

    def test_full_martensite_below_mf(self):
        st = self.heat_to(initial_state(self.P), self.P.a_f + 5)
        for t in np.linspace(st.T, self.P.m_f - 5, 500)[1:]:
            st = phase_update(st, t, self.P)
        assert st.xi == 0.0

    def test_heating_midpoint(self):
        st = self.heat_to(initial_state(self.P), (self.P.a_s + self.P.a_f) / 2)
        assert st.xi == pytest.approx(0.5, abs=1e-6)

    def test_no_change_outside_bands(self):
        st = self.heat_to(initial_state(self.P), 70.0)     # below A_s
        assert st.xi == 0.0
        st = self.heat_to(st, 88.0)                        # mid band
        xi_mid = st.xi
        st = phase_update(st, 80.0, self.P)                # cool but above M_s
        assert st.xi == xi_mid

    def test_minor_loop_reversal_is_continuous(self):
        st = self.heat_to(initial_state(self.P), 88.0)
        xi_before = st.xi
        st = phase_update(st, 87.9, self.P)                # reverse: cooling
        st = phase_update(st, 88.1, self.P)                # reverse again: heating
        assert st.xi == pytest.approx(xi_before, abs=5e-3)

    def test_bounded_under_fuzz(self):
        rng = np.random.default_rng(11)
        st = initial_state(self.P)
        for _ in range(100_000):
            st = phase_update(st, float(rng.uniform(10.0, 150.0)), self.P)
            assert 0.0 <= st.xi <= 1.0

    def test_hysteresis_branch_gap(self):
        # symmetric heat-then-cool sweep: the two branches must separate
        temps_up = np.linspace(22.0, 110.0, 400)
        temps_down = temps_up[::-1]
        st = initial_state(self.P)
        up = {}
        for t in temps_up:
            st = phase_update(st, float(t), self.P)
            up[round(float(t), 3)] = st.xi
        down = {}
        for t in temps_down:
            st = phase_update(st, float(t), self.P)
            down[round(float(t), 3)] = st.xi
        gap = max(abs(up[k] - down[k]) for k in up)
        assert gap > 0.2


class TestResistance:
    def test_martensite_at_ambient(self):
        p = PlantParams()
        assert resistance_model(p.ambient, 0.0, p) == p.r_mart

    def test_austenite_at_ambient(self):
        p = PlantParams()
        assert resistance_model(p.ambient, 1.0, p) == p.r_aust

    def test_documented_example(self):
        # R_M=2.2, R_A=1.5, beta_T=0.002, xi=0.5, T=122 -> 1.85 + 0.2
        p = replace(PlantParams(), beta_t=0.002)
        assert resistance_model(122.0, 0.5, p) == pytest.approx(2.05)

    def test_xi_domain(self):
        with pytest.raises(ValueError):
            resistance_model(50.0, 1.2, PlantParams())


def run(scenario, params, u_seq=None, schedule_u=None, human=0.0):
    st = initial_state(params)
    rng = np.random.default_rng(scenario.seed)
    frames, states = [], []
    for k in range(scenario.duration):
        u = u_seq[k] if u_seq is not None else schedule_u(k)
        st, fr = step(st, u, scenario, params, rng, human_force=human)
        frames.append(fr)
        states.append(st)
    return states, frames


class TestStep:
    def test_cold_plant_never_moves(self):
        p = noiseless()
        scen = Scenario(duration=300, setpoint_schedule=((0.0, 300),), seed=0)
        states, frames = run(scen, p, u_seq=np.zeros(300))
        assert all(s.theta == 0.0 for s in states)
        assert all(s.f_ext == 0.0 for s in states)
        assert not any(f.contact for f in frames)

    def test_plate_contact_when_driven(self):
        p = noiseless()
        scen = Scenario(duration=800, setpoint_schedule=((0.0, 800),), seed=0, plate_dist=20.0)
        states, frames = run(scen, p, u_seq=np.full(800, 8.0))
        late = states[-100:]
        assert all(s.in_contact and s.f_ext > 0 for s in late)
        assert all(f.contact for f in frames[-100:])

    def test_supervised_temperature_bound(self):
        p = noiseless()
        scen = Scenario(duration=3000, setpoint_schedule=((0.0, 3000),), seed=1, t_max_limit=135.0)
        rng_u = np.random.default_rng(2)
        states, _ = run(scen, p, u_seq=rng_u.uniform(0, 50, 3000))
        assert max(s.T for s in states) <= 135.0 + 1e-6

    def test_measured_resistance_exact_without_noise(self):
        p = noiseless()
        scen = Scenario(duration=200, setpoint_schedule=((0.0, 200),), seed=0)
        states, frames = run(scen, p, u_seq=np.full(200, 5.0))
        for s, f in zip(states, frames):
            # the logged column IS the V/i quotient, bit for bit
            assert f.r_ohm == f.v_volts / f.i_amps
            assert f.r_ohm == pytest.approx(s.r_true, rel=1e-14)

    def test_seeded_runs_bitwise_identical(self):
        for params in (PlantParams(), noiseless()):
            scen = Scenario(duration=400, setpoint_schedule=((0.0, 400),), seed=5)
            u = np.linspace(0, 9, 400)
            _, fa = run(scen, params, u_seq=u)
            _, fb = run(scen, params, u_seq=u)
            assert fa == fb

    def test_states_satisfy_beam_statics(self):
        p = noiseless()
        scen = Scenario(duration=600, setpoint_schedule=((0.0, 600),), seed=3, plate_dist=30.0)
        states, _ = run(scen, p, u_seq=np.full(600, 7.0))
        for s in states[::25]:
            theta, delta, f_ext = beam.contact_statics(s.f_sma, 30.0, p.limb)
            assert s.theta == pytest.approx(theta, abs=1e-9)
            assert s.delta == pytest.approx(delta, abs=1e-9)
            assert s.f_ext == pytest.approx(f_ext, abs=1e-9)

    def test_contact_onset_continuous(self):
        # hold u just past the contact threshold: the first nonzero
        # contact force must appear at a small value, not a jump
        p = noiseless()
        d = 30.0
        # force that exactly reaches the plate, then +1% of it
        f_touch = d * p.limb.zeta / p.limb.length
        xi_touch = f_touch / p.f_max
        # heating-branch temperature reaching that fraction, then the
        # steady input that parks a hair beyond it
        t_touch = p.a_f - (p.a_f - p.a_s) / math.pi * math.acos(2 * xi_touch - 1)
        u_hold = ((1 - p.a1) * (t_touch + 0.05) - p.a3) / p.a2
        scen = Scenario(duration=4000, setpoint_schedule=((0.0, 4000),), seed=0, plate_dist=d)
        states, _ = run(scen, p, u_seq=np.full(4000, u_hold))
        f_ext = np.array([s.f_ext for s in states])
        first_nonzero = f_ext[f_ext > 0]
        assert first_nonzero.size > 0
        assert first_nonzero[0] < 5e-3
        assert np.max(np.abs(np.diff(f_ext))) < 5e-3

    def test_human_push_channel(self):
        p = noiseless()
        scen = Scenario(duration=600, setpoint_schedule=((0.0, 600),), seed=0)
        states, frames = run(scen, p, u_seq=np.full(600, 6.0), human=0.4)
        assert all(s.f_ext == 0.4 and s.in_contact for s in states)
        # push unloads the tip relative to the free pose
        free_states, _ = run(scen, p, u_seq=np.full(600, 6.0), human=0.0)
        assert states[-1].theta < free_states[-1].theta
