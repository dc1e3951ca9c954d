import math

import numpy as np
import pytest
from scipy.optimize import brentq

from smasense import beam

# prototype constants: E=1.79 N/mm^2, b=60, h=3.5, L=105, w=3.5
PROTO = beam.LimbParams(1.79, 60.0, 3.5, 105.0, 3.5)


class TestZeta:
    def test_prototype_value(self):
        z = beam.zeta_from_geometry(1.79, 60.0, 3.5, 105.0, 3.5)
        assert z == pytest.approx(4.1767, rel=1e-3)

    def test_linear_in_width(self):
        z1 = beam.zeta_from_geometry(1.79, 60.0, 3.5, 105.0, 3.5)
        z2 = beam.zeta_from_geometry(1.79, 120.0, 3.5, 105.0, 3.5)
        assert z2 == pytest.approx(2.0 * z1, rel=1e-12)

    def test_hand_case(self):
        # 4*1*(12*1/12)/(10*1) = 0.4
        assert beam.zeta_from_geometry(1.0, 12.0, 1.0, 10.0, 1.0) == pytest.approx(0.4)

    @pytest.mark.parametrize("bad", [(-1, 60, 3.5, 105, 3.5), (1.79, 0, 3.5, 105, 3.5),
                                     (1.79, 60, 3.5, -105, 3.5)])
    def test_nonpositive_rejected(self, bad):
        with pytest.raises(ValueError):
            beam.zeta_from_geometry(*bad)

    def test_limb_derived_fields(self):
        assert PROTO.area_moment == pytest.approx(60 * 3.5**3 / 12)
        assert PROTO.zeta == pytest.approx(4.176667, rel=1e-6)


class TestTipDisplacement:
    def test_zero_angle_limit(self):
        assert beam.tip_displacement(0.0, 105.0) == 0.0

    def test_15_degrees(self):
        assert beam.tip_displacement(math.radians(15), 105.0) == pytest.approx(26.87, abs=0.01)

    def test_right_angle(self):
        assert beam.tip_displacement(math.pi / 2, 105.0) == pytest.approx(105 / (math.pi / 2), rel=1e-12)

    @pytest.mark.parametrize("theta", [-0.01, math.pi / 2 + 0.01])
    def test_domain(self, theta):
        with pytest.raises(ValueError):
            beam.tip_displacement(theta, 105.0)


class TestSmaForce:
    def test_15_degrees_matches_report(self):
        f = beam.sma_force_from_angle(math.radians(15), PROTO.zeta)
        assert f == pytest.approx(1.069, abs=0.001)       # closed form
        assert abs(f - 1.06) / 1.06 < 0.10                # bench-reported value

    def test_zero(self):
        assert beam.sma_force_from_angle(0.0, PROTO.zeta) == 0.0

    def test_30_degrees(self):
        f = beam.sma_force_from_angle(math.radians(30), PROTO.zeta)
        assert f == pytest.approx(1.995, abs=0.002)

    def test_monotone_on_rising_branch(self):
        # strictly increasing up to the peak of sin^2(t)/t (tan t = 2t);
        # past the peak the closed form genuinely decreases, so the
        # invertible domain ends there.
        rng = np.random.default_rng(0)
        thetas = np.sort(rng.uniform(0.0, beam.PEAK_ANGLE, 200))
        forces = [beam.sma_force_from_angle(t, PROTO.zeta) for t in thetas]
        assert np.all(np.diff(forces) > 0)

    def test_peak_is_interior(self):
        assert beam.sma_force_from_angle(beam.PEAK_ANGLE, 1.0) > beam.sma_force_from_angle(
            math.pi / 2, 1.0
        )


class TestAngleFromForce:
    def test_zero(self):
        assert beam.angle_from_force(0.0, PROTO.zeta) == pytest.approx(0.0, abs=1e-9)

    def test_round_trip(self):
        rng = np.random.default_rng(1)
        for theta in rng.uniform(0.0, beam.PEAK_ANGLE, 100):
            f = beam.sma_force_from_angle(theta, PROTO.zeta)
            assert beam.angle_from_force(f, PROTO.zeta) == pytest.approx(theta, abs=1e-9)

    def test_inverse_of_prototype_force(self):
        theta = beam.angle_from_force(1.069, PROTO.zeta)
        assert math.degrees(theta) == pytest.approx(15.0, abs=0.01)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            beam.angle_from_force(PROTO.max_sma_force * 1.01, PROTO.zeta)
        with pytest.raises(ValueError):
            beam.angle_from_force(-0.1, PROTO.zeta)


class TestContactStatics:
    def test_free_when_short_of_plate(self):
        theta, delta, f_ext = beam.contact_statics(0.2, 50.0, PROTO)
        assert f_ext == 0.0
        assert delta == pytest.approx((105 / PROTO.zeta) * 0.2, rel=1e-12)

    def test_boundary_continuity(self):
        # force whose free displacement lands exactly on the plate
        d = 20.0
        f = d * PROTO.zeta / PROTO.length
        theta, delta, f_ext = beam.contact_statics(f, d, PROTO)
        assert f_ext == 0.0
        assert delta == pytest.approx(d, rel=1e-12)
        # a hair beyond: contact force appears continuously
        _, delta2, f2 = beam.contact_statics(f * (1 + 1e-9), d, PROTO)
        assert delta2 == d and 0 < f2 < 1e-9

    def test_prototype_example(self):
        # delta_free = (105/4.1767)*2.0 = 50.28 mm beyond a 20 mm plate
        theta, delta, f_ext = beam.contact_statics(2.0, 20.0, PROTO)
        assert delta == pytest.approx(20.0)
        assert f_ext == pytest.approx(0.0301, abs=0.0002)

    def test_against_equilibrium_rootfind(self):
        # independent resolution: solve delta_free - c_F*F - d = 0 for F
        for f_sma, d in [(2.0, 20.0), (1.5, 25.0), (3.0, 40.0)]:
            delta_free = (PROTO.length / PROTO.zeta) * f_sma
            if delta_free <= d:
                continue
            f_oracle = brentq(
                lambda f: delta_free - PROTO.tip_compliance * f - d, 0.0, 10.0, xtol=1e-12
            )
            _, _, f_ext = beam.contact_statics(f_sma, d, PROTO)
            assert f_ext == pytest.approx(f_oracle, rel=1e-9)

    def test_plate_beyond_reach(self):
        # max free displacement is ~0.725*L < L, so a plate past it never engages
        theta, delta, f_ext = beam.contact_statics(PROTO.max_sma_force, 106.0, PROTO)
        assert f_ext == 0.0

    def test_negative_force_rejected(self):
        with pytest.raises(ValueError):
            beam.contact_statics(-0.5, 20.0, PROTO)

    def test_monotone_in_force(self):
        forces = np.linspace(0.0, 3.0, 50)
        f_ext = [beam.contact_statics(f, 20.0, PROTO)[2] for f in forces]
        assert np.all(np.diff(f_ext) >= 0)
        assert all(f >= 0 for f in f_ext)

    def test_free_displacement_linear_in_force(self):
        for f in (0.1, 0.7, 2.3):
            theta, delta, _ = beam.contact_statics(f, None, PROTO)
            assert delta == pytest.approx((PROTO.length / PROTO.zeta) * f, rel=1e-12)
            assert delta == pytest.approx(beam.tip_displacement(theta, PROTO.length), abs=1e-7)


class TestPushStatics:
    def test_push_reduces_displacement(self):
        th0, d0 = beam.tip_statics_with_push(2.0, 0.0, PROTO)
        th1, d1 = beam.tip_statics_with_push(2.0, 0.01, PROTO)
        assert d1 == pytest.approx(d0 - 0.01 * PROTO.tip_compliance)
        assert th1 < th0

    def test_bottoms_out_flat(self):
        theta, delta = beam.tip_statics_with_push(0.5, 5.0, PROTO)
        assert theta == pytest.approx(0.0, abs=1e-9)
        assert delta == 0.0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            beam.tip_statics_with_push(1.0, -0.1, PROTO)
