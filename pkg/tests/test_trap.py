import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import constants, integrate, optimize

from rydion.errors import Unstable
from rydion.trap import (
    SR88_PLUS,
    EquilibriumPosition,
    OffsetField,
    SecularFrequencies,
    TrapConfig,
    effective_lamb_dicke,
    electric_field,
    equilibrium_from_offset,
    gradients_from_secular,
    mathieu_q,
    mean_square_field,
    micromotion_factor,
    offset_from_dc_null,
    pseudopotential_energy,
    secular_from_gradients,
)

TWO_PI = 2 * np.pi


def floquet_frequency(cfg, axis):
    """Secular frequency from the monodromy matrix of the full rf equation of motion."""
    e_over_m = cfg.charge / cfg.mass
    period = TWO_PI / cfg.drive_freq
    k = 0 if axis == "x" else 1

    def rhs(t, s):
        r = np.zeros(3)
        r[k] = s[0]
        return [s[1], e_over_m * electric_field(cfg, r, t)[k]]

    cols = []
    for s0 in ([1.0, 0.0], [0.0, 1.0]):
        sol = integrate.solve_ivp(rhs, (0, period), s0, method="DOP853", rtol=1e-12, atol=1e-14 * max(s0[1], 1))
        cols.append(sol.y[:, -1])
    # trace of the monodromy matrix is 2 cos(beta pi), omega = beta Omega / 2
    tr = cols[0][0] + cols[1][1]
    beta = np.arccos(tr / 2) / np.pi
    return beta * cfg.drive_freq / 2


class TestConversions:
    def test_round_trip_sr_trap(self, sr_trap):
        w = secular_from_gradients(sr_trap)
        assert np.allclose(w.as_hz(), (1.76e6, 1.70e6, 0.87e6), rtol=1e-12)
        cfg = TrapConfig(TWO_PI * 18.1e6, 8.5e8, 6.8e6, -0.26)
        back = gradients_from_secular(secular_from_gradients(cfg), cfg.drive_freq)
        assert back.grad_rf == pytest.approx(cfg.grad_rf, rel=1e-12)
        assert back.grad_dc == pytest.approx(cfg.grad_dc, rel=1e-12)
        assert back.asymmetry == pytest.approx(cfg.asymmetry, rel=1e-12)

    def test_typical_values(self, sr_trap):
        assert sr_trap.grad_rf == pytest.approx(8.5e8, rel=0.02)
        assert sr_trap.grad_dc == pytest.approx(6.8e6, rel=0.02)
        assert mathieu_q(sr_trap) == pytest.approx(0.29, rel=0.02)
        # the quoted asymmetry is rounded; see notes on the 1.76/1.70/0.87 MHz set
        assert sr_trap.asymmetry == pytest.approx(-0.26, abs=0.02)

    @settings(max_examples=60, deadline=None)
    @given(
        fx=st.floats(0.3e6, 5e6),
        ratio_y=st.floats(0.7, 1.3),
        ratio_z=st.floats(0.1, 0.6),
        drive=st.floats(8e6, 60e6),
    )
    def test_round_trip_property(self, fx, ratio_y, ratio_z, drive):
        fy, fz = fx * ratio_y, fx * ratio_z
        w = SecularFrequencies.from_hz(fx, fy, fz)
        cfg = TrapConfig.from_secular(w, TWO_PI * drive)
        back = secular_from_gradients(cfg)
        assert np.allclose(back.as_array(), w.as_array(), rtol=1e-12, atol=0)

    def test_closed_form_inverse(self, sr_trap):
        w = secular_from_gradients(sr_trap)
        m, e, W = sr_trap.mass, constants.e, sr_trap.drive_freq
        assert sr_trap.grad_dc == pytest.approx(m * w.z**2 / (4 * e), rel=1e-13)
        assert sr_trap.asymmetry == pytest.approx((w.y**2 - w.x**2) / w.z**2, rel=1e-13)
        total = w.x**2 + w.y**2 + w.z**2
        assert sr_trap.grad_rf == pytest.approx(m * W / (2 * e) * np.sqrt(total), rel=1e-13)

    def test_negative_dc_is_unstable(self):
        with pytest.raises(Unstable) as info:
            secular_from_gradients(TrapConfig(TWO_PI * 18.1e6, 8.5e8, -1e6))
        assert info.value.axis == "z"

    def test_large_asymmetry_is_unstable(self):
        with pytest.raises(Unstable) as info:
            secular_from_gradients(TrapConfig(TWO_PI * 18.1e6, 8.5e8, 6.8e6, asymmetry=20.0))
        assert info.value.axis == "x"

    def test_rejects_bad_drive(self):
        with pytest.raises(ValueError):
            TrapConfig(0.0, 8.5e8, 6.8e6)


class TestFloquetOracle:
    """The pseudopotential must agree with the exact Mathieu dynamics as q -> 0."""

    def test_low_q_trap(self):
        w = SecularFrequencies.from_hz(1.0e6, 0.95e6, 0.5e6)
        cfg = TrapConfig.from_secular(w, TWO_PI * 80e6)
        assert mathieu_q(cfg) < 0.06
        for axis in "xy":
            assert floquet_frequency(cfg, axis) == pytest.approx(getattr(w, axis), rel=1e-3)

    def test_sr_trap_within_q_squared(self, sr_trap):
        q = mathieu_q(sr_trap)
        w = secular_from_gradients(sr_trap)
        for axis in "xy":
            exact = floquet_frequency(sr_trap, axis)
            assert abs(exact / getattr(w, axis) - 1) < q**2 / 2


class TestMicromotion:
    def test_q_definition(self, sr_trap):
        expected = 4 * constants.e * sr_trap.grad_rf / (sr_trap.mass * sr_trap.drive_freq**2)
        assert mathieu_q(sr_trap) == pytest.approx(expected, rel=1e-14)

    def test_factor(self):
        assert micromotion_factor(0.0) == 1.0
        assert micromotion_factor(0.4) == pytest.approx(1 + 3 * 0.16 / 16, rel=1e-15)

    def test_mean_square_field_matches_time_average(self, sr_trap):
        at = EquilibriumPosition(3e-7, -2e-7)
        t = np.arange(256) / 256 * TWO_PI / sr_trap.drive_freq
        r = np.array([at.x, at.y, 0.0])
        field = electric_field(sr_trap, np.broadcast_to(r, (len(t), 3)), t)
        rf = field - field.mean(axis=0)
        brute = np.mean(np.sum(rf**2, axis=1))
        assert mean_square_field(sr_trap, at, micromotion_correction=False) == pytest.approx(brute, rel=1e-12)
        corrected = mean_square_field(sr_trap, at)
        assert corrected / brute == pytest.approx(micromotion_factor(mathieu_q(sr_trap)), rel=1e-12)

    def test_field_vanishes_at_centre(self, sr_trap):
        assert mean_square_field(sr_trap, EquilibriumPosition(0.0, 0.0)) == 0.0


class TestEquilibrium:
    @pytest.mark.parametrize("fx,fy", [(120.0, 0.0), (0.0, -75.0), (40.0, 33.0)])
    def test_against_pseudopotential_minimum(self, sr_trap, fx, fy):
        off = OffsetField(fx, fy)
        eq = equilibrium_from_offset(sr_trap, off)
        scale = 1e-6

        def energy(p):
            return pseudopotential_energy(sr_trap, np.array([p[0] * scale, p[1] * scale, 0.0]), off) / 1e-24

        res = optimize.minimize(energy, [0.0, 0.0], method="BFGS", options={"gtol": 1e-14})
        assert res.x[0] * scale == pytest.approx(eq.x, rel=1e-6, abs=1e-12)
        assert res.x[1] * scale == pytest.approx(eq.y, rel=1e-6, abs=1e-12)

    def test_pseudopotential_curvature(self, sr_trap):
        w = secular_from_gradients(sr_trap)
        h = 1e-8
        for k, omega in enumerate((w.x, w.y, w.z)):
            r = np.zeros((3, 3))
            r[0, k], r[2, k] = -h, h
            u = pseudopotential_energy(sr_trap, r)
            curvature = (u[0] - 2 * u[1] + u[2]) / h**2
            assert curvature / sr_trap.mass == pytest.approx(omega**2, rel=1e-6)

    def test_dc_null_equivalence(self, sr_trap):
        off = offset_from_dc_null(sr_trap, 1e-7, -2e-7)
        eq = equilibrium_from_offset(sr_trap, off)
        w = secular_from_gradients(sr_trap)
        B, eps, e, m = sr_trap.grad_dc, sr_trap.asymmetry, sr_trap.charge, sr_trap.mass
        assert eq.x == pytest.approx(-2 * e * B * (1 + eps) * 1e-7 / (m * w.x**2), rel=1e-13)
        assert eq.y == pytest.approx(-2 * e * B * (1 - eps) * -2e-7 / (m * w.y**2), rel=1e-13)


class TestLambDicke:
    def test_counterpropagating_two_photon(self):
        eta = effective_lamb_dicke(243e-9, 306e-9, True, TWO_PI * 800e3, SR88_PLUS)
        assert eta == pytest.approx(0.045, abs=0.001)

    def test_copropagating_is_larger(self):
        co = effective_lamb_dicke(243e-9, 306e-9, False, TWO_PI * 800e3)
        counter = effective_lamb_dicke(243e-9, 306e-9, True, TWO_PI * 800e3)
        assert co / counter == pytest.approx((1 / 243 + 1 / 306) / (1 / 243 - 1 / 306), rel=1e-12)

    def test_scaling_with_mode_frequency(self):
        a = effective_lamb_dicke(243e-9, 306e-9, True, TWO_PI * 800e3)
        b = effective_lamb_dicke(243e-9, 306e-9, True, TWO_PI * 3200e3)
        assert a / b == pytest.approx(2.0, rel=1e-12)
