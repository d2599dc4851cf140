import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srtrbm.controller import (
    T_FLOOR,
    cesaro_update,
    energy_gap,
    epoch_update,
    free_energy_gap,
    temperature,
    update_lambda,
    update_reference,
)
from srtrbm.core import (
    LAMBDA_CLAMP,
    MODE_FIXED_UNIT,
    MODE_FIXED_VALUE,
    ThermoState,
    TrainConfig,
)
from srtrbm.sampler import free_energy


def make_config(**kw):
    base = dict(n_hidden=4, epochs=1, alpha=0.25, eta_lambda=0.5, phi=0.9, kappa=0.1)
    base.update(kw)
    return TrainConfig(**base)


class TestScalarUpdates:
    def test_reference_ema(self):
        assert update_reference(0.0, 0.6, 0.25) == pytest.approx(0.15)
        assert update_reference(0.15, 0.2, 0.25) == pytest.approx(0.1625)

    def test_lambda_proportional(self):
        assert update_lambda(0.0, 0.6, 0.0, 0.9, 0.5) == pytest.approx(-0.3)
        assert update_lambda(-0.3, 0.2, 0.15, 0.9, 0.5) == pytest.approx(-0.295)

    def test_lambda_clamped(self):
        assert update_lambda(19.9, -100.0, 0.0, 1.0, 1.0) == LAMBDA_CLAMP
        assert update_lambda(-19.9, 100.0, 0.0, 1.0, 1.0) == -LAMBDA_CLAMP

    def test_cesaro_is_running_mean(self):
        xs = [2.0, 1.0, 4.0, -3.0]
        m = 0.0
        for i, x in enumerate(xs, start=1):
            m = cesaro_update(m, x, i)
            assert m == pytest.approx(float(np.mean(xs[:i])))

    def test_cesaro_needs_positive_index(self):
        with pytest.raises(ValueError):
            cesaro_update(0.0, 1.0, 0)


class TestTemperature:
    def test_adaptive_composition(self):
        cfg = make_config()
        state = ThermoState(lam=-0.3, c=0.0, delta_f_bar=2.0, t=1)
        assert temperature(state, cfg) == pytest.approx(math.exp(-0.3) + 0.1 * 2.0)

    def test_floor(self):
        # the floor applies to the composed temperature, whatever drove it low
        cfg = make_config(kappa=0.0)
        state = ThermoState(lam=-20.0, c=0.0, delta_f_bar=0.0, t=1)
        assert temperature(state, cfg) == T_FLOOR
        state = ThermoState(lam=-20.0, c=0.0, delta_f_bar=-1.0, t=1)
        cfg2 = make_config(kappa=1.0)
        assert temperature(state, cfg2) == T_FLOOR
        near = ThermoState(lam=math.log(0.002), c=0.0, delta_f_bar=0.0, t=1)
        assert temperature(near, cfg) == pytest.approx(0.002)

    def test_fixed_modes_ignore_state(self):
        state = ThermoState(lam=3.0, c=0.5, delta_f_bar=9.0, t=4)
        assert temperature(state, make_config(mode=MODE_FIXED_UNIT)) == 1.0
        cfg = make_config(mode=MODE_FIXED_VALUE, temperature=0.37)
        assert temperature(state, cfg) == 0.37


class TestEpochUpdate:
    def test_two_step_frozen_trace(self):
        # Hand-derived with alpha=0.25, eta_lambda=0.5, phi=0.9, kappa=0.1:
        #   step 1 (r=0.6, gap=2.0): lam = -0.5*0.6 = -0.3, c = 0.15,
        #     running gap = 2.0, T = e^-0.3 + 0.2
        #   step 2 (r=0.2, gap=1.0): lam = 0.9*(-0.3) - 0.5*(0.2 - 0.15)
        #     = -0.295, c = 0.1625, running gap = 1.5
        cfg = make_config()
        state = ThermoState()
        state, anoms = epoch_update(state, 0.6, 2.0, cfg)
        assert anoms == []
        assert state.lam == pytest.approx(-0.3)
        assert state.c == pytest.approx(0.15)
        assert state.delta_f_bar == pytest.approx(2.0)
        assert state.t == 1
        assert temperature(state, cfg) == pytest.approx(0.9408182206817179)
        state, _ = epoch_update(state, 0.2, 1.0, cfg)
        assert state.lam == pytest.approx(-0.29500000000000004)
        assert state.c == pytest.approx(0.16249999999999998)
        assert state.delta_f_bar == pytest.approx(1.5)
        assert temperature(state, cfg) == pytest.approx(0.8945315874659093)

    def test_lambda_uses_pre_update_reference(self):
        # alpha=0.25: c moves 0.4 -> 0.5 this step. The lambda error term
        # must be r - c_old = 0.4, not r - c_new = 0.3.
        cfg = make_config(phi=1.0, eta_lambda=0.5, alpha=0.25)
        state = ThermoState(lam=0.7, c=0.4, delta_f_bar=0.0, t=3)
        new, _ = epoch_update(state, 0.8, 0.0, cfg)
        assert new.c == pytest.approx(0.5)
        assert new.lam == pytest.approx(0.7 - 0.5 * 0.4)
        assert new.lam != pytest.approx(0.7 - 0.5 * 0.3)

    def test_clamp_anomaly_reported(self):
        cfg = make_config(eta_lambda=50.0)
        state, anoms = epoch_update(ThermoState(), 1.0, 0.0, cfg)
        assert state.lam == -LAMBDA_CLAMP
        assert any("clamp" in a for a in anoms)

    def test_floor_anomaly_reported(self):
        cfg = make_config(kappa=1.0)
        state = ThermoState(lam=-19.0, c=0.0, delta_f_bar=-5.0, t=2)
        _, anoms = epoch_update(state, 0.0, -5.0, cfg)
        assert any("floor" in a for a in anoms)

    @given(
        st.floats(0, 1),
        st.floats(-3, 3),
        st.integers(0, 50),
    )
    @settings(max_examples=200, deadline=None)
    def test_reference_stays_in_hull(self, r, gap, t):
        # c is a convex combination of past flip rates, so it lives in [0, 1]
        cfg = make_config()
        state = ThermoState(lam=0.0, c=0.5, delta_f_bar=0.0, t=t)
        new, _ = epoch_update(state, r, gap, cfg)
        assert 0.0 <= new.c <= 1.0
        assert new.t == t + 1


class TestGaps:
    def test_free_energy_gap_is_mean_difference(self, small_params):
        v_data = np.array([[1.0, 0.0, 1.0], [0.0, 0.0, 1.0]])
        v_model = np.array([[1.0, 1.0, 1.0]])
        t = 1.2
        expected = float(
            free_energy(small_params, t, v_data).mean()
            - free_energy(small_params, t, v_model).mean()
        )
        assert free_energy_gap(small_params, t, v_data, v_model) == pytest.approx(expected)

    def test_energy_gap_matches_enumeration(self, tiny_params):
        # conditional mean joint energy, checked against the 4-state
        # hidden enumeration at each visible row
        from srtrbm.sampler import energy

        t = 0.9
        v_rows = np.array([[1.0, 0.0], [1.0, 1.0]])

        def mean_joint(v):
            num = 0.0
            den = 0.0
            for hi in range(4):
                h = np.array([(hi >> j) & 1 for j in range(2)], float)
                w = math.exp(-float(energy(tiny_params, v, h)) / t)
                num += w * float(energy(tiny_params, v, h))
                den += w
            return num / den

        expected = mean_joint(v_rows[0]) / 2 + mean_joint(v_rows[1]) / 2
        v_model = np.array([[0.0, 0.0]])
        expected -= mean_joint(v_model[0])
        assert energy_gap(tiny_params, t, v_rows, v_model) == pytest.approx(expected)
