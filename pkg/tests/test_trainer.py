import numpy as np
import pytest

from srtrbm.core import MODE_FIXED_UNIT, RbmParams, TrainConfig, rng_stream
from srtrbm.exact import exact_moments
from srtrbm.sampler import conditional_probs
from srtrbm.trainer import (
    Gradient,
    apply_update,
    cd_gradient,
    init_chains,
    init_params,
    reconstruct,
    train,
)


def make_config(**kw):
    base = dict(n_hidden=3, epochs=2, batch_size=8, k=2, eta=0.05, seed=5,
                mode=MODE_FIXED_UNIT)
    base.update(kw)
    return TrainConfig(**base)


def bars_data(n=64, seed=0):
    rng = np.random.default_rng(seed)
    rows = np.zeros((n, 4))
    rows[np.arange(n), rng.integers(0, 4, n)] = 1.0
    return rows


class TestInit:
    def test_params_deterministic_and_scaled(self):
        cfg = make_config(init_std=0.01)
        a = init_params(6, cfg)
        b = init_params(6, cfg)
        assert (a.w == b.w).all()
        assert a.b_v.tolist() == [0.0] * 6
        assert a.b_h.tolist() == [0.0] * 3
        assert abs(a.w).max() < 0.1

    def test_chains_binary(self):
        chains = init_chains(4, make_config(batch_size=16))
        assert chains.shape == (16, 4)
        assert np.isin(chains, (0.0, 1.0)).all()


class TestGradient:
    def test_positive_phase_is_data_moment(self, tiny_params):
        # with the negative phase zeroed, the gradient is exactly the
        # batch mean of v h_probs^T and the two bias means
        v = np.array([[1.0, 0.0], [1.0, 1.0]])
        hp = conditional_probs(tiny_params, 1.0, v=v)
        zeros = np.zeros((1, 2))
        g = cd_gradient(tiny_params, v, hp, zeros, zeros)
        assert g.d_w == pytest.approx(v.T @ hp / 2)
        assert g.d_b_v == pytest.approx(v.mean(axis=0))
        assert g.d_b_h == pytest.approx(hp.mean(axis=0))

    def test_phases_normalized_independently(self, tiny_params):
        # unequal batch sizes must not skew either phase
        v_d = np.ones((4, 2))
        h_d = np.full((4, 2), 0.5)
        v_m = np.ones((2, 2))
        h_m = np.ones((2, 2))
        g = cd_gradient(tiny_params, v_d, h_d, v_m, h_m)
        assert g.d_w == pytest.approx(np.full((2, 2), 0.5) - np.ones((2, 2)))

    def test_apply_update_decay_outside_gradient(self, tiny_params):
        g = Gradient(
            d_w=np.zeros((2, 2)), d_b_v=np.zeros(2), d_b_h=np.zeros(2)
        )
        eta, psi = 0.1, 0.5
        p = apply_update(tiny_params, g, eta, psi, 0.0)
        assert p.w == pytest.approx((1 - eta * psi) * tiny_params.w)
        assert p.b_v == pytest.approx(tiny_params.b_v)  # psi_b = 0

    def test_frozen_negative_drift_is_linear(self, tiny_params):
        # with both phases frozen, theta evolves as a contraction plus a
        # constant drive; after n steps the drift of W obeys the closed form
        eta, psi = 0.02, 0.25
        c_w = np.array([[0.3, -0.1], [0.2, 0.0]])
        g = Gradient(d_w=c_w, d_b_v=np.zeros(2), d_b_h=np.zeros(2))
        p = tiny_params
        for _ in range(50):
            p = apply_update(p, g, eta, psi, 0.0)
        rho = 1 - eta * psi
        expected = tiny_params.w * rho**50 + c_w * (eta * (1 - rho**50) / (eta * psi))
        assert p.w == pytest.approx(expected, rel=1e-12)


class TestReconstruct:
    def test_mean_field_round_trip(self, tiny_params):
        v = np.array([[1.0, 0.0]])
        hp = conditional_probs(tiny_params, 1.0, v=v)
        expected = conditional_probs(tiny_params, 1.0, h=hp)
        assert reconstruct(tiny_params, 1.0, v) == pytest.approx(expected)


class TestTrainLoop:
    def test_rejects_nonbinary(self):
        cfg = make_config()
        with pytest.raises(ValueError):
            train(np.full((4, 4), 0.5), cfg)

    def test_metrics_shape_and_temperature_constancy(self):
        cfg = make_config(epochs=3, mode="adaptive")
        res = train(bars_data(), cfg)
        assert len(res.metrics) == 3
        assert res.metrics[0].temperature == 1.0  # state enters epoch 1 fresh
        assert res.state.t == 3

    def test_same_seed_same_result(self):
        cfg = make_config(epochs=2)
        a = train(bars_data(), cfg)
        b = train(bars_data(), cfg)
        assert a.params.w.tobytes() == b.params.w.tobytes()
        assert a.metrics == b.metrics

    def test_seed_changes_result(self):
        a = train(bars_data(), make_config(epochs=1, seed=1))
        b = train(bars_data(), make_config(epochs=1, seed=2))
        assert a.params.w.tobytes() != b.params.w.tobytes()

    def test_on_epoch_called_in_order(self):
        seen = []
        cfg = make_config(epochs=2)
        train(bars_data(), cfg, on_epoch=lambda e, m, p, s: seen.append(e))
        assert seen == [1, 2]

    def test_learning_reduces_reconstruction_error(self):
        cfg = make_config(epochs=25, eta=0.1, k=1, n_hidden=8)
        res = train(bars_data(256), cfg)
        first = res.metrics[0].recon_mse
        last = res.metrics[-1].recon_mse
        assert last < first * 0.8

    def test_k1_energy_variation_flagged_zero(self):
        cfg = make_config(epochs=1, k=1)
        res = train(bars_data(), cfg)
        assert res.metrics[0].mean_abs_de == 0.0

    def test_two_moment_fit_matches_exact_marginal(self):
        # Train a 2+2 model on iid coin-flip pixels; the learned marginal
        # moments must approach the data moments held by the exact oracle.
        rng = np.random.default_rng(8)
        data = (rng.random((512, 2)) < np.array([0.7, 0.3])).astype(float)
        cfg = make_config(n_hidden=2, epochs=120, eta=0.05, k=2, batch_size=64)
        res = train(data, cfg)
        _, v_mean, _ = exact_moments(res.params, 1.0)
        assert v_mean == pytest.approx(data.mean(axis=0), abs=0.08)
