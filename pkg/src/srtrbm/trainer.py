"""Persistent contrastive divergence with feedback-controlled temperature.

One parameter update per minibatch; one controller update per epoch, fed
with the epoch means of the persistent-chain visible flip rate and the
free-energy gap. The positive phase uses hidden activation probabilities,
the negative phase the sampled binary states of the persistent chains.
Weight decay lives in apply_update, not in the gradient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import controller
from .core import EpochMetrics, RbmParams, ThermoState, TrainConfig, rng_stream, theta_norm, validate_config
from .sampler import conditional_probs, energy, flip_rate_pcd, sample_hidden, sample_visible


@dataclass(frozen=True)
class Gradient:
    """CD gradient estimate, weight decay excluded."""

    d_w: np.ndarray
    d_b_v: np.ndarray
    d_b_h: np.ndarray


@dataclass(frozen=True)
class TrainResult:
    params: RbmParams
    state: ThermoState
    metrics: list
    anomalies: list


def init_params(n_v: int, config: TrainConfig) -> RbmParams:
    """Normal(0, init_std^2) weights, zero biases."""
    rng = rng_stream(config.seed, "init")
    w = config.init_std * rng.standard_normal((n_v, config.n_hidden))
    return RbmParams(w=w, b_v=np.zeros(n_v), b_h=np.zeros(config.n_hidden))


def init_chains(n_v: int, config: TrainConfig) -> np.ndarray:
    """Persistent chains start as fair coin flips, one chain per batch row."""
    rng = rng_stream(config.seed, "chains")
    return (rng.random((config.batch_size, n_v)) < 0.5).astype(np.float64)


def cd_gradient(
    params: RbmParams,
    v_data: np.ndarray,
    h_data_probs: np.ndarray,
    v_model: np.ndarray,
    h_model: np.ndarray,
) -> Gradient:
    """Positive minus negative phase moments, each normalized by its rows."""
    n_d = v_data.shape[0]
    n_m = v_model.shape[0]
    d_w = v_data.T @ h_data_probs / n_d - v_model.T @ h_model / n_m
    d_b_v = v_data.mean(axis=0) - v_model.mean(axis=0)
    d_b_h = h_data_probs.mean(axis=0) - h_model.mean(axis=0)
    return Gradient(d_w=d_w, d_b_v=d_b_v, d_b_h=d_b_h)


def apply_update(
    params: RbmParams, grad: Gradient, eta: float, psi_w: float, psi_b: float
) -> RbmParams:
    """theta' = theta + eta (G - Lambda theta) with blockwise decay Lambda."""
    return RbmParams(
        w=params.w + eta * (grad.d_w - psi_w * params.w),
        b_v=params.b_v + eta * (grad.d_b_v - psi_b * params.b_v),
        b_h=params.b_h + eta * (grad.d_b_h - psi_b * params.b_h),
    )


def reconstruct(params: RbmParams, t: float, v: np.ndarray) -> np.ndarray:
    """One-step mean-field reconstruction probabilities."""
    h_probs = conditional_probs(params, t, v=v)
    return conditional_probs(params, t, h=h_probs)


def _pcd_sweep(params, t, v, rng, k):
    """k alternating block updates; returns (v, h, mean_abs_de, de_valid)."""
    if k < 2:
        h = sample_hidden(params, t, v, rng)
        v = sample_visible(params, t, h, rng)
        return v, h, 0.0, False
    total = 0.0
    prev_e = None
    for _ in range(k):
        h = sample_hidden(params, t, v, rng)
        v = sample_visible(params, t, h, rng)
        e = energy(params, v, h)
        if prev_e is not None:
            total += float(np.abs(e - prev_e).mean())
        prev_e = e
    return v, h, total / (k - 1), True


def _beta_diag(params: RbmParams, t: float):
    tn = theta_norm(params)
    fro = float(np.linalg.norm(params.w))
    spec = float(np.linalg.norm(params.w, 2))
    return tn, tn / t, fro / t, spec / t


def train(
    data: np.ndarray,
    config: TrainConfig,
    on_epoch=None,
) -> TrainResult:
    """Run the full training loop on a binary (rows, n_v) dataset.

    on_epoch, when given, is called as on_epoch(epoch_index, metrics,
    params, state) after each completed epoch; epoch_index is 1-based.
    """
    validate_config(config)
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2 or data.shape[0] < 1:
        raise ValueError("data must be a nonempty 2-d array")
    if not np.isin(data, (0.0, 1.0)).all():
        raise ValueError("data must be binary 0/1")
    n_rows, n_v = data.shape

    params = init_params(n_v, config)
    chains_v = init_chains(n_v, config)
    state = ThermoState()
    metrics: list[EpochMetrics] = []
    anomalies: list[str] = []

    for epoch in range(1, config.epochs + 1):
        t_epoch = controller.temperature(state, config)
        order = rng_stream(config.seed, "shuffle", epoch).permutation(n_rows)
        flip_sum = 0.0
        gap_sum = 0.0
        recon_sum = 0.0
        de_sum = 0.0
        de_any = False
        n_batches = 0
        for b, lo in enumerate(range(0, n_rows, config.batch_size)):
            batch = data[order[lo : lo + config.batch_size]]
            rng = rng_stream(config.seed, "gibbs", epoch, b)
            h_data_probs = conditional_probs(params, t_epoch, v=batch)
            v_prev = chains_v
            chains_v, chains_h, de, de_valid = _pcd_sweep(
                params, t_epoch, chains_v, rng, config.k
            )
            flip_sum += flip_rate_pcd(chains_v, v_prev)
            grad = cd_gradient(params, batch, h_data_probs, chains_v, chains_h)
            params = apply_update(params, grad, config.eta, config.psi_w, config.psi_b)
            gap_sum += controller.free_energy_gap(params, t_epoch, batch, chains_v)
            recon = reconstruct(params, t_epoch, batch)
            recon_sum += float(((batch - recon) ** 2).mean())
            if de_valid:
                de_sum += de
                de_any = True
            n_batches += 1

        r_epoch = flip_sum / n_batches
        gap_epoch = gap_sum / n_batches
        tn, b_norm, b_eff, b_spec = _beta_diag(params, t_epoch)
        rec = EpochMetrics(
            flip_rate=r_epoch,
            temperature=t_epoch,
            lam=state.lam,
            reference=state.c,
            gap=gap_epoch,
            cesaro_gap=state.delta_f_bar,
            recon_mse=recon_sum / n_batches,
            theta_norm=tn,
            beta_norm=b_norm,
            beta_eff=b_eff,
            beta_spectral=b_spec,
            mean_abs_de=de_sum / n_batches if de_any else 0.0,
        )
        metrics.append(rec)
        state, epoch_anoms = controller.epoch_update(state, r_epoch, gap_epoch, config)
        for a in epoch_anoms:
            anomalies.append("epoch %d: %s" % (epoch, a))
        if on_epoch is not None:
            on_epoch(epoch, rec, params, state)

    return TrainResult(params=params, state=state, metrics=metrics, anomalies=anomalies)
