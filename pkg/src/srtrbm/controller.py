"""Temperature feedback controller.

The sampling temperature is a state variable driven once per epoch by the
measured flip rate and the free-energy gap:

    c_{t+1}  = (1 - alpha) c_t + alpha r_t
    lam_{t+1} = phi lam_t - eta_lambda (r_t - c_t)
    gbar_{t+1} = gbar_t + (gap_t - gbar_t) / (t + 1)
    T_t      = exp(lam_t) + kappa gbar_t  (adaptive mode)

phi = 1 is pure integral feedback. lam is clamped to +/- LAMBDA_CLAMP and
hitting the clamp is reported as an anomaly, never an error.
"""

from __future__ import annotations

import numpy as np

from .core import (
    LAMBDA_CLAMP,
    MODE_ADAPTIVE,
    MODE_FIXED_UNIT,
    MODE_FIXED_VALUE,
    RbmParams,
    ThermoState,
    TrainConfig,
)
from .sampler import free_energy, hidden_fields, sigmoid

# Guard floor for the adaptive temperature; a large negative Cesaro gap with
# a large kappa could otherwise drive T nonpositive.
T_FLOOR = 1e-3


def update_reference(c: float, r: float, alpha: float) -> float:
    """EMA of observed flip rates, the controller's moving setpoint."""
    return (1.0 - alpha) * c + alpha * r


def update_lambda(lam: float, r: float, c: float, phi: float, eta_lambda: float) -> float:
    """Leaky integral update on the log-temperature, clamped to +/- 20."""
    new = phi * lam - eta_lambda * (r - c)
    return float(np.clip(new, -LAMBDA_CLAMP, LAMBDA_CLAMP))


def cesaro_update(mean: float, x: float, t: int) -> float:
    """Running mean after t-1 samples absorbs sample x (t is 1-based)."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return mean + (x - mean) / t


def temperature(state: ThermoState, config: TrainConfig) -> float:
    """Temperature in force for the given controller state and mode."""
    if config.mode == MODE_FIXED_UNIT:
        return 1.0
    if config.mode == MODE_FIXED_VALUE:
        if config.temperature is None:
            raise ValueError("fixedT mode requires a temperature")
        return float(config.temperature)
    if config.mode == MODE_ADAPTIVE:
        t = float(np.exp(state.lam) + config.kappa * state.delta_f_bar)
        return max(t, T_FLOOR)
    raise ValueError("unknown mode %r" % config.mode)


def free_energy_gap(params: RbmParams, t: float, v_data, v_model) -> float:
    """Mean free energy of the data batch minus the model batch."""
    return float(
        np.mean(free_energy(params, t, v_data)) - np.mean(free_energy(params, t, v_model))
    )


def energy_gap(params: RbmParams, t: float, v_data, v_model) -> float:
    """Energy analogue of the gap, with the hidden layer averaged out.

    Uses E[E(v, h) | v] = -v.b_v - sum_j sigma(x_j/t) x_j, the conditional
    mean joint energy at temperature t.
    """

    def cond_mean_energy(v):
        v = np.atleast_2d(np.asarray(v, dtype=np.float64))
        x = hidden_fields(params, v)
        return -(v @ params.b_v) - (sigmoid(x / t) * x).sum(axis=1)

    return float(cond_mean_energy(v_data).mean() - cond_mean_energy(v_model).mean())


def epoch_update(state: ThermoState, r: float, gap: float, config: TrainConfig):
    """Advance the controller by one epoch; returns (state, anomalies).

    The lambda update uses the pre-update reference, matching the coupled
    two-dimensional map analyzed by the stability module.
    """
    new_c = update_reference(state.c, r, config.alpha)
    new_lam = update_lambda(state.lam, r, state.c, config.phi, config.eta_lambda)
    new_gbar = cesaro_update(state.delta_f_bar, gap, state.t + 1)
    anomalies = []
    if abs(new_lam) == LAMBDA_CLAMP:
        anomalies.append("lambda clamped at %+g" % new_lam)
    new_state = ThermoState(lam=new_lam, c=new_c, delta_f_bar=new_gbar, t=state.t + 1)
    if config.mode == MODE_ADAPTIVE:
        raw = np.exp(new_lam) + config.kappa * new_gbar
        if raw < T_FLOOR:
            anomalies.append("temperature floored at %g" % T_FLOOR)
    return new_state, anomalies
