"""Annealed importance sampling and likelihood evaluation.

The AIS base distribution is the model with its coupling matrix zeroed
(independent Bernoulli layers under the model's own biases, analytic log Z);
only the coupling term is annealed, geometrically, over a linear beta
schedule on [0, 1], with one full Gibbs sweep per intermediate distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RbmParams
from .sampler import sigmoid, softplus


@dataclass(frozen=True)
class AisResult:
    log_z: float  # estimated log partition function at temperature t
    base_log_z: float  # analytic log Z of the zero-coupling base
    log_weights: np.ndarray  # (n_chains,) importance log weights
    ess: float  # effective sample size of the weights
    log_weight_variance: float  # sample variance of the log weights


def base_log_z(params: RbmParams, t: float) -> float:
    """log Z of the zero-coupling model at temperature t, in closed form."""
    if not t > 0:
        raise ValueError("temperature must be > 0")
    return float(softplus(params.b_v / t).sum() + softplus(params.b_h / t).sum())


def weight_diagnostics(log_weights: np.ndarray) -> tuple[float, float]:
    """(effective sample size, sample variance) of importance log weights."""
    lw = np.asarray(log_weights, dtype=np.float64)
    if lw.size < 2:
        raise ValueError("need at least 2 weights")
    w = np.exp(lw - lw.max())
    ess = float(w.sum() ** 2 / (w**2).sum())
    return ess, float(lw.var(ddof=1))


def ais_log_z(
    params: RbmParams,
    t: float,
    n_chains: int,
    n_temps: int,
    rng: np.random.Generator,
) -> AisResult:
    """AIS estimate of log Z(t) with n_chains chains and n_temps rungs.

    log_z = base_log_z + logsumexp(log_w) - log(n_chains); the weights are
    unbiased for Z/Z_base by construction.
    """
    if not t > 0:
        raise ValueError("temperature must be > 0")
    if n_chains < 2:
        raise ValueError("n_chains must be >= 2")
    if n_temps < 2:
        raise ValueError("n_temps must be >= 2")
    betas = np.linspace(0.0, 1.0, n_temps)
    p_v = sigmoid(params.b_v / t)
    p_h = sigmoid(params.b_h / t)
    v = (rng.random((n_chains, params.n_v)) < p_v).astype(np.float64)
    h = (rng.random((n_chains, params.n_h)) < p_h).astype(np.float64)
    log_w = np.zeros(n_chains)
    for i in range(1, n_temps):
        beta = betas[i]
        coupling = np.einsum("ci,ij,cj->c", v, params.w, h)
        log_w += (beta - betas[i - 1]) * coupling / t
        # One full alternating sweep at the new rung, hidden layer first.
        hf = (beta * (v @ params.w) + params.b_h) / t
        h = (rng.random(h.shape) < sigmoid(hf)).astype(np.float64)
        vf = (beta * (h @ params.w.T) + params.b_v) / t
        v = (rng.random(v.shape) < sigmoid(vf)).astype(np.float64)
    base = base_log_z(params, t)
    m = float(log_w.max())
    log_mean_w = m + float(np.log(np.exp(log_w - m).mean()))
    ess, log_var = weight_diagnostics(log_w)
    return AisResult(
        log_z=base + log_mean_w,
        base_log_z=base,
        log_weights=log_w,
        ess=ess,
        log_weight_variance=log_var,
    )


def log_unnormalized_marginal(params: RbmParams, t: float, v) -> np.ndarray:
    """log sum_h exp(-E(v, h)/t), straight from the fields over t."""
    if not t > 0:
        raise ValueError("temperature must be > 0")
    v = np.atleast_2d(np.asarray(v, dtype=np.float64))
    return (v @ params.b_v) / t + softplus((v @ params.w + params.b_h) / t).sum(axis=1)


def test_log_likelihood(params: RbmParams, t: float, log_z: float, data) -> float:
    """Mean log p_t(v) over the rows of data, given a log Z estimate."""
    return float(log_unnormalized_marginal(params, t, data).mean() - log_z)


def _pl_terms(params: RbmParams, t: float, data: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """log p(v_i | v_others) for the chosen coordinate of each row."""
    rows = np.arange(data.shape[0])
    flipped = data.copy()
    flipped[rows, idx] = 1.0 - flipped[rows, idx]
    lm_keep = log_unnormalized_marginal(params, t, data)
    lm_flip = log_unnormalized_marginal(params, t, flipped)
    # p(observed) / (p(observed) + p(flipped)) = sigma(lm_keep - lm_flip)
    return -softplus(-(lm_keep - lm_flip))


def pseudo_likelihood(params: RbmParams, t: float, data, rng: np.random.Generator) -> float:
    """Stochastic pseudo-likelihood: one random coordinate per row, times n_v."""
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    idx = rng.integers(0, params.n_v, size=data.shape[0])
    return float(params.n_v * _pl_terms(params, t, data, idx).mean())


def pseudo_likelihood_exact(params: RbmParams, t: float, data) -> float:
    """Full-coordinate pseudo-likelihood sum_i log p(v_i | v_others)."""
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    total = np.zeros(data.shape[0])
    for i in range(params.n_v):
        total += _pl_terms(params, t, data, np.full(data.shape[0], i))
    return float(total.mean())
