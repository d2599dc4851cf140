"""Energies, free energies, conditionals, and block Gibbs sampling.

All layer updates are block updates, hidden layer first. Fields are always
divided by the temperature before the logistic is applied.
"""

from __future__ import annotations

import numpy as np

from .core import ChainState, ChainTrace, RbmParams


def sigmoid(z):
    """Numerically stable logistic, exact for |z| up to the float64 range."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out if out.ndim else float(out)


def softplus(z):
    """log(1 + e^z) without overflow for |z| up to ~700."""
    return np.logaddexp(0.0, np.asarray(z, dtype=np.float64))


def logistic_variance(z):
    """sigma(z) * (1 - sigma(z)) in the stable product form.

    Satisfies 0.25 * e^{-|z|} <= value <= e^{-|z|} for all z; the upper
    envelope is what makes strong fields freeze their units.
    """
    a = np.exp(-np.abs(np.asarray(z, dtype=np.float64)))
    out = a / (1.0 + a) ** 2
    return out if out.ndim else float(out)


def _check_t(t: float) -> float:
    t = float(t)
    if not t > 0:
        raise ValueError("temperature must be > 0, got %r" % t)
    return t


def energy(params: RbmParams, v, h):
    """Joint energy -v.b_v - h.b_h - v.W.h; batched over leading axes."""
    v = np.asarray(v, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    coupling = np.einsum("...i,ij,...j->...", v, params.w, h)
    out = -(v @ params.b_v) - (h @ params.b_h) - coupling
    return float(out) if np.ndim(out) == 0 else out


def hidden_fields(params: RbmParams, v):
    return np.asarray(v, dtype=np.float64) @ params.w + params.b_h


def visible_fields(params: RbmParams, h):
    return np.asarray(h, dtype=np.float64) @ params.w.T + params.b_v


def free_energy(params: RbmParams, t: float, v):
    """Visible free energy F_T(v) = -v.b_v - T sum_j softplus(x_j(v)/T).

    Equals -T log sum_h exp(-E(v, h)/T); batched over leading axes of v.
    """
    t = _check_t(t)
    v = np.asarray(v, dtype=np.float64)
    out = -(v @ params.b_v) - t * softplus(hidden_fields(params, v) / t).sum(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def conditional_probs(params: RbmParams, t: float, v=None, h=None):
    """Bernoulli means of one layer given the other.

    Pass exactly one of v (returns hidden probabilities) or h (returns
    visible probabilities). Batched over leading axes.
    """
    t = _check_t(t)
    if (v is None) == (h is None):
        raise ValueError("pass exactly one of v or h")
    if v is not None:
        return sigmoid(hidden_fields(params, v) / t)
    return sigmoid(visible_fields(params, h) / t)


def _bernoulli(rng: np.random.Generator, probs: np.ndarray) -> np.ndarray:
    return (rng.random(probs.shape) < probs).astype(np.float64)


def sample_hidden(params: RbmParams, t: float, v, rng: np.random.Generator):
    return _bernoulli(rng, conditional_probs(params, t, v=v))


def sample_visible(params: RbmParams, t: float, h, rng: np.random.Generator):
    return _bernoulli(rng, conditional_probs(params, t, h=h))


def gibbs_step(
    params: RbmParams, t: float, state: ChainState, rng: np.random.Generator
) -> ChainState:
    """One alternating block update: resample h given v, then v given h."""
    h = sample_hidden(params, t, state.v, rng)
    v = sample_visible(params, t, h, rng)
    return ChainState(v=v, h=h)


def gibbs_sweep_batch(
    params: RbmParams,
    t: float,
    v: np.ndarray,
    rng: np.random.Generator,
    k: int = 1,
):
    """k alternating updates on a (chains, n_v) batch; returns (v, h)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    h = None
    for _ in range(k):
        h = sample_hidden(params, t, v, rng)
        v = sample_visible(params, t, h, rng)
    return v, h


def run_chain(
    params: RbmParams,
    t: float,
    state: ChainState,
    k: int,
    rng: np.random.Generator,
) -> ChainTrace:
    """Run k Gibbs steps and record every state, the initial one included."""
    if k < 1:
        raise ValueError("k must be >= 1")
    vs = np.empty((k + 1, params.n_v))
    hs = np.empty((k + 1, params.n_h))
    vs[0], hs[0] = state.v, state.h
    cur = state
    for i in range(1, k + 1):
        cur = gibbs_step(params, t, cur, rng)
        vs[i], hs[i] = cur.v, cur.h
    return ChainTrace(vs=vs, hs=hs)


def flip_rate_epoch(trace: ChainTrace) -> float:
    """Two-layer flip rate: mean over steps of the per-layer flip fractions.

    r = (1/2K) sum_k (||v_k - v_{k-1}||_0 / n_v + ||h_k - h_{k-1}||_0 / n_h).
    """
    k = trace.k
    if k < 1:
        raise ValueError("trace must contain at least one step")
    dv = np.abs(np.diff(trace.vs, axis=0)).sum() / trace.vs.shape[1]
    dh = np.abs(np.diff(trace.hs, axis=0)).sum() / trace.hs.shape[1]
    return float((dv + dh) / (2 * k))


def flip_rate_pcd(v_new, v_prev) -> float:
    """Visible-only flip rate between consecutive persistent-chain states.

    Batched: rows are chains, the result is the mean over chains of
    ||v_new - v_prev||_0 / n_v. This is the statistic fed to the controller.
    """
    v_new = np.atleast_2d(np.asarray(v_new, dtype=np.float64))
    v_prev = np.atleast_2d(np.asarray(v_prev, dtype=np.float64))
    if v_new.shape != v_prev.shape:
        raise ValueError("shape mismatch between v_new and v_prev")
    return float(np.abs(v_new - v_prev).sum(axis=1).mean() / v_new.shape[1])


def mean_abs_energy_variation(params: RbmParams, trace: ChainTrace):
    """Mean |E_k - E_{k-1}| along a trace; (0.0, False) when K < 2.

    A single-step trace has no within-chain variation to speak of, so the
    value is defined as zero and flagged invalid.
    """
    if trace.k < 2:
        return 0.0, False
    # Skip the arbitrary initial state: variation is measured between
    # post-update states, matching the persistent-chain statistic.
    e = energy(params, trace.vs[1:], trace.hs[1:])
    return float(np.abs(np.diff(e)).mean()), True
