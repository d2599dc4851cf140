"""MCMC and sample-quality diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ChainState, RbmParams, rng_stream
from .sampler import energy, gibbs_step


@dataclass(frozen=True)
class AutocorrResult:
    iat: float  # integrated autocorrelation time, >= 0.5
    ess: float  # N / (2 * iat)
    lag: int  # truncation lag (first nonpositive autocorrelation)
    degenerate: bool  # constant series flag


def autocorrelation(series) -> AutocorrResult:
    """IAT with initial-positive-sequence truncation, and the implied ESS.

    iat = 1/2 + sum_k rho_k, summed while the empirical autocorrelation
    stays positive. A constant series is flagged degenerate (iat = inf,
    ess = 0). An immediately alternating series truncates at lag 1 and
    pins iat at its floor of 1/2, giving ess = N.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1 or x.size < 3:
        raise ValueError("series must be 1-d with at least 3 points")
    n = x.size
    x = x - x.mean()
    var = float((x * x).mean())
    if var <= 0 or not np.isfinite(var):
        return AutocorrResult(iat=np.inf, ess=0.0, lag=0, degenerate=True)
    # Biased empirical autocovariance via FFT, normalized by N.
    m = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, m)
    acov = np.fft.irfft(f * np.conj(f), m)[:n].real / n
    rho = acov / var
    total = 0.0
    lag = n
    for k in range(1, n):
        if rho[k] <= 0:
            lag = k
            break
        total += rho[k]
    iat = 0.5 + total
    return AutocorrResult(iat=float(iat), ess=float(n / (2.0 * iat)), lag=lag, degenerate=False)


def pixel_entropy(samples) -> float:
    """Mean per-pixel Bernoulli entropy of a binary sample set, in nats."""
    s = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    p = s.mean(axis=0)
    ent = np.zeros_like(p)
    inner = (p > 0) & (p < 1)
    q = p[inner]
    ent[inner] = -(q * np.log(q) + (1 - q) * np.log(1 - q))
    return float(ent.mean())


def _pairwise_hamming_counts(s: np.ndarray) -> np.ndarray:
    """Condensed vector of pairwise differing-coordinate counts."""
    n = s.shape[0]
    d = s @ (1.0 - s).T
    counts = d + d.T
    iu = np.triu_indices(n, k=1)
    return counts[iu]


def hamming_diversity(samples) -> float:
    """Mean normalized Hamming distance over unordered sample pairs."""
    s = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    if s.shape[0] < 2:
        raise ValueError("need at least 2 samples")
    return float(_pairwise_hamming_counts(s).mean() / s.shape[1])


def mean_pairwise_l2(samples) -> float:
    """Mean Euclidean distance over unordered pairs of binary samples."""
    s = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    if s.shape[0] < 2:
        raise ValueError("need at least 2 samples")
    return float(np.sqrt(_pairwise_hamming_counts(s)).mean())


def beta_diagnostics(params: RbmParams, t: float) -> dict:
    """Inverse-temperature style norms: theta, Frobenius, spectral over T.

    beta_spectral <= beta_eff <= beta_norm always.
    """
    if not t > 0:
        raise ValueError("temperature must be > 0")
    from .core import theta_norm

    return {
        "beta_norm": theta_norm(params) / t,
        "beta_eff": float(np.linalg.norm(params.w)) / t,
        "beta_spectral": float(np.linalg.norm(params.w, 2)) / t,
    }


def chain_energy_series(
    params: RbmParams, t: float, steps: int, seed: int, burn_in: int = 0
) -> np.ndarray:
    """Per-step joint energies of one Gibbs chain from a uniform start."""
    rng = rng_stream(seed, "diag-energy")
    v = (rng.random(params.n_v) < 0.5).astype(np.float64)
    h = (rng.random(params.n_h) < 0.5).astype(np.float64)
    state = ChainState(v=v, h=h)
    out = np.empty(steps)
    for i in range(burn_in + steps):
        state = gibbs_step(params, t, state, rng)
        if i >= burn_in:
            out[i - burn_in] = energy(params, state.v, state.h)
    return out
