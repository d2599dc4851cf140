"""Linearized stability of the controller's two-dimensional map.

Around a fixed point with flip-rate sensitivity s = dr/dlam, the
(lam, c) dynamics linearize to

    J = [[phi - eta_lambda s, eta_lambda],
         [alpha s,            1 - alpha]]

with trace phi - eta_lambda s + 1 - alpha and determinant
phi (1 - alpha) - eta_lambda s. The Jury conditions |det| < 1,
1 + tr + det > 0, 1 - tr + det > 0 are equivalent to both eigenvalues
lying strictly inside the unit circle.
"""

from __future__ import annotations

import numpy as np

from .core import RbmParams, rng_stream
from .sampler import conditional_probs

MARGINAL_TOL = 1e-9


def jacobian(phi: float, eta_lambda: float, alpha: float, s: float) -> np.ndarray:
    return np.array(
        [
            [phi - eta_lambda * s, eta_lambda],
            [alpha * s, 1.0 - alpha],
        ]
    )


def jury_stable(j: np.ndarray) -> tuple[bool, float]:
    """(Jury verdict, spectral radius) for a 2x2 real map.

    The boolean comes from the Jury conditions alone; the spectral radius
    from the eigenvalues, so the two routes can be cross-checked.
    """
    j = np.asarray(j, dtype=np.float64)
    if j.shape != (2, 2):
        raise ValueError("jacobian must be 2x2")
    tr = j[0, 0] + j[1, 1]
    det = j[0, 0] * j[1, 1] - j[0, 1] * j[1, 0]
    stable = abs(det) < 1.0 and 1.0 + tr + det > 0.0 and 1.0 - tr + det > 0.0
    rho = float(np.abs(np.linalg.eigvals(j)).max())
    return stable, rho


def classify(j: np.ndarray) -> str:
    """'stable' | 'unstable' | 'marginal' with a 1e-9 band around rho = 1."""
    stable, rho = jury_stable(j)
    if abs(rho - 1.0) <= MARGINAL_TOL:
        return "marginal"
    return "stable" if stable else "unstable"


def estimate_flip_sensitivity(
    params: RbmParams,
    lam_star: float,
    delta: float,
    n_chains: int,
    n_steps: int,
    seed: int,
    kappa: float = 0.0,
    delta_f_bar: float = 0.0,
    burn_in: int = 0,
) -> tuple[float, float]:
    """Central-difference estimate of s = dr/dlam with common random numbers.

    Both perturbed temperatures T(lam* +/- delta) = exp(lam* +/- delta) +
    kappa * delta_f_bar are driven by the same per-chain uniform block, so
    the difference estimator's variance reflects coupling, not fresh noise.
    Returns (s_hat, standard error of s_hat).
    """
    if delta <= 0:
        raise ValueError("delta must be > 0")
    if n_chains < 2:
        raise ValueError("need at least 2 chains for a standard error")
    n_v, n_h = params.n_v, params.n_h
    rng = rng_stream(seed, "sensitivity")
    v0 = (rng.random((n_chains, n_v)) < 0.5).astype(np.float64)
    total = burn_in + n_steps
    u_h = rng.random((total, n_chains, n_h))
    u_v = rng.random((total, n_chains, n_v))

    def run(t: float) -> np.ndarray:
        v = v0.copy()
        h = None
        flips = np.zeros(n_chains)
        for step in range(total):
            new_h = (u_h[step] < conditional_probs(params, t, v=v)).astype(np.float64)
            new_v = (u_v[step] < conditional_probs(params, t, h=new_h)).astype(np.float64)
            if step >= burn_in:
                dh = np.abs(new_h - h).sum(axis=1) / n_h if h is not None else 0.0
                dv = np.abs(new_v - v).sum(axis=1) / n_v
                flips += (dv + dh) / 2.0
            v, h = new_v, new_h
        return flips / n_steps

    t_plus = float(np.exp(lam_star + delta) + kappa * delta_f_bar)
    t_minus = float(np.exp(lam_star - delta) + kappa * delta_f_bar)
    d = (run(t_plus) - run(t_minus)) / (2.0 * delta)
    return float(d.mean()), float(d.std(ddof=1) / np.sqrt(n_chains))


def simulate_mean_field(
    r_fn,
    phi: float,
    eta_lambda: float,
    alpha: float,
    lam0: float,
    c0: float,
    steps: int,
) -> np.ndarray:
    """Iterate the closed-loop map with a deterministic rate law r(lam).

    Returns a (steps + 1, 2) trajectory of (lam, c), initial state first.
    r_fn must map into [0, 1].
    """
    traj = np.empty((steps + 1, 2))
    lam, c = float(lam0), float(c0)
    traj[0] = lam, c
    for i in range(1, steps + 1):
        r = float(r_fn(lam))
        if not 0.0 <= r <= 1.0:
            raise ValueError("r_fn must map into [0, 1], got %r" % r)
        lam, c = (
            phi * lam - eta_lambda * (r - c),
            (1.0 - alpha) * c + alpha * r,
        )
        traj[i] = lam, c
    return traj


def geometric_decay_rate(norms: np.ndarray, tail_fraction: float = 0.5) -> float:
    """Least-squares geometric rate fitted to the tail of a norm sequence."""
    norms = np.asarray(norms, dtype=np.float64)
    keep = norms > 0
    norms = norms[keep]
    start = int(len(norms) * (1.0 - tail_fraction))
    y = np.log(norms[start:])
    x = np.arange(y.size, dtype=np.float64)
    slope = np.polyfit(x, y, 1)[0]
    return float(np.exp(slope))
