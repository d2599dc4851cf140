"""Exact brute-force oracles for small models.

Everything here enumerates the full joint state space, so results are exact
up to float64 rounding and usable as ground truth for the stochastic code.
Joint states are indexed with visible bits in the low-order positions:
x = v_index + (h_index << n_v), bit i of an index being unit i of its layer.
"""

from __future__ import annotations

import numpy as np

from .core import RbmParams
from .sampler import softplus

MAX_UNITS_SUM = 24  # enumeration cap for scalar sums (logZ, moments)
MAX_UNITS_KERNEL = 12  # enumeration cap for dense transition matrices

HIDDEN_HALF_STEP = "hidden"
VISIBLE_HALF_STEP = "visible"
FULL_ALTERNATING = "full"


def enumerate_states(n: int) -> np.ndarray:
    """(2^n, n) matrix of binary configurations; bit i is column i."""
    idx = np.arange(1 << n, dtype=np.uint32)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.float64)


def _check_size(params: RbmParams, cap: int, what: str) -> None:
    n = params.n_v + params.n_h
    if n > cap:
        raise ValueError("%s limited to %d total units, got %d" % (what, cap, n))


def _energy_grid(params: RbmParams) -> np.ndarray:
    """(2^n_v, 2^n_h) matrix of joint energies."""
    v = enumerate_states(params.n_v)
    h = enumerate_states(params.n_h)
    return -((v @ params.b_v)[:, None] + (h @ params.b_h)[None, :] + v @ params.w @ h.T)


def energy_vector(params: RbmParams) -> np.ndarray:
    """Joint energies in joint-index order (visible bits low-order)."""
    _check_size(params, MAX_UNITS_SUM, "energy enumeration")
    return _energy_grid(params).ravel(order="F")


def enumerate_log_z(params: RbmParams, t: float) -> float:
    """log Z(T) by direct summation over all 2^(n_v+n_h) joint states."""
    if not t > 0:
        raise ValueError("temperature must be > 0")
    _check_size(params, MAX_UNITS_SUM, "partition sum")
    v = enumerate_states(params.n_v)
    av = v @ params.b_v
    xh = v @ params.w + params.b_h  # hidden fields per visible config
    # Stream over hidden configurations in blocks to bound memory.
    h_all = enumerate_states(params.n_h)
    block = max(1, (1 << 22) // max(1, v.shape[0]))
    m = -np.inf
    s = 0.0
    for lo in range(0, h_all.shape[0], block):
        hb = h_all[lo : lo + block]
        # v.b_v + h.b_h + v W h == av + (v W + b_h) . h
        logw = (av[:, None] + xh @ hb.T) / t
        bm = float(logw.max())
        if bm > m:
            s *= np.exp(m - bm)
            m = bm
        s += float(np.exp(logw - m).sum())
    return m + float(np.log(s))


def stationary_distribution(params: RbmParams, t: float) -> np.ndarray:
    """Boltzmann law over joint states at temperature t, joint-index order."""
    if not t > 0:
        raise ValueError("temperature must be > 0")
    _check_size(params, MAX_UNITS_SUM, "stationary distribution")
    g = -_energy_grid(params) / t
    g -= g.max()
    p = np.exp(g)
    p /= p.sum()
    return p.ravel(order="F")


def _conditional_row_blocks(fields: np.ndarray, t: float, configs: np.ndarray):
    """exp(log p(target config | fields)) for every row of fields."""
    lp_on = -softplus(-fields / t)  # log sigma
    lp_off = -softplus(fields / t)  # log (1 - sigma)
    return np.exp(lp_on @ configs.T + lp_off @ (1.0 - configs).T)


def block_gibbs_transition_matrix(params: RbmParams, t: float, kind: str) -> np.ndarray:
    """Dense kernel of a half step or of the hidden-then-visible full step."""
    if not t > 0:
        raise ValueError("temperature must be > 0")
    _check_size(params, MAX_UNITS_KERNEL, "dense kernel")
    n_v, n_h = params.n_v, params.n_h
    nv_states, nh_states = 1 << n_v, 1 << n_h
    n = nv_states * nh_states
    v = enumerate_states(n_v)
    h = enumerate_states(n_h)
    if kind == HIDDEN_HALF_STEP:
        rows = _conditional_row_blocks(v @ params.w + params.b_h, t, h)
        p = np.zeros((n, n))
        for vi in range(nv_states):
            sel = vi + (np.arange(nh_states) << n_v)
            p[np.ix_(sel, sel)] = np.tile(rows[vi], (nh_states, 1))
        return p
    if kind == VISIBLE_HALF_STEP:
        rows = _conditional_row_blocks(h @ params.w.T + params.b_v, t, v)
        p = np.zeros((n, n))
        for hi in range(nh_states):
            sel = np.arange(nv_states) + (hi << n_v)
            p[np.ix_(sel, sel)] = np.tile(rows[hi], (nv_states, 1))
        return p
    if kind == FULL_ALTERNATING:
        ph = block_gibbs_transition_matrix(params, t, HIDDEN_HALF_STEP)
        pv = block_gibbs_transition_matrix(params, t, VISIBLE_HALF_STEP)
        return ph @ pv
    raise ValueError("kind must be one of hidden|visible|full, got %r" % kind)


def _check_kernel(kernel: np.ndarray, pi: np.ndarray) -> None:
    kernel = np.asarray(kernel)
    if kernel.ndim != 2 or kernel.shape[0] != kernel.shape[1]:
        raise ValueError("kernel must be square")
    if kernel.min() < -1e-12:
        raise ValueError("kernel has negative entries")
    if np.abs(kernel.sum(axis=1) - 1.0).max() > 1e-10:
        raise ValueError("non-stochastic kernel: rows must sum to 1")
    if pi.shape != (kernel.shape[0],):
        raise ValueError("pi length must match kernel")
    if pi.min() <= 0 or abs(pi.sum() - 1.0) > 1e-10:
        raise ValueError("pi must be a strictly positive distribution")
    if np.abs(pi @ kernel - pi).max() > 1e-8:
        raise ValueError("pi is not stationary for kernel")


def spectral_gap(kernel: np.ndarray, pi: np.ndarray) -> float:
    """1 minus the second-largest eigenvalue modulus after reversibilization.

    Uses the additive reversibilization (P + P*)/2, computed in the
    sqrt(pi)-conjugated basis where it is a symmetric matrix.
    """
    kernel = np.asarray(kernel, dtype=np.float64)
    pi = np.asarray(pi, dtype=np.float64)
    _check_kernel(kernel, pi)
    d = np.sqrt(pi)
    a = kernel * (d[:, None] / d[None, :])
    s = (a + a.T) / 2.0
    eigs = np.linalg.eigvalsh(s)
    if abs(eigs[-1] - 1.0) > 1e-8:
        raise ValueError("reversibilized kernel lost its unit eigenvalue")
    slem = abs(eigs[0])
    if eigs.size > 1:
        slem = max(slem, abs(eigs[-2]))
    return float(1.0 - slem)


def coordinate_cut_conductance(
    params: RbmParams, t: float, j: int, kernel: np.ndarray, pi: np.ndarray
) -> float:
    """Conductance of the cut S = {states with hidden unit j on}.

    Uses the complement cut when pi(S) > 1/2. Exact flow sum
    Q(S, S^c) / pi(S) under the supplied kernel and stationary law.
    """
    if not 0 <= j < params.n_h:
        raise ValueError("hidden index out of range")
    kernel = np.asarray(kernel, dtype=np.float64)
    pi = np.asarray(pi, dtype=np.float64)
    _check_kernel(kernel, pi)
    n = pi.size
    mask = ((np.arange(n) >> (params.n_v + j)) & 1) == 1
    mass = float(pi[mask].sum())
    if mass <= 0.0 or mass >= 1.0:
        raise ValueError("degenerate cut: pi(S) is 0 or 1")
    if mass > 0.5:
        mask = ~mask
        mass = 1.0 - mass
    q = float((pi[mask, None] * kernel[np.ix_(mask, ~mask)]).sum())
    return q / mass


def conductance(kernel: np.ndarray, pi: np.ndarray) -> float:
    """Full conductance: min over all cuts with 0 < pi(S) <= 1/2."""
    kernel = np.asarray(kernel, dtype=np.float64)
    pi = np.asarray(pi, dtype=np.float64)
    _check_kernel(kernel, pi)
    n = pi.size
    if n > 16:
        raise ValueError("full conductance limited to 16 states")
    flow = pi[:, None] * kernel
    members = enumerate_states(n)  # one indicator row per subset of states
    members = members[1:-1]  # drop empty and full sets
    masses = members @ pi
    qs = ((members @ flow) * (1.0 - members)).sum(axis=1)
    keep = masses <= 0.5 + 1e-15
    return float((qs[keep] / masses[keep]).min())


def exact_moments(params: RbmParams, t: float):
    """Boltzmann moments (E[v h^T], E[v], E[h]) at temperature t."""
    if not t > 0:
        raise ValueError("temperature must be > 0")
    _check_size(params, 20, "moment enumeration")
    g = -_energy_grid(params) / t
    g -= g.max()
    p = np.exp(g)
    p /= p.sum()
    v = enumerate_states(params.n_v)
    h = enumerate_states(params.n_h)
    return v.T @ p @ h, v.T @ p.sum(axis=1), h.T @ p.sum(axis=0)


def helmholtz_functional(p: np.ndarray, params: RbmParams, t: float) -> float:
    """Variational free energy E_p[E] - T S(p) over joint distributions.

    Minimized by the Boltzmann law, where it equals -T log Z.
    """
    if not t > 0:
        raise ValueError("temperature must be > 0")
    p = np.asarray(p, dtype=np.float64)
    e = energy_vector(params)
    if p.shape != e.shape:
        raise ValueError("p must have one entry per joint state")
    if p.min() < 0 or abs(p.sum() - 1.0) > 1e-10:
        raise ValueError("p must be a distribution")
    nz = p > 0
    entropy = -float((p[nz] * np.log(p[nz])).sum())
    return float(p @ e) - t * entropy


# ---------------------------------------------------------------------------
# Pinned small-model fixtures used by the freezing and conductance checks.

_SIGNS_4X4 = np.array(
    [
        [-1.0, 1.0, -1.0, 1.0],
        [1.0, -1.0, 1.0, -1.0],
        [-1.0, 1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ]
)


def pinned_freezing_model(beta: float) -> RbmParams:
    """4+4 model whose minimum field magnitude is exactly beta.

    Hidden unit 0 carries the minimum (unscaled magnitude 1, attained at a
    rare visible configuration); every other unit is pinned by a field of
    magnitude at least 5.9. Scaling by beta scales every field by beta.
    """
    w = 0.05 * _SIGNS_4X4
    b_h = np.array([1.1, 6.1, -6.1, 6.1])
    b_v = np.array([-6.1, 6.1, -6.1, 6.1])
    return RbmParams(w=beta * w, b_v=beta * b_v, b_h=beta * b_h)


def pinned_freezing_start(params: RbmParams) -> np.ndarray:
    """Visible configuration favored by the pinned model's biases."""
    return (params.b_v > 0).astype(np.float64)


def pinned_cut_model(beta: float) -> RbmParams:
    """2+2 model with a bottleneck cut on hidden unit 0.

    Hidden unit 0 sees a field of +M*beta on one visible configuration,
    -M*beta on another, and +/-beta (the minimum, unscaled magnitude 1) on
    the remaining low-mass configurations; visible biases balance the
    stationary mass across the cut while keeping the minimum-field states
    rare. Constants were tuned against the exact oracle so the cut
    conductance stays below 0.25 * exp(-beta) for beta in {1, 2, 4, 8}.
    """
    m = 6.0
    w = np.array(
        [
            [(m + 1.0) * beta, 0.0],
            [(1.0 - m) * beta, 0.0],
        ]
    )
    b_h = np.array([-beta, 0.0])
    b_v = np.array([-m * beta + np.log(6.0), np.log(5.0)])
    return RbmParams(w=w, b_v=b_v, b_h=b_h)
