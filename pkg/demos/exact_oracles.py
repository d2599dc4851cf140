"""Exhaustive-enumeration cross-checks on a model small enough to enumerate.

Everything printed here is computed two independent ways.
"""

import numpy as np

from srtrbm.core import RbmParams, rng_stream
from srtrbm.exact import (
    FULL_ALTERNATING,
    block_gibbs_transition_matrix,
    conductance,
    enumerate_log_z,
    helmholtz_functional,
    spectral_gap,
    stationary_distribution,
)
from srtrbm.sampler import free_energy


def main():
    rng = rng_stream(12, "exact-demo")
    params = RbmParams(
        w=rng.normal(0, 0.6, (2, 2)),
        b_v=rng.normal(0, 0.6, 2),
        b_h=rng.normal(0, 0.6, 2),
    )
    t = 1.3

    # log Z by joint enumeration vs marginalizing hidden units first
    log_z = enumerate_log_z(params, t)
    vs = np.array(
        [[(i >> b) & 1 for b in range(2)] for i in range(4)], dtype=np.float64
    )
    fs = free_energy(params, t, vs)
    log_z_marginal = np.logaddexp.reduce(-fs / t)
    print("log Z joint      %.12f" % log_z)
    print("log Z marginal   %.12f" % log_z_marginal)

    # the Gibbs kernel leaves the Boltzmann distribution invariant
    pi = stationary_distribution(params, t)
    kernel = block_gibbs_transition_matrix(params, t, FULL_ALTERNATING)
    print("stationarity residual      %.2e" % np.abs(pi @ kernel - pi).max())

    # mixing speed: spectral gap against its conductance bounds
    gap = spectral_gap(kernel, pi)
    phi = conductance(kernel, pi)
    print("conductance Phi            %.6f" % phi)
    print("spectral gap gamma         %.6f" % gap)
    print("Phi^2/2 <= gamma <= 2 Phi  %s" % (phi**2 / 2 <= gap <= 2 * phi))

    # the Helmholtz functional is minimized by the Boltzmann distribution
    f_star = helmholtz_functional(pi, params, t)
    print("F[pi] + T log Z            %.2e" % (f_star + t * log_z))
    worse = 0
    for k in range(100):
        q = rng.dirichlet(np.ones(pi.size))
        worse += helmholtz_functional(q, params, t) > f_star
    print("random q with F[q] > F[pi] %d / 100" % worse)


if __name__ == "__main__":
    main()
