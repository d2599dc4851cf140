"""How AIS error shrinks with more chains and more temperature rungs.

A 3+2 model is small enough to enumerate exactly, so the estimator's error
is known, not guessed. ESS close to the chain count means the importance
weights are flat and the anneal is easy.
"""

from srtrbm.ais import ais_log_z
from srtrbm.core import RbmParams, rng_stream
from srtrbm.exact import enumerate_log_z


def main():
    rng = rng_stream(5, "ais-demo-model")
    params = RbmParams(
        w=rng.normal(0, 0.8, (3, 2)),
        b_v=rng.normal(0, 0.8, 3),
        b_h=rng.normal(0, 0.8, 2),
    )
    t = 1.0
    exact = enumerate_log_z(params, t)
    print("exact log Z  %.8f" % exact)
    print()
    print("chains   rungs   |error|      ESS      log-weight var")
    for n_chains, n_temps in (
        (20, 20), (50, 50), (100, 100), (200, 400), (500, 1000),
    ):
        est = ais_log_z(
            params, t, n_chains, n_temps, rng_stream(5, "ais-demo-run")
        )
        print(
            "%6d   %5d   %.2e   %7.1f   %.3e"
            % (n_chains, n_temps, abs(est.log_z - exact), est.ess,
               est.log_weight_variance)
        )


if __name__ == "__main__":
    main()
