"""Effect sizes and Bayesian bootstrap comparisons between run groups.

Comparisons are unpaired. No Bayes factors are computed anywhere; the
reported evidence summaries are posterior tail probabilities, highest
density intervals, and a region of practical equivalence.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np


def cohens_d(a, b) -> float:
    """Cohen's d with the unbiased pooled variance."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError("each group needs at least 2 values")
    pooled = ((a.size - 1) * a.var(ddof=1) + (b.size - 1) * b.var(ddof=1)) / (
        a.size + b.size - 2
    )
    if pooled == 0:
        raise ValueError("zero pooled variance")
    return float((a.mean() - b.mean()) / np.sqrt(pooled))


@dataclass(frozen=True)
class BootstrapResult:
    delta_mean: float  # posterior mean of mean(a) - mean(b)
    delta_sd: float
    hdi_low: float  # narrowest 95% interval
    hdi_high: float
    p_positive: float  # P(delta > 0)
    p_rope: float | None  # P(|delta| < rope), None when no rope given
    fold_change: float  # exp(delta_mean), meaningful for log-scale inputs

    def as_dict(self) -> dict:
        return asdict(self)


def _hdi(draws: np.ndarray, mass: float = 0.95) -> tuple[float, float]:
    draws = np.sort(draws)
    n = draws.size
    k = max(1, int(np.ceil(mass * n)))
    if k >= n:
        return float(draws[0]), float(draws[-1])
    widths = draws[k:] - draws[: n - k]
    i = int(widths.argmin())
    return float(draws[i]), float(draws[i + k])


def bayesian_bootstrap(
    a,
    b,
    rng: np.random.Generator,
    n_draws: int = 4000,
    rope: float | None = None,
) -> BootstrapResult:
    """Posterior of mean(a) - mean(b) under Dirichlet(1, ..., 1) weights."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError("each group needs at least 2 values")
    if n_draws < 100:
        raise ValueError("n_draws must be >= 100")
    wa = rng.dirichlet(np.ones(a.size), size=n_draws)
    wb = rng.dirichlet(np.ones(b.size), size=n_draws)
    delta = wa @ a - wb @ b
    lo, hi = _hdi(delta)
    p_rope = float((np.abs(delta) < rope).mean()) if rope is not None else None
    return BootstrapResult(
        delta_mean=float(delta.mean()),
        delta_sd=float(delta.std(ddof=1)),
        hdi_low=lo,
        hdi_high=hi,
        p_positive=float((delta > 0).mean()),
        p_rope=p_rope,
        fold_change=float(np.exp(delta.mean())),
    )


def compare_groups(
    groups: dict[str, np.ndarray],
    rng: np.random.Generator,
    n_draws: int = 4000,
    rope: float | None = None,
) -> list[dict]:
    """All pairwise comparisons between named groups, first minus second."""
    if len(groups) < 2:
        raise ValueError("need at least two groups to compare")
    names = sorted(groups)
    out = []
    for i, first in enumerate(names):
        for second in names[i + 1 :]:
            a = np.asarray(groups[first], dtype=np.float64)
            b = np.asarray(groups[second], dtype=np.float64)
            boot = bayesian_bootstrap(a, b, rng, n_draws=n_draws, rope=rope)
            out.append(
                {
                    "first": first,
                    "second": second,
                    "n_first": int(a.size),
                    "n_second": int(b.size),
                    "mean_first": float(a.mean()),
                    "mean_second": float(b.mean()),
                    "sd_first": float(a.std(ddof=1)),
                    "sd_second": float(b.std(ddof=1)),
                    "cohens_d": cohens_d(a, b),
                    **boot.as_dict(),
                }
            )
    return out
