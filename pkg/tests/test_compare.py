import numpy as np
import pytest

from srtrbm.compare import bayesian_bootstrap, cohens_d, compare_groups
from srtrbm.core import rng_stream


class TestCohensD:
    def test_hand_value(self):
        # means 3 and 2, both sample variances 2 -> pooled sd sqrt(2)
        assert cohens_d([2.0, 4.0], [1.0, 3.0]) == pytest.approx(1 / np.sqrt(2))

    def test_antisymmetric(self):
        a, b = [1.0, 2.0, 3.0], [2.0, 2.5, 4.0]
        assert cohens_d(a, b) == pytest.approx(-cohens_d(b, a))

    def test_zero_for_identical_groups(self):
        assert cohens_d([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            cohens_d([1.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            cohens_d([1.0, 1.0], [2.0, 2.0])


class TestBootstrap:
    def test_deterministic_given_stream(self):
        a = np.array([1.0, 2.0, 3.0, 4.0])
        b = np.array([0.5, 1.5, 2.5])
        r1 = bayesian_bootstrap(a, b, rng_stream(1, "boot"), n_draws=500)
        r2 = bayesian_bootstrap(a, b, rng_stream(1, "boot"), n_draws=500)
        assert r1 == r2

    def test_separated_groups_confident(self):
        a = np.array([10.0, 10.5, 11.0, 10.2, 10.8])
        b = np.array([1.0, 1.5, 0.5, 1.2, 0.9])
        res = bayesian_bootstrap(a, b, rng_stream(2, "boot"), n_draws=2000)
        assert res.p_positive > 0.999
        assert res.hdi_low > 0.0
        assert res.delta_mean == pytest.approx(a.mean() - b.mean(), abs=0.5)

    def test_hdi_covers_mean(self):
        rng = rng_stream(3, "boot")
        a = np.linspace(0, 1, 12)
        b = np.linspace(0.2, 1.2, 12)
        res = bayesian_bootstrap(a, b, rng, n_draws=3000)
        assert res.hdi_low <= res.delta_mean <= res.hdi_high

    def test_rope_probability(self):
        a = np.array([1.0, 1.1, 0.9, 1.05])
        res = bayesian_bootstrap(a, a + 0.001, rng_stream(4, "boot"),
                                 n_draws=1000, rope=0.5)
        assert res.p_rope > 0.99

    def test_fold_change_on_log_scale(self):
        # inputs on a log scale: fold change is exp of the mean difference
        a = np.log(np.array([8.0, 8.0, 8.0]))
        b = np.log(np.array([2.0, 2.0, 2.0]))
        res = bayesian_bootstrap(a, b, rng_stream(5, "boot"), n_draws=200)
        assert res.fold_change == pytest.approx(4.0)


class TestCompareGroups:
    def test_pairwise_rows(self):
        groups = {
            "adaptive": np.array([3.0, 3.2, 2.9]),
            "fixed1": np.array([2.0, 2.1, 1.8]),
            "fixedT": np.array([2.5, 2.4]),
        }
        rows = compare_groups(groups, rng_stream(6, "cmp"), n_draws=400)
        assert len(rows) == 3
        names = {(r["first"], r["second"]) for r in rows}
        assert ("adaptive", "fixed1") in names
        row = next(r for r in rows if r["second"] == "fixed1" and r["first"] == "adaptive")
        assert row["delta_mean"] > 0
        assert row["n_first"] == 3 and row["n_second"] == 3

    def test_requires_two_groups(self):
        with pytest.raises(ValueError):
            compare_groups({"only": np.array([1.0, 2.0])}, rng_stream(0, "x"))
