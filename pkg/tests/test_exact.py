import math

import numpy as np
import pytest

from srtrbm.core import RbmParams, rng_stream
from srtrbm.exact import (
    FULL_ALTERNATING,
    HIDDEN_HALF_STEP,
    VISIBLE_HALF_STEP,
    block_gibbs_transition_matrix,
    conductance,
    coordinate_cut_conductance,
    energy_vector,
    enumerate_log_z,
    enumerate_states,
    exact_moments,
    helmholtz_functional,
    pinned_cut_model,
    pinned_freezing_model,
    pinned_freezing_start,
    spectral_gap,
    stationary_distribution,
)
from srtrbm.sampler import energy, free_energy


def random_model(rng, n_v=2, n_h=2, scale=1.0):
    return RbmParams(
        w=rng.normal(0, scale, (n_v, n_h)),
        b_v=rng.normal(0, scale, n_v),
        b_h=rng.normal(0, scale, n_h),
    )


class TestEnumeration:
    def test_states_bit_convention(self):
        s = enumerate_states(3)
        assert s.shape == (8, 3)
        assert s[5].tolist() == [1.0, 0.0, 1.0]  # index 5 = 0b101, bit i -> unit i

    def test_log_z_frozen_value(self, tiny_params):
        # Frozen from a pure-python 16-state enumeration with math.exp.
        assert enumerate_log_z(tiny_params, 1.0) == pytest.approx(
            4.177260618746611, rel=1e-14
        )
        assert enumerate_log_z(tiny_params, 1.7) == pytest.approx(
            3.4538091216151194, rel=1e-14
        )

    def test_log_z_matches_free_energy_route(self, small_params):
        # Independent route: marginalize hidden units analytically, then
        # logsumexp over visible states only.
        for t in (0.5, 1.0, 2.0):
            fe = free_energy(small_params, t, enumerate_states(3))
            m = (-fe / t).max()
            lz = m + math.log(np.exp(-fe / t - m).sum())
            assert enumerate_log_z(small_params, t) == pytest.approx(float(lz))

    def test_energy_vector_layout(self, tiny_params):
        ev = energy_vector(tiny_params)
        # joint index: visible bits low order, hidden bits high order
        idx = 1 + (2 << 2)  # v = [1,0], h = [0,1]
        assert ev[idx] == pytest.approx(
            float(energy(tiny_params, np.array([1.0, 0.0]), np.array([0.0, 1.0])))
        )

    def test_stationary_is_boltzmann(self, tiny_params):
        pi = stationary_distribution(tiny_params, 1.3)
        ev = energy_vector(tiny_params)
        direct = np.exp(-ev / 1.3)
        direct /= direct.sum()
        assert pi == pytest.approx(direct, rel=1e-12)
        assert pi.sum() == pytest.approx(1.0)

    def test_size_cap(self):
        big = RbmParams(w=np.zeros((20, 20)), b_v=np.zeros(20), b_h=np.zeros(20))
        with pytest.raises(ValueError):
            enumerate_log_z(big, 1.0)


class TestKernels:
    @pytest.fixture
    def model(self):
        return random_model(np.random.default_rng(42))

    def test_rows_are_distributions(self, model):
        for kind in (HIDDEN_HALF_STEP, VISIBLE_HALF_STEP, FULL_ALTERNATING):
            k = block_gibbs_transition_matrix(model, 1.0, kind)
            assert k.shape == (16, 16)
            assert (k >= 0).all()
            assert k.sum(axis=1) == pytest.approx(np.ones(16))

    def test_half_steps_reversible(self, model):
        pi = stationary_distribution(model, 1.0)
        for kind in (HIDDEN_HALF_STEP, VISIBLE_HALF_STEP):
            k = block_gibbs_transition_matrix(model, 1.0, kind)
            flow = pi[:, None] * k
            assert np.abs(flow - flow.T).max() < 1e-14

    def test_full_kernel_composition(self, model):
        kh = block_gibbs_transition_matrix(model, 1.0, HIDDEN_HALF_STEP)
        kv = block_gibbs_transition_matrix(model, 1.0, VISIBLE_HALF_STEP)
        kf = block_gibbs_transition_matrix(model, 1.0, FULL_ALTERNATING)
        assert kf == pytest.approx(kh @ kv)

    def test_full_kernel_preserves_boltzmann(self, model):
        pi = stationary_distribution(model, 0.7)
        kf = block_gibbs_transition_matrix(model, 0.7, FULL_ALTERNATING)
        assert pi @ kf == pytest.approx(pi, abs=1e-14)

    def test_single_step_probability_from_conditionals(self, model):
        # One full step from a fixed joint state, recomputed by hand from
        # the two conditional factorizations.
        from srtrbm.sampler import conditional_probs

        kf = block_gibbs_transition_matrix(model, 1.0, FULL_ALTERNATING)
        v0 = np.array([1.0, 0.0])
        start = 1  # v = [1,0], h = [0,0]
        ph = conditional_probs(model, 1.0, v=v0)
        probs = np.zeros(16)
        for hi in range(4):
            h = np.array([(hi >> j) & 1 for j in range(2)], float)
            w_h = np.prod(np.where(h == 1, ph, 1 - ph))
            pv = conditional_probs(model, 1.0, h=h)
            for vi in range(4):
                v = np.array([(vi >> i) & 1 for i in range(2)], float)
                w_v = np.prod(np.where(v == 1, pv, 1 - pv))
                probs[vi + (hi << 2)] += w_h * w_v
        assert kf[start] == pytest.approx(probs, rel=1e-12)


class TestSpectralGap:
    def test_two_state_hand_kernel(self):
        # [[1-a, a], [b, 1-b]] has eigenvalues {1, 1-a-b}; pi = (b, a)/(a+b)
        a, b = 0.3, 0.2
        k = np.array([[1 - a, a], [b, 1 - b]])
        pi = np.array([b, a]) / (a + b)
        assert spectral_gap(k, pi) == pytest.approx(a + b)

    def test_periodic_kernel_has_zero_gap(self):
        # Deterministic swap: eigenvalues {1, -1}
        k = np.array([[0.0, 1.0], [1.0, 0.0]])
        pi = np.array([0.5, 0.5])
        assert spectral_gap(k, pi) == pytest.approx(0.0, abs=1e-12)

    def test_gap_positive_for_generic_model(self):
        model = random_model(np.random.default_rng(3))
        pi = stationary_distribution(model, 1.0)
        kf = block_gibbs_transition_matrix(model, 1.0, FULL_ALTERNATING)
        assert spectral_gap(kf, pi) > 0.0


class TestConductance:
    def test_brute_force_small(self):
        model = random_model(np.random.default_rng(7))
        pi = stationary_distribution(model, 1.0)
        kf = block_gibbs_transition_matrix(model, 1.0, FULL_ALTERNATING)
        phi = conductance(kf, pi)
        # independent brute force over all proper subsets
        n = pi.size
        best = np.inf
        for mask in range(1, 2**n - 1):
            sel = np.array([(mask >> i) & 1 for i in range(n)], bool)
            m = pi[sel].sum()
            if m > 0.5:
                continue
            q = (pi[sel, None] * kf[np.ix_(sel, ~sel)]).sum()
            best = min(best, q / m)
        assert phi == pytest.approx(float(best), rel=1e-12)

    def test_coordinate_cut_dominates_conductance(self):
        model = pinned_cut_model(2.0)
        pi = stationary_distribution(model, 1.0)
        kf = block_gibbs_transition_matrix(model, 1.0, FULL_ALTERNATING)
        cut = coordinate_cut_conductance(model, 1.0, 0, kf, pi)
        assert conductance(kf, pi) <= cut + 1e-15

    def test_cheeger_sandwich_random_models(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            model = random_model(rng, scale=1.5)
            pi = stationary_distribution(model, 1.0)
            kf = block_gibbs_transition_matrix(model, 1.0, FULL_ALTERNATING)
            phi = conductance(kf, pi)
            gap = spectral_gap(kf, pi)
            assert phi**2 / 2 <= gap + 1e-12
            assert gap <= 2 * phi + 1e-12


class TestHelmholtz:
    def test_boltzmann_attains_minus_t_log_z(self, tiny_params):
        pi = stationary_distribution(tiny_params, 1.4)
        val = helmholtz_functional(pi, tiny_params, 1.4)
        assert val == pytest.approx(-1.4 * enumerate_log_z(tiny_params, 1.4))

    def test_boltzmann_minimizes(self, tiny_params):
        pi = stationary_distribution(tiny_params, 1.0)
        base = helmholtz_functional(pi, tiny_params, 1.0)
        rng = np.random.default_rng(0)
        for _ in range(10):
            q = pi + 0.05 * rng.normal(0, pi, pi.size)
            q = np.abs(q)
            q /= q.sum()
            assert helmholtz_functional(q, tiny_params, 1.0) >= base - 1e-12


class TestExactMoments:
    def test_against_direct_sum(self, tiny_params):
        vh, v_mean, h_mean = exact_moments(tiny_params, 1.0)
        pi = stationary_distribution(tiny_params, 1.0)
        xs_v = enumerate_states(2)
        vh_direct = np.zeros((2, 2))
        v_direct = np.zeros(2)
        h_direct = np.zeros(2)
        for idx in range(16):
            v = xs_v[idx & 3]
            h = xs_v[idx >> 2]
            vh_direct += pi[idx] * np.outer(v, h)
            v_direct += pi[idx] * v
            h_direct += pi[idx] * h
        assert vh == pytest.approx(vh_direct, rel=1e-12)
        assert v_mean == pytest.approx(v_direct, rel=1e-12)
        assert h_mean == pytest.approx(h_direct, rel=1e-12)


class TestPinnedFixtures:
    def test_freezing_model_scales_linearly(self):
        p1 = pinned_freezing_model(1.0)
        p3 = pinned_freezing_model(3.0)
        assert p3.w == pytest.approx(3 * p1.w)
        assert p3.b_v == pytest.approx(3 * p1.b_v)
        assert p3.b_h == pytest.approx(3 * p1.b_h)

    def test_freezing_fields_dominated_by_beta(self):
        # The slowest unit sits at field magnitude 1.2 beta: slow enough to
        # govern the flip rate, diluted enough to clear the envelope bound.
        for beta in (1.0, 2.0, 4.0):
            p = pinned_freezing_model(beta)
            v0 = pinned_freezing_start(p)
            fields = v0 @ p.w + p.b_h
            assert np.abs(fields).min() == pytest.approx(1.2 * beta)
            assert np.abs(p.b_v).min() >= 6 * beta

    def test_freezing_one_sweep_flip_rate_under_envelope(self):
        # Exact expected two-layer flip rate of a single sweep started from
        # the pinned configuration, marginalizing all 16 hidden outcomes.
        from itertools import product

        from srtrbm.sampler import sigmoid

        for beta in (1.0, 2.0, 4.0, 8.0):
            p = pinned_freezing_model(beta)
            v0 = pinned_freezing_start(p)
            fh = v0 @ p.w + p.b_h
            h0 = (fh > 0).astype(float)
            ph = sigmoid(fh)
            e_hflips = float(np.where(h0 == 1, 1 - ph, ph).sum())
            e_vflips = 0.0
            for bits in product((0, 1), repeat=4):
                h = np.array(bits, float)
                w_h = float(np.prod(np.where(h == 1, ph, 1 - ph)))
                pv = sigmoid(h @ p.w.T + p.b_v)
                e_vflips += w_h * float(np.where(v0 == 1, 1 - pv, pv).sum())
            r = 0.5 * (e_vflips / 4 + e_hflips / 4)
            assert r <= 0.25 * math.exp(-beta)

    def test_cut_model_stationary_mass_balance(self):
        # The pinned cut keeps both sides of the hidden-unit-0 split at
        # nonvanishing stationary mass, so the cut stays well posed.
        for beta in (1.0, 4.0, 8.0):
            p = pinned_cut_model(beta)
            pi = stationary_distribution(p, 1.0)
            mask = ((np.arange(16) >> 2) & 1) == 1
            mass = pi[mask].sum()
            assert 1e-4 < mass < 1.0 - 1e-4

    def test_cut_conductance_decays_like_envelope(self):
        for beta in (1.0, 2.0, 4.0, 8.0):
            p = pinned_cut_model(beta)
            pi = stationary_distribution(p, 1.0)
            kf = block_gibbs_transition_matrix(p, 1.0, FULL_ALTERNATING)
            cut = coordinate_cut_conductance(p, 1.0, 0, kf, pi)
            assert cut <= 0.25 * math.exp(-beta)
