import math

import numpy as np
import pytest

from inarlab import (
    Bernoulli,
    Empirical,
    Poisson,
    Regime,
    growth_check,
    m2_exact,
    mean_exact,
    mean_limit,
    moment_table,
    validate,
    var_exact,
    var_from_martingale_sums,
)
from inarlab.errors import HorizonTooLarge, WrongRegime
from inarlab.moments import Normalization

from oracles import enumerate_moments


class TestMeanExact:
    def test_single_lag_hand_value(self):
        assert mean_exact(validate([0.5], Poisson(1.0)), 3) == pytest.approx([1.0, 1.5, 1.75])

    def test_degenerate_is_flat(self):
        spec = validate([0.0, 0.0], Poisson(2.5))
        assert mean_exact(spec, 10) == pytest.approx(np.full(10, 2.5))

    def test_partial_sums_grow_linearly(self):
        spec = validate([1.0], Poisson(1.0))
        assert mean_exact(spec, 50) == pytest.approx(np.arange(1, 51, dtype=float))

    def test_horizon_cap(self):
        with pytest.raises(HorizonTooLarge):
            mean_exact(validate([0.5], Poisson(1.0)), 100_001)


class TestVarExact:
    def test_degenerate_is_innovation_variance(self):
        spec = validate([0.0], Poisson(3.0))
        assert var_exact(spec, 8) == pytest.approx(np.full(8, 3.0))

    def test_partial_sums(self):
        spec = validate([1.0], Poisson(2.0))
        assert var_exact(spec, 30) == pytest.approx(2.0 * np.arange(1, 31))

    def test_enumeration_oracle_bernoulli(self):
        spec = validate([0.5, 0.5], Bernoulli(0.5))
        means, variances = enumerate_moments([0.5, 0.5], {0: 0.5, 1: 0.5}, 5)
        assert np.max(np.abs(mean_exact(spec, 5) - [float(m) for m in means])) < 1e-12
        assert np.max(np.abs(var_exact(spec, 5) - [float(v) for v in variances])) < 1e-12

    def test_enumeration_oracle_empirical(self):
        pmf = {0: 0.5, 2: 0.25, 3: 0.25}
        spec = validate([0.75], Empirical(pmf))
        means, variances = enumerate_moments([0.75], pmf, 5)
        assert np.max(np.abs(mean_exact(spec, 5) - [float(m) for m in means])) < 1e-12
        assert np.max(np.abs(var_exact(spec, 5) - [float(v) for v in variances])) < 1e-12

    def test_enumeration_oracle_two_lags_asymmetric(self):
        pmf = {0: 0.5, 1: 0.5}
        spec = validate([0.25, 0.5], Empirical(pmf))
        means, variances = enumerate_moments([0.25, 0.5], pmf, 5)
        assert np.max(np.abs(mean_exact(spec, 5) - [float(m) for m in means])) < 1e-12
        assert np.max(np.abs(var_exact(spec, 5) - [float(v) for v in variances])) < 1e-12

    def test_martingale_sum_form_agrees(self):
        rng = np.random.default_rng(43)
        for _ in range(100):
            p = int(rng.integers(1, 5))
            alphas = rng.random(p)
            alphas[-1] = max(alphas[-1], 1e-3)
            alphas *= rng.uniform(0.3, 1.1) / alphas.sum()
            alphas = np.minimum(alphas, 1.0)
            spec = validate(alphas, Poisson(float(rng.uniform(0.1, 4.0))))
            a = var_exact(spec, 200)
            b = var_from_martingale_sums(spec, 200)
            assert np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))) < 1e-9


class TestM2Exact:
    def test_first_step_is_innovation_variance(self):
        spec = validate([0.3, 0.6], Poisson(2.0))
        assert m2_exact(spec, 1)[0] == pytest.approx(2.0)

    def test_binary_coefficients_keep_it_flat(self):
        spec = validate([1.0], Poisson(1.7))
        assert m2_exact(spec, 20) == pytest.approx(np.full(20, 1.7))

    def test_hand_chained_value(self):
        spec = validate([0.5, 0.5], Poisson(1.0))
        assert m2_exact(spec, 3)[2] == pytest.approx(1.625, abs=1e-14)


class TestMeanLimit:
    def test_unstable_per_step(self):
        lim = mean_limit(validate([0.5, 0.5], Poisson(1.0)))
        assert lim.regime is Regime.UNSTABLE
        assert lim.normalization is Normalization.PER_STEP
        assert lim.value == pytest.approx(2.0 / 3.0)

    def test_stable_plain(self):
        lim = mean_limit(validate([0.5], Poisson(1.0)))
        assert lim.normalization is Normalization.PLAIN
        assert lim.value == pytest.approx(2.0)
        # mean_exact actually converges there
        assert mean_exact(validate([0.5], Poisson(1.0)), 100)[-1] == pytest.approx(2.0, rel=1e-9)

    def test_explosive_subsequence(self):
        spec = validate([0.3, 0.9], Poisson(1.0))
        lim = mean_limit(spec)
        assert lim.normalization is Normalization.GEOMETRIC_SUBSEQUENCE
        rho = (0.3 + math.sqrt(3.69)) / 2.0
        expected = rho / ((rho - 1.0) * (2.0 * rho - 0.3))
        assert lim.value == pytest.approx(expected, rel=1e-10)
        # the normalized mean sequence approaches it
        seq = mean_exact(spec, 200) * lim.rho ** -np.arange(1, 201)
        assert seq[-1] == pytest.approx(lim.value, rel=1e-3)

    def test_explosive_imprimitive_subsequence(self):
        # support {2, 4}: d = 2, limit taken along every other index
        spec = validate([0.0, 0.6, 0.0, 0.9], Poisson(1.0))
        lim = mean_limit(spec)
        assert lim.d == 2
        seq = mean_exact(spec, 400)
        ratios = seq[np.arange(2, 401, 2) - 1] * lim.rho ** -np.arange(2, 401, 2)
        assert ratios[-1] == pytest.approx(lim.value, rel=1e-3)

    def test_degenerate_limit_is_innovation_mean(self):
        lim = mean_limit(validate([0.0], Poisson(0.7)))
        assert lim.value == pytest.approx(0.7)


class TestGrowthCheck:
    def test_flagship_ratio_at_horizon(self):
        report = growth_check(validate([0.5, 0.5], Poisson(1.0)), 10_000)
        assert 0.66 <= report.mean_ratio_at_K <= 0.674
        assert abs(report.mean_ratio_at_K - report.per_step_limit) < 0.01 * report.per_step_limit

    def test_partial_sums_exact(self):
        report = growth_check(validate([1.0], Poisson(2.0)), 500)
        assert report.max_mean_over_k == pytest.approx(2.0)
        assert report.mean_ratio_at_K == pytest.approx(2.0)

    def test_m2_over_k_bounded(self):
        spec = validate([0.5, 0.5], Poisson(1.0))
        report = growth_check(spec, 10_000)
        bound = spec.sigma_alpha_sq * spec.mu_eps / spec.phi_prime_at_one * 1.05 + spec.sigma_eps_sq
        assert report.max_m2_over_k <= bound

    def test_wrong_regime(self):
        with pytest.raises(WrongRegime):
            growth_check(validate([0.5], Poisson(1.0)), 100)


class TestMomentTable:
    def test_bundle_consistent(self):
        spec = validate([0.4, 0.6], Poisson(1.0))
        table = moment_table(spec, 50)
        assert table.K == 50
        assert table.mean == pytest.approx(mean_exact(spec, 50))
        assert table.variance == pytest.approx(var_exact(spec, 50))
        assert table.m2 == pytest.approx(m2_exact(spec, 50))
        assert np.all(table.mean >= 0) and np.all(table.variance >= 0) and np.all(table.m2 >= 0)
