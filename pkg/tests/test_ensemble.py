import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import beta as beta_dist
from scipy.stats import binom

from lmbd import (
    CountSample,
    EnsembleSpec,
    ModelParams,
    beta_binomial_accuracy,
    binomial_accuracy,
    ensemble_accuracy,
    fit_mle,
    majority_threshold,
    marginal_pi,
    model_comparison,
    enumerate_pmf_oracle,
    pmf,
    sample,
)


class TestMajorityThreshold:
    def test_defining_cases(self):
        assert majority_threshold(3) == 1
        assert majority_threshold(4) == 2
        assert majority_threshold(1) == 0

    def test_parity_rule(self):
        for n in range(1, 30):
            q = majority_threshold(n)
            assert q == (n // 2 if n % 2 == 0 else (n - 1) // 2)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            majority_threshold(0)


class TestEnsembleAccuracy:
    def test_binomial_reduction_value(self):
        spec = EnsembleSpec(3, ModelParams(3, 0.6, 1.0))
        assert ensemble_accuracy(spec) == pytest.approx(0.648, abs=1e-12)

    def test_extreme_negative_association_approaches_psi(self):
        # odd n: the two-point limit puts mass psi above the threshold
        spec = EnsembleSpec(5, ModelParams(5, 0.6, 1e6))
        assert ensemble_accuracy(spec) == pytest.approx(0.6, abs=1e-4)

    def test_matches_enumeration_tail(self):
        p = ModelParams(9, 0.55, 0.8)
        q = majority_threshold(9)
        tail = float(enumerate_pmf_oracle(p).probs()[q + 1:].sum())
        assert ensemble_accuracy(EnsembleSpec(9, p)) == pytest.approx(tail, abs=1e-12)

    def test_size_mismatch_rejected(self):
        with pytest.raises(ValueError):
            EnsembleSpec(4, ModelParams(5, 0.5, 1.0))


class TestBinomialAccuracy:
    def test_hand_value(self):
        assert binomial_accuracy(3, 0.6) == pytest.approx(0.648, abs=1e-12)

    def test_single_classifier(self):
        assert binomial_accuracy(1, 0.37) == pytest.approx(0.37, abs=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 5, 10, 25, 50])
    @pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
    def test_reduction_identity(self, n, p):
        spec = EnsembleSpec(n, ModelParams(n, p, 1.0))
        assert ensemble_accuracy(spec) == pytest.approx(
            binomial_accuracy(n, p), abs=1e-12)

    def test_matches_scipy_tail(self):
        for n, p in [(7, 0.3), (12, 0.65)]:
            q = majority_threshold(n)
            assert binomial_accuracy(n, p) == pytest.approx(
                float(binom.sf(q, n, p)), abs=1e-12)

    def test_pi_domain(self):
        with pytest.raises(ValueError):
            binomial_accuracy(3, 1.2)


class TestBetaBinomialAccuracy:
    def test_concentrated_beta_approaches_binomial(self):
        got = beta_binomial_accuracy(3, 1e6, 1e6)
        assert got == pytest.approx(binomial_accuracy(3, 0.5), abs=1e-4)

    def test_uniform_mixture(self):
        # Beta(1,1) mixture is discrete-uniform on {0..n}
        assert beta_binomial_accuracy(3, 1.0, 1.0) == pytest.approx(0.5, abs=1e-12)

    def test_quadrature_oracle(self):
        n, a, b = 5, 2.0, 3.0
        q = majority_threshold(n)

        def integrand(p):
            return float(binom.sf(q, n, p)) * beta_dist.pdf(p, a, b)

        expect, _ = quad(integrand, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12)
        assert beta_binomial_accuracy(n, a, b) == pytest.approx(expect, abs=1e-8)

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            beta_binomial_accuracy(3, 0.0, 1.0)
        with pytest.raises(ValueError):
            beta_binomial_accuracy(3, 1.0, -2.0)


def expected_count_sample(params: ModelParams, total: int = 10 ** 6) -> CountSample:
    counts = np.round(pmf(params).probs() * total).astype(int)
    return CountSample(n=params.n, counts=tuple(int(c) for c in counts))


def drawn_sample(params: ModelParams, count: int, seed: int) -> CountSample:
    draws = sample(params, count, seed)
    counts = np.bincount(draws, minlength=params.n + 1)
    return CountSample(n=params.n, counts=tuple(int(c) for c in counts))


class TestCountSample:
    def test_from_pairs_accumulates(self):
        s = CountSample.from_pairs(3, [(0, 2), (2, 5), (2, 1)])
        assert s.counts == (2, 0, 6, 0)
        assert s.total == 8
        assert s.distinct_values == 2

    def test_validation(self):
        with pytest.raises(ValueError):
            CountSample(n=3, counts=(1, 2, 3))
        with pytest.raises(ValueError):
            CountSample(n=2, counts=(0, -1, 0))
        with pytest.raises(ValueError):
            CountSample(n=2, counts=(0, 0, 0))
        with pytest.raises(ValueError):
            CountSample.from_pairs(2, [(3, 1)])


class TestFitMle:
    def test_noiseless_recovery(self):
        truth = ModelParams(7, 0.45, 1.5)
        fit = fit_mle(expected_count_sample(truth))
        assert fit.converged
        assert fit.psi_hat == pytest.approx(0.45, abs=1e-3)
        assert fit.omega_hat == pytest.approx(1.5, abs=1e-3)

    @pytest.mark.parametrize("n", [5, 9])
    @pytest.mark.parametrize("psi", [0.3, 0.45, 0.6])
    @pytest.mark.parametrize("omega", [0.7, 1.5])
    def test_noiseless_recovery_grid(self, n, psi, omega):
        fit = fit_mle(expected_count_sample(ModelParams(n, psi, omega)))
        assert fit.psi_hat == pytest.approx(psi, abs=1e-3)
        assert fit.omega_hat == pytest.approx(omega, abs=1e-3)

    def test_sampled_recovery_within_three_se(self):
        truth = ModelParams(9, 0.6, 0.8)
        fit = fit_mle(drawn_sample(truth, 10 ** 5, seed=31415))
        assert fit.converged
        assert fit.standard_errors is not None
        se_psi, se_omega = fit.standard_errors
        assert abs(fit.psi_hat - 0.6) <= 3.0 * se_psi
        assert abs(fit.omega_hat - 0.8) <= 3.0 * se_omega

    def test_binomial_data_gives_omega_near_one(self):
        fit = fit_mle(drawn_sample(ModelParams(5, 0.3, 1.0), 10 ** 5, seed=777))
        assert fit.converged
        se_psi, se_omega = fit.standard_errors
        assert abs(fit.omega_hat - 1.0) <= 3.0 * se_omega
        assert abs(fit.psi_hat - 0.3) <= 3.0 * se_psi

    def test_sufficient_statistics_match_at_optimum(self):
        # exponential-family moment matching: the fitted model's
        # E[y] and E[y (n-y)] equal the sample averages
        truth = ModelParams(7, 0.4, 1.3)
        s = drawn_sample(truth, 20000, seed=5)
        fit = fit_mle(s)
        counts = np.asarray(s.counts, dtype=float)
        y = np.arange(8)
        probs = pmf(ModelParams(7, fit.psi_hat, fit.omega_hat)).probs()
        assert float((probs * y).sum()) == pytest.approx(
            float((counts * y).sum() / counts.sum()), abs=1e-5)
        assert float((probs * y * (7 - y)).sum()) == pytest.approx(
            float((counts * y * (7 - y)).sum() / counts.sum()), abs=1e-4)

    def test_degenerate_sample_flagged(self):
        fit = fit_mle(CountSample(n=4, counts=(120, 0, 0, 0, 0)))
        assert not fit.converged
        assert fit.psi_hat == 0.0
        fit = fit_mle(CountSample(n=4, counts=(0, 0, 0, 0, 7)))
        assert not fit.converged
        assert fit.psi_hat == 1.0


class TestModelComparison:
    def test_nested_likelihood_ordering(self):
        s = drawn_sample(ModelParams(7, 0.5, 0.7), 20000, seed=11)
        report = model_comparison(s)
        by_name = {m.name: m for m in report.models}
        assert by_name["lmbd"].log_likelihood >= by_name["binomial"].log_likelihood - 1e-6

    def test_binomial_data_all_models_predict_empirical(self):
        truth = ModelParams(7, 0.6, 1.0)
        count = 10 ** 5
        s = drawn_sample(truth, count, seed=42)
        report = model_comparison(s)
        exact = binomial_accuracy(7, 0.6)
        mc_err = 3.0 / math.sqrt(count)
        assert abs(report.empirical_accuracy - exact) < mc_err
        for m in report.models:
            assert abs(m.predicted_accuracy - report.empirical_accuracy) < 2 * mc_err

    def test_dependent_data_prefers_dependence_model(self):
        s = drawn_sample(ModelParams(9, 0.55, 1.6), 10 ** 5, seed=2718)
        report = model_comparison(s)
        assert report.best_aic == "lmbd"
        aics = {m.name: m.aic for m in report.models}
        assert aics["lmbd"] < aics["binomial"]
        assert aics["lmbd"] < aics["beta-binomial"]

    def test_theorem2_corollary_on_grid(self):
        # negative association with psi >= 1/2 forces psi > pi
        for n in (3, 6, 9):
            for psi in (0.5 + 0.1 * k for k in range(1, 5)):
                for omega in (1.2, 1.8):
                    assert psi > marginal_pi(ModelParams(n, psi, omega))
