# pa_harq/tests/test_channel.py
"""Testes do modelo de canal com descasamento espacial."""
import math

import numpy as np
import pytest
from scipy import integrate, special, stats

from pa_harq.channel import (
    conditional_gain_cdf,
    conditional_gain_pdf,
    correlation_entry,
    effective_distance,
    sample_joint,
    sample_joint_batch,
    sigma_from_phi,
    sigma_from_scenario,
)
from pa_harq.exceptions import ConfigurationError, DegenerateDistributionError
from pa_harq.types import CorrelationModel, ScenarioParams
from shared.utils import wavelength

FC = 2.68e9
LAMBDA = wavelength(FC)


@pytest.fixture
def reference_scenario():
    """δ = 5 ms, f_c = 2.68 GHz, d_a = 1.5λ, SNR = 20 dB, parado."""
    return ScenarioParams.from_units(snr_db=20.0)


class TestScenarioParams:
    def test_from_units(self, reference_scenario):
        assert reference_scenario.delta == pytest.approx(5e-3)
        assert reference_scenario.fc == pytest.approx(FC)
        assert reference_scenario.da == pytest.approx(1.5 * LAMBDA)
        assert reference_scenario.power == pytest.approx(100.0)
        assert reference_scenario.wavelength == pytest.approx(0.11186, rel=1e-4)

    def test_invalid_fields_rejected(self):
        with pytest.raises(ConfigurationError):
            ScenarioParams(delta=0.0, fc=FC, da=0.1, v=1.0, power=1.0)
        with pytest.raises(ConfigurationError):
            ScenarioParams(delta=1e-3, fc=FC, da=-0.1, v=1.0, power=1.0)
        with pytest.raises(ConfigurationError):
            ScenarioParams(delta=1e-3, fc=FC, da=0.1, v=1.0, power=1.0, sigma_override=1.5)

    def test_unknown_model(self):
        with pytest.raises(ConfigurationError):
            CorrelationModel.from_name("laplacian")


class TestEffectiveDistance:
    def test_exact_kinematic_match(self, reference_scenario):
        matched = reference_scenario.replace(v=reference_scenario.da / reference_scenario.delta)
        assert effective_distance(matched) == pytest.approx(0.0, abs=1e-15)

    def test_stationary_vehicle(self, reference_scenario):
        assert effective_distance(reference_scenario) == reference_scenario.da

    def test_near_matched_speed(self, reference_scenario):
        assert effective_distance(reference_scenario.replace(v=33.56)) < 1e-3

    def test_piecewise_linear_with_minimum(self, reference_scenario):
        v0 = reference_scenario.da / reference_scenario.delta
        left = effective_distance(reference_scenario.replace(v=v0 - 2.0))
        right = effective_distance(reference_scenario.replace(v=v0 + 2.0))
        assert left == pytest.approx(right, rel=1e-9)
        assert left == pytest.approx(2.0 * reference_scenario.delta, rel=1e-9)


class TestCorrelationEntry:
    @pytest.mark.parametrize("model", list(CorrelationModel))
    def test_zero_distance(self, model):
        assert correlation_entry(0.0, LAMBDA, model) == 1.0

    def test_jakes_first_zero(self):
        d = 2.404825557695773 * LAMBDA / (2 * math.pi)
        assert abs(correlation_entry(d, LAMBDA, CorrelationModel.JAKES)) < 1e-10

    def test_gaussian(self):
        d = LAMBDA / math.pi
        assert correlation_entry(d, LAMBDA, CorrelationModel.GAUSSIAN) == pytest.approx(math.exp(-1.0), rel=1e-12)

    def test_rectangular_normalized_sinc(self):
        assert abs(correlation_entry(LAMBDA / 2, LAMBDA, CorrelationModel.RECTANGULAR)) < 1e-15
        assert correlation_entry(LAMBDA / 4, LAMBDA, CorrelationModel.RECTANGULAR) == pytest.approx(2 / math.pi)

    def test_invalid_arguments(self):
        with pytest.raises(ConfigurationError):
            correlation_entry(-1.0, LAMBDA, CorrelationModel.JAKES)


class TestSigma:
    def test_no_mismatch(self):
        assert sigma_from_phi(1.0) == (0.0, False)

    def test_uncorrelated(self):
        sigma, clamped = sigma_from_phi(0.0)
        assert sigma == 1.0
        assert not clamped

    def test_intermediate(self):
        sigma, clamped = sigma_from_phi(0.5)
        assert sigma == pytest.approx(0.5 / math.sqrt(0.75), rel=1e-12)
        assert not clamped

    def test_negative_correlation_clamped(self):
        assert sigma_from_phi(-0.2) == (1.0, True)
        assert sigma_from_phi(-0.9) == (1.0, True)

    def test_scenario_composition(self, reference_scenario):
        params = reference_scenario.replace(v=100.0 / 3.6)
        corr = sigma_from_scenario(params)
        d = abs(params.da - params.v * params.delta)
        phi = float(special.j0(2 * math.pi * d / LAMBDA))
        expected = abs(phi - 1.0) / math.sqrt(phi + (phi - 1.0) ** 2)
        assert corr.d == pytest.approx(d, rel=1e-12)
        assert corr.phi12 == pytest.approx(phi, rel=1e-10)
        assert corr.sigma == pytest.approx(expected, rel=1e-10)
        assert 0.0 <= corr.sigma <= 1.0

    def test_matched_speed_gives_zero(self, reference_scenario):
        matched = reference_scenario.replace(v=reference_scenario.da / reference_scenario.delta)
        assert sigma_from_scenario(matched).sigma == pytest.approx(0.0, abs=1e-12)

    def test_override(self, reference_scenario):
        corr = sigma_from_scenario(reference_scenario.replace(sigma_override=0.1))
        assert corr.sigma == 0.1
        assert corr.d == reference_scenario.da

    def test_continuous_in_speed(self, reference_scenario):
        speeds = np.linspace(110.0, 130.0, 41) / 3.6
        sigmas = [sigma_from_scenario(reference_scenario.replace(v=v)).sigma for v in speeds]
        assert max(abs(b - a) for a, b in zip(sigmas, sigmas[1:])) < 0.05


class TestSampling:
    def test_perfect_csit(self):
        rng = np.random.default_rng(1)
        draw = sample_joint(0.0, rng)
        assert draw.h == draw.h_hat
        assert draw.g == draw.g_hat

    def test_gains_match_coefficients(self):
        draw = sample_joint(0.4, np.random.default_rng(2))
        assert draw.g_hat == pytest.approx(abs(draw.h_hat) ** 2)
        assert draw.g == pytest.approx(abs(draw.h) ** 2)

    def test_full_mismatch_independent(self):
        g_hat, g = sample_joint_batch(1.0, np.random.default_rng(3), 200_000)
        assert abs(np.corrcoef(g_hat, g)[0, 1]) < 0.01

    def test_moments(self):
        g_hat, g = sample_joint_batch(0.5, np.random.default_rng(4), 1_000_000)
        assert g.mean() == pytest.approx(1.0, abs=0.01)
        assert g_hat.mean() == pytest.approx(1.0, abs=0.01)
        assert np.corrcoef(g_hat, g)[0, 1] == pytest.approx(0.75, abs=0.01)

    def test_exponential_marginal(self):
        _, g = sample_joint_batch(0.3, np.random.default_rng(5), 200_000)
        statistic = stats.kstest(g, "expon").statistic
        assert statistic < 0.01

    def test_invalid_sigma(self):
        with pytest.raises(ConfigurationError):
            sample_joint_batch(1.2, np.random.default_rng(0), 10)


class TestConditionalStatistics:
    def test_cdf_at_zero(self):
        assert conditional_gain_cdf(0.0, 1.0, 0.3) == 0.0

    def test_cdf_at_infinity(self):
        assert conditional_gain_cdf(float("inf"), 1.0, 0.3) == 1.0

    def test_cdf_against_density_quadrature(self):
        value, _ = integrate.quad(lambda x: conditional_gain_pdf(x, 1.0, 0.3), 0.0, 1.0,
                                  epsabs=1e-12, epsrel=1e-12, limit=200)
        assert conditional_gain_cdf(1.0, 1.0, 0.3) == pytest.approx(value, abs=1e-8)

    def test_density_normalized(self):
        value, _ = integrate.quad(lambda x: conditional_gain_pdf(x, 2.0, 0.5), 0.0, np.inf, limit=200)
        assert value == pytest.approx(1.0, abs=1e-7)

    def test_cdf_non_decreasing(self):
        values = [conditional_gain_cdf(x, 0.8, 0.4) for x in np.linspace(0.0, 5.0, 50)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_degenerate_sigma(self):
        with pytest.raises(DegenerateDistributionError):
            conditional_gain_cdf(1.0, 1.0, 0.0)
        with pytest.raises(DegenerateDistributionError):
            conditional_gain_pdf(1.0, 1.0, 0.0)

    @pytest.mark.parametrize("sigma", [0.1, 0.5, 0.9])
    def test_empirical_conditional_cdf(self, sigma):
        g_hat, g = sample_joint_batch(sigma, np.random.default_rng(11), 2_000_000)
        g0 = 1.0
        window = g[np.abs(g_hat - g0) <= 0.01]
        assert window.size > 10_000
        cdf = np.vectorize(lambda x: conditional_gain_cdf(x, g0, sigma))
        statistic = stats.kstest(window, cdf).statistic
        assert statistic < 0.02
