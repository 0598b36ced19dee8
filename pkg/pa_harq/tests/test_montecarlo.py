# pa_harq/tests/test_montecarlo.py
"""Testes do estimador Monte Carlo (exatidão estatística e reprodutibilidade)."""
import math

import pytest

from pa_harq import montecarlo
from pa_harq.analytic import eta_benchmarks_analytic, eta_exact, eta_open_loop
from pa_harq.channel import sigma_from_scenario
from pa_harq.config import McConfig
from pa_harq.exceptions import ConfigurationError, NumericError
from pa_harq.montecarlo import estimate, point_seed, sweep
from pa_harq.types import McEstimate, RatePolicy, RoundStatus, ScenarioParams

BAND = 4.0


@pytest.fixture
def scenario():
    return ScenarioParams.from_units(snr_db=20.0, sigma=0.3)


@pytest.fixture
def policy():
    return RatePolicy(R=3.0, R_min=2.0)


@pytest.fixture
def mc():
    return McConfig(trials=400_000, master_seed=7, chunk_size=1 << 15)


def within_band(result: McEstimate, expected: float) -> bool:
    return abs(result.mean - expected) <= BAND * result.std_error


class TestAgreementWithAnalytic:
    def test_open_loop(self, scenario, policy, mc):
        result = estimate(scenario, policy, mc.with_scheme("open-loop"))
        assert within_band(result, eta_open_loop(policy.R, scenario.power))

    def test_pa_harq(self, scenario, policy, mc):
        result = estimate(scenario, policy, mc)
        assert within_band(result, eta_exact(policy, 0.3, scenario.power).eta)

    def test_basic_arq(self, scenario, policy, mc):
        result = estimate(scenario, policy, mc.with_scheme("basic-arq"))
        assert within_band(result, eta_benchmarks_analytic(policy, 0.3, scenario.power).eta)

    def test_perfect_csit(self, scenario, policy, mc):
        result = estimate(scenario.replace(sigma_override=0.0), policy, mc)
        assert within_band(result, eta_exact(policy, 0.0, scenario.power).eta)
        assert result.per_round_shares[RoundStatus.FAILED.value] == 0.0

    def test_kinematic_sigma(self, policy, mc):
        params = ScenarioParams.from_units(snr_db=20.0, speed_kmh=100.0)
        sigma = sigma_from_scenario(params).sigma
        result = estimate(params, policy, mc)
        assert within_band(result, eta_exact(policy, sigma, params.power).eta)

    @pytest.mark.parametrize("sigma", [0.1, 0.3])
    @pytest.mark.parametrize("snr_db", [0.0, 10.0, 30.0])
    @pytest.mark.parametrize("offset", [0.5, 3.0])
    def test_pa_harq_matrix(self, sigma, snr_db, offset):
        params = ScenarioParams.from_units(snr_db=snr_db, sigma=sigma)
        policy = RatePolicy(R=2.0 + offset, R_min=2.0)
        result = estimate(params, policy, McConfig(trials=200_000, master_seed=42))
        assert within_band(result, eta_exact(policy, sigma, params.power).eta)

    def test_first_round_share(self, scenario, policy, mc):
        result = estimate(scenario, policy, mc)
        expected = math.exp(-policy.theta / scenario.power)
        binomial = math.sqrt(expected * (1.0 - expected) / mc.trials)
        assert abs(result.per_round_shares[RoundStatus.FIRST_ROUND.value] - expected) <= BAND * binomial

    def test_minimum_rate_has_no_second_round(self, scenario, mc):
        policy = RatePolicy(R=2.0, R_min=2.0)
        result = estimate(scenario, policy, mc)
        assert result.per_round_shares[RoundStatus.SECOND_ROUND.value] == 0.0
        assert result.per_round_shares[RoundStatus.FAILED.value] == 0.0
        assert within_band(result, 2.0 * math.exp(-policy.theta / scenario.power))

    def test_diversity_bounded(self, scenario, policy, mc):
        result = estimate(scenario, policy, mc.with_scheme("diversity"))
        assert 0.0 <= result.mean <= policy.R / 2


class TestDeterminism:
    def test_same_seed_bit_identical(self, scenario, policy):
        cfg = McConfig(trials=100_000, master_seed=3, chunk_size=10_000)
        first = estimate(scenario, policy, cfg)
        second = estimate(scenario, policy, cfg)
        assert first.mean == second.mean
        assert first.std_error == second.std_error

    def test_worker_count_irrelevant(self, scenario, policy):
        serial = estimate(scenario, policy, McConfig(trials=100_000, master_seed=3, chunk_size=10_000, workers=1))
        threaded = estimate(scenario, policy, McConfig(trials=100_000, master_seed=3, chunk_size=10_000, workers=4))
        assert serial.mean == threaded.mean
        assert serial.std_error == threaded.std_error
        assert serial.per_round_shares == threaded.per_round_shares

    def test_different_seed_differs(self, scenario, policy):
        a = estimate(scenario, policy, McConfig(trials=50_000, master_seed=1))
        b = estimate(scenario, policy, McConfig(trials=50_000, master_seed=2))
        assert a.mean != b.mean

    def test_point_seed_depends_on_seed_and_scenario(self, scenario):
        assert point_seed(5, scenario) == point_seed(5, scenario)
        assert point_seed(5, scenario) != point_seed(6, scenario)
        assert point_seed(5, scenario) != point_seed(5, scenario.replace(power=10.0))

    def test_common_random_numbers_across_rates(self, scenario):
        cfg = McConfig(trials=50_000, master_seed=9)
        low = estimate(scenario, RatePolicy(R=2.5, R_min=2.0), cfg)
        high = estimate(scenario, RatePolicy(R=3.5, R_min=2.0), cfg)
        assert low.seed == high.seed


class TestEstimateShape:
    def test_shares_sum_to_one(self, scenario, policy):
        result = estimate(scenario, policy, McConfig(trials=20_000))
        assert set(result.per_round_shares) == {s.value for s in RoundStatus}
        assert math.fsum(result.per_round_shares.values()) == pytest.approx(1.0)

    def test_open_loop_shares(self, scenario, policy):
        result = estimate(scenario, policy, McConfig(trials=20_000, scheme="open-loop"))
        assert result.per_round_shares[RoundStatus.SECOND_ROUND.value] == 0.0
        assert result.per_round_shares[RoundStatus.FIRST_ROUND.value] == pytest.approx(
            result.mean / policy.R, rel=1e-12
        )

    def test_std_error_scales(self, scenario, policy):
        small = estimate(scenario, policy, McConfig(trials=40_000, master_seed=4))
        large = estimate(scenario, policy, McConfig(trials=640_000, master_seed=4))
        assert large.std_error == pytest.approx(small.std_error / 4.0, rel=0.1)

    def test_partial_last_chunk(self, scenario, policy):
        result = estimate(scenario, policy, McConfig(trials=1_001, chunk_size=100))
        assert result.trials == 1_001

    def test_single_trial(self, scenario, policy):
        result = estimate(scenario, policy, McConfig(trials=1))
        assert result.std_error == 0.0

    def test_trial_limit(self, scenario, policy, monkeypatch):
        monkeypatch.setattr(montecarlo, "MAX_TRIALS", 10)
        with pytest.raises(NumericError):
            estimate(scenario, policy, McConfig(trials=11))


class TestSweep:
    def test_broadcast_single_policy(self, scenario, policy):
        cfg = McConfig(trials=5_000)
        grid = [scenario, scenario.replace(power=10.0)]
        results = sweep(grid, [policy], cfg)
        assert len(results) == 2
        assert results[0].mean == estimate(scenario, policy, cfg).mean

    def test_order_independent(self, scenario, policy):
        cfg = McConfig(trials=5_000)
        grid = [scenario, scenario.replace(power=10.0), scenario.replace(power=1000.0)]
        forward = sweep(grid, [policy], cfg)
        backward = sweep(list(reversed(grid)), [policy], cfg)
        assert [r.mean for r in forward] == [r.mean for r in reversed(backward)]

    def test_failed_point_recorded(self, scenario, policy, monkeypatch):
        real = montecarlo.estimate

        def flaky(params, pol, cfg):
            if params.power == 10.0:
                raise NumericError("boom")
            return real(params, pol, cfg)

        monkeypatch.setattr(montecarlo, "estimate", flaky)
        results = sweep([scenario, scenario.replace(power=10.0)], [policy], McConfig(trials=2_000))
        assert results[0].error is None
        assert results[1].error == "boom"
        assert results[1].trials == 0

    def test_empty_grid(self, policy):
        with pytest.raises(ConfigurationError):
            sweep([], [policy], McConfig(trials=10))

    def test_mismatched_grids(self, scenario, policy):
        with pytest.raises(ConfigurationError):
            sweep([scenario] * 2, [policy] * 3, McConfig(trials=10))


class TestMcConfig:
    @pytest.mark.parametrize("kwargs", [
        {"trials": 0},
        {"chunk_size": 0},
        {"workers": 0},
        {"scheme": "chase"},
        {"master_seed": -1},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigurationError):
            McConfig(**kwargs)

    def test_from_env(self, monkeypatch):
        monkeypatch.setenv("PA_HARQ_TRIALS", "1234")
        monkeypatch.setenv("PA_HARQ_SEED", "99")
        cfg = McConfig.from_env()
        assert cfg.trials == 1234
        assert cfg.master_seed == 99
