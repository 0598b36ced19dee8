# pa_harq/tests/test_optimize.py
"""Testes da busca da taxa inicial ótima."""
import math

import numpy as np
import pytest

from pa_harq.analytic import closed_form_value
from pa_harq.config import McConfig
from pa_harq.exceptions import ConfigurationError
from pa_harq.optimize import (
    EVAL_CACHE,
    GOLDEN,
    LAMBERT,
    STATIONARITY,
    _count_local_maxima,
    closed_form_derivative,
    golden_section_max,
    make_objective,
    optimize_open_loop,
    optimize_rate_direct,
    optimize_rate_stationarity,
    search_upper_rate,
)
from pa_harq.specfun import lambert_w0
from pa_harq.types import METHOD_CLOSED, METHOD_EXACT, METHOD_MC
from shared.utils import db_to_linear


@pytest.fixture(autouse=True)
def fresh_cache():
    EVAL_CACHE.clear()
    yield
    EVAL_CACHE.clear()


class TestGoldenSection:
    def test_parabola(self):
        x, fx, evaluations = golden_section_max(lambda r: -(r - 1.3) ** 2, 0.0, 3.0, 1e-6)
        assert x == pytest.approx(1.3, abs=1e-6)
        assert fx == pytest.approx(0.0, abs=1e-11)
        assert evaluations > 2

    def test_monotone_goes_to_edge(self):
        x, _, _ = golden_section_max(lambda r: r, 0.0, 1.0, 1e-5)
        assert x == pytest.approx(1.0, abs=1e-5)

    def test_constant_keeps_left(self):
        x, _, _ = golden_section_max(lambda r: 1.0, 2.0, 4.0, 1e-4)
        assert x == pytest.approx(2.0, abs=1e-4)

    def test_degenerate_interval(self):
        assert golden_section_max(lambda r: r * r, 1.0, 1.0, 1e-4) == (1.0, 1.0, 1)


class TestGridPeaks:
    def test_single_interior_peak(self):
        assert _count_local_maxima(np.array([1.0, 2.0, 3.0, 2.5, 1.0])) == 1

    def test_lower_rising_tail_ignored(self):
        assert _count_local_maxima(np.array([1.0, 3.0, 2.0, 2.2, 2.4])) == 1

    def test_higher_rising_tail_counts(self):
        assert _count_local_maxima(np.array([1.0, 3.0, 2.0, 2.5, 3.5])) == 2

    def test_monotone_and_flat(self):
        assert _count_local_maxima(np.array([3.0, 2.0, 1.0])) == 1
        assert _count_local_maxima(np.array([1.0, 2.0, 3.0])) == 1
        assert _count_local_maxima(np.array([2.0, 2.0, 2.0])) == 1

    def test_two_interior_peaks(self):
        assert _count_local_maxima(np.array([0.0, 2.0, 1.0, 2.0, 0.0])) == 2


class TestStationarity:
    def test_reference_point_matches_golden(self):
        power = db_to_linear(20.0)
        stationary = optimize_rate_stationarity(2.0, 0.1, power)
        direct = optimize_rate_direct(2.0, 0.1, power)
        assert stationary.method == STATIONARITY
        assert not stationary.boundary
        assert stationary.r_opt == pytest.approx(direct.r_opt, abs=1e-3)
        assert abs(closed_form_derivative(stationary.r_opt, 2.0, 0.1, power)) < 1e-6
        assert math.isfinite(stationary.residual)

    @pytest.mark.parametrize("sigma", [0.1, 0.3])
    def test_high_snr_interior_maximum(self, sigma):
        power = db_to_linear(30.0)
        stationary = optimize_rate_stationarity(2.0, sigma, power)
        direct = optimize_rate_direct(2.0, sigma, power)
        assert not stationary.boundary
        assert 2.0 < stationary.r_opt < search_upper_rate(2.0, power)
        assert stationary.r_opt == pytest.approx(direct.r_opt, abs=1e-3)

    def test_high_snr_reference_point(self):
        result = optimize_rate_stationarity(2.0, 0.1, db_to_linear(30.0))
        assert result.r_opt == pytest.approx(5.885, abs=0.01)
        assert result.eta_opt == pytest.approx(4.896, abs=0.005)

    def test_search_region(self):
        assert search_upper_rate(2.0, 1.0) == pytest.approx(lambert_w0(1.0) + 5.0)
        assert search_upper_rate(2.0, db_to_linear(30.0)) == pytest.approx(lambert_w0(1000.0) + 5.0)
        assert search_upper_rate(18.0, 10.0) == 20.0

    @pytest.mark.parametrize("sigma", [0.1, 0.3])
    @pytest.mark.parametrize("snr_db", [0.0, 10.0, 20.0, 30.0, 40.0])
    @pytest.mark.parametrize("r_min", [2.0, 3.0])
    def test_cross_method_objective(self, sigma, snr_db, r_min):
        power = db_to_linear(snr_db)
        stationary = optimize_rate_stationarity(r_min, sigma, power)
        direct = optimize_rate_direct(r_min, sigma, power)
        assert abs(stationary.eta_opt - direct.eta_opt) <= 1e-3 * direct.eta_opt

    def test_low_snr_boundary(self):
        result = optimize_rate_stationarity(2.0, 0.1, 1.0)
        assert result.boundary
        assert result.r_opt == 2.0
        assert result.eta_opt == pytest.approx(closed_form_value(2.0, 2.0, 0.1, 1.0))

    @pytest.mark.parametrize("snr_db", [0.0, 5.0, 10.0])
    def test_higher_minimum_rate_needs_higher_rate(self, snr_db):
        power = db_to_linear(snr_db)
        low = optimize_rate_stationarity(2.0, 0.1, power)
        high = optimize_rate_stationarity(3.0, 0.1, power)
        assert high.r_opt >= low.r_opt

    def test_rate_grows_with_snr(self):
        rates = [optimize_rate_stationarity(2.0, 0.1, db_to_linear(s)).r_opt for s in (20.0, 30.0, 40.0)]
        assert rates[0] < rates[1] < rates[2]

    def test_affine_in_log_snr_at_high_snr(self):
        rates = [optimize_rate_stationarity(2.0, 0.1, db_to_linear(s)).r_opt for s in (30.0, 35.0, 40.0)]
        ratio = (rates[2] - rates[1]) / (rates[1] - rates[0])
        assert 0.7 < ratio < 1.3

    def test_invalid_inputs(self):
        with pytest.raises(ConfigurationError):
            optimize_rate_stationarity(0.0, 0.1, 100.0)
        with pytest.raises(ConfigurationError):
            optimize_rate_stationarity(2.0, 1.1, 100.0)
        with pytest.raises(ConfigurationError):
            optimize_rate_stationarity(2.0, 0.1, -1.0)


class TestDirect:
    def test_method_and_bracket(self):
        result = optimize_rate_direct(2.0, 0.1, 100.0)
        assert result.method == GOLDEN
        assert result.evaluator == METHOD_CLOSED
        assert result.bracket[0] <= result.r_opt <= result.bracket[1]

    def test_exact_evaluator_near_closed(self):
        closed = optimize_rate_direct(2.0, 0.1, 1000.0)
        exact = optimize_rate_direct(2.0, 0.1, 1000.0, evaluator=METHOD_EXACT)
        assert exact.evaluator == METHOD_EXACT
        assert exact.r_opt == pytest.approx(closed.r_opt, abs=0.5)

    def test_open_loop_scheme_finds_lambert_rate(self):
        result = optimize_rate_direct(0.5, 0.0, 10.0, scheme="open-loop")
        assert result.r_opt == pytest.approx(lambert_w0(10.0), abs=2e-4)

    def test_optimal_value_grows_with_power(self):
        values = [optimize_rate_direct(2.0, 0.1, p).eta_opt for p in (10.0, 100.0, 1000.0)]
        assert values[0] < values[1] < values[2]

    def test_basic_arq(self):
        pa = optimize_rate_direct(2.0, 0.1, 100.0, evaluator=METHOD_EXACT)
        arq = optimize_rate_direct(2.0, 0.1, 100.0, evaluator=METHOD_EXACT, scheme="basic-arq")
        assert arq.eta_opt <= pa.eta_opt

    def test_unsupported_combination(self):
        with pytest.raises(ConfigurationError):
            make_objective("diversity", METHOD_CLOSED, 2.0, 0.1, 100.0)
        with pytest.raises(ConfigurationError):
            make_objective("basic-arq", METHOD_CLOSED, 2.0, 0.1, 100.0)
        with pytest.raises(ConfigurationError):
            make_objective("chase", METHOD_EXACT, 2.0, 0.1, 100.0)

    def test_monte_carlo_diversity_deterministic(self):
        cfg = McConfig(trials=20_000, master_seed=11)
        first = optimize_rate_direct(2.0, 0.1, 100.0, evaluator=METHOD_MC, scheme="diversity", mc_config=cfg)
        size = EVAL_CACHE.size()
        EVAL_CACHE.clear()
        second = optimize_rate_direct(2.0, 0.1, 100.0, evaluator=METHOD_MC, scheme="diversity", mc_config=cfg)
        assert first.r_opt == second.r_opt
        assert first.eta_opt == second.eta_opt
        assert size > 0
        assert first.r_opt >= 2.0

    def test_repeated_search_hits_cache(self):
        optimize_rate_direct(2.0, 0.3, 100.0)
        misses = EVAL_CACHE.misses
        optimize_rate_direct(2.0, 0.3, 100.0)
        assert EVAL_CACHE.misses == misses
        assert EVAL_CACHE.hits > 0


class TestOpenLoop:
    @pytest.mark.parametrize("power", [10.0, 100.0, 1000.0])
    def test_lambert(self, power):
        result = optimize_open_loop(0.5, power)
        assert result.method == LAMBERT
        assert result.r_opt == pytest.approx(lambert_w0(power))
        assert not result.boundary

    def test_floor_at_minimum_rate(self):
        result = optimize_open_loop(2.0, 1.0)
        assert result.r_opt == 2.0
        assert result.boundary
