"""Gibbs/logit choice rule: frozen values, algebraic identities, optimality."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gravitation.choice import corn_choice_probability, gibbs, log_odds, logit_response
from gravitation.model import MarketState, ModelParams, ParameterError

# 1 / (1 + e^-1) and 1 / (1 + e^10), frozen from 50-digit Decimal evaluation.
LOGISTIC_1 = 0.7310585786300049
INV_1P_E10 = 4.5397868702434394e-05


class TestGibbs:
    def test_equal_payoffs_are_uniform(self):
        for temperature in (0.01, 1.0, 1e6):
            freqs = gibbs([2.0, 2.0, 2.0], temperature)
            assert np.allclose(freqs, 1.0 / 3.0, atol=0, rtol=0)

    def test_two_action_frozen_value(self):
        freqs = gibbs([1.0, 0.0], 1.0)
        assert freqs[0] == pytest.approx(LOGISTIC_1, abs=1e-12)
        assert freqs[1] == pytest.approx(1.0 - LOGISTIC_1, abs=1e-12)
        assert freqs[0] == pytest.approx(0.731059, abs=1e-6)

    def test_infinite_temperature_limit(self):
        freqs = gibbs([1.0, 0.0], 1e9)
        assert np.max(np.abs(freqs - 0.5)) < 1e-9

    def test_rejects_bad_input(self):
        with pytest.raises(ParameterError):
            gibbs([], 1.0)
        with pytest.raises(ParameterError):
            gibbs([1.0, float("nan")], 1.0)
        with pytest.raises(ParameterError):
            gibbs([1.0, float("inf")], 1.0)
        with pytest.raises(ParameterError):
            gibbs([1.0, 0.0], 0.0)
        with pytest.raises(ParameterError):
            gibbs([1.0, 0.0], -2.0)
        with pytest.raises(ParameterError):
            gibbs([1.0, 0.0], float("inf"))

    @given(
        payoffs=st.lists(st.floats(min_value=-100, max_value=100), min_size=1,
                         max_size=64),
        temperature=st.floats(min_value=1e-3, max_value=1e3),
    )
    @settings(max_examples=300, deadline=None)
    def test_normalization(self, payoffs, temperature):
        freqs = gibbs(payoffs, temperature)
        assert abs(freqs.sum() - 1.0) <= 1e-12
        assert np.all(freqs >= 0.0)

    @given(
        payoffs=st.lists(st.floats(min_value=-50, max_value=50), min_size=1,
                         max_size=16),
        temperature=st.floats(min_value=1e-2, max_value=1e3),
        shift=st.floats(min_value=-1e3, max_value=1e3),
    )
    @settings(max_examples=300, deadline=None)
    def test_shift_invariance(self, payoffs, temperature, shift):
        base = gibbs(payoffs, temperature)
        shifted = gibbs(np.asarray(payoffs) + shift, temperature)
        assert np.max(np.abs(base - shifted)) <= 1e-12

    def test_monotonicity(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            k = rng.integers(2, 9)
            u = rng.uniform(-5, 5, k)
            t = float(np.exp(rng.uniform(np.log(0.1), np.log(10))))
            i = int(rng.integers(k))
            bumped = u.copy()
            bumped[i] += rng.uniform(0.01, 2.0)
            before, after = gibbs(u, t), gibbs(bumped, t)
            assert after[i] > before[i]
            others = np.delete(np.arange(k), i)
            assert np.all(after[others] <= before[others] + 1e-15)

    def test_optimality_over_entropy_feasible_set(self):
        # Among random mixed strategies at least as entropic as the Gibbs
        # frequencies, none beats the Gibbs expected payoff.
        rng = np.random.default_rng(11)
        for _ in range(100):
            k = int(rng.integers(2, 9))
            u = rng.uniform(-5, 5, k)
            t = float(np.exp(rng.uniform(np.log(0.05), np.log(20))))
            star = gibbs(u, t)
            h_star = -float(np.sum(star * np.log(star)))
            best = float(star @ u)
            samples = rng.dirichlet(np.ones(k), 200)
            with np.errstate(divide="ignore", invalid="ignore"):
                log_terms = np.where(samples > 0, samples * np.log(samples), 0.0)
            entropies = -log_terms.sum(axis=1)
            feasible = samples[entropies >= h_star]
            if feasible.size:
                assert float((feasible @ u).max()) <= best + 1e-9


class TestLogitResponse:
    def test_frozen_value(self):
        assert logit_response(1.0, 0.0, 1.0) == pytest.approx(LOGISTIC_1, abs=1e-12)
        assert logit_response(1.0, 0.0, 1.0) == pytest.approx(0.731059, abs=1e-6)

    def test_equal_payoffs(self):
        assert logit_response(3.0, 3.0, 0.17) == 0.5
        assert logit_response(-1.0, -1.0, 42.0) == 0.5

    def test_small_temperature_has_no_overflow(self):
        assert logit_response(0.0, 1.0, 0.1) == pytest.approx(INV_1P_E10, abs=1e-9)
        # far into the tail: must underflow gracefully, never raise
        assert logit_response(0.0, 1.0, 1e-4) == 0.0
        assert logit_response(1.0, 0.0, 1e-4) == 1.0

    def test_matches_gibbs_first_component(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            a, b = rng.uniform(-10, 10, 2)
            t = float(np.exp(rng.uniform(np.log(0.05), np.log(20))))
            assert abs(logit_response(a, b, t) - gibbs([a, b], t)[0]) <= 1e-14

    def test_complement_identity(self):
        # f_sugar = 1 - f_corn; float rounding leaves at most one ulp.
        rng = np.random.default_rng(5)
        for _ in range(500):
            a, b = rng.uniform(-10, 10, 2)
            t = float(np.exp(rng.uniform(np.log(0.05), np.log(20))))
            pair = gibbs([a, b], t)
            assert abs(pair[1] - (1.0 - pair[0])) <= 2.3e-16
            assert abs(logit_response(a, b, t) + logit_response(b, a, t) - 1.0) <= 2.3e-16


class TestLogOdds:
    def test_even_odds(self):
        assert log_odds([0.5, 0.5]) == 0.0

    def test_recovers_scaled_payoff_difference(self):
        assert log_odds(gibbs([1.0, 0.0], 1.0)) == pytest.approx(-1.0, abs=1e-10)
        assert log_odds(gibbs([1.0, 0.0], 0.5)) == pytest.approx(-2.0, abs=1e-10)

    def test_zero_frequency_rejected(self):
        with pytest.raises(ParameterError):
            log_odds([0.0, 1.0])
        with pytest.raises(ParameterError):
            log_odds([1.0, 0.0])

    def test_needs_exactly_two_actions(self):
        with pytest.raises(ParameterError):
            log_odds([0.2, 0.3, 0.5])

    def test_identity_over_random_draws(self):
        rng = np.random.default_rng(17)
        for _ in range(2000):
            u_c, u_s = rng.uniform(-10, 10, 2)
            t = float(np.exp(rng.uniform(np.log(0.05), np.log(20))))
            observed = log_odds(gibbs([u_c, u_s], t))
            assert abs(observed - (u_s - u_c) / t) <= 1e-10


class TestCornChoiceProbability:
    def test_short_side_value(self):
        params = ModelParams(10, 1.0)
        assert corn_choice_probability(params, MarketState(3, 10)) == pytest.approx(
            LOGISTIC_1, abs=1e-12
        )

    def test_long_side_value(self):
        params = ModelParams(10, 1.0)
        assert corn_choice_probability(params, MarketState(7, 10)) == pytest.approx(
            1.0 - LOGISTIC_1, abs=1e-12
        )

    @pytest.mark.parametrize("temperature", [0.01, 1.0, 1e6])
    def test_balanced_is_exactly_half(self, temperature):
        params = ModelParams(10, temperature)
        assert corn_choice_probability(params, MarketState(5, 10)) == 0.5

    def test_depends_only_on_side(self):
        params = ModelParams(100, 2.0)
        low = [corn_choice_probability(params, MarketState(k, 100)) for k in (0, 17, 49)]
        high = [corn_choice_probability(params, MarketState(k, 100)) for k in (51, 80, 100)]
        assert len(set(low)) == 1
        assert len(set(high)) == 1
        expected = 1.0 / (1.0 + math.exp(-1.0 / 2.0))
        assert low[0] == pytest.approx(expected, abs=1e-15)
        assert high[0] == pytest.approx(1.0 - expected, abs=1e-15)
