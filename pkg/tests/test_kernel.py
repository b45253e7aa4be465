"""Transition kernel and stationary solvers, cross-checked three ways."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import binom

from gravitation.kernel import (
    ConvergenceError,
    MAX_KERNEL_N,
    Provenance,
    StateDistribution,
    TransitionKernel,
    apply_kernel,
    binomial_pmf,
    binomial_row,
    build_kernel,
    fixed_point_residual,
    stationary_analytic,
    stationary_eigen,
    stationary_mean,
    stationary_power,
    total_variation,
    write_distribution_csv,
    write_kernel_csv,
)
from gravitation.model import ModelParams, ParameterError

LOGISTIC_1 = 1.0 / (1.0 + math.exp(-1.0))


def mode_count(probabilities, floor=1e-9):
    """Number of local maxima carrying non-negligible mass.

    Boundary states count one-sidedly. The floor ignores artifacts of the
    balanced row, which can poke a ~1e-60 bump above an underflowed valley.
    """
    p = probabilities
    n = len(p) - 1
    modes = 0
    for k in range(n + 1):
        left_ok = k == 0 or p[k] > p[k - 1]
        right_ok = k == n or p[k] >= p[k + 1]
        if left_ok and right_ok and p[k] >= floor:
            modes += 1
    return modes


class TestBinomialPmf:
    def test_exact_small_case(self):
        # 6/16 by enumerating the C(4,2) equally likely outcomes
        assert binomial_pmf(4, 2, 0.5) == 0.375

    @pytest.mark.parametrize("n", [0, 1, 7, 120])
    def test_certain_zero_successes(self, n):
        assert binomial_pmf(n, 0, 0.0) == 1.0
        if n > 0:
            assert binomial_pmf(n, 1, 0.0) == 0.0
            assert binomial_pmf(n, n, 1.0) == 1.0

    def test_large_n_against_exact_rational(self):
        exact = float(Fraction(math.comb(100, 50), 2**100))
        value = binomial_pmf(100, 50, 0.5)
        assert value == pytest.approx(exact, rel=1e-12)
        assert value == pytest.approx(0.0795892, abs=1e-6)

    def test_against_scipy_over_random_draws(self):
        rng = np.random.default_rng(23)
        for _ in range(300):
            n = int(rng.integers(1, 400))
            k = int(rng.integers(0, n + 1))
            p = float(rng.uniform())
            expected = float(binom.pmf(k, n, p))
            assert binomial_pmf(n, k, p) == pytest.approx(expected, rel=1e-10, abs=1e-300)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ParameterError):
            binomial_pmf(4, 5, 0.5)
        with pytest.raises(ParameterError):
            binomial_pmf(4, -1, 0.5)
        with pytest.raises(ParameterError):
            binomial_pmf(4, 2, 1.5)
        with pytest.raises(ParameterError):
            binomial_pmf(4, 2, -0.1)
        with pytest.raises(ParameterError):
            binomial_pmf(-1, 0, 0.5)

    def test_row_sums_to_one(self):
        for n, p in [(10, 0.3), (100, 0.731), (500, 1e-6), (500, 0.999999)]:
            assert abs(binomial_row(n, p).sum() - 1.0) <= 1e-12


class TestBuildKernel:
    def test_two_producer_rows(self):
        kernel = build_kernel(ModelParams(2, 1.0))
        p = LOGISTIC_1
        expected_low = [(1 - p) ** 2, 2 * p * (1 - p), p * p]
        assert np.max(np.abs(kernel.matrix[0] - expected_low)) <= 1e-12
        assert kernel.matrix[0] == pytest.approx([0.072329, 0.393223, 0.534447], abs=1e-6)
        # balanced row: fair coin over two producers
        assert kernel.matrix[1] == pytest.approx([0.25, 0.5, 0.25], abs=1e-15)

    def test_two_producer_infinite_temperature(self):
        kernel = build_kernel(ModelParams(2, 1e9))
        for row in kernel.matrix:
            assert row == pytest.approx([0.25, 0.5, 0.25], abs=1e-8)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 10, 51, 100])
    @pytest.mark.parametrize("temperature", [1e-3, 0.05, 1.0, 1e6])
    def test_row_stochastic(self, n, temperature):
        kernel = build_kernel(ModelParams(n, temperature))
        assert np.all(kernel.matrix >= 0.0)
        assert np.all(kernel.matrix <= 1.0)
        assert np.max(np.abs(kernel.matrix.sum(axis=1) - 1.0)) <= 1e-12

    def test_row_stochastic_large_n(self):
        kernel = build_kernel(ModelParams(500, 0.25))
        assert np.max(np.abs(kernel.matrix.sum(axis=1) - 1.0)) <= 1e-12

    @pytest.mark.parametrize("n", [4, 5, 10, 11])
    def test_block_structure(self, n):
        kernel = build_kernel(ModelParams(n, 0.7))
        low_rows = [kernel.matrix[k] for k in range(n + 1) if 2 * k < n]
        high_rows = [kernel.matrix[k] for k in range(n + 1) if 2 * k > n]
        for row in low_rows[1:]:
            assert np.array_equal(row, low_rows[0])
        for row in high_rows[1:]:
            assert np.array_equal(row, high_rows[0])

    def test_corn_sugar_exchange_symmetry(self):
        # brute force at N=4: relabeling goods reverses both axes
        kernel = build_kernel(ModelParams(4, 0.9))
        m = kernel.matrix
        assert np.max(np.abs(m - m[::-1, ::-1])) <= 1e-15

    def test_half_rule_variants(self):
        params = ModelParams(4, 1.0)
        low_rule = build_kernel(params, half_rule="low")
        high_rule = build_kernel(params, half_rule="high")
        assert np.array_equal(low_rule.matrix[2], low_rule.matrix[0])
        assert np.array_equal(high_rule.matrix[2], high_rule.matrix[4])
        with pytest.raises(ParameterError):
            build_kernel(params, half_rule="middle")

    def test_memory_guard(self):
        with pytest.raises(ParameterError, match="practical size"):
            build_kernel(ModelParams(MAX_KERNEL_N + 1, 1.0))


class TestStationarySolvers:
    def test_flat_kernel_has_binomial_stationary(self):
        params = ModelParams(2, 1e9)
        kernel = build_kernel(params)
        expected = [0.25, 0.5, 0.25]
        assert stationary_power(kernel).probabilities == pytest.approx(expected, abs=1e-8)
        assert stationary_eigen(kernel).probabilities == pytest.approx(expected, abs=1e-10)
        assert stationary_analytic(params).probabilities == pytest.approx(
            expected, abs=1e-10
        )

    def test_small_temperature_concentrates_at_extremes(self):
        dist = stationary_power(build_kernel(ModelParams(10, 0.05)))
        pi = dist.probabilities
        assert pi[0] + pi[10] >= 0.99
        assert abs(pi[0] - pi[10]) <= 1e-6

    def test_tiny_temperature_mass(self):
        pi = stationary_analytic(ModelParams(10, 0.01)).probabilities
        assert pi[0] + pi[10] >= 0.999

    @pytest.mark.parametrize(
        "n,temperature",
        [(10, 1.0), (100, 0.5), (100, 1.0), (4, 0.2), (11, 0.3), (50, 5.0)],
    )
    def test_three_way_agreement(self, n, temperature):
        params = ModelParams(n, temperature)
        kernel = build_kernel(params)
        by_power = stationary_power(kernel)
        by_eigen = stationary_eigen(kernel)
        by_blocks = stationary_analytic(params)
        assert total_variation(by_power, by_eigen) <= 1e-8
        assert total_variation(by_power, by_blocks) <= 1e-8
        assert total_variation(by_eigen, by_blocks) <= 1e-10

    @pytest.mark.parametrize("n,temperature", [(10, 0.1), (100, 1.0), (101, 2.0)])
    def test_fixed_point_residuals(self, n, temperature):
        params = ModelParams(n, temperature)
        kernel = build_kernel(params)
        for dist in (
            stationary_power(kernel),
            stationary_eigen(kernel),
            stationary_analytic(params),
        ):
            assert fixed_point_residual(dist, kernel) <= 1e-8
            assert abs(dist.probabilities.sum() - 1.0) <= 1e-12
            assert dist.provenance is Provenance.EXACT

    def test_analytic_residual_without_dense_kernel(self):
        params = ModelParams(1000, 0.8)
        dist = stationary_analytic(params)
        assert fixed_point_residual(dist, params) <= 1e-10

    @pytest.mark.parametrize("n", [10, 11, 100, 101])
    @pytest.mark.parametrize("temperature", [0.1, 1.0, 100.0])
    def test_symmetry(self, n, temperature):
        pi = stationary_analytic(ModelParams(n, temperature)).probabilities
        assert np.max(np.abs(pi - pi[::-1])) <= 1e-10

    def test_large_temperature_limit(self):
        for n in (10, 100):
            pi = stationary_analytic(ModelParams(n, 1e6)).probabilities
            reference = binom.pmf(np.arange(n + 1), n, 0.5)
            assert total_variation(pi, reference) <= 1e-5

    def test_bimodality_transition(self):
        temperatures = [0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0]
        counts = [
            mode_count(stationary_analytic(ModelParams(100, t)).probabilities)
            for t in temperatures
        ]
        assert counts[0] == 2
        assert counts[-1] == 1
        assert set(counts) == {1, 2}

    def test_power_reports_non_convergence(self):
        # nearly reducible chain: mixing is far too slow for 40 iterations
        slow = np.array([
            [1.0 - 1e-7, 1e-7, 0.0],
            [0.0, 1.0 - 1e-7, 1e-7],
            [5e-8, 5e-8, 1.0 - 1e-7],
        ])
        kernel = TransitionKernel(matrix=slow, params=ModelParams(2, 1.0))
        with pytest.raises(ConvergenceError, match="residual"):
            stationary_power(kernel, tol=1e-12, max_iters=40)

    def test_power_rejects_bad_tol(self):
        kernel = build_kernel(ModelParams(10, 1.0))
        with pytest.raises(ParameterError):
            stationary_power(kernel, tol=0.0)

    def test_eigen_rejects_malformed_kernel(self):
        params = ModelParams(2, 1.0)
        broken = TransitionKernel(matrix=np.eye(3), params=params)
        with pytest.raises(ConvergenceError):
            stationary_eigen(broken)

    def test_apply_kernel_matches_dense_product(self):
        params = ModelParams(24, 0.6)
        kernel = build_kernel(params)
        rng = np.random.default_rng(2)
        pi = rng.dirichlet(np.ones(25))
        direct = pi @ kernel.matrix
        blockwise = apply_kernel(pi, params)
        assert np.max(np.abs(direct - blockwise)) <= 1e-12


class TestStationaryMean:
    def test_symmetric_distribution(self):
        dist = StateDistribution(np.array([0.2, 0.1, 0.4, 0.1, 0.2]))
        assert stationary_mean(dist) == pytest.approx(0.5, abs=1e-10)

    def test_point_mass_at_top(self):
        dist = StateDistribution(np.array([0.0, 0.0, 0.0, 1.0]))
        assert stationary_mean(dist) == 1.0

    def test_stationary_mean_is_half(self):
        dist = stationary_analytic(ModelParams(100, 1.0))
        assert stationary_mean(dist) == pytest.approx(0.5, abs=1e-9)


class TestCsvExport:
    def test_kernel_round_trip(self, tmp_path):
        kernel = build_kernel(ModelParams(3, 0.7))
        path = tmp_path / "kernel.csv"
        write_kernel_csv(kernel, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "from\\to,0,1,2,3"
        assert len(lines) == 5
        for i, line in enumerate(lines[1:]):
            cells = line.split(",")
            assert cells[0] == str(i)
            values = [float(c) for c in cells[1:]]
            assert values == list(kernel.matrix[i])

    def test_distribution_round_trip(self, tmp_path):
        dist = stationary_analytic(ModelParams(10, 0.4))
        path = tmp_path / "dist.csv"
        write_distribution_csv(dist, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "state,probability"
        values = [float(line.split(",")[1]) for line in lines[1:]]
        assert values == list(dist.probabilities)
