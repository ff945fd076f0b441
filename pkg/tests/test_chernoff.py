import math

import numpy as np
import pytest

from bmmci import (
    FlipProfile,
    InvalidInputError,
    bernoulli_ci,
    canonicalize,
    chernoff_info,
    f_lambda,
    mixture_distribution,
    symmetric_ci,
)
from conftest import random_distribution


class TestFLambda:
    def test_identical_distributions(self):
        p = np.array([0.3, 0.7])
        assert f_lambda(p, p, 0.37) == pytest.approx(1.0, abs=1e-14)

    def test_disjoint_supports(self):
        assert f_lambda(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 0.5) == 0.0

    def test_bhattacharyya_value(self):
        p1 = np.array([0.25, 0.75])
        p2 = np.array([0.75, 0.25])
        assert f_lambda(p1, p2, 0.5) == pytest.approx(math.sqrt(0.75), abs=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            f_lambda(np.array([1.0]), np.array([0.5, 0.5]), 0.5)

    def test_lambda_out_of_range(self):
        p = np.array([0.5, 0.5])
        with pytest.raises(InvalidInputError):
            f_lambda(p, p, 1.5)

    def test_endpoint_limits(self):
        # f_0 sums p2 over the support of p1
        p1 = np.array([0.5, 0.5, 0.0])
        p2 = np.array([0.25, 0.25, 0.5])
        assert f_lambda(p1, p2, 0.0) == pytest.approx(0.5, abs=1e-14)
        assert f_lambda(p1, p2, 1.0) == pytest.approx(1.0, abs=1e-14)


class TestChernoffInfo:
    def test_identical_is_zero(self):
        p = np.array([0.2, 0.3, 0.5])
        res = chernoff_info(p, p)
        assert res.value == 0.0
        assert res.lambda_star == 0.5

    def test_symmetric_bernoulli_closed_form(self):
        res = chernoff_info(np.array([0.75, 0.25]), np.array([0.25, 0.75]))
        assert res.value == pytest.approx(-0.5 * math.log(0.75), abs=1e-12)
        assert res.lambda_star == pytest.approx(0.5, abs=1e-6)
        assert res.converged

    def test_single_column_mixture_pair(self):
        fp = FlipProfile((0.1,))
        p1 = mixture_distribution(canonicalize([0, 1, 1], 1), fp)
        p2 = mixture_distribution(canonicalize([0, 0, 1], 1), fp)
        eta = 0.8 / 3
        expected = -0.5 * math.log1p(-eta * eta)
        assert chernoff_info(p1, p2).value == pytest.approx(expected, abs=1e-10)

    def test_symmetry(self, rng):
        for _ in range(25):
            p1 = random_distribution(rng, 8)
            p2 = random_distribution(rng, 8)
            v12 = chernoff_info(p1, p2).value
            v21 = chernoff_info(p2, p1).value
            assert v12 == pytest.approx(v21, abs=1e-10)

    def test_disjoint_supports_infinite(self):
        res = chernoff_info(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        assert math.isinf(res.value)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            chernoff_info(np.array([1.0]), np.array([0.5, 0.5]))

    def test_log_f_three_point_convexity(self, rng):
        grid = np.linspace(0.0, 1.0, 11)
        for _ in range(20):
            p1 = random_distribution(rng, 6)
            p2 = random_distribution(rng, 6)
            logs = [math.log(f_lambda(p1, p2, lam)) for lam in grid]
            for a in range(len(grid) - 2):
                for c in range(a + 2, len(grid)):
                    for b in range(a + 1, c):
                        w = (grid[c] - grid[b]) / (grid[c] - grid[a])
                        chord = w * logs[a] + (1 - w) * logs[c]
                        assert logs[b] <= chord + 1e-9

    def test_value_dominates_midpoint_bound(self, rng):
        # the midpoint evaluation is feasible, so the optimized value is at
        # least as large as -log f_(1/2)
        for _ in range(40):
            p1 = random_distribution(rng, 5)
            p2 = random_distribution(rng, 5)
            mid = -math.log(f_lambda(p1, p2, 0.5))
            assert chernoff_info(p1, p2).value >= mid - 1e-12

    def test_swap_symmetric_outcome_pairing(self, rng):
        # distributions related by an outcome pairing with crossed masses
        # are minimized at lambda = 1/2 and equal the Bhattacharyya value
        for _ in range(20):
            half = random_distribution(rng, 4)
            p1 = np.concatenate([0.5 * half, 0.5 * half[::-1]])
            p2 = np.concatenate([0.5 * half[::-1], 0.5 * half])
            res = chernoff_info(p1, p2)
            assert res.lambda_star == pytest.approx(0.5, abs=1e-6)
            bhatta = -math.log(np.sqrt(p1 * p2).sum())
            assert res.value == pytest.approx(bhatta, abs=1e-10)

    def test_parity_offset_mixtures_are_swap_symmetric(self):
        fp = FlipProfile.constant(0.3, 2)
        p1 = mixture_distribution(canonicalize([0, 3], 2), fp)
        p2 = mixture_distribution(canonicalize([1, 2], 2), fp)
        res = chernoff_info(p1, p2)
        assert res.lambda_star == pytest.approx(0.5, abs=1e-6)
        bhatta = -math.log(float(np.sqrt(p1.probs * p2.probs).sum()))
        assert res.value == pytest.approx(bhatta, abs=1e-10)


class TestBernoulliCi:
    def test_equal_parameters(self):
        assert bernoulli_ci(0.3, 0.3) == 0.0

    def test_deterministic_opposites(self):
        assert math.isinf(bernoulli_ci(0.0, 1.0))

    def test_symmetric_gap_closed_form(self):
        assert bernoulli_ci(0.4, 0.6) == pytest.approx(-0.5 * math.log(0.96),
                                                       abs=1e-10)

    def test_range_validation(self):
        with pytest.raises(InvalidInputError):
            bernoulli_ci(-0.1, 0.5)
        with pytest.raises(InvalidInputError):
            bernoulli_ci(0.5, 1.5)

    def test_agrees_with_vector_form(self, rng):
        for _ in range(30):
            p, q = rng.random(2)
            direct = chernoff_info(np.array([1 - p, p]),
                                   np.array([1 - q, q])).value
            assert bernoulli_ci(p, q) == pytest.approx(direct, abs=1e-10)


class TestSymmetricCi:
    def test_zero_gap(self):
        assert symmetric_ci(0.0) == 0.0

    def test_full_gap_infinite(self):
        assert math.isinf(symmetric_ci(1.0))

    def test_value(self):
        assert symmetric_ci(0.16) == pytest.approx(
            -0.5 * math.log1p(-0.16 ** 2), abs=1e-15)

    def test_range_validation(self):
        with pytest.raises(InvalidInputError):
            symmetric_ci(-0.2)
        with pytest.raises(InvalidInputError):
            symmetric_ci(1.2)

    def test_matches_solver(self):
        for eps in (0.05, 0.3, 0.9):
            solver = bernoulli_ci((1 - eps) / 2, (1 + eps) / 2)
            assert symmetric_ci(eps) == pytest.approx(solver, abs=1e-10)


class TestBernoulliFamilyMinimum:
    @pytest.mark.parametrize("eps", [0.1, 0.3, 0.5])
    def test_grid_minimum_at_symmetric_center(self, eps):
        grid = [i / 1000 for i in range(int(round((1 - eps) * 1000)) + 1)]
        values = [bernoulli_ci(p, p + eps) for p in grid]
        best = min(range(len(grid)), key=values.__getitem__)
        assert abs(grid[best] - (1 - eps) / 2) <= 1e-3 + 1e-12
        assert min(values) == pytest.approx(symmetric_ci(eps), abs=1e-9)

    def test_random_pairs_never_beat_symmetric_value(self, rng):
        eps = 0.2
        floor = symmetric_ci(eps)
        for _ in range(2000):
            p = rng.uniform(1e-9, 1 - eps - 2e-9)
            q = rng.uniform(p + eps, 1 - 1e-9)
            assert bernoulli_ci(p, q) >= floor - 1e-12
