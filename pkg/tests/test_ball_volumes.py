import math
import warnings
from fractions import Fraction

import pytest

import oracles
from permrd import config
from permrd import ball_volumes as bv
from permrd.errors import DomainError, ExactComputationInfeasible, OracleScaleError

TOL = 1e-9


def exact_sphere(n, r):
    return bv.kendall_ball_exact(n, r) - (bv.kendall_ball_exact(n, r - 1) if r else 0)


class TestKendallExamples:
    def test_ball(self):
        assert bv.kendall_ball_exact(3, 1) == 3
        assert bv.kendall_ball_exact(3, 3) == 6
        assert bv.kendall_ball_exact(3, 2) == 5
        assert bv.kendall_ball_exact(3, 99) == 6

    def test_sphere(self):
        assert bv.kendall_sphere_exact(3, 2) == 2
        assert sum(oracles.kendall(p, (1, 2, 3)) == 2 for p in oracles.perms(3)) == 2
        for n in range(1, 9):
            assert bv.kendall_sphere_exact(n, 0) == 1

    def test_upper_binom(self):
        assert bv.kendall_ball_upper_binom(3, 2) == 6 >= bv.kendall_ball_exact(3, 2)
        assert bv.kendall_ball_upper_binom(3, 1) == 3 == bv.kendall_ball_exact(3, 1)
        assert bv.kendall_ball_upper_binom(1, 1) == 1

    def test_lower_quarter(self):
        assert bv.kendall_ball_lower_quarter(5, 2) == Fraction(15, 4)
        assert bv.kendall_ball_exact(5, 2) == 14
        assert bv.kendall_ball_lower_quarter(3, 1) == Fraction(3, 4)
        with pytest.raises(DomainError):
            bv.kendall_ball_lower_quarter(3, 3)

    def test_lower_floor(self):
        assert bv.kendall_ball_lower_floor(4, 4) == 8
        assert bv.kendall_ball_exact(4, 4) == 20
        assert bv.kendall_ball_lower_floor(5, 0) == 1
        assert bv.kendall_ball_lower_floor(3, 6) == 6

    @pytest.mark.parametrize("n", range(1, 11))
    def test_lower_floor_below_exact(self, n):
        for D in range(0, n * (n - 1) // 2 + 2 * n):
            assert bv.kendall_ball_lower_floor(n, D) <= bv.kendall_ball_exact(n, D)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            bv.kendall_ball_exact(0, 1)
        with pytest.raises(DomainError):
            bv.kendall_ball_exact(3, -1)
        with pytest.raises(DomainError):
            bv.kendall_sphere_exact(3, 4)


class TestKendallProperties:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_sphere_formula_below_n(self, n):
        for r in range(n):
            assert bv.kendall_sphere_formula(n, r) == exact_sphere(n, r)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_sphere_sums_to_ball(self, n):
        for R in range(n):
            assert sum(bv.kendall_sphere_exact(n, s) for s in range(R + 1)) == bv.kendall_ball_exact(n, R)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_mahonian_symmetry(self, n):
        m = n * (n - 1) // 2
        for r in range(m + 1):
            assert exact_sphere(n, r) == exact_sphere(n, m - r)

    def test_formula_out_of_range_warns(self):
        # I(4, 5): the alternating sum is 2 while the true count is 3
        assert exact_sphere(4, 5) == 3
        with pytest.warns(bv.FormulaRangeWarning):
            assert bv.kendall_sphere_exact(4, 5) == 2

    def test_formula_on_diagonal_is_silent(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            for n in range(3, 12):
                assert bv.kendall_sphere_exact(n, n) == exact_sphere(n, n)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_sandwich(self, n):
        for r in range(1, n):
            B = bv.kendall_ball_exact(n, r)
            assert bv.kendall_ball_lower_quarter(n, r) <= B <= bv.kendall_ball_upper_binom(n, r)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_monotone_to_factorial(self, n):
        sizes = [bv.kendall_ball_exact(n, r) for r in range(n * (n - 1) // 2 + 1)]
        assert sizes == sorted(sizes)
        assert sizes[-1] == math.factorial(n)

    def test_mahonian_known_row(self):
        # inversion counts of S_4 by direct enumeration
        counts = [0] * 7
        for p in oracles.perms(4):
            counts[oracles.kendall(p, (1, 2, 3, 4))] += 1
        assert [exact_sphere(4, r) for r in range(7)] == counts


class TestChebyshev:
    def test_examples(self):
        assert bv.chebyshev_ball_exact(3, 1) == 3
        for n in range(1, 9):
            assert bv.chebyshev_ball_exact(n, 0) == 1
        assert bv.chebyshev_ball_exact(5, 4) == 120

    def test_bregman_examples(self):
        b = bv.chebyshev_ball_upper_bregman(3, 1)
        expected = math.sqrt(2) * 6 ** (1 / 3) * math.sqrt(2)
        assert abs(b.value - expected) < 1e-12
        assert b.value >= 3
        full = bv.chebyshev_ball_upper_bregman(5, 4)
        assert full.exact == 120
        assert bv.chebyshev_ball_upper_bregman(8, 2).value >= bv.chebyshev_ball_exact(8, 2)

    def test_lower_examples(self):
        assert bv.chebyshev_ball_lower(3, 1) == Fraction(3, 2)
        assert bv.chebyshev_ball_lower(5, 3) == Fraction(15, 2)
        assert bv.chebyshev_ball_lower(4, 3) == 6

    @pytest.mark.parametrize("n", range(1, 13))
    def test_fibonacci(self, n):
        assert bv.chebyshev_ball_exact(n, 1) == oracles.fibonacci(n + 1)

    @pytest.mark.parametrize("n", range(1, 13))
    def test_sandwich_log_space(self, n):
        for r in range(n):
            B = bv.chebyshev_ball_exact(n, r)
            lo = bv.chebyshev_ball_lower(n, r)
            up = bv.chebyshev_ball_upper_bregman(n, r)
            assert math.log(lo) <= math.log(B) + TOL
            assert math.log(B) <= up.ln_value + TOL

    @pytest.mark.parametrize("n", range(1, 13))
    def test_bregman_closed_form_matches_row_degrees(self, n):
        for r in range(n):
            a = bv.chebyshev_ball_upper_bregman(n, r)
            b = bv.bregman_from_row_degrees(n, r)
            assert a.factors == b.factors
            assert abs(a.ln_value - b.ln_value) < TOL

    @pytest.mark.parametrize("n", range(1, 7))
    def test_band_matrix_permanent_oracle(self, n):
        for r in range(n):
            assert bv.permanent_band_dp(n, r) == oracles.permanent(bv.band_matrix(n, r))

    @pytest.mark.parametrize("n", range(1, 11))
    def test_band_dp_equals_ryser(self, n):
        for r in range(n):
            assert bv.permanent_band_dp(n, r) == bv.permanent_ryser(bv.band_matrix(n, r))

    @pytest.mark.parametrize("n", range(1, 15))
    def test_corner_rooks_equals_band_dp(self, n):
        for r in range(n):
            if 2 * r + 1 >= n:
                assert bv.permanent_corner_rooks(n, r) == bv.permanent_band_dp(n, r)

    def test_ryser_general_matrix(self):
        m = [[1, 2, 0], [0, 1, 3], [4, 0, 1]]
        assert bv.permanent_ryser(m) == oracles.permanent(m)

    def test_monotone(self):
        for n in range(1, 9):
            sizes = [bv.chebyshev_ball_exact(n, r) for r in range(n)]
            assert sizes == sorted(sizes) and sizes[-1] == math.factorial(n)

    def test_large_routes(self):
        # corner rooks beyond the band budget
        n, r = 28, 14
        assert 2 * r + 1 > config.BAND_DP_MAX_BITS
        assert bv.chebyshev_ball_exact(n, r) == bv.permanent_corner_rooks(n, r)
        assert bv.chebyshev_ball_exact(n, r) <= math.factorial(n)

    def test_infeasible_carries_bounds(self):
        with pytest.raises(ExactComputationInfeasible) as info:
            bv.chebyshev_ball_exact(60, 20)
        b = info.value.bounds
        assert b["lower"] == bv.chebyshev_ball_lower(60, 20)
        assert b["upper_ln"] == bv.chebyshev_ball_upper_bregman(60, 20).ln_value
        assert math.log(b["lower"]) <= b["upper_ln"]


class TestBruteForce:
    def test_examples(self):
        assert bv.ball_brute_force("kendall", 3, 1) == 3
        assert bv.ball_brute_force("chebyshev", 3, 2) == 6
        assert bv.ball_brute_force("kendall", 4, 6) == 24

    @pytest.mark.parametrize("metric", ["kendall", "chebyshev"])
    @pytest.mark.parametrize("n", range(2, 9))
    def test_exact_equals_enumeration(self, metric, n):
        sizes = bv.ball_sizes_brute_force(metric, n)
        for r, s in enumerate(sizes):
            assert bv.ball_size(metric, n, r) == s
            if n <= 6:
                assert bv.ball_brute_force(metric, n, r) == s

    @pytest.mark.parametrize("metric", ["kendall", "chebyshev"])
    def test_numpy_matches_plain_python(self, metric):
        for n in range(1, 6):
            for r in range(bv.diameter(metric, n) + 1):
                assert bv.ball_brute_force(metric, n, r) == oracles.ball(metric, n, r)
                assert bv.ball_brute_force_naive(metric, n, r) == oracles.ball(metric, n, r)

    def test_cap(self):
        with pytest.raises(OracleScaleError):
            bv.ball_brute_force("kendall", config.BALL_ORACLE_CAP + 1, 1)


class TestGamma:
    def test_empty_product(self):
        assert bv.gamma_product(0.3, 1) == 1.0
        assert bv.gamma_product(0.5, 3) == pytest.approx((1 - 0.25) * (1 - 0.125))

    def test_domain(self):
        for z in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(DomainError):
                bv.gamma_product(z, 5)
        with pytest.raises(DomainError):
            bv.estimate_Kc(0.0)

    @pytest.mark.parametrize("c", [0.1, 0.5, 1.0, 3.0])
    def test_nonincreasing_in_factors(self, c):
        vals = [bv.estimate_Kc(c, N).value for N in range(1, 60)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))
        assert vals[-1] > 0

    @pytest.mark.parametrize("c", [0.25, 1.0])
    def test_tail_bound_brackets_long_product(self, c):
        est = bv.estimate_Kc(c)
        far = bv.estimate_Kc(c, 5000).value
        assert est.lower - 1e-15 <= far <= est.value + 1e-15

    def test_convergence_trend_c1(self):
        K = bv.estimate_Kc(1.0).value
        errs = [abs(float(bv.kendall_ball_ratio(n, n)) - K) for n in (20, 40, 80)]
        assert errs[0] > errs[1] > errs[2]
