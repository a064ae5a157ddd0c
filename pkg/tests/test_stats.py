import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sizebiased import samplers, sizes, stats
from sizebiased.errors import DomainError, InvalidCode


def cq_oracle(q):
    with mpmath.workdps(40):
        return float(mpmath.nsum(lambda k: 1 / (1 + mpmath.mpf(q) ** -k), [1, mpmath.inf]))


def pair_sum_expected_inversions(q, n):
    # sum over pairs i < j of P[j before i] = q^j / (q^i + q^j)
    return math.fsum(q**j / (q**i + q**j) for i in range(1, n) for j in range(i + 1, n + 1))


arrangement = st.integers(1, 60).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


class TestPositionsAndLehmer:
    def test_positions(self):
        assert stats.positions([3, 1, 2]).tolist() == [2, 3, 1]

    @pytest.mark.parametrize("bad", [[], [0, 1], [1, 1], [1, 3], [[1, 2]]])
    def test_positions_reject(self, bad):
        with pytest.raises(DomainError):
            stats.positions(bad)

    def test_known_code(self):
        assert stats.lehmer_code([3, 1, 4, 2]).tolist() == [1, 2, 1, 3]
        assert stats.order_from_lehmer([1, 2, 1, 3]).tolist() == [3, 1, 4, 2]

    def test_exhaustive_bijection(self):
        for n in range(1, 7):
            codes = set()
            for perm in itertools.permutations(range(1, n + 1)):
                code = tuple(stats.lehmer_code(perm).tolist())
                assert all(1 <= r <= i for i, r in enumerate(code, start=1))
                assert tuple(stats.order_from_lehmer(code).tolist()) == perm
                codes.add(code)
            assert len(codes) == math.factorial(n)

    def test_invalid_code(self):
        with pytest.raises(InvalidCode):
            stats.order_from_lehmer([1, 3])

    @settings(max_examples=100, deadline=None)
    @given(arrangement)
    def test_code_by_definition(self, perm):
        code = stats.lehmer_code(perm)
        pos = {v: k for k, v in enumerate(perm)}
        for i in range(1, len(perm) + 1):
            assert code[i - 1] == 1 + sum(pos[j] < pos[i] for j in range(1, i))


class TestRecords:
    def test_examples(self):
        assert stats.count_records([1, 2, 3, 4]) == [1]
        assert stats.count_records([4, 3, 2, 1]) == [1, 2, 3, 4]
        assert stats.count_records([3, 1, 4, 2]) == [1, 3]

    @settings(max_examples=100, deadline=None)
    @given(arrangement)
    def test_records_are_rank_one(self, perm):
        code = stats.lehmer_code(perm)
        assert stats.count_records(perm) == [i + 1 for i in np.flatnonzero(code == 1)]

    def test_indicator_matrix_matches_rows(self):
        orders = samplers.sample_many("exponential", sizes.power(0.5), 30, 200, seed=2)
        mat = stats.record_indicators(orders)
        for row, ind in zip(orders, mat):
            assert (np.flatnonzero(ind) + 1).tolist() == stats.count_records(row)

    def test_indicator_shape_check(self):
        with pytest.raises(DomainError):
            stats.record_indicators(np.array([1, 2, 3]))

    def test_constant_sizes_record_count_is_harmonic(self):
        n, N = 10**4, 1000
        orders = samplers.sample_many("exponential", sizes.constant(1.0), n, N, seed=3)
        mean = stats.record_indicators(orders).sum(axis=1).mean()
        H = math.fsum(1 / k for k in range(1, n + 1))
        assert abs(mean - H) < 0.1 * H


class TestInversions:
    def test_examples(self):
        assert stats.count_inversions([1, 2, 3, 4, 5]).d_n == 0
        assert stats.count_inversions([4, 3, 2, 1]).d_n == 6
        summary = stats.count_inversions([3, 1, 4, 2])
        assert (summary.n, summary.d_n, summary.normalized) == (4, 3, 0.75)
        assert stats.count_inversions_bruteforce([3, 1, 4, 2]) == 3

    def test_exhaustive_small(self):
        for n in range(1, 7):
            for perm in itertools.permutations(range(1, n + 1)):
                assert stats.count_inversions(perm).d_n == stats.count_inversions_bruteforce(perm)

    @settings(max_examples=100, deadline=None)
    @given(arrangement)
    def test_lehmer_identity(self, perm):
        # D_n = sum_i (i - R_i)
        code = stats.lehmer_code(perm)
        d = stats.count_inversions(perm).d_n
        assert d == int(np.sum(np.arange(1, len(perm) + 1) - code))
        assert 0 <= d <= len(perm) * (len(perm) - 1) // 2


class TestCq:
    def test_reference_value(self):
        res = stats.c_q(0.5, tol=1e-6)
        assert res.value == pytest.approx(0.7645, abs=5e-5)
        assert res.terms >= 19 and res.bound < 1e-6

    @pytest.mark.parametrize("q", [0.1, 0.3, 0.5, 0.7, 0.9, 0.99])
    def test_against_high_precision(self, q):
        res = stats.c_q(q, tol=1e-13)
        assert abs(res.value - cq_oracle(q)) <= res.bound + 1e-14

    def test_limit_zero(self):
        assert stats.c_q(1e-6).value < 1e-5

    def test_monotone(self):
        assert stats.c_q(0.3).value < stats.c_q(0.5).value < stats.c_q(0.7).value

    @pytest.mark.parametrize("q, tol", [(0.0, 1e-6), (1.0, 1e-6), (-0.5, 1e-6), (0.5, 0.0)])
    def test_domain(self, q, tol):
        with pytest.raises(DomainError):
            stats.c_q(q, tol)


class TestExpectedInversions:
    def test_two_items(self):
        assert stats.expected_inversions(sizes.geometric(0.5), 2) == pytest.approx(1 / 3, rel=1e-15)
        assert stats.expected_inversions(sizes.geometric(1 - 1e-9), 2) == pytest.approx(0.5, abs=1e-8)

    @pytest.mark.parametrize("q", [0.2, 0.5, 0.9])
    @pytest.mark.parametrize("n", [2, 5, 40, 300])
    def test_matches_pair_sum(self, q, n):
        assert stats.expected_inversions(sizes.geometric(q), n) == pytest.approx(pair_sum_expected_inversions(q, n), rel=1e-12)

    def test_linear_growth(self):
        n = 10**4
        assert stats.expected_inversions(sizes.geometric(0.5), n) / n == pytest.approx(stats.c_q(0.5).value, rel=0.01)

    def test_monte_carlo_small(self):
        desc, n, N = sizes.geometric(0.7), 12, 20_000
        orders = samplers.sample_many("exponential", desc, n, N, seed=4)
        d = np.array([stats.count_inversions(o).d_n for o in orders])
        se = d.std(ddof=1) / math.sqrt(N)
        assert abs(d.mean() - stats.expected_inversions(desc, n)) < 4 * se

    @pytest.mark.parametrize("desc, n", [(sizes.geometric(2.0), 5), (sizes.constant(), 5), (sizes.geometric(0.5), 1)])
    def test_domain(self, desc, n):
        with pytest.raises(DomainError):
            stats.expected_inversions(desc, n)


class TestSteele:
    def test_endpoints(self):
        desc = sizes.power(1.0)
        assert stats.steele_Fn(desc, 100, 0.0) == 0.0
        assert stats.steele_Fn(desc, 100, 1.0) == 1.0

    def test_hand_value(self):
        # w(i) = i, n = 10, t = 0.35: floor(3.5) = 3, (1+2+3)/55
        assert stats.steele_Fn(sizes.power(1.0), 10, 0.35) == pytest.approx(6 / 55, rel=1e-15)

    def test_grid_points_hit_integers(self):
        # t = k/n must include item k even when t*n rounds below k
        n = 100
        t = np.arange(n + 1) / n
        np.testing.assert_allclose(stats.steele_Fn(sizes.constant(), n, t), t, rtol=1e-14)

    def test_monotone_on_grid(self):
        f = stats.steele_Fn(sizes.power(-0.5), 1000, stats.steele_grid())
        assert np.all(np.diff(f) >= 0)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 2.0])
    def test_power_limit(self, alpha):
        # sum_{i <= nt} i^alpha / sum_{i <= n} i^alpha -> t^(alpha+1)
        assert stats.steele_sup_distance(sizes.power(alpha), 10**5, alpha + 1) < 0.01

    def test_domain(self):
        with pytest.raises(DomainError):
            stats.steele_Fn(sizes.constant(), 10, 1.5)
