import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from sizebiased import sizes
from sizebiased.errors import DomainError, IndexOutOfRange, UnsupportedFamily
from sizebiased.sizes import INFINITY, INTERIOR, ZERO, Tristate


def ks_exact(theta: Fraction, i: int) -> Fraction:
    # (theta)_{i-1} / (i-1)! in exact rationals
    num = Fraction(1)
    for k in range(i - 1):
        num *= theta + k
    return num / math.factorial(i - 1)


PARAMETRIC = [
    sizes.constant(1.0),
    sizes.constant(2.5),
    sizes.geometric(0.5),
    sizes.geometric(1.5),
    sizes.power(-2.0),
    sizes.power(-0.5),
    sizes.power(1.0),
    sizes.log_power(0.5),
    sizes.log_power(1.0),
    sizes.log_power(2.0),
    sizes.log_plus_two_log_log(),
    sizes.karamata_stirling(0.5),
    sizes.karamata_stirling(1.0),
    sizes.karamata_stirling(2.0),
    sizes.karamata_stirling(3.7),
]


class TestEvaluate:
    def test_karamata_stirling_theta_two_counts_up(self):
        assert sizes.evaluate(sizes.karamata_stirling(2.0), 4) == pytest.approx(4.0, rel=1e-15)
        assert sizes.values(sizes.karamata_stirling(2.0), 6) == pytest.approx([1, 2, 3, 4, 5, 6], rel=1e-14)

    def test_geometric(self):
        assert sizes.evaluate(sizes.geometric(0.5), 3) == 0.125

    @pytest.mark.parametrize("i", [1, 2, 17, 1000])
    def test_constant(self, i):
        assert sizes.evaluate(sizes.constant(1.0), i) == 1.0

    @pytest.mark.parametrize("theta", [Fraction(1, 2), Fraction(2), Fraction(37, 10), Fraction(7)])
    def test_karamata_stirling_matches_exact_pochhammer(self, theta):
        desc = sizes.karamata_stirling(float(theta))
        got = sizes.values(desc, 40)
        want = [float(ks_exact(theta, i)) for i in range(1, 41)]
        np.testing.assert_allclose(got, want, rtol=1e-12)

    @pytest.mark.parametrize("theta", [0.3, 2.0, 5.5])
    def test_karamata_stirling_recurrence(self, theta):
        w = sizes.values(sizes.karamata_stirling(theta), 500)
        i = np.arange(1, 500)
        assert w[0] == 1.0
        np.testing.assert_allclose(w[1:] / w[:-1], (theta + i - 1) / i, rtol=1e-12)

    def test_karamata_stirling_large_index_against_gamma(self):
        # past the log-space switch the value still tracks Gamma(theta+i-1)/(Gamma(theta) Gamma(i))
        theta, i = 60.0, 2000
        logw = sizes.log_values(sizes.karamata_stirling(theta), i)[-1]
        want = special.gammaln(theta + i - 1) - special.gammaln(theta) - special.gammaln(i)
        assert logw == pytest.approx(want, rel=1e-10)
        assert sizes.evaluate(sizes.karamata_stirling(theta), i) == pytest.approx(math.exp(want), rel=1e-9)

    def test_karamata_stirling_overflow_reported(self):
        with pytest.raises(OverflowError):
            sizes.evaluate(sizes.karamata_stirling(400.0), 3000)

    def test_theta_one_is_constant_one_exactly(self):
        assert np.array_equal(sizes.values(sizes.karamata_stirling(1.0), 1000), np.ones(1000))

    def test_log_plus_two_log_log_convention(self):
        desc = sizes.log_plus_two_log_log()
        assert sizes.evaluate(desc, 1) == math.log(2)
        assert sizes.evaluate(desc, 10) == pytest.approx(math.log(11) + 2 * math.log(math.log(11)))

    def test_table_index_out_of_range(self):
        desc = sizes.explicit_table([1.0, 2.0])
        assert sizes.evaluate(desc, 2) == 2.0
        with pytest.raises(IndexOutOfRange):
            sizes.evaluate(desc, 3)

    def test_geometric_overflow(self):
        with pytest.raises(OverflowError):
            sizes.evaluate(sizes.geometric(2.0), 5000)
        with pytest.raises(OverflowError):
            sizes.values(sizes.geometric(2.0), 5000)
        assert sizes.log_values(sizes.geometric(2.0), 5000)[-1] == pytest.approx(5000 * math.log(2))

    @pytest.mark.parametrize("bad", [[1.0, 0.0], [1.0, -2.0], [float("nan")], [float("inf")], []])
    def test_table_rejects_bad_entries(self, bad):
        with pytest.raises(DomainError):
            sizes.explicit_table(bad)

    @pytest.mark.parametrize(
        "ctor, arg", [(sizes.constant, 0.0), (sizes.geometric, -1.0), (sizes.log_power, 0.0), (sizes.karamata_stirling, -0.5)]
    )
    def test_bad_parameters(self, ctor, arg):
        with pytest.raises(DomainError):
            ctor(arg)

    def test_index_must_be_positive(self):
        with pytest.raises(DomainError):
            sizes.evaluate(sizes.constant(), 0)

    @pytest.mark.parametrize("desc", PARAMETRIC, ids=repr)
    def test_positive_and_consistent(self, desc):
        w = sizes.values(desc, 300)
        assert np.all(w > 0)
        assert [sizes.evaluate(desc, i) for i in (1, 2, 50, 300)] == pytest.approx(w[[0, 1, 49, 299]], rel=1e-12)
        np.testing.assert_allclose(np.exp(sizes.log_values(desc, 300)), w, rtol=1e-12)


class TestPartialSum:
    def test_examples(self):
        assert sizes.partial_sum(sizes.karamata_stirling(2.0), 4) == pytest.approx(10.0, rel=1e-15)
        assert sizes.partial_sum(sizes.constant(1.0), 5) == 5.0
        assert sizes.partial_sum(sizes.geometric(0.5), 3) == 0.875

    @pytest.mark.parametrize("desc", PARAMETRIC, ids=repr)
    def test_differences_recover_sizes(self, desc):
        n = 1000  # geometric q=0.5 underflows past ~1070
        S = sizes.partial_sums(desc, n)
        w = sizes.values(desc, n)
        # one rounding of S_n plus one of S_{n-1}
        tol = 4 * np.finfo(float).eps * S[1:]
        assert np.all(np.abs(np.diff(S) - w[1:]) <= tol)
        assert S[-1] == pytest.approx(sizes.partial_sum(desc, n), rel=1e-15)

    def test_compensation_beats_naive(self):
        desc = sizes.explicit_table([1.0] + [1e-16] * 10_000)
        assert sizes.partial_sum(desc, 10_001) == pytest.approx(1.0 + 1e-12, rel=1e-15)
        assert sizes.partial_sums(desc, 10_001)[-1] == pytest.approx(1.0 + 1e-12, rel=1e-15)


class TestMetadata:
    def test_geometric_small_q_summable(self):
        meta = sizes.analytic_metadata(sizes.geometric(0.5))
        assert meta.total_summable is Tristate.YES
        assert meta.small_part_summable is Tristate.YES

    def test_log_power_two_beta_zero(self):
        assert sizes.analytic_metadata(sizes.log_power(2.0)).beta == 0.0

    def test_constant_interior(self):
        assert INTERIOR in sizes.analytic_metadata(sizes.constant(1.0)).accumulation_points

    def test_geometric_large_q(self):
        meta = sizes.analytic_metadata(sizes.geometric(3.0))
        assert meta.accumulation_points == {INFINITY}
        assert meta.beta == 0.0

    def test_power_regions(self):
        assert sizes.analytic_metadata(sizes.power(-1.5)).total_summable is Tristate.YES
        low = sizes.analytic_metadata(sizes.power(-1.0))
        assert low.accumulation_points == {ZERO} and low.total_summable is Tristate.NO

    def test_log_power_regions(self):
        assert math.isinf(sizes.analytic_metadata(sizes.log_power(0.5)).beta)
        one = sizes.analytic_metadata(sizes.log_power(1.0))
        assert one.beta == 1.0 and one.converges_at_beta is Tristate.NO
        llog = sizes.analytic_metadata(sizes.log_plus_two_log_log())
        assert llog.beta == 1.0 and llog.converges_at_beta is Tristate.YES

    def test_table_unsupported(self):
        with pytest.raises(UnsupportedFamily):
            sizes.analytic_metadata(sizes.explicit_table([1.0, 2.0]))

    @pytest.mark.parametrize("desc", PARAMETRIC, ids=repr)
    def test_invariants(self, desc):
        meta = sizes.analytic_metadata(desc)
        assert meta.complete
        assert meta.beta >= 0
        if meta.total_summable is Tristate.YES:
            assert meta.small_part_summable is Tristate.YES

    def test_summable_needs_summable_small_part(self):
        with pytest.raises(DomainError):
            sizes.SizeMetadata({ZERO}, Tristate.NO, Tristate.YES, 0.0, Tristate.NOT_APPLICABLE)

    def test_negative_beta_rejected(self):
        with pytest.raises(DomainError):
            sizes.SizeMetadata({INFINITY}, Tristate.YES, Tristate.NO, -1.0, Tristate.NOT_APPLICABLE)

    @pytest.mark.parametrize("theta", [0.25, 0.9])
    def test_small_theta_vanishing_nonsummable(self, theta):
        # w ~ i^(theta-1)/Gamma(theta): check the tail really decays and the sum keeps growing
        desc = sizes.karamata_stirling(theta)
        w = sizes.values(desc, 100_000)
        assert w[-1] < w[999] < w[0]
        assert sizes.partial_sum(desc, 100_000) > 2 * sizes.partial_sum(desc, 1000)
        assert sizes.analytic_metadata(desc).accumulation_points == {ZERO}


class TestSerialization:
    @pytest.mark.parametrize("desc", PARAMETRIC + [sizes.explicit_table([0.5, 1.0, 3.0])], ids=repr)
    def test_roundtrip(self, desc):
        again = sizes.SizeFunction.from_json(desc.to_json())
        assert again == desc
        assert again.params == desc.params

    def test_schema(self):
        data = json.loads(sizes.explicit_table([1, 2]).to_json())
        assert data["family"] == "explicit_table"
        assert data["table"] == [1.0, 2.0]
        assert data["params"] == {}

    def test_unknown_family(self):
        with pytest.raises(UnsupportedFamily):
            sizes.SizeFunction.from_dict({"family": "zipf", "params": {}})

    def test_wrong_params(self):
        with pytest.raises(DomainError):
            sizes.SizeFunction.from_dict({"family": "geometric", "params": {"p": 0.5}})

    def test_immutable(self):
        desc = sizes.geometric(0.5)
        with pytest.raises(AttributeError):
            desc.family = "constant"


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(1e-6, 1e6), min_size=1, max_size=200))
def test_table_partial_sum_is_fsum(table):
    desc = sizes.explicit_table(table)
    assert sizes.partial_sum(desc, len(table)) == math.fsum(table)
