import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degperc import (
    DegreeDistribution,
    DegreeSequence,
    DivergentMomentError,
    TruncationWarning,
    dist_from_config,
    from_distribution,
    generating_derivatives,
    offspring_mean,
    q_value,
)
from degperc.zeta import zeta_tail


def normalized_tables(max_entries=6, max_degree=20):
    return (
        st.dictionaries(
            st.integers(0, max_degree),
            st.floats(0.01, 1.0),
            min_size=1,
            max_size=max_entries,
        )
        .map(lambda d: {i: w / math.fsum(d.values()) for i, w in d.items()})
        .map(DegreeDistribution.from_weights)
    )


class TestDegreeSequence:
    def test_basic_caches(self):
        seq = DegreeSequence([1, 1, 3, 3])
        assert seq.n == 4
        assert seq.total_degree == 8
        assert seq.num_edges == 4
        assert seq.max_degree == 3
        assert seq.counts.tolist() == [0, 2, 0, 2]

    def test_odd_sum_rejected(self):
        with pytest.raises(ValueError, match="even"):
            DegreeSequence([1, 1, 1])

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            DegreeSequence([2, -1, 1])

    def test_immutable(self):
        seq = DegreeSequence([2, 2])
        with pytest.raises(ValueError):
            seq.degrees[0] = 5

    def test_point_owners(self):
        seq = DegreeSequence([2, 0, 2])
        assert seq.point_owners().tolist() == [0, 0, 2, 2]


class TestFromDistribution:
    def test_regular_point_mass(self):
        seq = from_distribution(DegreeDistribution.regular(3), 10)
        assert seq.degrees.tolist() == [3] * 10
        assert seq.total_degree == 30

    def test_exact_proportions(self):
        dist = DegreeDistribution.from_weights({1: 0.5, 3: 0.5})
        seq = from_distribution(dist, 4)
        assert seq.degrees.tolist() == [1, 1, 3, 3]
        assert seq.total_degree == 8

    def test_power_law_cap_excludes_tail(self):
        # cap = floor(10000^(1/9)) = 2, so only degree 2 survives and the
        # dropped mass must be reported
        cap = int(10000 ** (1.0 / 9.0))
        assert cap == 2
        dist = DegreeDistribution.power_law(3.5, min_degree=2)
        dropped = 1.0 - dist.weight(2)
        assert dropped > 0.25  # substantial tail above the cap
        with pytest.warns(TruncationWarning, match="drops probability mass"):
            seq = from_distribution(dist, 10000, max_degree_cap=cap)
        assert seq.degrees.tolist() == [2] * 10000

    def test_entirely_above_cap(self):
        with pytest.raises(ValueError, match="no support"):
            from_distribution(DegreeDistribution.regular(5), 10, max_degree_cap=3)

    def test_power_law_requires_cap(self):
        with pytest.raises(ValueError, match="max_degree_cap"):
            from_distribution(DegreeDistribution.power_law(4.0), 100)

    def test_parity_repair_logged(self, caplog):
        dist = DegreeDistribution.from_weights({1: 0.5, 3: 0.5})
        with caplog.at_level(logging.INFO, logger="degperc.degrees"):
            seq = from_distribution(dist, 5)
        assert seq.total_degree % 2 == 0
        assert seq.n == 5
        assert "parity repair" in caplog.text
        # one of the three degree-3 quota winners gave up a unit of degree
        assert seq.degrees.tolist() == [1, 1, 1, 2, 3]

    def test_largest_remainder_tie_prefers_smaller_degree(self):
        dist = DegreeDistribution.from_weights({2: 0.5, 4: 0.5})
        seq = from_distribution(dist, 5)
        counts = seq.counts
        assert counts[2] == 3 and counts[4] == 2

    @given(
        dist=normalized_tables(),
        n=st.integers(1, 400),
    )
    @settings(max_examples=80, deadline=None)
    def test_realized_fractions_track_weights(self, dist, n):
        seq = from_distribution(dist, n)
        assert seq.n == n
        assert seq.total_degree % 2 == 0
        realized = seq.empirical_distribution()
        # largest-remainder keeps each count within one of its quota and the
        # parity repair moves at most one more vertex
        for i, w in dist.weights.items():
            assert abs(realized.get(i, 0.0) - w) <= 2.0 / n + 1e-12


class TestGeneratingDerivatives:
    def test_regular(self):
        assert generating_derivatives(DegreeDistribution.regular(3)) == (3.0, 6.0)

    def test_mixture_hand_value(self):
        dist = DegreeDistribution.from_weights({1: 0.5, 3: 0.5})
        l1, l2 = generating_derivatives(dist)
        assert l1 == pytest.approx(2.0, abs=1e-15)
        assert l2 == pytest.approx(3.0, abs=1e-15)

    def test_power_law_gamma4_closed_form(self):
        # c = 1/zt(4), L1 = c zt(3), L2 = c (zt(2) - zt(3)), sums from k=2,
        # cross-checked against plain partial sums in test_zeta
        dist = DegreeDistribution.power_law(4.0, min_degree=2)
        l1, l2 = generating_derivatives(dist)
        c = 1.0 / zeta_tail(4.0, 2)
        assert l1 == pytest.approx(c * zeta_tail(3.0, 2), rel=1e-12)
        assert l2 == pytest.approx(c * (zeta_tail(2.0, 2) - zeta_tail(3.0, 2)), rel=1e-12)

    @pytest.mark.parametrize("gamma", [3.0, 2.5, 2.0, 1.5])
    def test_divergent_second_moment(self, gamma):
        with pytest.raises(DivergentMomentError):
            generating_derivatives(DegreeDistribution.power_law(gamma))

    def test_unnormalizable_exponent_rejected(self):
        with pytest.raises(ValueError, match="exceed 1"):
            DegreeDistribution.power_law(1.0)


class TestQValue:
    def test_three_regular(self):
        dist = DegreeDistribution.regular(3)
        assert q_value(dist) == pytest.approx(3.0, abs=1e-15)

    def test_degree_two_critical_line(self):
        assert q_value(DegreeDistribution.regular(2)) == 0.0

    def test_concrete_sequence(self):
        assert q_value(DegreeSequence([1, 1, 1, 3])) == pytest.approx(0.0, abs=1e-15)

    @given(dist=normalized_tables())
    @settings(max_examples=60, deadline=None)
    def test_matches_derivative_difference(self, dist):
        l1, l2 = generating_derivatives(dist)
        assert q_value(dist) == l2 - l1  # same summation order, exact


class TestOffspringMean:
    @pytest.mark.parametrize("d", [3, 4, 7])
    def test_regular(self, d):
        assert offspring_mean(DegreeDistribution.regular(d)) == pytest.approx(d - 1)

    def test_leaves_have_no_children(self):
        assert offspring_mean(DegreeDistribution.regular(1)) == 0.0

    def test_mixture(self):
        dist = DegreeDistribution.from_weights({1: 0.5, 3: 0.5})
        assert offspring_mean(dist) == pytest.approx(1.5, abs=1e-15)

    def test_zero_first_moment(self):
        with pytest.raises(ValueError, match="first moment"):
            offspring_mean(DegreeDistribution.regular(0))

    @given(dist=normalized_tables())
    @settings(max_examples=60, deadline=None)
    def test_ratio_identity(self, dist):
        l1, l2 = generating_derivatives(dist)
        if l1 <= 0:
            return
        assert offspring_mean(dist) * l1 == pytest.approx(l2, rel=1e-12)


class TestConfigParsing:
    def test_round_trip_table(self):
        dist = dist_from_config({"kind": "table", "weights": {"1": 0.5, "3": 0.5}})
        assert dist.weights == {1: 0.5, 3: 0.5}
        assert dist.config() == {"kind": "table", "weights": {"1": 0.5, "3": 0.5}}

    def test_regular_string(self):
        assert dist_from_config("regular:3").weights == {3: 1.0}

    def test_table_string(self):
        assert dist_from_config("table:1=0.5,3=0.5").weights == {1: 0.5, 3: 0.5}

    def test_powerlaw_string_with_min_degree(self):
        dist = dist_from_config("powerlaw:3.5:3")
        assert dist.tail.gamma == 3.5
        assert dist.tail.min_degree == 3

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            dist_from_config({"kind": "mystery"})

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError, match="sum to 1"):
            DegreeDistribution.from_weights({1: 0.5, 3: 0.6})

    def test_truncate_renormalizes(self):
        dist = DegreeDistribution.power_law(4.0, min_degree=2)
        finite = dist.truncate(40)
        assert math.fsum(finite.weights.values()) == pytest.approx(1.0, abs=1e-12)
        # relative weights preserved
        assert finite.weights[3] / finite.weights[2] == pytest.approx(
            (2.0 / 3.0) ** 4.0, rel=1e-12
        )
