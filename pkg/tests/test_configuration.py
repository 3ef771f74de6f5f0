import math
from collections import Counter

import numpy as np
import pytest
from scipy.stats import chisquare

from degperc import (
    DegreeSequence,
    SimplicityExhaustedError,
    SparseRegimeWarning,
    predicted_simplicity,
    project,
    simplicity,
    uniform_matching,
    uniform_simple_graph,
    write_edge_list,
)
from degperc.oracle import enumerate_matchings, matching_count
from degperc.rng import derive_seed

CHI2_SIGNIFICANCE = 0.001


def canonical(matching) -> tuple:
    return tuple(sorted(tuple(sorted(pair)) for pair in matching.tolist()))


class TestUniformMatching:
    def test_single_edge_forced(self):
        graph = uniform_matching(DegreeSequence([1, 1]), 123)
        assert canonical(graph.matching) == ((0, 1),)
        assert project(graph).tolist() == [[0, 1]]

    def test_degrees_preserved_by_projection(self):
        seq = DegreeSequence([3, 1, 2, 0, 2])
        graph = uniform_matching(seq, 99)
        edges = project(graph)
        incidence = np.zeros(seq.n, dtype=int)
        for u, v in edges.tolist():
            incidence[u] += 1
            incidence[v] += 1  # loops counted twice
        assert incidence.tolist() == seq.degrees.tolist()

    def test_two_vertices_degree_two_equidistribution(self):
        # 3 matchings on 4 points; 30000 draws, each within 10000 +/- 500
        seq = DegreeSequence([2, 2])
        counts = Counter()
        for t in range(30000):
            counts[canonical(uniform_matching(seq, derive_seed(7, t)).matching)] += 1
        assert len(counts) == 3
        for c in counts.values():
            assert abs(c - 10000) <= 500

    def test_three_three_projection_law(self):
        # enumeration first: of the 15 matchings, 6 project to a triple edge
        # and 9 to a loop at each vertex plus one connecting edge
        seq = DegreeSequence([3, 3])
        owners = [0, 0, 0, 1, 1, 1]
        triple = loops = 0
        for matching in enumerate_matchings(seq):
            loop_pairs = sum(1 for a, b in matching if owners[a] == owners[b])
            if loop_pairs == 0:
                triple += 1
            elif loop_pairs == 2:
                loops += 1
            else:
                raise AssertionError("impossible pattern")
        assert (triple, loops) == (6, 9)

        draws = 30000
        observed_triple = 0
        for t in range(draws):
            graph = uniform_matching(seq, derive_seed(11, t))
            edges = project(graph)
            observed_triple += not np.any(edges[:, 0] == edges[:, 1])
        # 6 sigma around 6/15 * draws = 12000
        assert abs(observed_triple - draws * 6 / 15) <= 6 * math.sqrt(
            draws * (6 / 15) * (9 / 15)
        )

    @pytest.mark.parametrize("seq_degrees", [[2, 2], [1, 1, 1, 3]])
    def test_uniformity_chi2(self, seq_degrees):
        seq = DegreeSequence(seq_degrees)
        universe = {m: i for i, m in enumerate(enumerate_matchings(seq))}
        assert len(universe) == matching_count(seq.num_edges)
        counts = np.zeros(len(universe), dtype=np.int64)
        for t in range(100000):
            counts[universe[canonical(uniform_matching(seq, derive_seed(13, t)).matching)]] += 1
        _, pvalue = chisquare(counts)
        assert pvalue >= CHI2_SIGNIFICANCE

    def test_deterministic_bit_for_bit(self):
        seq = DegreeSequence([3, 2, 2, 1])
        a = uniform_matching(seq, 4242)
        b = uniform_matching(seq, 4242)
        assert np.array_equal(a.matching, b.matching)
        assert np.array_equal(a.owner, b.owner)

    def test_regime_warning(self):
        seq = DegreeSequence([5, 5, 1, 1])  # max degree 5 > 4^(1/9)
        with pytest.warns(SparseRegimeWarning):
            uniform_matching(seq, 0)


class TestProjection:
    def test_single_vertex_loop(self):
        graph = uniform_matching(DegreeSequence([2]), 5)
        assert project(graph).tolist() == [[0, 0]]
        report = simplicity(graph)
        assert report.has_loop and not report.has_multi_edge

    def test_forced_double_edge(self):
        # pair both points of vertex 0 with both points of vertex 1
        seq = DegreeSequence([2, 2])
        for t in range(200):
            graph = uniform_matching(seq, derive_seed(3, t))
            edges = project(graph)
            if edges.tolist() == [[0, 1], [0, 1]]:
                assert simplicity(graph).has_multi_edge
                return
        raise AssertionError("double edge never drawn in 200 tries")

    def test_simple_two_edges(self):
        graph = uniform_matching(DegreeSequence([1, 1, 1, 1]), 17)
        edges = project(graph)
        assert edges.shape == (2, 2)
        assert not simplicity(graph).has_loop  # degree-1 vertices cannot loop
        assert np.all(edges[:, 0] != edges[:, 1])


class TestSimplicity:
    def test_regular_lambda_and_prediction(self):
        seq = DegreeSequence([3] * 100)
        lam, prob = predicted_simplicity(seq)
        assert lam == pytest.approx(2.0, abs=1e-12)
        assert prob == pytest.approx(math.exp(-2.0), abs=1e-12)

    def test_single_edge_trivially_simple(self):
        graph = uniform_matching(DegreeSequence([1, 1]), 1)
        report = simplicity(graph)
        assert report.lam == 0.0
        assert report.predicted_simple_prob == 1.0
        assert report.is_simple

    def test_empirical_rate_three_regular(self):
        seq = DegreeSequence([3] * 500)
        draws = 2000
        simple = sum(
            simplicity(uniform_matching(seq, derive_seed(19, t))).is_simple
            for t in range(draws)
        )
        assert abs(simple / draws - math.exp(-2.0)) <= 0.03


class TestUniformSimpleGraph:
    def test_single_edge_first_attempt(self):
        graph = uniform_simple_graph(DegreeSequence([1, 1]), 7)
        assert graph.attempts == 1

    def test_mean_attempts_matches_geometric(self):
        # acceptance rate ~ e^-2, so attempts are geometric with mean ~ 7.4
        seq = DegreeSequence([3] * 1000)
        reps = 200
        attempts = [
            uniform_simple_graph(seq, derive_seed(23, r), max_attempts=200).attempts
            for r in range(reps)
        ]
        mean = sum(attempts) / reps
        assert 6.4 <= mean <= 8.4

    def test_result_is_simple(self):
        seq = DegreeSequence([3] * 60)
        graph = uniform_simple_graph(seq, 31)
        assert simplicity(graph).is_simple

    def test_impossible_sequence_exhausts(self):
        with pytest.raises(SimplicityExhaustedError) as excinfo:
            uniform_simple_graph(DegreeSequence([4]), 3, max_attempts=25)
        assert excinfo.value.attempts == 25
        assert 0 < excinfo.value.predicted_simple_prob <= 1

    def test_conditioned_draws_remain_uniform_over_simple(self):
        # [1,1,2]: 3 matchings, 2 of them simple (the loop at vertex 2 is not)
        seq = DegreeSequence([1, 1, 2])
        simple_counts = Counter()
        for t in range(4000):
            g = uniform_simple_graph(seq, derive_seed(29, t))
            simple_counts[canonical(g.matching)] += 1
        assert len(simple_counts) == 2
        low, high = sorted(simple_counts.values())
        assert abs(high - low) <= 6 * math.sqrt(4000 * 0.25)


class TestEdgeListDump:
    def test_format(self):
        graph = uniform_matching(DegreeSequence([2, 1, 1]), 2)
        text = write_edge_list(graph)
        lines = text.splitlines()
        assert lines[0] == "# n=3 m=2"
        assert len(lines) == 3
        for line in lines[1:]:
            u, v = line.split()
            assert 0 <= int(u) <= int(v) <= 2
