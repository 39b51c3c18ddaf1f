import math
from collections import Counter
from fractions import Fraction
from itertools import combinations

import pytest
from scipy.stats import chi2

from minorforge.errors import BudgetExceededError
from minorforge.graphs import complete_graph, empty_graph
from minorforge.random_models import (
    PropertyPParams,
    PropertyQParams,
    check_property_P,
    check_property_Q,
    chernoff_lower,
    chernoff_upper,
    constant_C,
    constant_D,
    m_of,
    propQ_failure_bound,
    property_p_witness_violates,
    property_q_witness_violates,
    q_n_bound,
    sample_bipartite,
    sample_gnm_sequential,
    sample_gnm_uniform,
)

from .conftest import random_graph_corpus


class TestSampleBipartite:
    def test_p_zero(self):
        assert sample_bipartite(3, 4, 0, seed=1).edge_count() == 0

    def test_p_one(self):
        assert sample_bipartite(3, 4, 1, seed=1).edge_count() == 12

    def test_determinism(self):
        assert sample_bipartite(5, 5, 0.4, seed=9) == sample_bipartite(5, 5, 0.4, seed=9)

    def test_pattern_uniformity_chi_square(self):
        counts = Counter()
        samples = 20000
        for i in range(samples):
            B = sample_bipartite(2, 2, 0.5, seed=i)
            counts[B.rows] += 1
        expected = samples / 16
        stat = sum((counts.get(pattern, 0) - expected) ** 2 / expected
                   for pattern in [(a, b) for a in range(4) for b in range(4)])
        assert stat < chi2.ppf(0.999, 15)

    def test_max_degree_concentration(self):
        # sanity corroboration at n=40, p=0.5: max degree <= 2pn nearly always
        n, p = 40, 0.5
        good = sum(
            1 for i in range(200) if sample_bipartite(n, n, p, seed=10_000 + i).max_degree() <= 2 * p * n
        )
        assert good >= 190


class TestGnmSamplers:
    def test_m_zero(self):
        assert sample_gnm_uniform(5, 0, 3).edge_count() == 0

    def test_m_full(self):
        assert sample_gnm_uniform(5, 10, 3) == complete_graph(5)
        assert sample_gnm_sequential(5, 10, 3) == complete_graph(5)

    def test_m_out_of_range(self):
        with pytest.raises(ValueError):
            sample_gnm_uniform(4, 7, 1)
        with pytest.raises(ValueError):
            sample_gnm_sequential(4, -1, 1)

    @pytest.mark.parametrize("m", [2, 3])
    def test_uniformity_both_algorithms(self, m):
        outcomes = list(combinations(combinations(range(4), 2), m))
        index = {frozenset(c): i for i, c in enumerate(outcomes)}
        samples = 15000
        threshold = chi2.ppf(0.999, len(outcomes) - 1)
        tallies = {}
        for name, sampler in [("uniform", sample_gnm_uniform), ("sequential", sample_gnm_sequential)]:
            counts = Counter()
            for i in range(samples):
                G = sampler(4, m, seed=i * 2 + (0 if name == "uniform" else 1))
                counts[index[frozenset(tuple(e) for e in G.edges())]] += 1
            expected = samples / len(outcomes)
            stat = sum((counts.get(i, 0) - expected) ** 2 / expected for i in range(len(outcomes)))
            assert stat < threshold, name
            tallies[name] = counts
        # two-sample comparison between the algorithms
        stat = sum(
            (tallies["uniform"].get(i, 0) - tallies["sequential"].get(i, 0)) ** 2
            / (tallies["uniform"].get(i, 0) + tallies["sequential"].get(i, 0))
            for i in range(len(outcomes))
        )
        assert stat < threshold


class TestPropertyQ:
    def test_k6_fails_at_tight_constant(self):
        report = check_property_Q(complete_graph(6), PropertyQParams(Fraction(1, 2), Fraction(101, 100)))
        assert report.verdict == "fails"
        assert report.witness["edges"] == 9
        assert report.witness["threshold"] == 11  # ceil(1.01 * 6 * ln 6)

    def test_k20_holds(self):
        report = check_property_Q(complete_graph(20), PropertyQParams(Fraction(1, 2), Fraction(3, 2)))
        assert report.verdict == "holds"

    def test_k10_holds_at_tight_constant(self):
        # 25 cross edges against ceil(1.01 * 10 * ln 10) = 24
        report = check_property_Q(complete_graph(10), PropertyQParams(Fraction(1, 2), Fraction(101, 100)))
        assert report.verdict == "holds"

    def test_edgeless_fails(self):
        params = PropertyQParams(Fraction(1, 2), Fraction(3, 2))
        report = check_property_Q(empty_graph(6), params)
        assert report.verdict == "fails"
        assert property_q_witness_violates(empty_graph(6), params, report.witness)

    def test_minimal_equals_full_on_corpus(self):
        for G in random_graph_corpus(seed=60, count=40, max_n=8, min_n=2):
            for delta in (Fraction(1, 4), Fraction(1, 2)):
                for D in (Fraction(11, 10), Fraction(3, 2)):
                    params = PropertyQParams(delta, D)
                    a = check_property_Q(G, params, pairs="minimal").verdict
                    b = check_property_Q(G, params, pairs="full").verdict
                    assert a == b

    def test_falsify_finds_witness(self):
        params = PropertyQParams(Fraction(1, 2), Fraction(3, 2))
        report = check_property_Q(empty_graph(6), params, mode="falsify", seed=4, budget=500)
        assert report.verdict == "fails"
        assert property_q_witness_violates(empty_graph(6), params, report.witness)

    def test_falsify_requires_seed(self):
        with pytest.raises(ValueError):
            check_property_Q(empty_graph(6), PropertyQParams(Fraction(1, 2), Fraction(3, 2)), mode="falsify")


class TestPropertyP:
    def params(self, delta=Fraction(1, 2), s=1):
        return PropertyPParams(delta, s)

    def test_complete_bipartite_holds(self):
        G = sample_bipartite(4, 4, 1, seed=0)
        report = check_property_P(G, complete_graph(4), self.params())
        assert report.verdict == "holds"

    def test_empty_bipartite_fails_with_witness(self):
        G = sample_bipartite(4, 4, 0, seed=0)
        report = check_property_P(G, complete_graph(4), self.params())
        assert report.verdict == "fails"
        assert property_p_witness_violates(G, complete_graph(4), self.params(), report.witness)

    def test_s_above_edge_count_holds_vacuously(self):
        G = sample_bipartite(4, 4, 0, seed=0)
        report = check_property_P(G, complete_graph(4), self.params(s=100))
        assert report.verdict == "holds"
        assert report.nodes_explored > 0

    def test_minimal_range_variant(self):
        G = sample_bipartite(4, 4, 0, seed=0)
        report = check_property_P(G, complete_graph(4), self.params(), k_l_range="minimal")
        assert report.verdict == "fails"

    def test_full_vs_minimal_flaggable_disagreement(self):
        # compared on tiny instances; any disagreement would be surfaced by
        # the caller, never silently resolved
        for G in [sample_bipartite(3, 3, p, seed=3) for p in (0.0, 0.4, 0.8, 1.0)]:
            for H in random_graph_corpus(seed=61, count=6, max_n=4, min_n=2):
                params = PropertyPParams(Fraction(1, 2), 1)
                full = check_property_P(G, H, params, k_l_range="full").verdict
                minimal = check_property_P(G, H, params, k_l_range="minimal").verdict
                if full == "holds":
                    assert minimal == "holds"  # minimal checks a subset of tuples

    def test_witness_recheck_rejects_corrupted(self):
        G = sample_bipartite(4, 4, 0, seed=0)
        params = self.params()
        report = check_property_P(G, complete_graph(4), params)
        bad = dict(report.witness)
        bad["X"] = [[0], [0]]  # overlap breaks disjointness
        assert not property_p_witness_violates(G, complete_graph(4), params, bad)

    def test_budget_exhaustion_is_an_error(self):
        G = sample_bipartite(4, 4, 1, seed=2)  # holds, so the sweep runs long
        with pytest.raises(BudgetExceededError):
            check_property_P(G, complete_graph(4), self.params(), node_budget=5)

    def test_falsify_mode(self):
        G = sample_bipartite(4, 4, 0, seed=0)
        report = check_property_P(G, complete_graph(4), self.params(), mode="falsify", seed=11, budget=3000)
        assert report.verdict == "fails"
        assert property_p_witness_violates(G, complete_graph(4), self.params(), report.witness)
        full = sample_bipartite(4, 4, 1, seed=0)
        report = check_property_P(full, complete_graph(4), self.params(), mode="falsify", seed=11, budget=200)
        assert report.verdict == "inconclusive"
        assert report.trials == 200


class TestBounds:
    def test_chernoff_values(self):
        assert math.isclose(chernoff_upper(30, 1), math.exp(-10), rel_tol=1e-12)
        assert math.isclose(chernoff_lower(8, Fraction(1, 2)), math.exp(-1), rel_tol=1e-12)

    def test_chernoff_monotone_in_mu(self):
        for delta in (Fraction(1, 4), Fraction(1, 2), Fraction(1)):
            values_u = [chernoff_upper(mu, delta) for mu in (1, 5, 20, 80)]
            values_l = [chernoff_lower(mu, delta) for mu in (1, 5, 20, 80)]
            assert values_u == sorted(values_u, reverse=True)
            assert values_l == sorted(values_l, reverse=True)

    def test_chernoff_domain(self):
        with pytest.raises(ValueError):
            chernoff_upper(0, 1)
        with pytest.raises(ValueError):
            chernoff_lower(5, 2)

    def test_bounds_stay_in_unit_interval(self):
        for mu in (1, 10, 200):
            for delta in (Fraction(1, 10), Fraction(1, 2), Fraction(1)):
                assert 0 < chernoff_upper(mu, delta) <= 1
                assert 0 < chernoff_lower(mu, delta) <= 1

    def test_constant_d_example(self):
        assert constant_D(1, Fraction(1, 2)) == Fraction(202, 25)  # 8.08

    def test_constant_c_exact_rational(self):
        for delta in (Fraction(1), Fraction(1, 2)):
            for p in (Fraction(1, 2), Fraction(1, 4)):
                D = constant_D(delta, p)
                assert isinstance(D, Fraction)
                assert constant_C(delta, p) == D * D / (delta * delta)

    def test_q_n_exponent_sign(self):
        for delta in (Fraction(1), Fraction(1, 2)):
            for p in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
                threshold = 4 * p ** (-(1 / delta**2))
                # exponent negative iff D is above 4 p^(-1/delta^2)
                assert q_n_bound(delta, p, threshold / 2, 12) == 0.0
                assert q_n_bound(delta, p, threshold, 12) == 0.0
                near = threshold * Fraction(101, 100)
                value = q_n_bound(delta, p, near, 12)
                assert 0 < value < 1
                assert value < q_n_bound(delta, p, near, 24)  # rising in n
                far = q_n_bound(delta, p, threshold * 2, 12)
                assert 0 < far <= 1  # may saturate to 1 in floats

    def test_propq_failure_bound(self):
        assert propQ_failure_bound(2, 6) == 1.0  # union bound exceeds one at tiny n
        small = propQ_failure_bound(3, 30)
        assert 0 < small < 1e-30

    def test_m_of_clamp(self):
        assert m_of(10, 5) == (45, True)  # ceil(115.13) = 116 exceeds 45
        assert m_of(4, Fraction(1, 10)) == (1, False)
        assert m_of(6, Fraction(20**100)) == (15, True)

    def test_m_of_domain(self):
        with pytest.raises(ValueError):
            m_of(1, 5)
