import math

import numpy as np
import pytest

from _oracles import random_binary_graph
from sgmatch.errors import ParameterError, ResourceLimitError
from sgmatch.graphs import (
    CorrelatedPairSpec,
    Graph,
    Seeding,
    count_restricted_disagreements,
    generate_correlated_pair,
)
from sgmatch.harness import hash64
from sgmatch.matchers import rgm_match
from sgmatch.theory import (
    binomial_tail_lower_bound,
    brute_force_gm,
    brute_force_rgm,
    exact_binomial_tail,
    kl_divergence_bernoulli,
    seed_threshold_constants,
    tail_threshold,
)

# 6-vertex graph with a trivial automorphism group (verified by the oracle below)
RIGID_6 = [(0, 2), (0, 4), (0, 5), (1, 3), (2, 3), (2, 4), (2, 5), (3, 4)]


def _graph_from_edges(n, edges):
    a = np.zeros((n, n))
    for u, v in edges:
        a[u, v] = a[v, u] = 1.0
    return Graph(a)


class TestFullOracle:
    def test_rigid_graph_matched_to_itself(self):
        g = _graph_from_edges(6, RIGID_6)
        rep = brute_force_gm(g, g)
        assert rep.optimum == 0
        assert rep.identity_is_unique_argmin
        assert rep.better_than_identity == 0
        assert rep.argmin_count == 1

    def test_fully_correlated_pair_nothing_beats_identity(self):
        for seed in (1, 2, 3):
            g1, g2 = generate_correlated_pair(CorrelatedPairSpec(6, 0.5, 1.0, seed))
            rep = brute_force_gm(g1, g2)
            assert rep.better_than_identity == 0
            assert rep.optimum == 0

    def test_better_than_identity_grows_with_size_when_uncorrelated(self):
        means = []
        for n in (5, 6, 7):
            vals = []
            for rep in range(200):
                g1, g2 = generate_correlated_pair(
                    CorrelatedPairSpec(n, 0.5, 0.0, hash64(32, "echo-n", n, rep))
                )
                vals.append(brute_force_gm(g1, g2).better_than_identity)
            means.append(float(np.mean(vals)))
        assert means[0] < means[1] < means[2]

    def test_size_cap_refusal(self):
        g = _graph_from_edges(10, [(0, 1)])
        with pytest.raises(ResourceLimitError):
            brute_force_gm(g, g)

    def test_rejects_weighted(self):
        w = Graph(np.array([[0.0, 2.0], [2.0, 0.0]]))
        with pytest.raises(ParameterError):
            brute_force_gm(w, w)


class TestRestrictedOracle:
    def test_single_nonseed(self):
        rng = np.random.default_rng(1)
        g1 = random_binary_graph(5, 0.5, rng)
        g2 = random_binary_graph(5, 0.5, rng)
        rep = brute_force_rgm(g1, g2, Seeding(4, 1))
        assert rep.argmin_count == 1

    def test_no_seeds_degenerate(self):
        rng = np.random.default_rng(2)
        g1 = random_binary_graph(5, 0.5, rng)
        g2 = random_binary_graph(5, 0.5, rng)
        rep = brute_force_rgm(g1, g2, Seeding(0, 5))
        assert rep.optimum == 0
        assert rep.argmin_count == math.factorial(5)
        assert rep.better_than_identity == 0
        assert not rep.identity_is_unique_argmin

    def test_matches_exact_solver(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n = int(rng.integers(4, 11))
            m = int(rng.integers(1, min(7, n - 1) + 1))
            s = n - m
            g1 = random_binary_graph(n, rng.uniform(0.2, 0.8), rng)
            g2 = random_binary_graph(n, rng.uniform(0.2, 0.8), rng)
            seeding = Seeding(s, m)
            rep = brute_force_rgm(g1, g2, seeding)
            solved = rgm_match(g1, g2, seeding)
            achieved = count_restricted_disagreements(
                g1, g2, seeding, solved.permutation
            ).total
            assert achieved == rep.optimum

    def test_more_seeds_suppress_spurious_improvements(self):
        means = {}
        for s in (2, 20):
            vals = []
            for rep in range(200):
                g1, g2 = generate_correlated_pair(
                    CorrelatedPairSpec(s + 7, 0.5, 0.5, hash64(902, s, rep))
                )
                vals.append(brute_force_rgm(g1, g2, Seeding(s, 7)).better_than_identity)
            means[s] = float(np.mean(vals))
        assert means[2] > means[20]

    def test_size_cap_refusal(self):
        g = _graph_from_edges(12, [(0, 1)])
        with pytest.raises(ResourceLimitError):
            brute_force_rgm(g, g, Seeding(1, 11))


class TestKlDivergence:
    @pytest.mark.parametrize("q", [0.1, 0.5, 0.9])
    def test_zero_at_equal_arguments(self, q):
        assert kl_divergence_bernoulli(q, q) == 0.0

    def test_known_value(self):
        assert kl_divergence_bernoulli(0.75, 0.5) == pytest.approx(
            0.1308120359411370, abs=1e-6
        )

    def test_positive_off_diagonal(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            r, q = rng.uniform(0.01, 0.99, 2)
            if r == q:
                continue
            assert kl_divergence_bernoulli(r, q) > 0.0

    @pytest.mark.parametrize("r,q", [(0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0)])
    def test_boundary_rejected(self, r, q):
        with pytest.raises(ParameterError):
            kl_divergence_bernoulli(r, q)


class TestBinomialTailBound:
    def test_example_below_exact_tail(self):
        bound = binomial_tail_lower_bound(10, 0.3, 0.5)
        exact = exact_binomial_tail(10, 0.3, 5)
        assert 0.0 < bound <= exact

    def test_sweep_small_grid(self):
        for eta in range(5, 61, 5):
            for q10 in range(1, 10):
                q = q10 / 10
                r = q + 0.05
                while r < 1.0 - 1.0 / eta - 1e-12:
                    bound = binomial_tail_lower_bound(eta, q, r)
                    exact = exact_binomial_tail(eta, q, tail_threshold(eta, r))
                    assert bound <= exact
                    assert bound > 0.0
                    r += 0.05

    def test_domain_errors(self):
        with pytest.raises(ParameterError):
            binomial_tail_lower_bound(10, 0.5, 0.3)  # q >= r
        with pytest.raises(ParameterError):
            binomial_tail_lower_bound(10, 0.3, 0.95)  # r too close to 1
        with pytest.raises(ParameterError):
            binomial_tail_lower_bound(0, 0.3, 0.5)

    def test_exact_tail_edges(self):
        assert exact_binomial_tail(10, 0.3, 0) == 1.0
        assert exact_binomial_tail(10, 0.3, 11) == 0.0
        # complement of a direct CDF sum
        direct = sum(
            math.comb(10, j) * 0.3**j * 0.7 ** (10 - j) for j in range(5, 11)
        )
        assert exact_binomial_tail(10, 0.3, 5) == pytest.approx(direct, rel=1e-12)

    def test_threshold_guard(self):
        assert tail_threshold(20, 0.15) == 3  # 20 * 0.15 == 3 despite float drift
        assert tail_threshold(10, 0.51) == 6


class TestSeedThresholdConstants:
    def test_symmetric_at_half(self):
        # p = 1/2 makes the two divergence terms coincide
        p, rho, eps = 0.5, 0.5, 1.0
        q = (1 - p) * (1 - rho)
        h = kl_divergence_bernoulli(q + rho / 2, q)
        c5, c6 = seed_threshold_constants(p, rho, eps)
        assert c5 == max(2 / (h * 0.25 * (2 - eps)), 16 / (eps**2 * 0.25))
        assert c6 == 1 / (4 * 2 * h * 0.25)

    def test_finite_positive_and_matches_independent_transcription(self):
        p, rho, eps = 0.5, 0.5, 1.0
        c5, c6 = seed_threshold_constants(p, rho, eps)
        assert 0 < c5 < np.inf and 0 < c6 < np.inf

        def kl(a, b):
            return a * np.log(a / b) + (1 - a) * np.log((1 - a) / (1 - b))

        q1, q2 = (1 - p) * (1 - rho), p * (1 - rho)
        variance = p * (1 - p)
        lower = max(
            2 / (kl(q1 + rho / 2, q1) * variance * (2 - eps)),
            2 / (kl(q2 + rho / 2, q2) * variance * (2 - eps)),
            16 / (eps**2 * variance),
        )
        upper = 1 / (4 * (kl(q1 + rho / 2, q1) + kl(q2 + rho / 2, q2)) * variance)
        assert c5 == pytest.approx(lower, rel=1e-12)
        assert c6 == pytest.approx(upper, rel=1e-12)

    def test_upper_constant_decreases_with_correlation(self):
        values = [seed_threshold_constants(0.5, rho, 1.0)[1] for rho in np.arange(0.1, 0.95, 0.1)]
        assert all(a > b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize(
        "p,rho,eps",
        [(0.0, 0.5, 1.0), (0.5, 0.0, 1.0), (0.5, 1.0, 1.0), (0.5, 0.5, 0.0), (0.5, 0.5, 2.0)],
    )
    def test_domain_errors(self, p, rho, eps):
        with pytest.raises(ParameterError):
            seed_threshold_constants(p, rho, eps)
