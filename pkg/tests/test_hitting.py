import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greenwalk import families, pipeline
from greenwalk.generators import random_connected_graph, random_strongly_connected_digraph
from greenwalk.graph import Distribution, stationary_distribution, transition_matrix
from greenwalk.hitting import (
    access_to_vertex,
    check_cycle_identities,
    fundamental_matrix,
    hit_time,
    hitting_times,
    return_times,
)


def chain(g, beta=0.0):
    P = transition_matrix(g, beta)
    return P, stationary_distribution(P)


class TestFundamentalMatrix:
    def test_k2_lazy_defining_property(self):
        P, pi = chain(families.complete_graph(2), beta=0.5)
        Z = fundamental_matrix(P, pi).values
        A = np.eye(2) - P.probs + np.outer(np.ones(2), pi.probs)
        assert np.abs(Z @ A - np.eye(2)).max() <= 1e-12

    def test_directed_cycle_row_sums(self, directed_triangle):
        Z = fundamental_matrix(directed_triangle.transition, directed_triangle.stationary).values
        assert np.abs(Z.sum(axis=1) - 1.0).max() <= 1e-12

    def test_random_digraph_residual(self):
        P, pi = chain(random_strongly_connected_digraph(6, seed=11))
        Z = fundamental_matrix(P, pi).values
        A = np.eye(6) - P.probs + np.outer(np.ones(6), pi.probs)
        assert np.abs(Z @ A - np.eye(6)).max() <= 1e-9 * 6


class TestHittingTimes:
    def test_complete_graph(self):
        P, pi = chain(families.complete_graph(5))
        H = hitting_times(P, pi)
        expected = 4.0 * (1.0 - np.eye(5))
        assert np.abs(H.values - expected).max() <= 1e-10

    def test_cycle_row(self):
        P, pi = chain(families.cycle_graph(5))
        H = hitting_times(P, pi)
        assert np.allclose(H.values[0], [0, 4, 6, 6, 4], atol=1e-10)

    def test_bipartite_table(self):
        P, pi = chain(families.complete_bipartite(2, 3))
        H = hitting_times(P, pi)
        assert abs(H[0, 2] - 5.0) <= 1e-10  # across, from the small side
        assert abs(H[2, 0] - 3.0) <= 1e-10  # across, from the large side
        assert abs(H[0, 1] - 4.0) <= 1e-10  # within the small side
        assert abs(H[2, 3] - 6.0) <= 1e-10  # within the large side

    def test_diagonal_zero(self, directed_triangle):
        assert np.all(np.diag(directed_triangle.hitting.values) == 0.0)

    def test_first_step_equations_large_graph(self):
        P, pi = chain(random_strongly_connected_digraph(200, seed=0))
        H = hitting_times(P, pi).values
        R = H - 1.0 - P.probs @ H
        np.fill_diagonal(R, 0.0)
        assert np.abs(R).max() <= 1e-8

    @settings(max_examples=20, deadline=None)
    @given(n=st.integers(2, 25), seed=st.integers(0, 10**6))
    def test_first_step_equations(self, n, seed):
        P, pi = chain(random_strongly_connected_digraph(n, seed))
        H = hitting_times(P, pi).values
        R = H - 1.0 - P.probs @ H
        np.fill_diagonal(R, 0.0)
        assert np.abs(R).max() <= 1e-8 * max(1.0, np.abs(H).max())

    @settings(max_examples=15, deadline=None)
    @given(n=st.integers(2, 15), seed=st.integers(0, 10**6), beta=st.sampled_from([0.25, 0.5]))
    def test_laziness_scaling(self, n, seed, beta):
        g = random_strongly_connected_digraph(n, seed)
        P0, pi = chain(g)
        Pb, _ = chain(g, beta)
        H0 = hitting_times(P0, pi).values
        Hb = hitting_times(Pb, pi).values
        scale = max(1.0, np.abs(Hb).max())
        assert np.abs(Hb * (1.0 - beta) - H0).max() <= 1e-8 * scale


class TestAccessAndReturns:
    def test_point_mass_recovers_entry(self, p3):
        sigma = Distribution.point_mass(3, 0)
        assert access_to_vertex(p3.hitting, sigma, 2) == pytest.approx(4.0)

    def test_stationary_access_cycle(self):
        P, pi = chain(families.cycle_graph(5))
        H = hitting_times(P, pi)
        assert access_to_vertex(H, pi, 0) == pytest.approx(4.0, abs=1e-10)

    def test_stationary_access_bipartite(self):
        P, pi = chain(families.complete_bipartite(2, 3))
        H = hitting_times(P, pi)
        assert access_to_vertex(H, pi, 0) == pytest.approx(2.5, abs=1e-10)

    def test_return_times(self):
        _, pi_c4 = chain(families.cycle_graph(4))
        assert np.allclose(return_times(pi_c4), 4.0)
        _, pi_p3 = chain(families.path_graph(3))
        assert np.allclose(return_times(pi_p3), [4.0, 2.0, 4.0])
        _, pi_star = chain(families.star_graph(2))
        assert return_times(pi_star)[0] == pytest.approx(2.0)


class TestHitTime:
    def test_complete_graph(self):
        P, pi = chain(families.complete_graph(3))
        t, residual = hit_time(hitting_times(P, pi), pi)
        assert t == pytest.approx(4.0 / 3.0, abs=1e-12)
        assert residual <= 1e-10

    def test_cycle(self):
        P, pi = chain(families.cycle_graph(4))
        t, _ = hit_time(hitting_times(P, pi), pi)
        assert t == pytest.approx(2.5, abs=1e-10)

    def test_hypercube(self):
        P, pi = chain(families.hypercube_graph(3))
        t, _ = hit_time(hitting_times(P, pi), pi)
        assert t == pytest.approx(7.25, abs=1e-10)

    @settings(max_examples=20, deadline=None)
    @given(n=st.integers(2, 20), seed=st.integers(0, 10**6))
    def test_random_target_identity_digraphs(self, n, seed):
        P, pi = chain(random_strongly_connected_digraph(n, seed))
        H = hitting_times(P, pi)
        t, residual = hit_time(H, pi)
        assert residual <= 1e-8 * max(1.0, t)


class TestCycleIdentities:
    def test_path_exact(self, p3):
        triple, pair = check_cycle_identities(p3.hitting, p3.stationary)
        assert triple <= 1e-12 and pair <= 1e-12

    @settings(max_examples=15, deadline=None)
    @given(n=st.integers(3, 25), seed=st.integers(0, 10**6))
    def test_undirected_within_tolerance(self, n, seed):
        g = random_connected_graph(n, seed)
        sol = pipeline.analyze(g)
        triple, pair = check_cycle_identities(sol.hitting, sol.stationary)
        scale = max(1.0, np.abs(sol.hitting.values).max())
        assert triple <= 1e-8 * scale and pair <= 1e-8 * scale

    def test_directed_violation_reported(self, directed_triangle):
        triple, pair = check_cycle_identities(directed_triangle.hitting, directed_triangle.stationary)
        assert triple == pytest.approx(3.0, abs=1e-12)
        assert pair > 0.5

    def test_sampling_path_for_large_graphs(self):
        sol = pipeline.analyze(random_connected_graph(60, seed=5))
        triple, _ = check_cycle_identities(sol.hitting, sol.stationary, samples=2000, seed=1)
        assert triple <= 1e-8 * max(1.0, np.abs(sol.hitting.values).max())
