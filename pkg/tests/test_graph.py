import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blindrank.errors import ConvergenceError, DataError, ParameterError, SizeError
from blindrank.graph import (
    Graph,
    eigenvector_centrality,
    full_spectrum,
    generate_ba,
    generate_er,
    leading_eigenpair,
    load_graph,
    load_karate,
    rank_from_values,
    read_edgelist,
    write_edgelist,
)


def assert_graph_invariants(g):
    a = g.adjacency
    assert np.array_equal(a, a.T)
    assert np.all(np.diag(a) == 0)
    assert set(np.unique(a)) <= {0.0, 1.0}


class TestGraphType:
    def test_rejects_asymmetric(self):
        with pytest.raises(DataError):
            Graph(np.array([[0, 1], [0, 0]]))

    def test_rejects_self_loop(self):
        with pytest.raises(DataError):
            Graph(np.array([[1, 0], [0, 0]]))

    def test_rejects_weights(self):
        with pytest.raises(DataError):
            Graph(np.array([[0, 2], [2, 0]]))

    def test_adjacency_is_read_only(self, k2):
        with pytest.raises(ValueError):
            k2.adjacency[0, 1] = 0


class TestGenerateER:
    def test_zero_probability(self):
        g = generate_er(5, 0.0, 1)
        assert g.n_edges == 0

    def test_certain_edges(self):
        g = generate_er(5, 1.0, 1)
        assert g.n_edges == 10
        assert_graph_invariants(g)

    def test_mean_degree(self):
        # E[degree] = (n - 1) p = 99.9
        means = [generate_er(1000, 0.1, s).degrees.mean() for s in range(10)]
        assert abs(np.mean(means) - 99.9) <= 0.05 * 99.9

    def test_deterministic(self):
        a = generate_er(50, 0.2, 42).adjacency
        b = generate_er(50, 0.2, 42).adjacency
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("n,p", [(0, 0.1), (5, -0.1), (5, 1.5)])
    def test_invalid(self, n, p):
        with pytest.raises(ParameterError):
            generate_er(n, p, 0)

    def test_connectivity_flag(self):
        assert generate_er(5, 1.0, 0).meta["connected"]
        assert not generate_er(5, 0.0, 0).meta["connected"]


class TestGenerateBA:
    def test_edge_count_matches_attachment_trace(self):
        # 7 entrants, each adding exactly 3 edges
        g = generate_ba(10, 3, 3, 0)
        assert g.n_edges == (10 - 3) * 3
        assert_graph_invariants(g)

    def test_first_entrant_attaches_to_all_seeds(self):
        g = generate_ba(10, 3, 3, 5)
        assert g.adjacency[3, :3].sum() == 3

    def test_no_entrants(self):
        g = generate_ba(4, 1, 4, 0)
        assert g.n_edges == 0

    @pytest.mark.parametrize("n,m,m0", [(10, 4, 3), (3, 1, 4), (10, 0, 3)])
    def test_invalid(self, n, m, m0):
        with pytest.raises(ParameterError):
            generate_ba(n, m, m0, 0)

    def test_heavy_tail(self):
        for seed in range(10):
            g = generate_ba(500, 4, 4, seed)
            assert g.is_connected()
            deg = g.degrees
            assert deg.max() > 5 * np.median(deg)

    def test_deterministic(self):
        assert np.array_equal(generate_ba(60, 2, 3, 9).adjacency, generate_ba(60, 2, 3, 9).adjacency)


class TestKarate:
    def test_size(self, karate):
        assert karate.n == 34
        assert karate.n_edges == 78
        assert_graph_invariants(karate)

    def test_labelled_leaders(self, karate):
        u = eigenvector_centrality(karate).values
        assert u[karate.node("P")] == pytest.approx(0.37, abs=0.01)
        assert u[karate.node("I")] == pytest.approx(0.36, abs=0.01)

    def test_five_peripheral_nodes_near_0101(self, karate):
        u = eigenvector_centrality(karate).values
        # the five structurally equivalent nodes share one value; a sixth
        # node sits at 0.1027, so a +-0.005 window would catch six
        close = np.abs(u - 0.101) <= 0.001
        assert close.sum() == 5
        assert np.ptp(u[close]) < 1e-9

    def test_checksum_guard(self, monkeypatch):
        import blindrank.graph as graph_mod

        monkeypatch.setattr(graph_mod, "KARATE_SHA256", "0" * 64)
        with pytest.raises(DataError):
            graph_mod.load_karate()


class TestEdgeList:
    def test_roundtrip(self, tmp_path):
        g = generate_er(30, 0.2, 3)
        path = tmp_path / "g.edgelist"
        write_edgelist(g, path)
        h = load_graph(path, n=30)
        assert np.array_equal(g.adjacency, h.adjacency)

    def test_rejects_self_loop(self):
        with pytest.raises(DataError, match="self-loop"):
            read_edgelist("0 1\n2 2\n")

    def test_rejects_duplicate(self):
        with pytest.raises(DataError, match="duplicate"):
            read_edgelist("0 1\n1 0\n")

    def test_comments_and_blank_lines(self):
        n, edges = read_edgelist("# header\n\n0 1\n1 2\n")
        assert n == 3 and edges == [(0, 1), (1, 2)]


class TestLeadingEigenpair:
    def test_k2(self, k2):
        lam, v = leading_eigenpair(k2.adjacency)
        assert lam == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(v, [1 / math.sqrt(2)] * 2, atol=1e-9)

    def test_k3(self, k3):
        lam, v = leading_eigenpair(k3.adjacency)
        assert lam == pytest.approx(2.0, abs=1e-10)
        np.testing.assert_allclose(v, [1 / math.sqrt(3)] * 3, atol=1e-9)

    def test_star(self, star5):
        # analytic: lambda = sqrt(4) = 2, centre 1/sqrt(2), leaves 1/(2 sqrt(2))
        lam, v = leading_eigenpair(star5.adjacency)
        assert lam == pytest.approx(2.0, abs=1e-10)
        np.testing.assert_allclose(v, [1 / math.sqrt(2)] + [1 / (2 * math.sqrt(2))] * 4, atol=1e-9)
        dense = full_spectrum(star5.adjacency)
        np.testing.assert_allclose(np.abs(dense.eigenvectors[:, 0]), v, atol=1e-9)

    def test_bipartite_needs_shift(self):
        # path graph: spectrum symmetric about 0, so unshifted iteration would oscillate
        g = Graph.from_edges(6, [(i, i + 1) for i in range(5)])
        lam, _ = leading_eigenpair(g.adjacency)
        assert lam == pytest.approx(2 * math.cos(math.pi / 7), abs=1e-9)

    def test_residual_contract(self):
        g = generate_er(80, 0.1, 2)
        lam, v = leading_eigenpair(g.adjacency, tol=1e-10)
        assert np.linalg.norm(g.adjacency @ v - lam * v) <= 1e-10 * max(1, abs(lam))
        assert v[np.argmax(np.abs(v))] >= 0

    def test_non_convergence(self):
        g = generate_er(80, 0.1, 2)
        with pytest.raises(ConvergenceError) as info:
            leading_eigenpair(g.adjacency, max_iter=2)
        assert info.value.residual > 0

    def test_agrees_with_dense(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            n = int(rng.integers(2, 12))
            a = rng.standard_normal((n, n))
            a = a + a.T
            dense = full_spectrum(a)
            if dense.eigenvalues[0] - dense.eigenvalues[1] <= 1e-6:
                continue
            lam, v = leading_eigenpair(a)
            top = dense.eigenvectors[:, 0]
            assert lam == pytest.approx(dense.eigenvalues[0], abs=1e-8)
            assert min(np.abs(v - top).max(), np.abs(v + top).max()) <= 1e-8

    @pytest.mark.parametrize("seed", range(5))
    def test_perron_vector_nonnegative(self, seed):
        g = generate_ba(100, 2, 2, seed)
        assert g.is_connected()
        _, v = leading_eigenpair(g.adjacency)
        assert v.min() >= -1e-10


class TestFullSpectrum:
    def test_k2(self, k2):
        np.testing.assert_allclose(full_spectrum(k2.adjacency).eigenvalues, [1, -1], atol=1e-12)

    def test_identity(self):
        np.testing.assert_allclose(full_spectrum(np.eye(3)).eigenvalues, [1, 1, 1])

    def test_invariants(self):
        a = generate_er(60, 0.2, 4).adjacency
        sd = full_spectrum(a)
        assert np.all(np.diff(sd.eigenvalues) <= 0)
        v = sd.eigenvectors
        np.testing.assert_allclose(v.T @ v, np.eye(60), atol=1e-10)
        recon = (v * sd.eigenvalues) @ v.T
        assert np.linalg.norm(a - recon, 2) <= 1e-8 * max(1, abs(sd.eigenvalues[0]))

    @pytest.mark.parametrize("seed", range(3))
    def test_er_spectral_facts(self, seed):
        n, p = 1000, 0.1
        ev = full_spectrum(generate_er(n, p, seed).adjacency).eigenvalues
        assert abs(ev[0] / (p * n) - 1) <= 0.1
        assert ev[1] <= 5 * math.sqrt(p * n)

    def test_size_limit(self, monkeypatch):
        import blindrank.graph as graph_mod

        monkeypatch.setattr(graph_mod, "DENSE_LIMIT", 3)
        with pytest.raises(SizeError):
            graph_mod.full_spectrum(np.eye(4))


class TestRankFromValues:
    @pytest.mark.parametrize(
        "values,expected",
        [([3, 2, 1], [1, 2, 3]), ([0.5, 0.3, 0.5], [2, 3, 2]), ([7.0, 7.0, 7.0], [3, 3, 3])],
    )
    def test_examples(self, values, expected):
        assert rank_from_values(values).tolist() == expected

    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=40))
    def test_matches_definition(self, values):
        x = np.array(values)
        brute = [int(np.sum(x >= xi)) for xi in x]
        assert rank_from_values(x).tolist() == brute

    @given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=40, unique=True), st.randoms())
    @settings(max_examples=50)
    def test_distinct_values_permutation(self, values, rnd):
        x = np.array(values)
        r = rank_from_values(x)
        assert sorted(r.tolist()) == list(range(1, len(x) + 1))
        perm = list(range(len(x)))
        rnd.shuffle(perm)
        assert rank_from_values(x[perm]).tolist() == r[perm].tolist()

    def test_tie_tolerance(self):
        assert rank_from_values([0.1, 0.1 + 1e-13, 0.5], tie_tol=1e-9).tolist() == [3, 3, 1]

    def test_rejects_nan(self):
        with pytest.raises(ParameterError):
            rank_from_values([1.0, float("nan")])


def test_ground_truth_profile(karate):
    prof = eigenvector_centrality(karate)
    assert prof.oriented
    assert prof.ranks[karate.node("P")] == 1
    assert prof.ranks[karate.node("I")] == 2
    assert np.all((prof.ranks >= 1) & (prof.ranks <= 34))
