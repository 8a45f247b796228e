import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blindrank.errors import ParameterError
from blindrank.estimator import infer_centrality
from blindrank.evaluation import (
    SufficiencyProtocol,
    correct_rank_rates,
    rank_correct,
    spearman,
    sufficiency_from_rates,
    sufficiency_samples,
    windowed_spearman,
)
from blindrank.graph import eigenvector_centrality, generate_ba
from blindrank.rng import substream
from blindrank.signals import generate_signals, make_normalized_filter


def classical_spearman(x, y):
    """No-ties formula 1 - 6 sum d^2 / (n (n^2 - 1))."""
    n = len(x)
    rx = np.argsort(np.argsort(x))
    ry = np.argsort(np.argsort(y))
    d = rx - ry
    return 1 - 6 * np.sum(d**2) / (n * (n**2 - 1))


distinct = st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=30, unique=True)


class TestSpearman:
    def test_identical(self):
        assert spearman([0.1, 0.4, 0.2, 0.9], [0.1, 0.4, 0.2, 0.9]) == 1.0

    def test_reversed(self):
        assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == 1.0

    def test_one_swap(self):
        assert classical_spearman([1, 2, 3], [1, 3, 2]) == 0.5
        assert spearman([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)

    @given(distinct, st.randoms())
    @settings(max_examples=60)
    def test_matches_classical_formula(self, x, rnd):
        y = list(x)
        rnd.shuffle(y)
        assert spearman(x, y) == pytest.approx(abs(classical_spearman(x, y)), abs=1e-12)

    def test_ties_use_average_ranks(self):
        # average ranks of [1, 1, 2] are [1.5, 1.5, 3]
        x, y = [1, 1, 2], [1, 2, 3]
        rx, ry = np.array([1.5, 1.5, 3]), np.array([1, 2, 3])
        assert spearman(x, y) == pytest.approx(abs(np.corrcoef(rx, ry)[0, 1]))

    @given(
        st.lists(st.integers(-1000, 1000), min_size=3, max_size=30, unique=True),
        st.lists(st.integers(-1000, 1000), min_size=3, max_size=30, unique=True),
    )
    @settings(max_examples=60)
    def test_symmetric_and_monotone_invariant(self, x, y):
        k = min(len(x), len(y))
        x, y = np.array(x[:k]), np.array(y[:k])
        assert spearman(x, y) == pytest.approx(spearman(y, x), abs=1e-12)
        assert spearman(np.exp(x / 1e3), y) == pytest.approx(spearman(x, y), abs=1e-12)

    def test_constant_input(self):
        with pytest.raises(ParameterError):
            spearman([1, 1, 1], [1, 2, 3])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            spearman([1, 2], [1, 2, 3])


class TestWindowedSpearman:
    def test_full_width_is_global(self):
        rng = np.random.default_rng(0)
        u, v = rng.random(50), rng.random(50)
        assert windowed_spearman(u, v, 50) == [(0, pytest.approx(spearman(u, v)))]

    def test_perfect_estimate(self):
        u = np.random.default_rng(1).random(40)
        assert all(val == 1.0 for _, val in windowed_spearman(u, u, 10, 3))

    def test_partition(self):
        rng = np.random.default_rng(2)
        u = rng.random(60)
        windows = windowed_spearman(u, rng.random(60), 20)
        assert [s for s, _ in windows] == [0, 20, 40]

    def test_window_sees_sorted_block(self):
        # only the top block is estimated correctly
        u = np.arange(20, dtype=float)
        est = np.concatenate([np.random.default_rng(3).random(10), u[10:]])
        (_, low), (_, high) = windowed_spearman(u, est, 10)
        assert high == 1.0 and low < 1.0

    def test_width_too_small(self):
        with pytest.raises(ParameterError):
            windowed_spearman([1, 2, 3], [1, 2, 3], 1)

    @pytest.mark.slow
    def test_ba_top_block(self):
        vals = []
        for run in range(5):
            g = generate_ba(500, 4, 4, substream(100, run))
            u = eigenvector_centrality(g).values
            batch = generate_signals(make_normalized_filter(g), 1000, "gaussian", (100, run, 1))
            vals.append(windowed_spearman(u, infer_centrality(batch).values, 100)[-1][1])
        assert np.mean(vals) >= 0.8


class TestRankCorrect:
    def test_exact(self):
        r = np.array([1, 2, 3])
        assert all(rank_correct(r, r, i, 1) for i in range(3))

    def test_within_one(self):
        assert rank_correct([1, 2, 3], [1, 2, 4], 2, 1)

    def test_off_by_two(self):
        assert not rank_correct([1, 2, 3], [1, 2, 5], 2, 1)

    @given(st.lists(st.integers(1, 20), min_size=20, max_size=20), st.lists(st.integers(1, 20), min_size=20, max_size=20))
    def test_loose_tolerance_always_true(self, a, b):
        assert all(rank_correct(a, b, i, 19) for i in range(20))


class TestSufficiency:
    def test_protocol_validation(self):
        with pytest.raises(ParameterError):
            SufficiencyProtocol(sample_grid=(10, 5, 1000))
        with pytest.raises(ParameterError):
            SufficiencyProtocol(sample_grid=(10, 20), max_samples=1000)
        with pytest.raises(ParameterError):
            SufficiencyProtocol(probability_threshold=1.0)

    def test_from_rates(self):
        proto = SufficiencyProtocol(sample_grid=(10, 20, 30, 40), max_samples=40, trials_per_point=1)
        rates = np.array([
            [1.0, 0.0, 1.0],
            [1.0, 1.0, 0.0],
            [0.9, 1.0, 1.0],
            [1.0, 1.0, 0.5],
        ])
        # node 0 dips at 30, node 1 stays good from 20, node 2 ends below threshold
        assert sufficiency_from_rates(rates, proto).tolist() == [40, 20, 40]

    def test_strictness_monotone(self, karate, karate_filter):
        grid = (10, 40, 160, 400)
        base = SufficiencyProtocol(sample_grid=grid, max_samples=400, trials_per_point=20)
        variants = [
            base,
            SufficiencyProtocol(sample_grid=grid, max_samples=400, trials_per_point=20, probability_threshold=0.99),
            SufficiencyProtocol(sample_grid=grid, max_samples=400, trials_per_point=20, rank_tolerance=0),
        ]
        results = []
        for proto in variants:
            rates = correct_rank_rates(karate, karate_filter, proto, seed=4)
            results.append(sufficiency_from_rates(rates, proto))
        assert np.all(results[1] >= results[0])
        assert np.all(results[2] >= results[0])

    def test_peripheral_node_saturates(self, karate, karate_filter):
        u = eigenvector_centrality(karate).values
        node = int(np.argmin(np.abs(u - 0.101)))
        proto = SufficiencyProtocol(sample_grid=(100, 400, 1000), trials_per_point=40)
        assert sufficiency_samples(karate, karate_filter, node, proto, seed=1) == 1000

    def test_deterministic(self, karate, karate_filter):
        proto = SufficiencyProtocol(sample_grid=(20, 100), max_samples=100, trials_per_point=10)
        a = sufficiency_samples(karate, karate_filter, 33, proto, seed=2)
        assert a == sufficiency_samples(karate, karate_filter, 33, proto, seed=2)

    def test_bad_node(self, karate, karate_filter):
        with pytest.raises(ParameterError):
            sufficiency_samples(karate, karate_filter, 34)
