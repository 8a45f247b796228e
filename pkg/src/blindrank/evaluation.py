"""Ranking-quality metrics and the per-node sample sufficiency protocol."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .errors import ParameterError, ShapeError
from .estimator import infer_centrality
from .graph import Graph, eigenvector_centrality
from .rng import substream
from .signals import GraphFilter, generate_signals


def spearman(x, y) -> float:
    """Absolute Spearman correlation, average ranks for ties."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ShapeError(f"need two vectors of equal length, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise ParameterError("need at least two observations")
    rx, ry = rankdata(x), rankdata(y)
    if np.ptp(rx) == 0 or np.ptp(ry) == 0:
        raise ParameterError("correlation is undefined for a constant vector")
    rx -= rx.mean()
    ry -= ry.mean()
    r = float(rx @ ry / np.sqrt((rx @ rx) * (ry @ ry)))
    return min(abs(r), 1.0)


def windowed_spearman(u_true, u_est, width: int, stride: int | None = None) -> list[tuple[int, float]]:
    """Spearman correlation inside windows of nodes with adjacent true centrality.

    Nodes are sorted by ascending ``u_true``; window ``k`` covers sorted
    positions ``[k * stride, k * stride + width)``. Only full windows are
    returned. A window whose true or estimated values are constant yields
    ``nan``.
    """
    u_true = np.asarray(u_true, dtype=float)
    u_est = np.asarray(u_est, dtype=float)
    if u_true.shape != u_est.shape:
        raise ShapeError("vectors must have equal length")
    n = u_true.size
    if width < 2:
        raise ParameterError("width must be >= 2")
    if width > n:
        raise ParameterError(f"width {width} exceeds n={n}")
    stride = width if stride is None else stride
    if stride < 1:
        raise ParameterError("stride must be >= 1")
    order = np.argsort(u_true, kind="stable")
    out = []
    for start in range(0, n - width + 1, stride):
        idx = order[start : start + width]
        try:
            out.append((start, spearman(u_true[idx], u_est[idx])))
        except ParameterError:
            out.append((start, float("nan")))
    return out


def rank_correct(r_true, r_est, node: int, tolerance: int = 1) -> bool:
    return bool(abs(int(r_est[node]) - int(r_true[node])) <= tolerance)


def _default_grid() -> tuple[int, ...]:
    return tuple(range(10, 1001, 10))


@dataclass(frozen=True)
class SufficiencyProtocol:
    rank_tolerance: int = 1
    probability_threshold: float = 0.95
    max_samples: int = 1000
    sample_grid: tuple[int, ...] = field(default_factory=_default_grid)
    trials_per_point: int = 100
    noise_law: str = "gaussian"

    def __post_init__(self):
        grid = tuple(int(g) for g in self.sample_grid)
        object.__setattr__(self, "sample_grid", grid)
        if not 0.0 < self.probability_threshold < 1.0:
            raise ParameterError("probability_threshold must lie in (0, 1)")
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 1:
            raise ParameterError("sample_grid must be a strictly increasing list of positive integers")
        if grid[-1] != self.max_samples:
            raise ParameterError("sample_grid must end at max_samples")
        if self.trials_per_point < 1:
            raise ParameterError("trials_per_point must be >= 1")
        if self.rank_tolerance < 0:
            raise ParameterError("rank_tolerance must be nonnegative")


def correct_rank_rate(r_true, filt: GraphFilter, N: int, protocol: SufficiencyProtocol, seed: int = 0) -> np.ndarray:
    """Per-node fraction of trials at sample size ``N`` ranked within tolerance.

    Trial ``k`` draws its noise from stream ``(seed, N, k)``.
    """
    hits = np.zeros(len(r_true))
    for k in range(protocol.trials_per_point):
        batch = generate_signals(filt, N, protocol.noise_law, substream(seed, N, k))
        r_est = infer_centrality(batch).ranks
        hits += np.abs(r_est - r_true) <= protocol.rank_tolerance
    return hits / protocol.trials_per_point


def correct_rank_rates(graph: Graph, filt: GraphFilter, protocol: SufficiencyProtocol, seed: int = 0) -> np.ndarray:
    """:func:`correct_rank_rate` over the whole grid, shape ``(len(grid), n)``."""
    r_true = eigenvector_centrality(graph).ranks
    return np.array([correct_rank_rate(r_true, filt, N, protocol, seed) for N in protocol.sample_grid])


def sufficiency_from_rates(rates: np.ndarray, protocol: SufficiencyProtocol) -> np.ndarray:
    """Smallest grid size after which every grid size clears the threshold.

    Nodes that never stay above the threshold through ``max_samples`` get
    ``max_samples``.
    """
    ok = np.asarray(rates) > protocol.probability_threshold
    grid = np.asarray(protocol.sample_grid)
    # ok_tail[g] is True when every grid point from g to the end is ok
    ok_tail = np.flip(np.logical_and.accumulate(np.flip(ok, axis=0), axis=0), axis=0)
    out = np.full(ok.shape[1], protocol.max_samples, dtype=np.int64)
    for node in range(ok.shape[1]):
        good = np.nonzero(ok_tail[:, node])[0]
        if good.size:
            out[node] = grid[good[0]]
    return out


def sufficiency_samples(
    graph: Graph, filt: GraphFilter, node: int, protocol: SufficiencyProtocol | None = None, seed: int = 0
) -> int:
    if not 0 <= node < graph.n:
        raise ParameterError(f"node {node} out of range")
    protocol = protocol or SufficiencyProtocol()
    rates = correct_rank_rates(graph, filt, protocol, seed)
    return int(sufficiency_from_rates(rates, protocol)[node])
