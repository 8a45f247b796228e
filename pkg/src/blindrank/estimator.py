"""Blind centrality inference from graph signals.

The estimator never sees the graph. It forms the uncentered second moment
of the observed signals, takes that matrix's leading eigenvector and ranks
nodes by it.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateError, ParameterError, ShapeError
from .graph import CentralityProfile, centrality_profile, full_spectrum, leading_eigenpair, rank_from_values
from .signals import SignalBatch


@dataclass(frozen=True)
class CovarianceEstimate:
    """Running mean of ``y y^T`` over ``count`` absorbed signals."""

    moment: np.ndarray
    count: int = 0

    def __post_init__(self):
        c = np.asarray(self.moment, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ShapeError(f"moment must be square, got {c.shape}")
        if self.count < 0:
            raise ParameterError("count must be nonnegative")
        if self.count == 0 and np.any(c != 0):
            raise ParameterError("an empty estimate must have a zero moment")
        c.setflags(write=False)
        object.__setattr__(self, "moment", c)

    @property
    def n(self) -> int:
        return self.moment.shape[0]

    @classmethod
    def empty(cls, n: int) -> "CovarianceEstimate":
        return cls(np.zeros((n, n)), 0)


def sample_covariance(batch: SignalBatch) -> CovarianceEstimate:
    """(1/N) sum_i y_i y_i^T, with no mean subtraction."""
    y = batch.signals
    c = (y.T @ y) / y.shape[0]
    return CovarianceEstimate(0.5 * (c + c.T), y.shape[0])


def accumulate(state: CovarianceEstimate, y) -> CovarianceEstimate:
    y = np.asarray(y, dtype=float)
    if y.shape != (state.n,):
        raise ShapeError(f"signal of shape {y.shape} does not match n={state.n}")
    count = state.count + 1
    moment = state.moment + (np.outer(y, y) - state.moment) / count
    return CovarianceEstimate(moment, count)


def merge(a: CovarianceEstimate, b: CovarianceEstimate) -> CovarianceEstimate:
    """Combine two estimates built from disjoint sample sets."""
    if a.n != b.n:
        raise ShapeError(f"cannot merge estimates of size {a.n} and {b.n}")
    total = a.count + b.count
    if total == 0:
        return CovarianceEstimate.empty(a.n)
    return CovarianceEstimate((a.count * a.moment + b.count * b.moment) / total, total)


def infer_centrality(data, tol: float = 1e-10, max_iter: int = 100_000, method: str = "power") -> CentralityProfile:
    """Oriented leading eigenvector of the sample covariance, with its ranks.

    ``data`` is a :class:`SignalBatch`, a :class:`CovarianceEstimate`, or a
    covariance matrix (e.g. the population one, for an oracle run).
    ``method="dense"`` swaps power iteration for a full eigendecomposition.
    """
    if isinstance(data, SignalBatch):
        cov = sample_covariance(data).moment
    elif isinstance(data, CovarianceEstimate):
        if data.count == 0:
            raise DegenerateError("no samples absorbed")
        cov = data.moment
    else:
        cov = np.asarray(data, dtype=float)
    if not np.trace(cov) > 0:
        raise DegenerateError("covariance has no positive eigenvalue (all-zero signals?)")
    if method == "power":
        # PSD, so the dominant eigenvalue is already the largest one
        _, u = leading_eigenpair(cov, tol=tol, max_iter=max_iter, shift=0.0)
    elif method == "dense":
        u = full_spectrum(cov).eigenvectors[:, 0]
    else:
        raise ParameterError(f"unknown method {method!r}")
    return centrality_profile(u)


def preserves_relative_order(u, u_hat, i: int, j: int) -> bool:
    """Whether the rankings induced by ``u`` and ``u_hat`` order ``i, j`` alike.

    Evaluates ``r_i >= r_j  <=>  r'_i >= r'_j`` for both orderings of the
    pair, so a tie in one vector must be a tie in the other.
    """
    r = rank_from_values(u)
    rh = rank_from_values(u_hat)
    forward = (r[i] >= r[j]) == (rh[i] >= rh[j])
    backward = (r[j] >= r[i]) == (rh[j] >= rh[i])
    return bool(forward and backward)


def write_profile(profile: CentralityProfile, path) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["node", "centrality", "rank"])
        for i, (v, r) in enumerate(zip(profile.values, profile.ranks)):
            w.writerow([i, repr(float(v)), int(r)])
