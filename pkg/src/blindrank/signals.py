"""Polynomial graph filters and synthetic graph signals y = H(A) w."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import DataError, DegenerateError, ModelAssumptionError, ParameterError
from .graph import Graph, leading_eigenpair
from .rng import as_generator, substream

NOISE_LAWS = ("gaussian", "rademacher", "uniform")
# samples per independent random stream in generate_signals
BLOCK = 4096


@dataclass(frozen=True)
class GraphFilter:
    """H(A) = sum_k coefficients[k] * (scale * A)^k, materialized densely.

    ``scale`` is 1 for a raw polynomial and ``1 / source_lambda1`` for the
    spectrally normalized filter.
    """

    coefficients: np.ndarray
    operator: np.ndarray
    scale: float = 1.0
    source_lambda1: Optional[float] = None

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def n(self) -> int:
        return self.operator.shape[0]

    @property
    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.coefficients).tobytes())
        h.update(np.ascontiguousarray(self.operator).tobytes())
        return h.hexdigest()[:16]

    def response(self, lam):
        """Scalar frequency response at adjacency eigenvalue(s) ``lam``."""
        x = np.asarray(lam, dtype=float) * self.scale
        out = np.zeros_like(x)
        for c in self.coefficients[::-1]:
            out = out * x + c
        return out


def _matrix_polynomial(shift_op: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    n = shift_op.shape[0]
    power = np.eye(n)
    out = coefficients[0] * power
    for c in coefficients[1:]:
        power = power @ shift_op
        out = out + c * power
    # products of a symmetric matrix drift off symmetry by rounding
    return 0.5 * (out + out.T)


def _check_coefficients(coefficients) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coefficients, dtype=float))
    if c.ndim != 1 or c.size == 0:
        raise ParameterError("coefficients must be a non-empty vector")
    if not np.all(np.isfinite(c)):
        raise ParameterError("coefficients must be finite")
    if np.any(c < 0):
        raise ModelAssumptionError("filter coefficients must be nonnegative")
    if not np.any(c > 0):
        raise ModelAssumptionError("at least one filter coefficient must be positive")
    return c


def make_polynomial_filter(graph: Graph, coefficients) -> GraphFilter:
    c = _check_coefficients(coefficients)
    op = _matrix_polynomial(graph.adjacency, c)
    c.setflags(write=False)
    op.setflags(write=False)
    return GraphFilter(c, op)


def make_normalized_filter(graph: Graph, order: int = 4) -> GraphFilter:
    """Sum of powers 0..order of A / lambda_1(A), all with unit weight."""
    if order < 0:
        raise ParameterError("order must be nonnegative")
    if graph.n_edges == 0:
        raise DegenerateError("normalized filter needs at least one edge (lambda_1 > 0)")
    lam1, _ = leading_eigenpair(graph.adjacency)
    c = np.ones(order + 1)
    op = _matrix_polynomial(graph.adjacency / lam1, c)
    c.setflags(write=False)
    op.setflags(write=False)
    return GraphFilter(c, op, scale=1.0 / lam1, source_lambda1=lam1)


def sample_white_noise(n: int, law: str = "gaussian", rng=None, size: Optional[int] = None) -> np.ndarray:
    """Zero-mean, unit-variance i.i.d. entries.

    Returns a length-``n`` vector, or a ``(size, n)`` array of independent
    draws when ``size`` is given.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    gen = as_generator(rng)
    shape = (n,) if size is None else (size, n)
    if law == "gaussian":
        return gen.standard_normal(shape)
    if law == "rademacher":
        return 2.0 * gen.integers(0, 2, size=shape) - 1.0
    if law == "uniform":
        return gen.uniform(-np.sqrt(3.0), np.sqrt(3.0), size=shape)
    raise ParameterError(f"unknown noise law {law!r}; expected one of {NOISE_LAWS}")


@dataclass(frozen=True)
class SignalBatch:
    """N observed graph signals, one per row of ``signals``."""

    signals: np.ndarray
    noise_law: str = "gaussian"
    seed: Optional[int] = None
    filter_digest: Optional[str] = None

    def __post_init__(self):
        y = np.asarray(self.signals, dtype=float)
        if y.ndim == 1:
            y = y[None, :]
        if y.ndim != 2 or y.shape[0] < 1 or y.shape[1] < 1:
            raise ParameterError(f"signals must be an (N, n) array with N >= 1, got {y.shape}")
        if not np.all(np.isfinite(y)):
            raise DataError("signals must be finite")
        y.setflags(write=False)
        object.__setattr__(self, "signals", y)

    @property
    def N(self) -> int:
        return self.signals.shape[0]

    @property
    def n(self) -> int:
        return self.signals.shape[1]

    def metadata(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "noise_law": self.noise_law,
            "seed": self.seed,
            "filter_digest": self.filter_digest,
        }


def generate_signals(filt: GraphFilter, N: int, law: str = "gaussian", seed=None) -> SignalBatch:
    """Draw ``N`` signals ``H(A) w_i`` from fresh white noise.

    With an integer ``seed`` the noise for samples ``[b*BLOCK, (b+1)*BLOCK)``
    comes from stream ``(seed, b)``, so the batch is identical however the
    blocks are scheduled. A tuple of integers names the stream prefix
    ``(*seed, b)`` and is recorded as its first element. A ``Generator`` may
    be passed instead, in which case the batch records no seed.
    """
    if N < 1:
        raise ParameterError("N must be >= 1")
    if isinstance(seed, np.random.Generator):
        w = sample_white_noise(filt.n, law, seed, size=N)
        recorded = None
    else:
        prefix = (0,) if seed is None else tuple(np.atleast_1d(seed).astype(int).tolist())
        chunks = []
        for b, start in enumerate(range(0, N, BLOCK)):
            size = min(BLOCK, N - start)
            chunks.append(sample_white_noise(filt.n, law, substream(*prefix, b), size=size))
        w = np.vstack(chunks)
        recorded = prefix[0]
    # rows are w_i^T H = (H w_i)^T since H is symmetric
    return SignalBatch(w @ filt.operator, law, recorded, filt.digest)


def population_covariance(filt: GraphFilter) -> np.ndarray:
    """Covariance of the filter output under white input: H(A)^2."""
    h = filt.operator
    c = h @ h
    return 0.5 * (c + c.T)


def empirical_m(batch: SignalBatch) -> float:
    """Largest squared Euclidean norm among the signals."""
    return float(np.max(np.einsum("ij,ij->i", batch.signals, batch.signals)))


def save_batch(batch: SignalBatch, path) -> Path:
    """Write signals (``.csv`` text or ``.npy`` binary) plus a ``.json`` sidecar."""
    path = Path(path)
    if path.suffix == ".csv":
        np.savetxt(path, batch.signals, delimiter=",", fmt="%.17g")
    else:
        if path.suffix != ".npy":
            path = path.with_suffix(".npy")
        np.save(path, batch.signals)
    sidecar = path.with_name(path.name + ".json")
    sidecar.write_text(json.dumps(batch.metadata(), indent=2, sort_keys=True) + "\n")
    return path


def load_batch(path) -> SignalBatch:
    path = Path(path)
    if path.suffix == ".csv":
        y = np.loadtxt(path, delimiter=",", ndmin=2)
    else:
        y = np.load(path)
    sidecar = path.with_name(path.name + ".json")
    meta = json.loads(sidecar.read_text()) if sidecar.exists() else {}
    if meta and (meta.get("n"), meta.get("N")) != (y.shape[1], y.shape[0]):
        raise DataError(f"{path}: sidecar shape ({meta.get('N')}, {meta.get('n')}) != data {y.shape}")
    return SignalBatch(y, meta.get("noise_law", "gaussian"), meta.get("seed"), meta.get("filter_digest"))
