"""Undirected simple graphs, random generators and spectral utilities."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import (
    ConvergenceError,
    DataError,
    DegenerateError,
    ParameterError,
    ShapeError,
    SizeError,
)
from .rng import as_generator

KARATE_SHA256 = "2095f3a8d35c292020188d1a0fd641effd209a09bc854973d8d6425604f91f6c"
# 0-indexed ids of Zachary's instructor (canonical node 1) and president (canonical node 34)
KARATE_INSTRUCTOR = 0
KARATE_PRESIDENT = 33

DENSE_LIMIT = 5000


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph stored as a dense 0/1 adjacency matrix.

    ``labels`` holds an optional string tag per node (``None`` when
    untagged). ``meta`` carries free-form generation details such as the
    model name, its parameters and the seed.
    """

    adjacency: np.ndarray
    labels: tuple = ()
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        a = np.asarray(self.adjacency)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ShapeError(f"adjacency must be square, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ParameterError("a graph needs at least one node")
        if not np.all((a == 0) | (a == 1)):
            raise DataError("adjacency entries must be 0 or 1")
        if not np.array_equal(a, a.T):
            raise DataError("adjacency must be symmetric")
        if np.any(np.diag(a) != 0):
            raise DataError("self-loops are not allowed")
        object.__setattr__(self, "adjacency", _frozen(a.astype(np.float64)))
        labels = tuple(self.labels) if self.labels else (None,) * a.shape[0]
        if len(labels) != a.shape[0]:
            raise ShapeError("labels must have one entry per node")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1).astype(np.int64)

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.sum() // 2)

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency, k=1))
        return list(zip(i.tolist(), j.tolist()))

    def is_connected(self) -> bool:
        ncomp, _ = connected_components(self.adjacency, directed=False)
        return ncomp == 1

    def node(self, label: str) -> int:
        """Index of the node carrying ``label``."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    @classmethod
    def from_edges(cls, n: int, edges, labels: Sequence[Optional[str]] = (), meta=None):
        a = np.zeros((n, n))
        for u, v in edges:
            a[u, v] = a[v, u] = 1.0
        return cls(a, tuple(labels), dict(meta or {}))


def generate_er(n: int, p: float, rng=None) -> Graph:
    """Erdős–Rényi G(n, p): each unordered pair is an edge with probability p."""
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    gen = as_generator(rng)
    upper = np.triu(gen.random((n, n)) < p, k=1)
    a = (upper | upper.T).astype(np.float64)
    g = Graph(a, meta={"model": "er", "n": n, "p": p})
    g.meta["connected"] = g.is_connected()
    return g


def generate_ba(n: int, m: int, m0: int, rng=None) -> Graph:
    """Barabási–Albert preferential attachment.

    Starts from ``m0`` isolated nodes. Each later node attaches to ``m``
    distinct earlier nodes sampled proportionally to degree, or uniformly
    while every degree is still zero, so the graph has ``(n - m0) * m``
    edges.
    """
    if not (1 <= m <= m0 <= n):
        raise ParameterError(f"need 1 <= m <= m0 <= n, got m={m}, m0={m0}, n={n}")
    gen = as_generator(rng)
    a = np.zeros((n, n))
    deg = np.zeros(n)
    for t in range(m0, n):
        total = deg[:t].sum()
        if total == 0:
            targets = gen.choice(t, size=m, replace=False)
        else:
            targets = gen.choice(t, size=m, replace=False, p=deg[:t] / total)
        a[t, targets] = a[targets, t] = 1.0
        deg[targets] += 1
        deg[t] += m
    g = Graph(a, meta={"model": "ba", "n": n, "m": m, "m0": m0})
    g.meta["connected"] = g.is_connected()
    return g


def read_edgelist(source, n: Optional[int] = None) -> tuple[int, list[tuple[int, int]]]:
    """Parse a 0-indexed "u v" edge list. Lines starting with ``#`` are skipped.

    Returns ``(n, edges)``; ``n`` defaults to one more than the largest index.
    """
    text = source if isinstance(source, str) and "\n" in source else Path(source).read_text()
    edges, seen = [], set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DataError(f"line {lineno}: expected 'u v', got {raw!r}")
        u, v = int(parts[0]), int(parts[1])
        if u < 0 or v < 0:
            raise DataError(f"line {lineno}: negative node index")
        if u == v:
            raise DataError(f"line {lineno}: self-loop on node {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DataError(f"line {lineno}: duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    top = max((v for e in edges for v in e), default=-1) + 1
    if n is None:
        n = max(top, 1)
    elif top > n:
        raise DataError(f"edge list references node {top - 1} but n={n}")
    return n, edges


def write_edgelist(graph: Graph, path) -> None:
    lines = [f"{u} {v}\n" for u, v in graph.edges()]
    Path(path).write_text("".join(lines))


def load_graph(path, n: Optional[int] = None) -> Graph:
    n, edges = read_edgelist(Path(path), n)
    return Graph.from_edges(n, edges, meta={"model": "file", "path": str(path)})


def load_karate() -> Graph:
    """Zachary's karate club (34 nodes, 78 edges) with "I" and "P" labels."""
    raw = resources.files("blindrank").joinpath("data/karate.edgelist").read_bytes()
    if hashlib.sha256(raw).hexdigest() != KARATE_SHA256:
        raise DataError("bundled karate edge list failed its checksum")
    n, edges = read_edgelist(raw.decode())
    labels = [None] * n
    labels[KARATE_INSTRUCTOR] = "I"
    labels[KARATE_PRESIDENT] = "P"
    return Graph.from_edges(n, edges, labels, meta={"model": "karate"})


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns, aligned with eigenvalues


@dataclass(frozen=True)
class CentralityProfile:
    values: np.ndarray
    ranks: np.ndarray
    oriented: bool = True

    @property
    def n(self) -> int:
        return len(self.values)


def orient(v: np.ndarray) -> np.ndarray:
    """Flip ``v`` so that its entry of largest magnitude is nonnegative."""
    v = np.asarray(v, dtype=float)
    if v.size and v[np.argmax(np.abs(v))] < 0:
        return -v
    return v.copy()


def _as_symmetric(matrix) -> np.ndarray:
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0))):
        raise ParameterError("matrix is not symmetric")
    return a


def _start_vector(n: int) -> np.ndarray:
    # strictly positive so it is never orthogonal to a Perron vector
    v = 1.0 + np.random.default_rng(0).random(n)
    return v / np.linalg.norm(v)


def leading_eigenpair(
    matrix,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    shift: Optional[float] = None,
    v0: Optional[np.ndarray] = None,
) -> tuple[float, np.ndarray]:
    """Largest (algebraic) eigenvalue and its unit eigenvector by power iteration.

    Iterates on ``M + shift * I``. The default shift is the maximum absolute
    row sum, which bounds the spectral radius, so the shifted matrix is
    positive semidefinite and its dominant eigenvector is the one of the
    largest algebraic eigenvalue. For an adjacency matrix this is the
    maximum degree. Pass ``shift=0`` for matrices already known to be PSD.

    Stops once ``||M v - lam v||_2 <= tol * max(1, |lam|)``. The returned
    vector is oriented so its largest-magnitude entry is nonnegative.
    """
    a = _as_symmetric(matrix)
    n = a.shape[0]
    s = float(np.abs(a).sum(axis=1).max()) if shift is None else float(shift)
    v = _start_vector(n) if v0 is None else np.asarray(v0, float) / np.linalg.norm(v0)
    res = np.inf
    for it in range(1, max_iter + 1):
        av = a @ v
        lam = float(v @ av)
        res = float(np.linalg.norm(av - lam * v))
        if res <= tol * max(1.0, abs(lam)):
            return lam, orient(v)
        w = av + s * v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            raise DegenerateError("shifted iterate vanished; matrix has no dominant direction")
        v = w / norm
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations (residual {res:.3e})",
        residual=res,
        iterations=max_iter,
    )


def full_spectrum(matrix) -> SpectralDecomposition:
    """Dense symmetric eigendecomposition, eigenvalues in descending order."""
    a = _as_symmetric(matrix)
    if a.shape[0] > DENSE_LIMIT:
        raise SizeError(f"dense spectrum limited to n <= {DENSE_LIMIT}, got {a.shape[0]}")
    w, v = np.linalg.eigh(a)
    return SpectralDecomposition(_frozen(w[::-1]), _frozen(v[:, ::-1]))


def rank_from_values(values, tie_tol: float = 0.0) -> np.ndarray:
    """Rank of each entry as the number of entries greater than or equal to it.

    The largest value gets rank 1; tied values share the larger rank, e.g.
    ``[0.5, 0.3, 0.5] -> [2, 3, 2]``. With ``tie_tol > 0`` a value counts as
    greater or equal when it is at least ``values[i] - tie_tol``, which
    restores ties that exist exactly but were computed in floating point.
    """
    x = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ParameterError("values must be finite")
    asc = np.sort(x)
    return (x.size - np.searchsorted(asc, x - tie_tol, side="left")).astype(np.int64)


def centrality_profile(values, orient_sign: bool = True, tie_tol: float = 0.0) -> CentralityProfile:
    v = orient(values) if orient_sign else np.asarray(values, float).copy()
    return CentralityProfile(_frozen(v), _frozen(rank_from_values(v, tie_tol)), orient_sign)


def eigenvector_centrality(
    graph: Graph, tol: float = 1e-10, max_iter: int = 100_000, tie_tol: float = 1e-9
) -> CentralityProfile:
    """Ground-truth centrality: oriented leading eigenvector of the adjacency.

    Structurally equivalent nodes have exactly equal centrality; ``tie_tol``
    keeps them tied in the ranks despite rounding in the eigensolver.
    """
    _, u = leading_eigenpair(graph.adjacency, tol=tol, max_iter=max_iter)
    return centrality_profile(u, tie_tol=tie_tol)
