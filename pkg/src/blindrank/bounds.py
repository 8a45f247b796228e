"""Sample-complexity calculators for blind centrality ranking.

The absolute constants in these bounds are not known. Every one of them is
a parameter defaulting to 1, so the outputs are meant for order-of-magnitude
and monotonicity comparisons rather than point predictions. Logarithms are
natural throughout.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ParameterError, VacuousBoundError

UNIT_TOL = 1e-8


def induced_inf_norm(matrix) -> float:
    """Operator norm induced by the vector max-norm: largest absolute row sum."""
    a = np.asarray(matrix, dtype=float)
    return float(np.abs(a).sum(axis=1).max(initial=0.0))


def _unit(u) -> np.ndarray:
    u = np.asarray(u, dtype=float).ravel()
    norm = np.linalg.norm(u)
    if abs(norm - 1.0) > UNIT_TOL:
        raise ParameterError(f"expected a unit vector, got norm {norm:.12g}")
    return u


def coherence_mu(u) -> float:
    """n * max_i u_i^2 for a unit vector; 1 when flat, n when a basis vector."""
    u = _unit(u)
    return float(u.size * np.max(np.abs(u)) ** 2)


def kappa(cov, beta1: float, u) -> float:
    """Infinity-norm size of the covariance once its top rank-one part is removed."""
    u = _unit(u)
    return induced_inf_norm(np.asarray(cov, dtype=float) - beta1 * np.outer(u, u))


@dataclass(frozen=True)
class BoundInputs:
    mu: float
    kappa: float
    beta1: float
    m: float
    n: int
    alpha: float
    t: float = 1.0
    C: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError("n must be >= 2 for log n > 0")
        if not (1.0 - 1e-9 <= self.mu <= self.n * (1.0 + 1e-9)):
            raise ParameterError(f"mu must lie in [1, n], got {self.mu}")
        if self.kappa < 0:
            raise ParameterError("kappa must be nonnegative")
        for name in ("beta1", "m", "alpha", "t", "C"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")


def sample_bound_value(inputs: BoundInputs) -> float:
    """C mu^4 (t/alpha)^2 m log(n) / (beta1 (1 - kappa/beta1)^2), before rounding."""
    b = inputs
    if b.kappa >= b.beta1:
        raise VacuousBoundError(f"kappa={b.kappa} >= beta1={b.beta1}: the bound is vacuous")
    gap = 1.0 - b.kappa / b.beta1
    return b.C * b.mu**4 * (b.t / b.alpha) ** 2 * b.m * math.log(b.n) / (b.beta1 * gap**2)


def sample_bound(inputs: BoundInputs) -> int:
    """Number of signals sufficient to order two nodes whose centralities differ by alpha."""
    return math.ceil(sample_bound_value(inputs))


def er_kappa_bound(n: int, p: float, constant: float = 1.0) -> float:
    """Order bound constant * n^{3/2} p on kappa for G(n, p) with H(A) = A."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    return constant * n**1.5 * p


def er_sample_bound(n: int, m: float, t: float = 1.0, C: float = 1.0) -> int:
    """ceil(C t^2 m n / log n): samples to order the extreme nodes of a dense G(n, p).

    The sub-polynomial n^{o(1)} factor is taken as 1.
    """
    if n < 2:
        raise ParameterError("n must be >= 2 for log n > 0")
    return math.ceil(C * t**2 * m * n / math.log(n))


def _jsonable(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, float) and not math.isfinite(v):
            v = str(v)
        out[k] = v
    return out


@dataclass(frozen=True)
class AssumptionDiagnostic:
    beta1: float
    kappa: float
    mu: float
    error_norm: float
    ratio: float
    constant: float
    passed: bool

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def assumption_diagnostic(cov, cov_hat, u, constant: float = 1.0) -> AssumptionDiagnostic:
    """Check beta1 - kappa >= constant * mu^2 * ||C_y - C_hat||_inf.

    ``u`` is the unit leading eigenvector of ``cov``; beta1 is its Rayleigh
    quotient.
    """
    cov = np.asarray(cov, dtype=float)
    cov_hat = np.asarray(cov_hat, dtype=float)
    if cov.shape != cov_hat.shape:
        raise ParameterError(f"shape mismatch {cov.shape} vs {cov_hat.shape}")
    u = _unit(u)
    beta1 = float(u @ cov @ u)
    k = kappa(cov, beta1, u)
    mu = coherence_mu(u)
    err = induced_inf_norm(cov - cov_hat)
    num = beta1 - k
    if err > 0:
        ratio = num / (mu**2 * err)
    else:
        ratio = math.inf if num > 0 else (-math.inf if num < 0 else math.nan)
    return AssumptionDiagnostic(beta1, k, mu, err, ratio, constant, bool(ratio >= constant))


@dataclass(frozen=True)
class DelocalizationReport:
    n: int
    sup_norm: float
    mu: float
    g: float
    max_alpha: float

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


def delocalization_report(u) -> DelocalizationReport:
    """Localization of a unit vector.

    ``g`` solves ``||u||_inf^2 = n^(g - 1)``: 0 for a flat vector, 1 for a
    basis vector. ``max_alpha = ||u||_inf`` is the largest centrality gap
    any pair of nodes can have (one node at zero).
    """
    u = _unit(u)
    n = u.size
    if n < 2:
        raise ParameterError("n must be >= 2")
    sup = float(np.max(np.abs(u)))
    g = 1.0 + math.log(sup**2) / math.log(n)
    return DelocalizationReport(n, sup, n * sup**2, g, sup)
