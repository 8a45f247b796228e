"""Blind eigenvector-centrality ranking from graph signals."""

__version__ = "0.1.0"

from .bounds import (
    BoundInputs,
    assumption_diagnostic,
    coherence_mu,
    delocalization_report,
    er_kappa_bound,
    er_sample_bound,
    kappa,
    sample_bound,
)
from .estimator import (
    CovarianceEstimate,
    accumulate,
    infer_centrality,
    merge,
    preserves_relative_order,
    sample_covariance,
)
from .evaluation import (
    SufficiencyProtocol,
    rank_correct,
    spearman,
    sufficiency_samples,
    windowed_spearman,
)
from .graph import (
    CentralityProfile,
    Graph,
    SpectralDecomposition,
    eigenvector_centrality,
    full_spectrum,
    generate_ba,
    generate_er,
    leading_eigenpair,
    load_karate,
    rank_from_values,
)
from .signals import (
    GraphFilter,
    SignalBatch,
    empirical_m,
    generate_signals,
    make_normalized_filter,
    make_polynomial_filter,
    population_covariance,
    sample_white_noise,
)
