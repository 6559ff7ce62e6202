"""Label ranking with one-versus-one classifiers."""

from .errors import (
    DegeneracyError,
    DimensionError,
    EndpointError,
    ParameterError,
    ValidationError,
)
from .learn import (
    BinaryView,
    LinearBinaryModel,
    Stump,
    binary_view,
    empirical_binary_risk,
    fit_linear,
    fit_stump_erm,
)
from .ovo import (
    LabelRanker,
    LinearLearner,
    RankingRiskReport,
    RateBoundParams,
    bayes_ranker,
    estimate_ranking_risk,
    fit_ovo,
    n0_upper_bound,
    predict_permutation,
    rate_bound,
    score_labels,
    topk_error,
    tournament_at,
)
from .perm import (
    Permutation,
    ScoreVector,
    TieBreakPolicy,
    Tournament,
    copeland_ranks,
    invert,
    is_acyclic,
    kendall_tau,
    make_permutation,
    permutation_distance,
    ranks_from_scores,
)
from .synth import (
    LabeledDataset,
    NoiseDiagnostics,
    PosteriorOracle,
    bayes_binary,
    couple_sigma,
    eta,
    h_alpha,
    h_alpha_warped,
    noise_diagnostics,
    plackett_luce_sample,
    sample_dataset,
    sigma_star,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryView",
    "DegeneracyError",
    "DimensionError",
    "EndpointError",
    "LabelRanker",
    "LabeledDataset",
    "LinearBinaryModel",
    "LinearLearner",
    "NoiseDiagnostics",
    "ParameterError",
    "Permutation",
    "PosteriorOracle",
    "RankingRiskReport",
    "RateBoundParams",
    "ScoreVector",
    "Stump",
    "TieBreakPolicy",
    "Tournament",
    "ValidationError",
    "bayes_binary",
    "bayes_ranker",
    "binary_view",
    "copeland_ranks",
    "couple_sigma",
    "empirical_binary_risk",
    "estimate_ranking_risk",
    "eta",
    "fit_linear",
    "fit_ovo",
    "fit_stump_erm",
    "h_alpha",
    "h_alpha_warped",
    "invert",
    "is_acyclic",
    "kendall_tau",
    "make_permutation",
    "n0_upper_bound",
    "noise_diagnostics",
    "permutation_distance",
    "plackett_luce_sample",
    "predict_permutation",
    "ranks_from_scores",
    "rate_bound",
    "sample_dataset",
    "score_labels",
    "sigma_star",
    "topk_error",
    "tournament_at",
]
