"""Rolling correlation-matrix spectra for multivariate return panels.

Workflow: load a weekly price panel, roll standardized return windows
through it, decompose each window's correlation matrix, and compare the
spectra and eigenvector diagnostics against Monte Carlo null baselines.
"""

from .analytics import (
    AssetComponentCorrelations,
    ParticipationSeries,
    SignificanceCounts,
    VarianceProfile,
    adjusted_component_correlations,
    asset_component_correlations,
    kaiser_guttman_count,
    max_correlation_rank,
    participation,
    scree_exceedance_count,
    scree_significant_count,
    self_correlation_deltas,
    significance_counts,
    variance_fractions,
)
from .correlation import (
    CoefficientMoments,
    CorrelationMatrix,
    coefficient_moments,
    correlation_matrix,
)
from .errors import (
    BaselineMismatchError,
    DegenerateWindowError,
    EigenComputationError,
    PanelFormatError,
)
from .nulls import (
    FactorSpec,
    NullConfig,
    NullEnsembleStats,
    abs_corr_percentile99,
    cached_ensemble_stats,
    nearest_rank_percentile,
    null_ensemble_stats,
    null_windows,
    pr_baseline_stats,
    random_scree_profile,
    shuffle_panel,
    sim_rng,
    simulate_gaussian_panel,
    synthetic_factor_panel,
)
from .panel import (
    ASSET_CLASSES,
    AssetMeta,
    PricePanel,
    ReturnPanel,
    WindowView,
    compute_log_returns,
    load_price_panel,
    roll_windows,
    standardize_window,
    subset_by_class,
)
from .pipeline import RunConfig, WindowReport, emit_reports, run_analysis
from .spectral import (
    MPBounds,
    SpectralDecomposition,
    eigendecompose,
    eigenvector_zscores,
    mp_bounds,
    mp_density,
)

__version__ = "0.1.0"

__all__ = [
    "ASSET_CLASSES",
    "AssetComponentCorrelations",
    "AssetMeta",
    "BaselineMismatchError",
    "CoefficientMoments",
    "CorrelationMatrix",
    "DegenerateWindowError",
    "EigenComputationError",
    "FactorSpec",
    "MPBounds",
    "NullConfig",
    "NullEnsembleStats",
    "PanelFormatError",
    "ParticipationSeries",
    "PricePanel",
    "ReturnPanel",
    "RunConfig",
    "SignificanceCounts",
    "SpectralDecomposition",
    "VarianceProfile",
    "WindowReport",
    "WindowView",
    "abs_corr_percentile99",
    "adjusted_component_correlations",
    "asset_component_correlations",
    "cached_ensemble_stats",
    "coefficient_moments",
    "compute_log_returns",
    "correlation_matrix",
    "eigendecompose",
    "eigenvector_zscores",
    "emit_reports",
    "kaiser_guttman_count",
    "load_price_panel",
    "max_correlation_rank",
    "mp_bounds",
    "mp_density",
    "nearest_rank_percentile",
    "null_ensemble_stats",
    "null_windows",
    "participation",
    "pr_baseline_stats",
    "random_scree_profile",
    "roll_windows",
    "run_analysis",
    "scree_exceedance_count",
    "scree_significant_count",
    "self_correlation_deltas",
    "shuffle_panel",
    "significance_counts",
    "sim_rng",
    "simulate_gaussian_panel",
    "standardize_window",
    "subset_by_class",
    "synthetic_factor_panel",
    "variance_fractions",
]
