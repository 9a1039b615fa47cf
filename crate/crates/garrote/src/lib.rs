//! Penalized regression toolkit centered on the nonnegative garrote with
//! pluggable initial estimators, plus lasso, adaptive lasso, relaxed
//! lasso, ridge, and exhaustive best subset selection. Includes
//! cross-validated tuning, sandwich and bootstrap standard errors, and
//! method-comparison reporting for gaussian and binomial responses.

pub mod dataset;
pub mod error;
pub mod glm;
pub mod inference;
pub mod pathsolver;
pub mod reporting;
pub mod selectors;
pub mod tuning;

pub use dataset::{
    assign_folds, builtin_bodyfat, builtin_prostate, load_csv, load_csv_reader, load_csv_str,
    make_synthetic_highdim, prepare_bodyfat, standardize, standardize_with, Dataset, Family,
    FoldAssignment, SdConvention, StandardizationRecord,
};
pub use error::{Error, Result};
pub use glm::{
    collinearity, deviance, fit_full, r_squared, r_squared_of, CollinearityReport, FitResult,
};
pub use inference::{bootstrap_se, sandwich_se, BootstrapSpec, BootstrapSummary, SandwichSe};
pub use reporting::{
    bland_altman, bland_altman_csv, build_comparison, cv_curve_csv, drop_one_r2, BlandAltman,
    ComparisonRow, ComparisonTable,
};
pub use pathsolver::{
    kkt_residual, lambda_max, lambda_path, ridge_fit, solve_at, solve_path, LowerBound, PathFit,
    PenaltyNorm, PenaltySpec, SolveOptions,
};
pub use selectors::{
    alasso_cv, best_subset_per_size, compute_initial, nng_cv, nng_fit_at, nng_lambda_path,
    nng_path, ridge_path, rlasso_cv, select_subset_bic, subset_bic, subset_cv, AlassoFit,
    InitialEstimate, InitialKind, Method, NngFit, RlassoFit, SubsetFit, DEFAULT_GAMMAS,
    DEFAULT_GRID_POINTS, DEFAULT_PHIS, MAX_SUBSET_COLS,
};
pub use tuning::{
    auc, cv_prediction_error, cv_tune, cv_tune_2d, derive_seed, CvCurve, CvGrid2d,
    PredictionReport, Rule,
};
