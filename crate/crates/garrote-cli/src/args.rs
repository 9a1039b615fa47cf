use clap::{Args, Parser, Subcommand, ValueEnum};
use garrote::{InitialKind, Rule};

#[derive(Parser, Debug)]
#[command(
    name = "garrote",
    version,
    about = "Penalized regression with the nonnegative garrote, lasso, adaptive and relaxed lasso, ridge, and best subset selection",
    long_about = "Fits, tunes, compares, and resamples sparse regression models. \
All fits run on covariates standardized to unit population standard deviation \
(gaussian responses are mean-centered); fit outputs include raw-scale \
coefficients via the inverse transform. Exit codes: 0 success, 1 numerical \
failure or failed reproduction check, 2 usage error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for resampling (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output directory for report files.
    #[arg(long, global = true, default_value = "garrote-out")]
    pub out: String,

    /// Also write CSV versions of the reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Omit the timestamp line from the reproduction manifest.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fit one method on a dataset and write its coefficients and fit stats.
    Fit(FitArgs),
    /// Nested cross-validated prediction error for one method.
    Cv(CvArgs),
    /// Cross-validation curve for a penalized method.
    Tune(TuneArgs),
    /// Bootstrap distribution of the garrote coefficients.
    Bootstrap(BootstrapArgs),
    /// Side-by-side selection table for the whole method battery.
    Compare(CompareArgs),
    /// Re-run a built-in analysis and check its results against stored targets.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
pub struct DataOpts {
    /// Built-in name (prostate, bodyfat, highdim-synthetic) or a CSV path.
    #[arg(long, default_value = "prostate")]
    pub data: String,

    /// Response column for CSV paths (default: last column).
    #[arg(long)]
    pub response: Option<String>,

    /// Response family for CSV paths.
    #[arg(long, value_enum, default_value_t = FamilyArg::Gaussian)]
    pub family: FamilyArg,

    /// Seed for fold assignment, resampling, and synthetic data.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Cross-validation folds.
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataOpts,

    #[arg(long, value_enum, default_value_t = MethodArg::Nng)]
    pub method: MethodArg,

    /// Initial estimator (nng and alasso only).
    #[arg(long, value_enum)]
    pub init: Option<InitArg>,

    #[arg(long, value_enum, default_value_t = RuleArg::Opt)]
    pub rule: RuleArg,

    /// Subset search: pick the size by BIC or by cross-validation.
    #[arg(long, value_enum, default_value_t = SubsetCriterion::Bic)]
    pub criterion: SubsetCriterion,

    /// Adaptive-lasso gamma grid, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub gammas: Option<Vec<f64>>,

    /// Relaxed-lasso phi grid, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub phis: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct CvArgs {
    #[command(flatten)]
    pub data: DataOpts,

    #[arg(long, value_enum, default_value_t = MethodArg::Nng)]
    pub method: MethodArg,

    #[arg(long, value_enum)]
    pub init: Option<InitArg>,

    #[arg(long, value_enum, default_value_t = RuleArg::Opt)]
    pub rule: RuleArg,

    /// Subset search: pick the size by BIC or by cross-validation.
    #[arg(long, value_enum, default_value_t = SubsetCriterion::Bic)]
    pub criterion: SubsetCriterion,
}

#[derive(Args, Debug)]
pub struct TuneArgs {
    #[command(flatten)]
    pub data: DataOpts,

    /// Method whose penalty curve to trace (ridge, lasso, nng, alasso).
    #[arg(long, value_enum, default_value_t = MethodArg::Lasso)]
    pub method: MethodArg,

    #[arg(long, value_enum)]
    pub init: Option<InitArg>,

    #[arg(long, value_delimiter = ',')]
    pub gammas: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct BootstrapArgs {
    #[command(flatten)]
    pub data: DataOpts,

    /// Resampling design: keep both penalties fixed at their full-data
    /// values or re-tune them inside every resample.
    #[arg(long, value_enum, default_value_t = ModeArg::FixedOpt)]
    pub mode: ModeArg,

    #[arg(long, value_enum)]
    pub init: Option<InitArg>,

    /// Bootstrap replicates.
    #[arg(long = "B", alias = "replicates", default_value_t = 1000)]
    pub replicates: usize,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataOpts,

    #[arg(long, value_enum, default_value_t = RuleArg::Opt)]
    pub rule: RuleArg,

    /// Also refit the battery with the other rule and append those rows.
    #[arg(long)]
    pub both_rules: bool,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// Which built-in analysis to re-run.
    #[arg(value_enum)]
    pub name: AnalysisArg,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[arg(long, default_value_t = 10)]
    pub folds: usize,

    /// Bootstrap replicates for the resampling section.
    #[arg(long = "B", alias = "replicates", default_value_t = 1000)]
    pub replicates: usize,

    /// Skip the bootstrap section and its checks.
    #[arg(long)]
    pub skip_bootstrap: bool,

    /// Skip the nested cross-validation section and its checks.
    #[arg(long)]
    pub skip_cv: bool,

    /// CSV path replacing the synthetic high-dimensional data.
    #[arg(long)]
    pub data: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Gaussian,
    Binomial,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Ols,
    Ridge,
    Lasso,
    Rlasso,
    Nng,
    Alasso,
    Subset,
}

impl MethodArg {
    pub fn takes_init(self) -> bool {
        matches!(self, MethodArg::Nng | MethodArg::Alasso)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Ols,
    Ridge,
    Lasso,
}

impl InitArg {
    pub fn kind(self) -> InitialKind {
        match self {
            InitArg::Ols => InitialKind::Ols,
            InitArg::Ridge => InitialKind::Ridge,
            InitArg::Lasso => InitialKind::Lasso,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Opt,
    #[value(name = "1se")]
    OneSe,
}

impl RuleArg {
    pub fn rule(self) -> Rule {
        match self {
            RuleArg::Opt => Rule::Optimal,
            RuleArg::OneSe => Rule::OneSe,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            RuleArg::Opt => "opt",
            RuleArg::OneSe => "1se",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SubsetCriterion {
    Bic,
    Cv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "fixed_opt")]
    FixedOpt,
    #[value(name = "fixed_1se")]
    Fixed1se,
    #[value(name = "reestimated_opt")]
    ReestimatedOpt,
    #[value(name = "reestimated_1se")]
    Reestimated1se,
}

impl ModeArg {
    pub fn reestimate(self) -> bool {
        matches!(self, ModeArg::ReestimatedOpt | ModeArg::Reestimated1se)
    }

    pub fn rule(self) -> Rule {
        match self {
            ModeArg::FixedOpt | ModeArg::ReestimatedOpt => Rule::Optimal,
            ModeArg::Fixed1se | ModeArg::Reestimated1se => Rule::OneSe,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            ModeArg::FixedOpt => "fixed_opt",
            ModeArg::Fixed1se => "fixed_1se",
            ModeArg::ReestimatedOpt => "reestimated_opt",
            ModeArg::Reestimated1se => "reestimated_1se",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum AnalysisArg {
    Prostate,
    Bodyfat,
    Highdim,
}

