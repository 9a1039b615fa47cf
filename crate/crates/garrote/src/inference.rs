use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Family};
use crate::error::{Error, Result};
use crate::glm::fit_full;
use crate::pathsolver::{ridge_fit, solve_at, PenaltySpec, SolveOptions};
use crate::selectors::{compute_initial, nng_cv, nng_fit_at, InitialEstimate, InitialKind, NngFit};
use crate::tuning::{derive_seed, Rule};

/// Model-based covariance for the garrote's shrinkage factors and the
/// implied coefficient standard errors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SandwichSe {
    /// Standard error per coefficient; exactly 0 for unselected ones.
    pub se: Vec<f64>,
    /// Covariance of the active shrinkage factors.
    pub cov_c: DMatrix<f64>,
    pub active: Vec<usize>,
    pub sigma2: f64,
}

/// Sandwich covariance of the active shrinkage factors: with Z the
/// active columns of the scaled design and S = diag(lambda / c_j) the
/// local curvature of the penalty at the solution,
/// cov(c) = sigma2 (Z'Z + S)^-1 Z'Z (Z'Z + S)^-1, and the coefficient
/// standard error is |init_j| times the factor's. At lambda = 0 this
/// collapses to the classical least-squares covariance. The residual
/// variance uses the garrote fit with denominator n - |active| - 1.
pub fn sandwich_se(d: &Dataset, fit: &NngFit) -> Result<SandwichSe> {
    if d.family != Family::Gaussian {
        return Err(Error::InvalidArgument(
            "model-based garrote standard errors are defined for gaussian responses".into(),
        ));
    }
    let (n, p) = (d.n(), d.p());
    let nf = n as f64;
    let active: Vec<usize> = (0..p).filter(|&j| fit.c[j] > 0.0).collect();
    let a = active.len();
    if n <= a + 1 {
        return Err(Error::InvalidArgument(format!(
            "need n > |active| + 1, got n={n} with {a} active"
        )));
    }
    // centered scaled design restricted to the active set
    let mut z = DMatrix::zeros(n, a);
    for (pos, &j) in active.iter().enumerate() {
        let m = d.x.column(j).iter().sum::<f64>() / nf;
        for i in 0..n {
            z[(i, pos)] = fit.init_coefficients[j] * (d.x[(i, j)] - m);
        }
    }
    let ybar = d.y.iter().sum::<f64>() / nf;
    let yc = d.y.map(|v| v - ybar);
    let c_active = DVector::from_fn(a, |pos, _| fit.c[active[pos]]);
    let resid = &yc - &z * &c_active;
    let sigma2 = resid.norm_squared() / (nf - a as f64 - 1.0);

    let ztz = z.transpose() * &z;
    let mut bread = ztz.clone();
    for (pos, &j) in active.iter().enumerate() {
        bread[(pos, pos)] += fit.lambda / fit.c[j];
    }
    let inv = bread
        .cholesky()
        .ok_or_else(|| Error::Singular("active scaled design is rank deficient".into()))?
        .inverse();
    let cov_c = (&inv * &ztz * &inv) * sigma2;

    let mut se = vec![0.0; p];
    for (pos, &j) in active.iter().enumerate() {
        se[j] = fit.init_coefficients[j].abs() * cov_c[(pos, pos)].max(0.0).sqrt();
    }
    Ok(SandwichSe {
        se,
        cov_c,
        active,
        sigma2,
    })
}

/// How the resampled fits are tuned.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BootstrapSpec {
    pub init_kind: InitialKind,
    /// Rule for tuning the initial estimator's penalty.
    pub init_rule: Rule,
    /// Rule for tuning the garrote penalty.
    pub nng_rule: Rule,
    /// Re-tune both penalties inside every resample; otherwise both stay
    /// fixed at their full-data values.
    pub reestimate: bool,
    pub replicates: usize,
    pub folds: usize,
}

/// Resampled distribution of the garrote coefficients.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BootstrapSummary {
    /// Coefficients of the full-data fit the resamples perturb.
    pub original: DVector<f64>,
    pub mean: DVector<f64>,
    /// Per-coefficient standard deviation across completed resamples.
    pub se: DVector<f64>,
    /// Fraction of completed resamples selecting each variable.
    pub selection_freq: DVector<f64>,
    pub completed: usize,
    pub failed: usize,
    pub lambda_init: Option<f64>,
    pub lambda_nng: f64,
}

const MAX_RETRIES: u64 = 10;
/// Stream stride per replicate: retries draw nearby streams without
/// colliding with other replicates.
const STREAM_STRIDE: u64 = 16;

fn fixed_initial(
    d: &Dataset,
    kind: InitialKind,
    lambda: Option<f64>,
) -> Result<InitialEstimate> {
    let (coefficients, intercept) = match kind {
        InitialKind::Ols => {
            let f = fit_full(d)?;
            (f.coefficients, f.intercept)
        }
        InitialKind::Ridge => {
            let lam = lambda.ok_or_else(|| {
                Error::InvalidArgument("fixed ridge initial needs a penalty value".into())
            })?;
            ridge_fit(d, lam)?
        }
        InitialKind::Lasso => {
            let lam = lambda.ok_or_else(|| {
                Error::InvalidArgument("fixed lasso initial needs a penalty value".into())
            })?;
            solve_at(d, &PenaltySpec::lasso(), lam, &SolveOptions::default())?
        }
    };
    Ok(InitialEstimate {
        kind,
        rule: Rule::Optimal,
        coefficients,
        intercept,
        lambda,
        curve: None,
    })
}

fn one_replicate(
    d: &Dataset,
    spec: &BootstrapSpec,
    master_seed: u64,
    replicate: usize,
    lambda_init: Option<f64>,
    lambda_nng: f64,
) -> Option<DVector<f64>> {
    let n = d.n();
    for retry in 0..=MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(replicate as u64 * STREAM_STRIDE + retry);
        let idx: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let resample = d.subset_rows(&idx);
        let attempt = (|| -> Result<NngFit> {
            if spec.reestimate {
                let init_seed = rng.gen::<u64>();
                let nng_seed = rng.gen::<u64>();
                let init = compute_initial(&resample, spec.init_kind, spec.init_rule, spec.folds, init_seed)?;
                nng_cv(&resample, &init, spec.folds, nng_seed, spec.nng_rule)
            } else {
                let init = fixed_initial(&resample, spec.init_kind, lambda_init)?;
                nng_fit_at(&resample, &init, lambda_nng)
            }
        })();
        if let Ok(fit) = attempt {
            return Some(fit.coefficients);
        }
    }
    None
}

/// Bootstrap distribution of the garrote coefficients under row
/// resampling. The full-data fit tunes both penalties first; fixed-mode
/// resamples reuse those penalty values, reestimated-mode resamples
/// re-tune both by cross-validation inside each resample. Replicates
/// draw from per-replicate generator streams, so results do not depend
/// on thread count, and a failed replicate retries on a fresh stream up
/// to 10 times before it is dropped and counted.
pub fn bootstrap_se(
    d: &Dataset,
    spec: &BootstrapSpec,
    master_seed: u64,
) -> Result<BootstrapSummary> {
    if spec.replicates < 2 {
        return Err(Error::InvalidArgument(
            "need at least 2 bootstrap replicates".into(),
        ));
    }
    let init = compute_initial(
        d,
        spec.init_kind,
        spec.init_rule,
        spec.folds,
        derive_seed(master_seed, 0xB001),
    )?;
    let full = nng_cv(d, &init, spec.folds, derive_seed(master_seed, 0xB002), spec.nng_rule)?;
    let lambda_init = init.lambda;
    let lambda_nng = full.lambda;

    let slots: Vec<Option<DVector<f64>>> = (0..spec.replicates)
        .into_par_iter()
        .map(|r| one_replicate(d, spec, master_seed, r, lambda_init, lambda_nng))
        .collect();

    let p = d.p();
    let completed_fits: Vec<&DVector<f64>> = slots.iter().flatten().collect();
    let completed = completed_fits.len();
    let failed = spec.replicates - completed;
    if completed < 2 {
        return Err(Error::NonConvergence(format!(
            "only {completed} of {} bootstrap replicates completed",
            spec.replicates
        )));
    }
    let cf = completed as f64;
    let mut mean = DVector::zeros(p);
    for b in &completed_fits {
        mean += *b;
    }
    mean /= cf;
    let mut var = DVector::zeros(p);
    let mut freq = DVector::zeros(p);
    for b in &completed_fits {
        for j in 0..p {
            let dlt = b[j] - mean[j];
            var[j] += dlt * dlt;
            if b[j] != 0.0 {
                freq[j] += 1.0;
            }
        }
    }
    var /= cf - 1.0;
    freq /= cf;
    Ok(BootstrapSummary {
        original: full.coefficients.clone(),
        mean,
        se: var.map(f64::sqrt),
        selection_freq: freq,
        completed,
        failed,
        lambda_init,
        lambda_nng,
    })
}
