use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::dataset::{Dataset, Family};
use crate::error::{Error, Result};

/// Lower clamp applied to binomial means inside deviance computations.
pub const MU_CLAMP: f64 = 1e-10;

/// An unpenalized full-model fit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitResult {
    /// Per-covariate coefficients (in the units of the supplied design).
    pub coefficients: DVector<f64>,
    pub intercept: f64,
    /// Linear predictor for gaussian, probabilities for binomial.
    pub fitted: DVector<f64>,
    /// Residual variance estimate, gaussian only (denominator n-p-1).
    pub sigma2_hat: Option<f64>,
    /// Covariance of the covariate coefficients (p x p).
    pub cov: DMatrix<f64>,
    pub se: Vec<f64>,
    /// Two-sided t-test (gaussian) or Wald z-test (binomial) p-values.
    pub p_values: Vec<f64>,
    /// Number of estimated parameters including the intercept.
    pub df_used: usize,
    pub deviance: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl FitResult {
    pub fn nonzero_count(&self) -> usize {
        self.coefficients.iter().filter(|&&b| b != 0.0).count()
    }
}

fn design_with_intercept(x: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, p) = (x.nrows(), x.ncols());
    let mut d = DMatrix::zeros(n, p + 1);
    for i in 0..n {
        d[(i, 0)] = 1.0;
    }
    d.view_mut((0, 1), (n, p)).copy_from(x);
    d
}

/// Fits the full (unpenalized) model: exact least squares for gaussian,
/// iteratively reweighted least squares for binomial. Binomial fits
/// converge when the largest score component falls below 1e-8, with
/// step-halving whenever a Newton step increases the deviance.
pub fn fit_full(d: &Dataset) -> Result<FitResult> {
    match d.family {
        Family::Gaussian => fit_gaussian(d),
        Family::Binomial => fit_binomial(d),
    }
}

fn fit_gaussian(d: &Dataset) -> Result<FitResult> {
    let (n, p) = (d.n(), d.p());
    if n <= p + 1 {
        return Err(Error::InvalidArgument(format!(
            "gaussian full fit needs n > p + 1, got n={n}, p={p}"
        )));
    }
    let design = design_with_intercept(&d.x);
    let gram = design.transpose() * &design;
    let chol = gram
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Singular("design matrix is rank deficient".into()))?;
    let xty = design.transpose() * &d.y;
    let beta_full = chol.solve(&xty);
    let fitted = &design * &beta_full;
    let resid = &d.y - &fitted;
    let rss: f64 = resid.norm_squared();
    let df_resid = (n - p - 1) as f64;
    let sigma2 = rss / df_resid;
    let cov_full = chol.inverse() * sigma2;

    let intercept = beta_full[0];
    let coefficients = DVector::from_fn(p, |j, _| beta_full[j + 1]);
    let cov = cov_full.view((1, 1), (p, p)).into_owned();
    let se: Vec<f64> = (0..p).map(|j| cov[(j, j)].max(0.0).sqrt()).collect();
    let tdist = StudentsT::new(0.0, 1.0, df_resid)
        .map_err(|e| Error::Numeric(format!("t distribution: {e}")))?;
    let p_values: Vec<f64> = (0..p)
        .map(|j| {
            if se[j] == 0.0 {
                1.0
            } else {
                let t = coefficients[j] / se[j];
                2.0 * (1.0 - tdist.cdf(t.abs()))
            }
        })
        .collect();

    Ok(FitResult {
        coefficients,
        intercept,
        fitted,
        sigma2_hat: Some(sigma2),
        cov,
        se,
        p_values,
        df_used: p + 1,
        deviance: rss,
        converged: true,
        iterations: 1,
    })
}

const IRLS_CAP: usize = 100;
const SCORE_TOL: f64 = 1e-8;

fn fit_binomial(d: &Dataset) -> Result<FitResult> {
    let (n, p) = (d.n(), d.p());
    let design = design_with_intercept(&d.x);
    let ybar = d.y.iter().sum::<f64>() / n as f64;
    if ybar == 0.0 || ybar == 1.0 {
        return Err(Error::InvalidArgument(
            "binomial response is single-class".into(),
        ));
    }
    let mut beta = DVector::zeros(p + 1);
    beta[0] = (ybar / (1.0 - ybar)).ln();
    let mut dev = binomial_deviance_eta(&d.y, &(&design * &beta));
    let mut converged = false;
    let mut iterations = 0;

    while iterations < IRLS_CAP {
        iterations += 1;
        let eta = &design * &beta;
        let mu = eta.map(|e| 1.0 / (1.0 + (-e).exp()));
        let score = design.transpose() * (&d.y - &mu);
        if score.amax() < SCORE_TOL {
            converged = true;
            break;
        }
        let w = mu.map(|m| (m * (1.0 - m)).max(1e-12));
        let mut dw = design.clone();
        for i in 0..n {
            for j in 0..=p {
                dw[(i, j)] *= w[i];
            }
        }
        let hess = design.transpose() * &dw;
        let chol = hess
            .cholesky()
            .ok_or_else(|| Error::Singular("information matrix is singular".into()))?;
        let step = chol.solve(&score);
        // step-halving until the deviance stops increasing
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand = &beta + &step * scale;
            let cand_dev = binomial_deviance_eta(&d.y, &(&design * &cand));
            if cand_dev <= dev + 1e-10 {
                beta = cand;
                dev = cand_dev;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!(
            "binomial fit: score above {SCORE_TOL} after {iterations} iterations"
        )));
    }

    let eta = &design * &beta;
    let fitted = eta.map(|e| 1.0 / (1.0 + (-e).exp()));
    // information matrix at the converged estimate
    let w = fitted.map(|m| (m * (1.0 - m)).max(1e-12));
    let mut dw = design.clone();
    for i in 0..n {
        for j in 0..=p {
            dw[(i, j)] *= w[i];
        }
    }
    let hess = design.transpose() * &dw;
    let chol = hess
        .cholesky()
        .ok_or_else(|| Error::Singular("information matrix is singular".into()))?;
    let cov_full = chol.inverse();
    let intercept = beta[0];
    let coefficients = DVector::from_fn(p, |j, _| beta[j + 1]);
    let cov = cov_full.view((1, 1), (p, p)).into_owned();
    let se: Vec<f64> = (0..p).map(|j| cov[(j, j)].max(0.0).sqrt()).collect();
    let norm = Normal::standard();
    let p_values: Vec<f64> = (0..p)
        .map(|j| {
            if se[j] == 0.0 {
                1.0
            } else {
                2.0 * (1.0 - norm.cdf((coefficients[j] / se[j]).abs()))
            }
        })
        .collect();

    Ok(FitResult {
        coefficients,
        intercept,
        fitted,
        sigma2_hat: None,
        cov,
        se,
        p_values,
        df_used: p + 1,
        deviance: dev,
        converged,
        iterations,
    })
}

fn binomial_deviance_eta(y: &DVector<f64>, eta: &DVector<f64>) -> f64 {
    // -2 log-likelihood written in the numerically stable eta form:
    // log(1 + e^eta) - y*eta
    2.0 * y
        .iter()
        .zip(eta.iter())
        .map(|(&yi, &e)| {
            let log1pexp = if e > 30.0 { e } else { (1.0 + e.exp()).ln() };
            log1pexp - yi * e
        })
        .sum::<f64>()
}

/// Deviance of fitted means: residual sum of squares for gaussian,
/// -2 * Bernoulli log-likelihood for binomial. Binomial means are
/// clamped to [MU_CLAMP, 1 - MU_CLAMP] so saturated predictions stay
/// finite.
pub fn deviance(y: &DVector<f64>, mu: &DVector<f64>, family: Family) -> f64 {
    match family {
        Family::Gaussian => y
            .iter()
            .zip(mu.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum(),
        Family::Binomial => {
            -2.0 * y
                .iter()
                .zip(mu.iter())
                .map(|(&yi, &m)| {
                    let m = m.clamp(MU_CLAMP, 1.0 - MU_CLAMP);
                    yi * m.ln() + (1.0 - yi) * (1.0 - m).ln()
                })
                .sum::<f64>()
        }
    }
}

/// R-squared and adjusted R-squared of fitted values against a gaussian
/// response; k is the number of nonzero coefficients in the evaluated
/// model.
pub fn r_squared_of(y: &DVector<f64>, fitted: &DVector<f64>, k: usize) -> Result<(f64, f64)> {
    let n = y.len() as f64;
    let ybar = y.iter().sum::<f64>() / n;
    let tss: f64 = y.iter().map(|v| (v - ybar) * (v - ybar)).sum();
    if tss <= 0.0 {
        return Err(Error::InvalidArgument("response has zero variance".into()));
    }
    let rss: f64 = y
        .iter()
        .zip(fitted.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let r2 = 1.0 - rss / tss;
    let adj = 1.0 - (1.0 - r2) * (n - 1.0) / (n - k as f64 - 1.0);
    Ok((r2, adj))
}

/// R-squared and adjusted R-squared of a full-model fit.
pub fn r_squared(f: &FitResult, d: &Dataset) -> Result<(f64, f64)> {
    if d.family != Family::Gaussian {
        return Err(Error::InvalidArgument(
            "r_squared requires a gaussian response".into(),
        ));
    }
    r_squared_of(&d.y, &f.fitted, f.nonzero_count())
}

/// Multicollinearity diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CollinearityReport {
    /// Variance inflation factor per covariate.
    pub vif: Vec<f64>,
    /// Singular-value ratio of the centered, unit-SD design (the
    /// correlation-matrix convention).
    pub condition_number: f64,
    /// Singular-value ratio of the unit-SD design without centering.
    pub condition_number_uncentered: f64,
}

/// Variance inflation factors and the condition number of the scaled
/// design. VIF_j = 1/(1 - R2_j) regressing column j on the others,
/// computed via the inverse correlation matrix; the condition number is
/// reported under both scaling conventions (centered and uncentered),
/// since centering changes it.
pub fn collinearity(d: &Dataset) -> Result<CollinearityReport> {
    let (n, p) = (d.n(), d.p());
    if n <= p {
        return Err(Error::InvalidArgument(format!(
            "collinearity diagnostics need n > p, got n={n}, p={p}"
        )));
    }
    // correlation matrix of the covariates
    let mut centered = d.x.clone();
    let mut sds = vec![0.0; p];
    for j in 0..p {
        let mean = d.x.column(j).iter().sum::<f64>() / n as f64;
        let ss: f64 = d.x.column(j).iter().map(|v| (v - mean) * (v - mean)).sum();
        let sd = (ss / (n as f64 - 1.0)).sqrt();
        if sd <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "column {} has zero variance",
                d.names[j]
            )));
        }
        sds[j] = sd;
        for i in 0..n {
            centered[(i, j)] = (d.x[(i, j)] - mean) / sd;
        }
    }
    let corr = centered.transpose() * &centered / (n as f64 - 1.0);
    let inv = corr
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Singular("exactly collinear columns".into()))?
        .inverse();
    let vif: Vec<f64> = (0..p).map(|j| inv[(j, j)]).collect();

    let condition_number = cn_from_gram(&corr)?;
    let mut scaled = d.x.clone();
    for j in 0..p {
        for i in 0..n {
            scaled[(i, j)] /= sds[j];
        }
    }
    let gram_unc = scaled.transpose() * &scaled / (n as f64 - 1.0);
    let condition_number_uncentered = cn_from_gram(&gram_unc)?;

    Ok(CollinearityReport {
        vif,
        condition_number,
        condition_number_uncentered,
    })
}

fn cn_from_gram(gram: &DMatrix<f64>) -> Result<f64> {
    let eigs = gram.clone().symmetric_eigen().eigenvalues;
    let max = eigs.iter().cloned().fold(f64::MIN, f64::max);
    let min = eigs.iter().cloned().fold(f64::MAX, f64::min);
    if min <= 0.0 {
        return Err(Error::Singular("exactly collinear columns".into()));
    }
    Ok((max / min).sqrt())
}
