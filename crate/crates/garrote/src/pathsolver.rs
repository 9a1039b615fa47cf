use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Family};
use crate::error::{Error, Result};

/// Penalty norm applied to the coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PenaltyNorm {
    L1,
    L2,
}

/// Feasible region for each coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LowerBound {
    Unbounded,
    Zero,
}

/// A separable penalty lambda * sum_j w_j |b_j| (L1) or
/// (lambda/2) * sum_j w_j b_j^2 (L2), optionally restricted to b_j >= 0.
/// A weight of 0 leaves the coefficient unpenalized; an infinite weight
/// pins it at exactly 0.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PenaltySpec {
    pub norm: PenaltyNorm,
    pub bound: LowerBound,
    pub weights: Option<DVector<f64>>,
}

impl PenaltySpec {
    pub fn lasso() -> Self {
        Self {
            norm: PenaltyNorm::L1,
            bound: LowerBound::Unbounded,
            weights: None,
        }
    }

    /// L1 with the nonnegativity constraint used by the garrote c-step.
    pub fn nonneg() -> Self {
        Self {
            norm: PenaltyNorm::L1,
            bound: LowerBound::Zero,
            weights: None,
        }
    }

    pub fn weighted(w: DVector<f64>) -> Self {
        Self {
            norm: PenaltyNorm::L1,
            bound: LowerBound::Unbounded,
            weights: Some(w),
        }
    }

    pub fn ridge() -> Self {
        Self {
            norm: PenaltyNorm::L2,
            bound: LowerBound::Unbounded,
            weights: None,
        }
    }

    pub fn weight(&self, j: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[j])
    }

    fn validate(&self, p: usize) -> Result<()> {
        if let Some(w) = &self.weights {
            if w.len() != p {
                return Err(Error::Dimension(format!(
                    "penalty has {} weights for {} columns",
                    w.len(),
                    p
                )));
            }
            if w.iter().any(|&v| v.is_nan() || v < 0.0) {
                return Err(Error::InvalidArgument(
                    "penalty weights must be nonnegative".into(),
                ));
            }
        }
        Ok(())
    }

    fn penalty_value(&self, beta: &DVector<f64>) -> f64 {
        (0..beta.len())
            .map(|j| {
                let w = self.weight(j);
                if beta[j] == 0.0 {
                    return 0.0;
                }
                match self.norm {
                    PenaltyNorm::L1 => w * beta[j].abs(),
                    PenaltyNorm::L2 => 0.5 * w * beta[j] * beta[j],
                }
            })
            .sum()
    }
}

/// Iteration controls for the coordinate-descent solver.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Stop a coordinate cycle once the largest coefficient change in a
    /// sweep falls below this.
    pub tol: f64,
    /// Hard cap on total sweeps per lambda.
    pub max_sweeps: usize,
    /// Outer reweighting cap for binomial fits.
    pub irls_cap: usize,
    /// Outer convergence threshold on coefficient change (binomial).
    pub irls_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_sweeps: 100_000,
            irls_cap: 100,
            irls_tol: 1e-8,
        }
    }
}

/// Solutions along a descending lambda grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathFit {
    pub lambdas: Vec<f64>,
    /// One column of coefficients per lambda, in the units of the
    /// supplied design.
    pub coefficients: DMatrix<f64>,
    pub intercepts: Vec<f64>,
    /// Nonzero-coefficient count per lambda.
    pub df: Vec<usize>,
    pub family: Family,
}

impl PathFit {
    pub fn coef(&self, k: usize) -> DVector<f64> {
        self.coefficients.column(k).into_owned()
    }

    pub fn n_lambdas(&self) -> usize {
        self.lambdas.len()
    }

    /// Linear predictor for new rows at grid point k.
    pub fn predict_linear(&self, x: &DMatrix<f64>, k: usize) -> DVector<f64> {
        let eta = x * self.coefficients.column(k);
        eta.map(|v| v + self.intercepts[k])
    }

    /// Mean response for new rows at grid point k (probabilities for
    /// binomial).
    pub fn predict_mean(&self, x: &DMatrix<f64>, k: usize) -> DVector<f64> {
        let eta = self.predict_linear(x, k);
        match self.family {
            Family::Gaussian => eta,
            Family::Binomial => eta.map(|e| 1.0 / (1.0 + (-e).exp())),
        }
    }
}

/// Floor used when no penalized coordinate can activate, so grids stay
/// well defined on degenerate problems.
const LAMBDA_MAX_FLOOR: f64 = 1.0;
const L2_ANCHOR: f64 = 1000.0;
const BINOMIAL_WEIGHT_FLOOR: f64 = 1e-5;

fn centered(d: &Dataset) -> (DMatrix<f64>, DVector<f64>, Vec<f64>, f64) {
    let (n, p) = (d.n(), d.p());
    let mut xc = d.x.clone();
    let mut xbar = vec![0.0; p];
    for j in 0..p {
        let m = d.x.column(j).iter().sum::<f64>() / n as f64;
        xbar[j] = m;
        for i in 0..n {
            xc[(i, j)] -= m;
        }
    }
    let ybar = d.y.iter().sum::<f64>() / n as f64;
    let yc = d.y.map(|v| v - ybar);
    (xc, yc, xbar, ybar)
}

/// Smallest lambda at which every penalized coefficient is exactly zero.
/// Computed from the gradient at the null model; L2 paths anchor at 1000
/// times the corresponding L1 entry value since ridge never hits zero
/// exactly.
pub fn lambda_max(d: &Dataset, spec: &PenaltySpec) -> Result<f64> {
    spec.validate(d.p())?;
    let n = d.n() as f64;
    let grad: DVector<f64> = match d.family {
        Family::Gaussian => {
            let (xc, yc, _, _) = centered(d);
            xc.transpose() * yc / n
        }
        Family::Binomial => {
            let ybar = d.y.iter().sum::<f64>() / n;
            let resid = d.y.map(|v| v - ybar);
            d.x.transpose() * resid / n
        }
    };
    let mut best = 0.0f64;
    for j in 0..d.p() {
        let w = spec.weight(j);
        if w == 0.0 || !w.is_finite() {
            continue;
        }
        let candidate = match spec.bound {
            LowerBound::Unbounded => grad[j].abs() / w,
            LowerBound::Zero => grad[j] / w,
        };
        best = best.max(candidate);
    }
    if best <= 0.0 {
        best = LAMBDA_MAX_FLOOR;
    }
    if spec.norm == PenaltyNorm::L2 {
        best *= L2_ANCHOR;
    }
    Ok(best)
}

/// Descending log-spaced lambda grid from lambda_max down to
/// ratio * lambda_max. The default ratio is 1e-4 when n > p and 1e-2
/// otherwise. L2 grids keep the anchored top but run the bottom down to
/// ratio times the unanchored gradient bound, so light-shrinkage optima
/// stay interior to the grid.
pub fn lambda_path(
    d: &Dataset,
    spec: &PenaltySpec,
    n_points: usize,
    min_ratio: Option<f64>,
) -> Result<Vec<f64>> {
    if n_points == 0 {
        return Err(Error::InvalidArgument("empty lambda grid".into()));
    }
    let ratio = min_ratio.unwrap_or(if d.n() > d.p() { 1e-4 } else { 1e-2 });
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "lambda ratio must be in (0, 1), got {ratio}"
        )));
    }
    let top = lambda_max(d, spec)?;
    if n_points == 1 {
        return Ok(vec![top]);
    }
    let bottom_anchor = if spec.norm == PenaltyNorm::L2 {
        top / L2_ANCHOR
    } else {
        top
    };
    let log_top = top.ln();
    let log_bot = (bottom_anchor * ratio).ln();
    Ok((0..n_points)
        .map(|k| {
            let t = k as f64 / (n_points - 1) as f64;
            (log_top + t * (log_bot - log_top)).exp()
        })
        .collect())
}

struct CdProblem<'a> {
    x: &'a DMatrix<f64>,
    /// Per-coordinate curvature <x_j, x_j>_v / n.
    diag: Vec<f64>,
    n: f64,
}

impl CdProblem<'_> {
    /// One coordinate update; r is kept equal to the (working) response
    /// minus the current prediction. Returns the coefficient change.
    fn update(
        &self,
        j: usize,
        beta: &mut DVector<f64>,
        r: &mut DVector<f64>,
        v: Option<&DVector<f64>>,
        spec: &PenaltySpec,
        lambda: f64,
    ) -> f64 {
        let w = spec.weight(j);
        if !w.is_finite() || self.diag[j] <= 0.0 {
            return 0.0;
        }
        let col = self.x.column(j);
        let inner: f64 = match v {
            None => col.dot(r),
            Some(v) => col
                .iter()
                .zip(r.iter())
                .zip(v.iter())
                .map(|((a, b), c)| a * b * c)
                .sum(),
        };
        let z = inner / self.n + self.diag[j] * beta[j];
        let pen = lambda * w;
        let new = match (spec.norm, spec.bound) {
            (PenaltyNorm::L1, LowerBound::Unbounded) => soft_threshold(z, pen) / self.diag[j],
            (PenaltyNorm::L1, LowerBound::Zero) => (z - pen).max(0.0) / self.diag[j],
            (PenaltyNorm::L2, LowerBound::Unbounded) => z / (self.diag[j] + pen),
            (PenaltyNorm::L2, LowerBound::Zero) => (z / (self.diag[j] + pen)).max(0.0),
        };
        let delta = new - beta[j];
        if delta != 0.0 {
            r.axpy(-delta, &col, 1.0);
            beta[j] = new;
        }
        delta.abs()
    }
}

fn soft_threshold(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

/// Cycles coordinates until a full sweep moves nothing: active-set
/// passes between full sweeps, so cold starts on wide designs stay
/// cheap.
#[allow(clippy::too_many_arguments)]
fn cd_converge(
    prob: &CdProblem,
    beta: &mut DVector<f64>,
    r: &mut DVector<f64>,
    v: Option<&DVector<f64>>,
    spec: &PenaltySpec,
    lambda: f64,
    opts: &SolveOptions,
    sweeps: &mut usize,
) -> Result<()> {
    let p = beta.len();
    loop {
        *sweeps += 1;
        if *sweeps > opts.max_sweeps {
            return Err(Error::NonConvergence(format!(
                "coordinate descent exceeded {} sweeps at lambda {lambda}",
                opts.max_sweeps
            )));
        }
        #[cfg(debug_assertions)]
        let obj_before = debug_objective(prob, beta, r, v, spec, lambda);
        let mut max_delta = 0.0f64;
        for j in 0..p {
            max_delta = max_delta.max(prob.update(j, beta, r, v, spec, lambda));
        }
        #[cfg(debug_assertions)]
        {
            let obj_after = debug_objective(prob, beta, r, v, spec, lambda);
            debug_assert!(
                obj_after <= obj_before + 1e-9 * (1.0 + obj_before.abs()),
                "objective rose in a sweep: {obj_before} -> {obj_after}"
            );
        }
        if max_delta < opts.tol {
            return Ok(());
        }
        let active: Vec<usize> = (0..p).filter(|&j| beta[j] != 0.0).collect();
        loop {
            *sweeps += 1;
            if *sweeps > opts.max_sweeps {
                return Err(Error::NonConvergence(format!(
                    "coordinate descent exceeded {} sweeps at lambda {lambda}",
                    opts.max_sweeps
                )));
            }
            let mut d = 0.0f64;
            for &j in &active {
                d = d.max(prob.update(j, beta, r, v, spec, lambda));
            }
            if d < opts.tol {
                break;
            }
        }
    }
}

#[cfg(debug_assertions)]
fn debug_objective(
    prob: &CdProblem,
    beta: &DVector<f64>,
    r: &DVector<f64>,
    v: Option<&DVector<f64>>,
    spec: &PenaltySpec,
    lambda: f64,
) -> f64 {
    let rss: f64 = match v {
        None => r.norm_squared(),
        Some(v) => r.iter().zip(v.iter()).map(|(a, b)| a * a * b).sum(),
    };
    rss / (2.0 * prob.n) + lambda * spec.penalty_value(beta)
}

/// Solves min (1/2n) * loss + lambda * penalty along a descending lambda
/// grid with warm starts. Gaussian loss is the residual sum of squares
/// of the internally centered problem; binomial fits wrap the same
/// coordinate solver in iteratively reweighted least squares with an
/// unpenalized intercept.
pub fn solve_path(
    d: &Dataset,
    spec: &PenaltySpec,
    lambdas: &[f64],
    opts: &SolveOptions,
) -> Result<PathFit> {
    spec.validate(d.p())?;
    if lambdas.is_empty() {
        return Err(Error::InvalidArgument("empty lambda grid".into()));
    }
    if lambdas.iter().any(|&l| !(l >= 0.0) || !l.is_finite()) {
        return Err(Error::InvalidArgument("lambdas must be finite and >= 0".into()));
    }
    if lambdas.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument("lambdas must be descending".into()));
    }
    match d.family {
        Family::Gaussian => gaussian_path(d, spec, lambdas, opts),
        Family::Binomial => binomial_path(d, spec, lambdas, opts),
    }
}

fn gaussian_path(
    d: &Dataset,
    spec: &PenaltySpec,
    lambdas: &[f64],
    opts: &SolveOptions,
) -> Result<PathFit> {
    let (n, p) = (d.n(), d.p());
    let (xc, yc, xbar, ybar) = centered(d);
    let diag: Vec<f64> = (0..p).map(|j| xc.column(j).norm_squared() / n as f64).collect();
    let prob = CdProblem {
        x: &xc,
        diag,
        n: n as f64,
    };
    let mut beta = DVector::zeros(p);
    let mut r = yc.clone();
    let mut sweeps = 0usize;
    let mut coefficients = DMatrix::zeros(p, lambdas.len());
    let mut intercepts = Vec::with_capacity(lambdas.len());
    let mut df = Vec::with_capacity(lambdas.len());
    for (k, &lambda) in lambdas.iter().enumerate() {
        cd_converge(&prob, &mut beta, &mut r, None, spec, lambda, opts, &mut sweeps)?;
        coefficients.set_column(k, &beta);
        let b0 = ybar - (0..p).map(|j| beta[j] * xbar[j]).sum::<f64>();
        intercepts.push(b0);
        df.push(beta.iter().filter(|&&b| b != 0.0).count());
    }
    Ok(PathFit {
        lambdas: lambdas.to_vec(),
        coefficients,
        intercepts,
        df,
        family: Family::Gaussian,
    })
}

fn binomial_path(
    d: &Dataset,
    spec: &PenaltySpec,
    lambdas: &[f64],
    opts: &SolveOptions,
) -> Result<PathFit> {
    let (n, p) = (d.n(), d.p());
    let ybar = d.y.iter().sum::<f64>() / n as f64;
    if ybar == 0.0 || ybar == 1.0 {
        return Err(Error::InvalidArgument(
            "binomial response is single-class".into(),
        ));
    }
    let mut beta = DVector::zeros(p);
    let mut b0 = (ybar / (1.0 - ybar)).ln();
    let mut coefficients = DMatrix::zeros(p, lambdas.len());
    let mut intercepts = Vec::with_capacity(lambdas.len());
    let mut df = Vec::with_capacity(lambdas.len());
    let mut sweeps = 0usize;

    for (k, &lambda) in lambdas.iter().enumerate() {
        let mut outer = 0usize;
        loop {
            outer += 1;
            if outer > opts.irls_cap {
                return Err(Error::NonConvergence(format!(
                    "penalized binomial fit: no reweighting fixed point after {} iterations at lambda {lambda}",
                    opts.irls_cap
                )));
            }
            let eta = {
                let mut e = &d.x * &beta;
                e.iter_mut().for_each(|v| *v += b0);
                e
            };
            let mu = eta.map(|e| 1.0 / (1.0 + (-e).exp()));
            let v = mu.map(|m| (m * (1.0 - m)).max(BINOMIAL_WEIGHT_FLOOR));
            if v.iter().any(|w| !w.is_finite()) {
                return Err(Error::Numeric("nonfinite working weights".into()));
            }
            // working response z = eta + (y - mu)/v; r tracks z - b0 - X beta
            let mut r = DVector::from_fn(n, |i, _| (d.y[i] - mu[i]) / v[i]);
            let vsum: f64 = v.iter().sum();
            let diag: Vec<f64> = (0..p)
                .map(|j| {
                    d.x.column(j)
                        .iter()
                        .zip(v.iter())
                        .map(|(a, b)| a * a * b)
                        .sum::<f64>()
                        / n as f64
                })
                .collect();
            let prob = CdProblem {
                x: &d.x,
                diag,
                n: n as f64,
            };
            let beta_prev = beta.clone();
            let b0_prev = b0;
            // intercept step, then penalized coordinates, repeated until
            // the weighted subproblem is solved
            loop {
                let shift = v.iter().zip(r.iter()).map(|(a, b)| a * b).sum::<f64>() / vsum;
                if shift.abs() > 0.0 {
                    b0 += shift;
                    r.iter_mut().for_each(|ri| *ri -= shift);
                }
                let before = sweeps;
                cd_converge(&prob, &mut beta, &mut r, Some(&v), spec, lambda, opts, &mut sweeps)?;
                let shift2 = v.iter().zip(r.iter()).map(|(a, b)| a * b).sum::<f64>() / vsum;
                if shift2.abs() < opts.tol {
                    break;
                }
                let _ = before;
            }
            let delta = (&beta - &beta_prev).amax().max((b0 - b0_prev).abs());
            if delta < opts.irls_tol {
                break;
            }
        }
        coefficients.set_column(k, &beta);
        intercepts.push(b0);
        df.push(beta.iter().filter(|&&b| b != 0.0).count());
    }
    Ok(PathFit {
        lambdas: lambdas.to_vec(),
        coefficients,
        intercepts,
        df,
        family: Family::Binomial,
    })
}

/// Cold-start solve at a single lambda.
pub fn solve_at(
    d: &Dataset,
    spec: &PenaltySpec,
    lambda: f64,
    opts: &SolveOptions,
) -> Result<(DVector<f64>, f64)> {
    let fit = solve_path(d, spec, &[lambda], opts)?;
    Ok((fit.coef(0), fit.intercepts[0]))
}

/// Largest violation of the first-order optimality conditions at
/// (beta, intercept); near zero certifies a solution. The gradient is
/// taken on the same internally centered (gaussian) or intercept-
/// augmented (binomial) problem the solver uses.
pub fn kkt_residual(
    d: &Dataset,
    spec: &PenaltySpec,
    lambda: f64,
    beta: &DVector<f64>,
    intercept: f64,
) -> f64 {
    let n = d.n() as f64;
    let p = d.p();
    let grad: DVector<f64> = match d.family {
        Family::Gaussian => {
            let (xc, yc, _, _) = centered(d);
            let r = &yc - &xc * beta;
            xc.transpose() * r / n
        }
        Family::Binomial => {
            let mut eta = &d.x * beta;
            eta.iter_mut().for_each(|v| *v += intercept);
            let mu = eta.map(|e| 1.0 / (1.0 + (-e).exp()));
            let r = &d.y - &mu;
            let mut worst: f64 = r.iter().sum::<f64>().abs() / n;
            let g = d.x.transpose() * &r / n;
            for j in 0..p {
                worst = worst.max(coordinate_violation(spec, lambda, j, g[j], beta[j]));
            }
            return worst;
        }
    };
    let mut worst = 0.0f64;
    for j in 0..p {
        worst = worst.max(coordinate_violation(spec, lambda, j, grad[j], beta[j]));
    }
    worst
}

fn coordinate_violation(spec: &PenaltySpec, lambda: f64, j: usize, g: f64, b: f64) -> f64 {
    let w = spec.weight(j);
    if !w.is_finite() {
        return b.abs();
    }
    let pen = lambda * w;
    match (spec.norm, spec.bound) {
        (PenaltyNorm::L1, LowerBound::Unbounded) => {
            if b != 0.0 {
                (g - pen * b.signum()).abs()
            } else {
                (g.abs() - pen).max(0.0)
            }
        }
        (PenaltyNorm::L1, LowerBound::Zero) => {
            if b > 0.0 {
                (g - pen).abs()
            } else {
                (g - pen).max(0.0).max(-b)
            }
        }
        (PenaltyNorm::L2, LowerBound::Unbounded) => (g - pen * b).abs(),
        (PenaltyNorm::L2, LowerBound::Zero) => {
            if b > 0.0 {
                (g - pen * b).abs()
            } else {
                g.max(0.0).max(-b)
            }
        }
    }
}

/// Exact ridge solution min (1/2n)||y - b0 - X b||^2 + (lambda/2)||b||^2,
/// via the p x p primal system when p <= n and the n x n dual system
/// otherwise. Binomial responses use iteratively reweighted least
/// squares around the same penalized solve.
pub fn ridge_fit(d: &Dataset, lambda: f64) -> Result<(DVector<f64>, f64)> {
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "ridge penalty must be finite and >= 0, got {lambda}"
        )));
    }
    if lambda == 0.0 && d.p() >= d.n() {
        return Err(Error::Singular(
            "unpenalized ridge needs n > p".into(),
        ));
    }
    match d.family {
        Family::Gaussian => {
            let (xc, yc, xbar, ybar) = centered(d);
            let beta = ridge_solve_weighted(&xc, &yc, None, lambda, d.n())?;
            let b0 = ybar - (0..d.p()).map(|j| beta[j] * xbar[j]).sum::<f64>();
            Ok((beta, b0))
        }
        Family::Binomial => ridge_binomial(d, lambda),
    }
}

fn ridge_solve_weighted(
    xc: &DMatrix<f64>,
    yc: &DVector<f64>,
    v: Option<&DVector<f64>>,
    lambda: f64,
    n: usize,
) -> Result<DVector<f64>> {
    let p = xc.ncols();
    let nf = n as f64;
    let sqrt_v: Option<DVector<f64>> = v.map(|v| v.map(f64::sqrt));
    // rows scaled by sqrt(v) turn the weighted problem into a plain one
    let (a, b): (DMatrix<f64>, DVector<f64>) = match &sqrt_v {
        None => (xc.clone(), yc.clone()),
        Some(s) => {
            let mut a = xc.clone();
            for i in 0..a.nrows() {
                for j in 0..p {
                    a[(i, j)] *= s[i];
                }
            }
            (a, DVector::from_fn(yc.len(), |i, _| yc[i] * s[i]))
        }
    };
    if p <= n {
        let mut gram = a.transpose() * &a;
        for j in 0..p {
            gram[(j, j)] += nf * lambda;
        }
        let chol = gram
            .cholesky()
            .ok_or_else(|| Error::Singular("ridge system is singular".into()))?;
        Ok(chol.solve(&(a.transpose() * &b)))
    } else {
        let mut outer = &a * a.transpose();
        for i in 0..n {
            outer[(i, i)] += nf * lambda;
        }
        let chol = outer
            .cholesky()
            .ok_or_else(|| Error::Singular("ridge system is singular".into()))?;
        let alpha = chol.solve(&b);
        Ok(a.transpose() * alpha)
    }
}

fn ridge_binomial(d: &Dataset, lambda: f64) -> Result<(DVector<f64>, f64)> {
    let (n, p) = (d.n(), d.p());
    let ybar = d.y.iter().sum::<f64>() / n as f64;
    if ybar == 0.0 || ybar == 1.0 {
        return Err(Error::InvalidArgument(
            "binomial response is single-class".into(),
        ));
    }
    let mut beta = DVector::zeros(p);
    let mut b0 = (ybar / (1.0 - ybar)).ln();
    for _ in 0..100 {
        let mut eta = &d.x * &beta;
        eta.iter_mut().for_each(|v| *v += b0);
        let mu = eta.map(|e| 1.0 / (1.0 + (-e).exp()));
        let v = mu.map(|m| (m * (1.0 - m)).max(BINOMIAL_WEIGHT_FLOOR));
        if v.iter().any(|w| !w.is_finite()) {
            return Err(Error::Numeric("nonfinite working weights".into()));
        }
        let z = DVector::from_fn(n, |i, _| eta[i] + (d.y[i] - mu[i]) / v[i]);
        // weighted centering removes the unpenalized intercept
        let vsum: f64 = v.iter().sum();
        let xbar: Vec<f64> = (0..p)
            .map(|j| {
                d.x.column(j)
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    / vsum
            })
            .collect();
        let zbar = z.iter().zip(v.iter()).map(|(a, b)| a * b).sum::<f64>() / vsum;
        let mut xc = d.x.clone();
        for j in 0..p {
            for i in 0..n {
                xc[(i, j)] -= xbar[j];
            }
        }
        let zc = z.map(|val| val - zbar);
        let new_beta = ridge_solve_weighted(&xc, &zc, Some(&v), lambda, n)?;
        let new_b0 = zbar - (0..p).map(|j| new_beta[j] * xbar[j]).sum::<f64>();
        let delta = (&new_beta - &beta).amax().max((new_b0 - b0).abs());
        beta = new_beta;
        b0 = new_b0;
        if delta < 1e-9 {
            return Ok((beta, b0));
        }
    }
    Err(Error::NonConvergence(
        "penalized binomial ridge did not stabilize within 100 reweightings".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{builtin_prostate, make_synthetic_highdim, standardize_with, SdConvention};
    use crate::glm::fit_full;
    use approx::assert_abs_diff_eq;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn prostate_std() -> Dataset {
        let d = builtin_prostate();
        standardize_with(&d, SdConvention::Population).unwrap().0
    }

    /// Design with zero-mean columns satisfying X'X = nI, plus a response.
    fn orthonormal_problem(n: usize, p: usize, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = DMatrix::from_fn(n, p, |_, _| rng.gen_range(-1.0..1.0));
        let mut cx = raw.clone();
        for j in 0..p {
            let m = raw.column(j).iter().sum::<f64>() / n as f64;
            for i in 0..n {
                cx[(i, j)] -= m;
            }
        }
        let q = cx.qr().q();
        let x = q * (n as f64).sqrt();
        let beta = DVector::from_fn(p, |j, _| (j as f64 + 1.0) * 0.4 - 1.0);
        let noise = DVector::from_fn(n, |_, _| rng.gen_range(-0.3..0.3));
        let y = &x * &beta + noise;
        Dataset::new(
            x,
            y,
            (0..p).map(|j| format!("x{j}")).collect(),
            Family::Gaussian,
        )
        .unwrap()
    }

    fn ols_direction(d: &Dataset) -> DVector<f64> {
        let (xc, yc, _, _) = centered(d);
        xc.transpose() * yc / d.n() as f64
    }

    #[test]
    fn orthonormal_closed_forms() {
        let opts = SolveOptions::default();
        for seed in 0..5 {
            let d = orthonormal_problem(50, 5, seed);
            let bhat = ols_direction(&d);
            let grid = lambda_path(&d, &PenaltySpec::lasso(), 20, Some(1e-3)).unwrap();
            let fit = solve_path(&d, &PenaltySpec::lasso(), &grid, &opts).unwrap();
            for (k, &lam) in grid.iter().enumerate() {
                for j in 0..5 {
                    let expect = soft_threshold(bhat[j], lam);
                    assert_abs_diff_eq!(fit.coefficients[(j, k)], expect, epsilon = 1e-6);
                }
            }
            // nonnegative L1
            let fit = solve_path(&d, &PenaltySpec::nonneg(), &grid, &opts).unwrap();
            for (k, &lam) in grid.iter().enumerate() {
                for j in 0..5 {
                    let expect = (bhat[j] - lam).max(0.0);
                    assert_abs_diff_eq!(fit.coefficients[(j, k)], expect, epsilon = 1e-6);
                }
            }
            // weighted L1
            let w = DVector::from_fn(5, |j, _| 0.5 + j as f64 * 0.5);
            let spec = PenaltySpec::weighted(w.clone());
            let fit = solve_path(&d, &spec, &grid, &opts).unwrap();
            for (k, &lam) in grid.iter().enumerate() {
                for j in 0..5 {
                    let expect = soft_threshold(bhat[j], lam * w[j]);
                    assert_abs_diff_eq!(fit.coefficients[(j, k)], expect, epsilon = 1e-6);
                }
            }
            // ridge
            let fit = solve_path(&d, &PenaltySpec::ridge(), &grid, &opts).unwrap();
            for (k, &lam) in grid.iter().enumerate() {
                for j in 0..5 {
                    assert_abs_diff_eq!(
                        fit.coefficients[(j, k)],
                        bhat[j] / (1.0 + lam),
                        epsilon = 1e-6
                    );
                }
            }
        }
    }

    /// Two-stage grid search over the two-coefficient objective; the
    /// problem is convex, so the refined grid brackets the optimum.
    fn brute_force_p2(
        d: &Dataset,
        spec: &PenaltySpec,
        lambda: f64,
    ) -> (f64, f64) {
        let (xc, yc, _, _) = centered(d);
        let n = d.n() as f64;
        let g11 = xc.column(0).norm_squared();
        let g22 = xc.column(1).norm_squared();
        let g12: f64 = xc.column(0).dot(&xc.column(1));
        let gy1: f64 = xc.column(0).dot(&yc);
        let gy2: f64 = xc.column(1).dot(&yc);
        let yy = yc.norm_squared();
        let obj = |b1: f64, b2: f64| -> f64 {
            let rss = yy - 2.0 * (b1 * gy1 + b2 * gy2)
                + b1 * b1 * g11
                + 2.0 * b1 * b2 * g12
                + b2 * b2 * g22;
            let pen = match spec.norm {
                PenaltyNorm::L1 => spec.weight(0) * b1.abs() + spec.weight(1) * b2.abs(),
                PenaltyNorm::L2 => {
                    0.5 * (spec.weight(0) * b1 * b1 + spec.weight(1) * b2 * b2)
                }
            };
            rss / (2.0 * n) + lambda * pen
        };
        let lo = if spec.bound == LowerBound::Zero { 0.0 } else { -3.0 };
        let scan = |center: (f64, f64), half: f64, step: f64| -> (f64, f64) {
            let mut best = (center.0, center.1);
            let mut best_val = f64::MAX;
            let steps = (2.0 * half / step).round() as i64;
            for i in 0..=steps {
                let b1 = center.0 - half + i as f64 * step;
                if b1 < lo - 1e-12 {
                    continue;
                }
                for k in 0..=steps {
                    let b2 = center.1 - half + k as f64 * step;
                    if b2 < lo - 1e-12 {
                        continue;
                    }
                    let v = obj(b1, b2);
                    if v < best_val {
                        best_val = v;
                        best = (b1, b2);
                    }
                }
            }
            best
        };
        let coarse = scan((0.0, 0.0), 3.0, 0.01);
        scan(coarse, 0.05, 0.001)
    }

    fn random_p2_problem(seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 30;
        let x = DMatrix::from_fn(n, 2, |_, _| rng.gen_range(-1.0..1.0));
        let b1 = rng.gen_range(-1.5..1.5);
        let b2 = rng.gen_range(-1.5..1.5);
        let y = DVector::from_fn(n, |i, _| {
            b1 * x[(i, 0)] + b2 * x[(i, 1)] + rng.gen_range(-0.4..0.4)
        });
        Dataset::new(x, y, vec!["a".into(), "b".into()], Family::Gaussian).unwrap()
    }

    #[test]
    fn two_coefficient_solutions_match_grid_search() {
        let opts = SolveOptions::default();
        for seed in 0..5 {
            let d = random_p2_problem(seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 999);
            let w = DVector::from_fn(2, |_, _| rng.gen_range(0.3..2.0));
            for spec in [
                PenaltySpec::lasso(),
                PenaltySpec::nonneg(),
                PenaltySpec::weighted(w),
            ] {
                let lmax = lambda_max(&d, &spec).unwrap();
                for frac in [0.5, 0.1, 0.01] {
                    let lam = lmax * frac;
                    let (beta, b0) = solve_at(&d, &spec, lam, &opts).unwrap();
                    let (e1, e2) = brute_force_p2(&d, &spec, lam);
                    assert_abs_diff_eq!(beta[0], e1, epsilon = 2e-3);
                    assert_abs_diff_eq!(beta[1], e2, epsilon = 2e-3);
                    assert!(kkt_residual(&d, &spec, lam, &beta, b0) < 1e-6);
                }
            }
        }
    }

    #[test]
    fn prostate_lasso_path_properties() {
        let d = prostate_std();
        let opts = SolveOptions::default();
        let grid = lambda_path(&d, &PenaltySpec::lasso(), 100, None).unwrap();
        assert_eq!(grid.len(), 100);
        assert!(grid.windows(2).all(|w| w[0] > w[1]));
        assert_abs_diff_eq!(grid[99], grid[0] * 1e-4, epsilon = 1e-12);
        let fit = solve_path(&d, &PenaltySpec::lasso(), &grid, &opts).unwrap();
        assert_eq!(fit.df[0], 0);
        for (k, &lam) in grid.iter().enumerate() {
            let res = kkt_residual(&d, &PenaltySpec::lasso(), lam, &fit.coef(k), fit.intercepts[k]);
            assert!(res < 1e-6, "kkt {res} at grid point {k}");
        }
        // small lambda approaches the unpenalized fit
        let full = fit_full(&d).unwrap();
        let last = fit.coef(99);
        for j in 0..d.p() {
            assert_abs_diff_eq!(last[j], full.coefficients[j], epsilon = 1e-3);
        }
    }

    #[test]
    fn zero_lambda_recovers_least_squares() {
        let d = prostate_std();
        let opts = SolveOptions::default();
        let grid = [lambda_max(&d, &PenaltySpec::lasso()).unwrap(), 0.0];
        let fit = solve_path(&d, &PenaltySpec::lasso(), &grid, &opts).unwrap();
        let full = fit_full(&d).unwrap();
        for j in 0..d.p() {
            assert_abs_diff_eq!(fit.coefficients[(j, 1)], full.coefficients[j], epsilon = 1e-6);
        }
        assert_abs_diff_eq!(fit.intercepts[1], full.intercept, epsilon = 1e-6);
    }

    #[test]
    fn warm_and_cold_starts_agree() {
        let d = prostate_std();
        let opts = SolveOptions::default();
        let grid = lambda_path(&d, &PenaltySpec::lasso(), 50, None).unwrap();
        let fit = solve_path(&d, &PenaltySpec::lasso(), &grid, &opts).unwrap();
        for k in [10, 25, 49] {
            let (cold, _) = solve_at(&d, &PenaltySpec::lasso(), grid[k], &opts).unwrap();
            for j in 0..d.p() {
                assert_abs_diff_eq!(fit.coefficients[(j, k)], cold[j], epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn nonneg_keeps_coefficients_above_zero() {
        let d = prostate_std();
        let opts = SolveOptions::default();
        let grid = lambda_path(&d, &PenaltySpec::nonneg(), 60, None).unwrap();
        let fit = solve_path(&d, &PenaltySpec::nonneg(), &grid, &opts).unwrap();
        assert!(fit.coefficients.iter().all(|&b| b >= 0.0));
        for (k, &lam) in grid.iter().enumerate() {
            let res = kkt_residual(&d, &PenaltySpec::nonneg(), lam, &fit.coef(k), fit.intercepts[k]);
            assert!(res < 1e-6);
        }
    }

    #[test]
    fn infinite_weight_pins_coefficient() {
        let d = prostate_std();
        let opts = SolveOptions::default();
        let mut w = DVector::from_element(d.p(), 1.0);
        w[2] = f64::INFINITY;
        let spec = PenaltySpec::weighted(w);
        let grid = lambda_path(&d, &spec, 30, None).unwrap();
        let fit = solve_path(&d, &spec, &grid, &opts).unwrap();
        for k in 0..30 {
            assert_eq!(fit.coefficients[(2, k)], 0.0);
        }
    }

    #[test]
    fn zero_weight_leaves_coefficient_unpenalized() {
        let d = prostate_std();
        let opts = SolveOptions::default();
        let mut w = DVector::from_element(d.p(), 1.0);
        w[0] = 0.0;
        let spec = PenaltySpec::weighted(w);
        let lmax = lambda_max(&d, &spec).unwrap();
        let (beta, _) = solve_at(&d, &spec, lmax, &opts).unwrap();
        // all penalized coordinates are zero, so the free one carries the
        // simple regression of y on x_0
        let (xc, yc, _, _) = centered(&d);
        let expect = xc.column(0).dot(&yc) / xc.column(0).norm_squared();
        assert_abs_diff_eq!(beta[0], expect, epsilon = 1e-8);
        for j in 1..d.p() {
            assert_eq!(beta[j], 0.0);
        }
    }

    #[test]
    fn path_at_lambda_max_is_null_model() {
        let d = prostate_std();
        for spec in [PenaltySpec::lasso(), PenaltySpec::nonneg()] {
            let lmax = lambda_max(&d, &spec).unwrap();
            let (beta, b0) = solve_at(&d, &spec, lmax, &SolveOptions::default()).unwrap();
            assert_eq!(beta.iter().filter(|&&b| b != 0.0).count(), 0);
            let ybar = d.y.iter().sum::<f64>() / d.n() as f64;
            assert_abs_diff_eq!(b0, ybar, epsilon = 1e-12);
        }
    }

    #[test]
    fn nonneg_lambda_max_floor_when_nothing_activates() {
        // response anti-correlated with every column: no nonnegative
        // coefficient can improve the fit
        let n = 20;
        let x = DMatrix::from_fn(n, 2, |i, j| (i as f64 + 1.0) * (j as f64 + 1.0));
        let y = DVector::from_fn(n, |i, _| -(i as f64));
        let d = Dataset::new(x, y, vec!["a".into(), "b".into()], Family::Gaussian).unwrap();
        let lmax = lambda_max(&d, &PenaltySpec::nonneg()).unwrap();
        assert_eq!(lmax, LAMBDA_MAX_FLOOR);
        let (beta, _) = solve_at(&d, &PenaltySpec::nonneg(), lmax * 0.01, &SolveOptions::default())
            .unwrap();
        assert!(beta.iter().all(|&b| b == 0.0));
    }

    #[test]
    fn ridge_matches_normal_equations() {
        let d = prostate_std();
        let lambda = 0.37;
        let (beta, b0) = ridge_fit(&d, lambda).unwrap();
        let (xc, yc, _, _) = centered(&d);
        let n = d.n() as f64;
        let mut gram = xc.transpose() * &xc;
        for j in 0..d.p() {
            gram[(j, j)] += n * lambda;
        }
        let expect = gram.cholesky().unwrap().solve(&(xc.transpose() * &yc));
        for j in 0..d.p() {
            assert_abs_diff_eq!(beta[j], expect[j], epsilon = 1e-10);
        }
        // the L2 coordinate path lands on the same solution
        let (cd, cd_b0) = solve_at(&d, &PenaltySpec::ridge(), lambda, &SolveOptions::default())
            .unwrap();
        for j in 0..d.p() {
            assert_abs_diff_eq!(beta[j], cd[j], epsilon = 1e-7);
        }
        assert_abs_diff_eq!(b0, cd_b0, epsilon = 1e-7);
    }

    #[test]
    fn ridge_zero_lambda_is_least_squares() {
        let d = prostate_std();
        let (beta, b0) = ridge_fit(&d, 0.0).unwrap();
        let full = fit_full(&d).unwrap();
        for j in 0..d.p() {
            assert_abs_diff_eq!(beta[j], full.coefficients[j], epsilon = 1e-9);
        }
        assert_abs_diff_eq!(b0, full.intercept, epsilon = 1e-9);
    }

    #[test]
    fn ridge_dual_matches_primal() {
        let wide = make_synthetic_highdim(25, 60, 5, 0.2, 2.0, 7, Family::Gaussian).unwrap();
        let lambda = 0.5;
        let (dual, _) = ridge_fit(&wide, lambda).unwrap();
        // direct primal solve on the 60 x 60 system
        let (xc, yc, _, _) = centered(&wide);
        let mut gram = xc.transpose() * &xc;
        for j in 0..wide.p() {
            gram[(j, j)] += wide.n() as f64 * lambda;
        }
        let primal = gram.cholesky().unwrap().solve(&(xc.transpose() * &yc));
        for j in 0..wide.p() {
            assert_abs_diff_eq!(dual[j], primal[j], epsilon = 1e-9);
        }
        assert!(ridge_fit(&wide, 0.0).is_err());
    }

    #[test]
    fn ridge_binomial_approaches_unpenalized_fit() {
        let d = make_synthetic_highdim(150, 3, 2, 0.1, 1.0, 21, Family::Binomial).unwrap();
        let (beta, b0) = ridge_fit(&d, 1e-8).unwrap();
        let full = fit_full(&d).unwrap();
        for j in 0..d.p() {
            assert_abs_diff_eq!(beta[j], full.coefficients[j], epsilon = 1e-4);
        }
        assert_abs_diff_eq!(b0, full.intercept, epsilon = 1e-4);
    }

    #[test]
    fn binomial_lasso_path_kkt_and_null_model() {
        let d = make_synthetic_highdim(120, 15, 4, 0.3, 2.0, 13, Family::Binomial).unwrap();
        let opts = SolveOptions::default();
        let grid = lambda_path(&d, &PenaltySpec::lasso(), 40, Some(1e-3)).unwrap();
        let fit = solve_path(&d, &PenaltySpec::lasso(), &grid, &opts).unwrap();
        assert_eq!(fit.df[0], 0);
        let ybar = d.y.iter().sum::<f64>() / d.n() as f64;
        assert_abs_diff_eq!(fit.intercepts[0], (ybar / (1.0 - ybar)).ln(), epsilon = 1e-6);
        for k in [0, 10, 20, 39] {
            let res = kkt_residual(&d, &PenaltySpec::lasso(), grid[k], &fit.coef(k), fit.intercepts[k]);
            assert!(res < 1e-6, "kkt {res} at {k}");
        }
        assert!(fit.df[39] >= fit.df[0]);
    }

    #[test]
    fn binomial_small_lambda_matches_full_fit() {
        let d = make_synthetic_highdim(200, 4, 2, 0.2, 1.0, 31, Family::Binomial).unwrap();
        let opts = SolveOptions::default();
        let lmax = lambda_max(&d, &PenaltySpec::lasso()).unwrap();
        let grid: Vec<f64> = (0..30)
            .map(|k| lmax * (1e-7f64 / 1.0).powf(k as f64 / 29.0))
            .collect();
        let fit = solve_path(&d, &PenaltySpec::lasso(), &grid, &opts).unwrap();
        let full = fit_full(&d).unwrap();
        let last = fit.coef(29);
        for j in 0..d.p() {
            assert_abs_diff_eq!(last[j], full.coefficients[j], epsilon = 1e-4);
        }
    }

    #[test]
    fn wide_design_path_is_finite_and_sparse() {
        let d = make_synthetic_highdim(60, 300, 8, 0.3, 2.0, 3, Family::Gaussian).unwrap();
        let opts = SolveOptions::default();
        let grid = lambda_path(&d, &PenaltySpec::lasso(), 50, None).unwrap();
        let fit = solve_path(&d, &PenaltySpec::lasso(), &grid, &opts).unwrap();
        assert!(fit.coefficients.iter().all(|b| b.is_finite()));
        assert_eq!(fit.df[0], 0);
        assert!(*fit.df.last().unwrap() > 0);
        for k in [5, 25, 49] {
            let res = kkt_residual(&d, &PenaltySpec::lasso(), grid[k], &fit.coef(k), fit.intercepts[k]);
            assert!(res < 1e-6);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let d = prostate_std();
        let opts = SolveOptions::default();
        assert!(solve_path(&d, &PenaltySpec::lasso(), &[], &opts).is_err());
        assert!(solve_path(&d, &PenaltySpec::lasso(), &[0.1, 0.5], &opts).is_err());
        assert!(solve_path(&d, &PenaltySpec::lasso(), &[f64::NAN], &opts).is_err());
        let w = DVector::from_element(3, 1.0);
        assert!(solve_path(&d, &PenaltySpec::weighted(w), &[0.1], &opts).is_err());
        let mut wneg = DVector::from_element(d.p(), 1.0);
        wneg[1] = -0.5;
        assert!(solve_path(&d, &PenaltySpec::weighted(wneg), &[0.1], &opts).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn prop_kkt_certifies_gaussian_solutions(seed in 0u64..5_000, frac in 0.02f64..0.9) {
            let d = make_synthetic_highdim(40, 8, 3, 0.4, 1.5, seed, Family::Gaussian).unwrap();
            let opts = SolveOptions::default();
            for spec in [PenaltySpec::lasso(), PenaltySpec::nonneg()] {
                let lmax = lambda_max(&d, &spec).unwrap();
                let lam = lmax * frac;
                let (beta, b0) = solve_at(&d, &spec, lam, &opts).unwrap();
                prop_assert!(kkt_residual(&d, &spec, lam, &beta, b0) < 1e-6);
                if spec.bound == LowerBound::Zero {
                    prop_assert!(beta.iter().all(|&b| b >= 0.0));
                }
            }
        }

        #[test]
        fn prop_stronger_penalty_never_grows_l1_norm(seed in 0u64..5_000) {
            let d = make_synthetic_highdim(50, 6, 3, 0.3, 1.5, seed, Family::Gaussian).unwrap();
            let opts = SolveOptions::default();
            let grid = lambda_path(&d, &PenaltySpec::lasso(), 25, Some(1e-3)).unwrap();
            let fit = solve_path(&d, &PenaltySpec::lasso(), &grid, &opts).unwrap();
            let norms: Vec<f64> = (0..25).map(|k| fit.coef(k).iter().map(|b| b.abs()).sum()).collect();
            for w in norms.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-9);
            }
        }
    }
}
