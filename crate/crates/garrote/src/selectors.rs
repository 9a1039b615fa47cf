use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataset::{assign_folds, Dataset, Family};
use crate::error::{Error, Result};
use crate::glm::fit_full;
use crate::pathsolver::{
    lambda_path, ridge_fit, solve_path, PathFit, PenaltySpec, SolveOptions,
};
use crate::tuning::{cv_tune, cv_tune_2d, derive_seed, CvCurve, CvGrid2d, Rule};

pub const DEFAULT_GRID_POINTS: usize = 100;
pub const DEFAULT_GAMMAS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
pub const DEFAULT_PHIS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
/// Exhaustive subset search caps at this many columns (2^p models).
pub const MAX_SUBSET_COLS: usize = 16;

/// Which estimator seeds the shrinkage step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitialKind {
    Ols,
    Ridge,
    Lasso,
}

impl InitialKind {
    pub fn label(&self) -> &'static str {
        match self {
            InitialKind::Ols => "ols",
            InitialKind::Ridge => "ridge",
            InitialKind::Lasso => "lasso",
        }
    }
}

/// A fitted initial estimator on the full supplied data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InitialEstimate {
    pub kind: InitialKind,
    pub rule: Rule,
    pub coefficients: DVector<f64>,
    pub intercept: f64,
    /// Tuned penalty, absent for least squares.
    pub lambda: Option<f64>,
    pub curve: Option<CvCurve>,
}

/// Exact ridge solutions along a lambda grid. Gaussian grids reuse one
/// eigendecomposition of the (smaller of the) Gram or outer-product
/// matrix; binomial grids warm-start reweighted fits along the path.
pub fn ridge_path(d: &Dataset, lambdas: &[f64]) -> Result<PathFit> {
    if lambdas.is_empty() {
        return Err(Error::InvalidArgument("empty lambda grid".into()));
    }
    let (n, p) = (d.n(), d.p());
    match d.family {
        Family::Gaussian => {
            let nf = n as f64;
            let mut xc = d.x.clone();
            let mut xbar = vec![0.0; p];
            for j in 0..p {
                let m = d.x.column(j).iter().sum::<f64>() / nf;
                xbar[j] = m;
                for i in 0..n {
                    xc[(i, j)] -= m;
                }
            }
            let ybar = d.y.iter().sum::<f64>() / nf;
            let yc = d.y.map(|v| v - ybar);
            let mut coefficients = DMatrix::zeros(p, lambdas.len());
            let mut intercepts = Vec::with_capacity(lambdas.len());
            if p <= n {
                let gram = xc.transpose() * &xc;
                let eig = gram.symmetric_eigen();
                let qty = eig.eigenvectors.transpose() * (xc.transpose() * &yc);
                for (k, &lam) in lambdas.iter().enumerate() {
                    let mut scaled = qty.clone();
                    for j in 0..p {
                        let denom = eig.eigenvalues[j].max(0.0) + nf * lam;
                        if denom <= 0.0 {
                            return Err(Error::Singular("ridge system is singular".into()));
                        }
                        scaled[j] /= denom;
                    }
                    let beta = &eig.eigenvectors * scaled;
                    let b0 = ybar - (0..p).map(|j| beta[j] * xbar[j]).sum::<f64>();
                    coefficients.set_column(k, &beta);
                    intercepts.push(b0);
                }
            } else {
                let outer = &xc * xc.transpose();
                let eig = outer.symmetric_eigen();
                let uty = eig.eigenvectors.transpose() * &yc;
                for (k, &lam) in lambdas.iter().enumerate() {
                    let mut scaled = uty.clone();
                    for i in 0..n {
                        let denom = eig.eigenvalues[i].max(0.0) + nf * lam;
                        if denom <= 0.0 {
                            return Err(Error::Singular("ridge system is singular".into()));
                        }
                        scaled[i] /= denom;
                    }
                    let beta = xc.transpose() * (&eig.eigenvectors * scaled);
                    let b0 = ybar - (0..p).map(|j| beta[j] * xbar[j]).sum::<f64>();
                    coefficients.set_column(k, &beta);
                    intercepts.push(b0);
                }
            }
            let df = vec![p; lambdas.len()];
            Ok(PathFit {
                lambdas: lambdas.to_vec(),
                coefficients,
                intercepts,
                df,
                family: Family::Gaussian,
            })
        }
        Family::Binomial => {
            let mut coefficients = DMatrix::zeros(p, lambdas.len());
            let mut intercepts = Vec::with_capacity(lambdas.len());
            for (k, &lam) in lambdas.iter().enumerate() {
                let (beta, b0) = ridge_fit(d, lam)?;
                coefficients.set_column(k, &beta);
                intercepts.push(b0);
            }
            let df = vec![p; lambdas.len()];
            Ok(PathFit {
                lambdas: lambdas.to_vec(),
                coefficients,
                intercepts,
                df,
                family: Family::Binomial,
            })
        }
    }
}

/// Fits the requested initial estimator, tuning any penalty by k-fold
/// cross-validation on the supplied data.
pub fn compute_initial(
    d: &Dataset,
    kind: InitialKind,
    rule: Rule,
    k: usize,
    seed: u64,
) -> Result<InitialEstimate> {
    match kind {
        InitialKind::Ols => {
            let f = fit_full(d)?;
            Ok(InitialEstimate {
                kind,
                rule,
                coefficients: f.coefficients,
                intercept: f.intercept,
                lambda: None,
                curve: None,
            })
        }
        InitialKind::Ridge => {
            let spec = PenaltySpec::ridge();
            let grid = lambda_path(d, &spec, DEFAULT_GRID_POINTS, None)?;
            let folds = assign_folds(d.n(), k, seed)?;
            let curve = cv_tune(d, &grid, &folds, |train| ridge_path(train, &grid))?;
            let lam = curve.lambda(rule);
            let (beta, b0) = ridge_fit(d, lam)?;
            Ok(InitialEstimate {
                kind,
                rule,
                coefficients: beta,
                intercept: b0,
                lambda: Some(lam),
                curve: Some(curve),
            })
        }
        InitialKind::Lasso => {
            let spec = PenaltySpec::lasso();
            let grid = lambda_path(d, &spec, DEFAULT_GRID_POINTS, None)?;
            let folds = assign_folds(d.n(), k, seed)?;
            let opts = SolveOptions::default();
            let curve = cv_tune(d, &grid, &folds, |train| {
                solve_path(train, &spec, &grid, &opts)
            })?;
            let idx = curve.index(rule);
            let fit = solve_path(d, &spec, &grid, &opts)?;
            Ok(InitialEstimate {
                kind,
                rule,
                coefficients: fit.coef(idx),
                intercept: fit.intercepts[idx],
                lambda: Some(grid[idx]),
                curve: Some(curve),
            })
        }
    }
}

/// Nonnegative-garrote fit: shrinkage factors c and the resulting
/// coefficients c_j * init_j.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NngFit {
    pub c: DVector<f64>,
    pub coefficients: DVector<f64>,
    pub intercept: f64,
    pub lambda: f64,
    pub curve: Option<CvCurve>,
    pub init_coefficients: DVector<f64>,
    pub init_kind: InitialKind,
    pub notes: Vec<String>,
}

impl NngFit {
    pub fn selected(&self) -> Vec<usize> {
        (0..self.coefficients.len())
            .filter(|&j| self.coefficients[j] != 0.0)
            .collect()
    }
}

/// Columns scaled by the initial coefficients; zero-initial columns
/// become identically zero and the solver pins their factors at 0.
fn nng_transformed(d: &Dataset, init: &DVector<f64>) -> Dataset {
    let (n, p) = (d.n(), d.p());
    let mut x = d.x.clone();
    for j in 0..p {
        for i in 0..n {
            x[(i, j)] *= init[j];
        }
    }
    Dataset {
        x,
        y: d.y.clone(),
        names: d.names.clone(),
        family: d.family,
    }
}

fn nng_from_c(
    d: &Dataset,
    init: &InitialEstimate,
    c: DVector<f64>,
    intercept: f64,
    lambda: f64,
    curve: Option<CvCurve>,
    notes: Vec<String>,
) -> NngFit {
    let coefficients = DVector::from_fn(d.p(), |j, _| c[j] * init.coefficients[j]);
    NngFit {
        c,
        coefficients,
        intercept,
        lambda,
        curve,
        init_coefficients: init.coefficients.clone(),
        init_kind: init.kind,
        notes,
    }
}

/// Garrote solutions for a fixed initial estimate along a lambda grid,
/// on the scale of the shrinkage factors.
pub fn nng_path(d: &Dataset, init: &DVector<f64>, lambdas: &[f64]) -> Result<PathFit> {
    let td = nng_transformed(d, init);
    solve_path(&td, &PenaltySpec::nonneg(), lambdas, &SolveOptions::default())
}

/// Lambda grid for the garrote step of a fixed initial estimate.
pub fn nng_lambda_path(d: &Dataset, init: &DVector<f64>, n_points: usize) -> Result<Vec<f64>> {
    let td = nng_transformed(d, init);
    lambda_path(&td, &PenaltySpec::nonneg(), n_points, None)
}

/// Garrote fit at a single penalty value.
pub fn nng_fit_at(d: &Dataset, init: &InitialEstimate, lambda: f64) -> Result<NngFit> {
    let td = nng_transformed(d, &init.coefficients);
    let fit = solve_path(&td, &PenaltySpec::nonneg(), &[lambda], &SolveOptions::default())?;
    Ok(nng_from_c(
        d,
        init,
        fit.coef(0),
        fit.intercepts[0],
        lambda,
        None,
        Vec::new(),
    ))
}

/// Garrote with the penalty tuned by k-fold cross-validation. The
/// initial estimate stays fixed at its full-data value; folds split the
/// rows of the scaled design.
pub fn nng_cv(
    d: &Dataset,
    init: &InitialEstimate,
    k: usize,
    seed: u64,
    rule: Rule,
) -> Result<NngFit> {
    let td = nng_transformed(d, &init.coefficients);
    let spec = PenaltySpec::nonneg();
    let grid = lambda_path(&td, &spec, DEFAULT_GRID_POINTS, None)?;
    let folds = assign_folds(td.n(), k, seed)?;
    let opts = SolveOptions::default();
    let curve = cv_tune(&td, &grid, &folds, |train| {
        solve_path(train, &spec, &grid, &opts)
    })?;
    let idx = curve.index(rule);
    let fit = solve_path(&td, &spec, &grid, &opts)?;
    let mut notes = Vec::new();
    if init.coefficients.iter().all(|&b| b == 0.0) {
        notes.push("all initial coefficients are zero; garrote is the null model".into());
    }
    Ok(nng_from_c(
        d,
        init,
        fit.coef(idx),
        fit.intercepts[idx],
        grid[idx],
        Some(curve),
        notes,
    ))
}

/// Adaptive lasso fit with data-driven weights 1/|init|^gamma.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlassoFit {
    pub coefficients: DVector<f64>,
    pub intercept: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub grid: Option<CvGrid2d>,
    pub init_kind: InitialKind,
    pub notes: Vec<String>,
}

impl AlassoFit {
    pub fn selected(&self) -> Vec<usize> {
        (0..self.coefficients.len())
            .filter(|&j| self.coefficients[j] != 0.0)
            .collect()
    }
}

fn alasso_weights(init: &DVector<f64>, gamma: f64) -> DVector<f64> {
    init.map(|b| {
        if b == 0.0 {
            f64::INFINITY
        } else {
            b.abs().powf(-gamma)
        }
    })
}

/// Adaptive lasso with (gamma, lambda) tuned jointly by k-fold
/// cross-validation; each gamma gets its own lambda grid because the
/// weights change the activation point.
pub fn alasso_cv(
    d: &Dataset,
    init: &InitialEstimate,
    gammas: &[f64],
    k: usize,
    seed: u64,
    rule: Rule,
) -> Result<AlassoFit> {
    if gammas.is_empty() || gammas.iter().any(|&g| !(g > 0.0)) {
        return Err(Error::InvalidArgument(
            "gamma grid must be positive".into(),
        ));
    }
    if init.coefficients.iter().all(|&b| b == 0.0) {
        return Err(Error::InvalidArgument(
            "all initial coefficients are zero; adaptive weights are undefined".into(),
        ));
    }
    let opts = SolveOptions::default();
    let specs: Vec<PenaltySpec> = gammas
        .iter()
        .map(|&g| PenaltySpec::weighted(alasso_weights(&init.coefficients, g)))
        .collect();
    let grids: Vec<Vec<f64>> = specs
        .iter()
        .map(|s| lambda_path(d, s, DEFAULT_GRID_POINTS, None))
        .collect::<Result<_>>()?;
    let folds = assign_folds(d.n(), k, seed)?;
    let grids_ref = grids.clone();
    let grid2d = cv_tune_2d(d, gammas, &grids, &folds, |train, gi| {
        solve_path(train, &specs[gi], &grids_ref[gi], &opts)
    })?;
    let (gi, li) = grid2d.selection(rule);
    let fit = solve_path(d, &specs[gi], &grids[gi], &opts)?;
    Ok(AlassoFit {
        coefficients: fit.coef(li),
        intercept: fit.intercepts[li],
        lambda: grids[gi][li],
        gamma: gammas[gi],
        grid: Some(grid2d),
        init_kind: init.kind,
        notes: Vec::new(),
    })
}

/// Relaxed lasso fit blending the lasso solution with its least-squares
/// refit on the selected support.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RlassoFit {
    pub coefficients: DVector<f64>,
    pub intercept: f64,
    pub lambda: f64,
    pub phi: f64,
    pub grid: Option<CvGrid2d>,
    pub notes: Vec<String>,
}

impl RlassoFit {
    pub fn selected(&self) -> Vec<usize> {
        (0..self.coefficients.len())
            .filter(|&j| self.coefficients[j] != 0.0)
            .collect()
    }
}

/// Unpenalized refit on a support; falls back to the penalized
/// coefficients when the refit is degenerate (empty support keeps the
/// null model, and singular or separated refits keep the lasso
/// solution).
fn refit_on_support(
    d: &Dataset,
    support: &[usize],
    lasso_beta: &DVector<f64>,
    lasso_b0: f64,
) -> (DVector<f64>, f64, bool) {
    if support.is_empty() {
        let b0 = match d.family {
            Family::Gaussian => d.y.iter().sum::<f64>() / d.n() as f64,
            Family::Binomial => {
                let ybar = d.y.iter().sum::<f64>() / d.n() as f64;
                (ybar / (1.0 - ybar)).ln()
            }
        };
        return (DVector::zeros(d.p()), b0, true);
    }
    if support.len() + 1 >= d.n() {
        return (lasso_beta.clone(), lasso_b0, false);
    }
    let sub = d.subset_cols(support);
    match fit_full(&sub) {
        Ok(f) => {
            let mut beta = DVector::zeros(d.p());
            for (pos, &j) in support.iter().enumerate() {
                beta[j] = f.coefficients[pos];
            }
            (beta, f.intercept, true)
        }
        Err(_) => (lasso_beta.clone(), lasso_b0, false),
    }
}

/// Blended relaxed-lasso solutions over a lasso path: coefficient
/// columns phi * lasso + (1 - phi) * refit per lambda.
fn rlasso_blend_path(d: &Dataset, lasso: &PathFit, phi: f64) -> PathFit {
    let p = d.p();
    let m = lasso.n_lambdas();
    let mut coefficients = DMatrix::zeros(p, m);
    let mut intercepts = Vec::with_capacity(m);
    let mut df = Vec::with_capacity(m);
    for k in 0..m {
        let lb = lasso.coef(k);
        let support: Vec<usize> = (0..p).filter(|&j| lb[j] != 0.0).collect();
        let (rb, rb0, _) = refit_on_support(d, &support, &lb, lasso.intercepts[k]);
        let blended = DVector::from_fn(p, |j, _| phi * lb[j] + (1.0 - phi) * rb[j]);
        let b0 = phi * lasso.intercepts[k] + (1.0 - phi) * rb0;
        df.push(blended.iter().filter(|&&b| b != 0.0).count());
        coefficients.set_column(k, &blended);
        intercepts.push(b0);
    }
    PathFit {
        lambdas: lasso.lambdas.clone(),
        coefficients,
        intercepts,
        df,
        family: d.family,
    }
}

/// Relaxed lasso with (phi, lambda) tuned jointly by k-fold
/// cross-validation over a shared lasso lambda grid.
pub fn rlasso_cv(
    d: &Dataset,
    phis: &[f64],
    k: usize,
    seed: u64,
    rule: Rule,
) -> Result<RlassoFit> {
    if phis.is_empty() || phis.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return Err(Error::InvalidArgument(
            "phi grid must lie in [0, 1]".into(),
        ));
    }
    let spec = PenaltySpec::lasso();
    let opts = SolveOptions::default();
    let grid = lambda_path(d, &spec, DEFAULT_GRID_POINTS, None)?;
    let grids: Vec<Vec<f64>> = phis.iter().map(|_| grid.clone()).collect();
    let folds = assign_folds(d.n(), k, seed)?;
    let grid_ref = grid.clone();
    let grid2d = cv_tune_2d(d, phis, &grids, &folds, |train, pi| {
        let lasso = solve_path(train, &spec, &grid_ref, &opts)?;
        Ok(rlasso_blend_path(train, &lasso, phis[pi]))
    })?;
    let (pi, li) = grid2d.selection(rule);
    let lasso = solve_path(d, &spec, &grid, &opts)?;
    let lb = lasso.coef(li);
    let support: Vec<usize> = (0..d.p()).filter(|&j| lb[j] != 0.0).collect();
    let mut notes = Vec::new();
    let (rb, rb0, refit_ok) = refit_on_support(d, &support, &lb, lasso.intercepts[li]);
    let phi = if refit_ok { phis[pi] } else { 1.0 };
    if !refit_ok {
        notes.push(format!(
            "least-squares refit unavailable on support of size {}; kept phi = 1",
            support.len()
        ));
    }
    if support.is_empty() && phis[pi] < 1.0 {
        notes.push("empty support; relaxed fit is the null model".into());
    }
    let coefficients = DVector::from_fn(d.p(), |j, _| phi * lb[j] + (1.0 - phi) * rb[j]);
    let intercept = phi * lasso.intercepts[li] + (1.0 - phi) * rb0;
    Ok(RlassoFit {
        coefficients,
        intercept,
        lambda: grid[li],
        phi: phis[pi],
        grid: Some(grid2d),
        notes,
    })
}

/// One exhaustive-search result at a fixed subset size.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubsetFit {
    pub support: Vec<usize>,
    pub coefficients: DVector<f64>,
    pub intercept: f64,
    pub rss: f64,
    pub size: usize,
}

fn lex_less(a: &[usize], b: &[usize]) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if x != y {
            return x < y;
        }
    }
    a.len() < b.len()
}

/// Exhaustive best-subset search (gaussian only): the lowest residual
/// sum of squares at every size 0..=p, enumerated through the Gram
/// matrix so each candidate costs one small solve. Ties break toward
/// the lexicographically smallest support.
pub fn best_subset_per_size(d: &Dataset) -> Result<Vec<SubsetFit>> {
    if d.family != Family::Gaussian {
        return Err(Error::InvalidArgument(
            "exhaustive subset search supports gaussian responses only".into(),
        ));
    }
    let p = d.p();
    if p > MAX_SUBSET_COLS {
        return Err(Error::InvalidArgument(format!(
            "exhaustive search over {p} columns exceeds the {MAX_SUBSET_COLS}-column cap"
        )));
    }
    if d.n() <= p + 1 {
        return Err(Error::InvalidArgument(format!(
            "need n > p + 1 for subset refits, got n={}, p={p}",
            d.n()
        )));
    }
    let n = d.n() as f64;
    let mut xc = d.x.clone();
    let mut xbar = vec![0.0; p];
    for j in 0..p {
        let m = d.x.column(j).iter().sum::<f64>() / n;
        xbar[j] = m;
        for i in 0..d.n() {
            xc[(i, j)] -= m;
        }
    }
    let ybar = d.y.iter().sum::<f64>() / n;
    let yc = d.y.map(|v| v - ybar);
    let gram = xc.transpose() * &xc;
    let gy = xc.transpose() * &yc;
    let yy = yc.norm_squared();

    let mut best: Vec<Option<(f64, Vec<usize>, DVector<f64>)>> = vec![None; p + 1];
    best[0] = Some((yy, Vec::new(), DVector::zeros(0)));
    for mask in 1u32..(1u32 << p) {
        let support: Vec<usize> = (0..p).filter(|&j| mask >> j & 1 == 1).collect();
        let k = support.len();
        let mut g_sub = DMatrix::zeros(k, k);
        let mut gy_sub = DVector::zeros(k);
        for (a, &ja) in support.iter().enumerate() {
            gy_sub[a] = gy[ja];
            for (b, &jb) in support.iter().enumerate() {
                g_sub[(a, b)] = gram[(ja, jb)];
            }
        }
        let Some(chol) = g_sub.cholesky() else {
            continue;
        };
        let beta = chol.solve(&gy_sub);
        let rss = yy - beta.dot(&gy_sub);
        let replace = match &best[k] {
            None => true,
            Some((brss, bsup, _)) => {
                if rss < brss - 1e-12 {
                    true
                } else {
                    (rss - brss).abs() <= 1e-12 && lex_less(&support, bsup)
                }
            }
        };
        if replace {
            best[k] = Some((rss, support, beta));
        }
    }
    let mut out = Vec::with_capacity(p + 1);
    for (k, slot) in best.into_iter().enumerate() {
        let (rss, support, beta_sub) = slot.ok_or_else(|| {
            Error::Singular(format!("every size-{k} subset was singular"))
        })?;
        let mut coefficients = DVector::zeros(p);
        for (pos, &j) in support.iter().enumerate() {
            coefficients[j] = beta_sub[pos];
        }
        let intercept = ybar - (0..p).map(|j| coefficients[j] * xbar[j]).sum::<f64>();
        out.push(SubsetFit {
            support,
            coefficients,
            intercept,
            rss: rss.max(0.0),
            size: k,
        });
    }
    Ok(out)
}

/// Bayesian information criterion over subset sizes:
/// n log(RSS/n) + (size + 1) log n, the +1 counting the intercept.
pub fn subset_bic(n: usize, rss: f64, size: usize) -> f64 {
    let nf = n as f64;
    nf * (rss / nf).max(f64::MIN_POSITIVE).ln() + (size as f64 + 1.0) * nf.ln()
}

/// Best subset selected by BIC across sizes; returns the winner and the
/// per-size criterion values.
pub fn select_subset_bic(d: &Dataset) -> Result<(SubsetFit, Vec<f64>)> {
    let per_size = best_subset_per_size(d)?;
    let bics: Vec<f64> = per_size
        .iter()
        .map(|f| subset_bic(d.n(), f.rss, f.size))
        .collect();
    let mut winner = 0;
    for (k, &b) in bics.iter().enumerate() {
        if b < bics[winner] {
            winner = k;
        }
    }
    Ok((per_size[winner].clone(), bics))
}

/// Best subset selected by k-fold cross-validation over sizes: each
/// training fold runs its own exhaustive search per size, held-out mean
/// squared error picks the size, and the final model re-searches the
/// full data at that size.
pub fn subset_cv(d: &Dataset, k: usize, seed: u64) -> Result<(SubsetFit, Vec<f64>, Vec<f64>)> {
    let folds = assign_folds(d.n(), k, seed)?;
    let p = d.p();
    let mut fold_losses: Vec<Vec<f64>> = Vec::with_capacity(k);
    for f in 0..folds.k {
        let (train_idx, test_idx) = folds.split(f);
        let train = d.subset_rows(&train_idx);
        let test = d.subset_rows(&test_idx);
        let per_size = best_subset_per_size(&train)?;
        let mut losses = Vec::with_capacity(p + 1);
        for fit in &per_size {
            let eta = {
                let mut e = &test.x * &fit.coefficients;
                e.iter_mut().for_each(|v| *v += fit.intercept);
                e
            };
            let mse: f64 = (0..test.n())
                .map(|i| (test.y[i] - eta[i]) * (test.y[i] - eta[i]))
                .sum::<f64>()
                / test.n() as f64;
            losses.push(mse);
        }
        fold_losses.push(losses);
    }
    let kf = folds.k as f64;
    let mut mean = vec![0.0; p + 1];
    let mut se = vec![0.0; p + 1];
    for s in 0..=p {
        let m: f64 = fold_losses.iter().map(|f| f[s]).sum::<f64>() / kf;
        let var: f64 = fold_losses.iter().map(|f| (f[s] - m) * (f[s] - m)).sum::<f64>() / (kf - 1.0);
        mean[s] = m;
        se[s] = (var / kf).sqrt();
    }
    let mut best_size = 0;
    for (s, &m) in mean.iter().enumerate() {
        if m < mean[best_size] {
            best_size = s;
        }
    }
    let per_size = best_subset_per_size(d)?;
    Ok((per_size[best_size].clone(), mean, se))
}

/// A complete selection pipeline, nameable for comparisons and rerunnable
/// on subsets for nested cross-validation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Method {
    FullOls,
    Ridge(Rule),
    Lasso(Rule),
    Rlasso(Rule),
    Nng(InitialKind, Rule),
    Alasso(InitialKind, Rule),
    SubsetCv,
    SubsetBic,
}

fn rule_tag(rule: Rule) -> &'static str {
    match rule {
        Rule::Optimal => "cv-min",
        Rule::OneSe => "cv-1se",
    }
}

impl Method {
    pub fn label(&self) -> String {
        match self {
            Method::FullOls => "ols".into(),
            Method::Ridge(r) => format!("ridge({})", rule_tag(*r)),
            Method::Lasso(r) => format!("lasso({})", rule_tag(*r)),
            Method::Rlasso(r) => format!("rlasso({})", rule_tag(*r)),
            Method::Nng(i, r) => format!("nng-{}({})", i.label(), rule_tag(*r)),
            Method::Alasso(i, r) => format!("alasso-{}({})", i.label(), rule_tag(*r)),
            Method::SubsetCv => "subset(cv)".into(),
            Method::SubsetBic => "subset(bic)".into(),
        }
    }

    /// Runs the whole pipeline on the given data: initial estimation,
    /// tuning with folds seeded from `seed`, final fit. Returns
    /// coefficients, intercept, selected-variable count, and notes.
    pub fn fit(
        &self,
        d: &Dataset,
        k: usize,
        seed: u64,
    ) -> Result<(DVector<f64>, f64, usize, Vec<String>)> {
        let init_seed = derive_seed(seed, 0x1111);
        let main_seed = derive_seed(seed, 0x2222);
        match self {
            Method::FullOls => {
                let f = fit_full(d)?;
                let nv = f.nonzero_count();
                Ok((f.coefficients, f.intercept, nv, Vec::new()))
            }
            Method::Ridge(rule) => {
                let init = compute_initial(d, InitialKind::Ridge, *rule, k, main_seed)?;
                let nv = init.coefficients.iter().filter(|&&b| b != 0.0).count();
                Ok((init.coefficients, init.intercept, nv, Vec::new()))
            }
            Method::Lasso(rule) => {
                let init = compute_initial(d, InitialKind::Lasso, *rule, k, main_seed)?;
                let nv = init.coefficients.iter().filter(|&&b| b != 0.0).count();
                Ok((init.coefficients, init.intercept, nv, Vec::new()))
            }
            Method::Rlasso(rule) => {
                let f = rlasso_cv(d, &DEFAULT_PHIS, k, main_seed, *rule)?;
                let nv = f.selected().len();
                Ok((f.coefficients.clone(), f.intercept, nv, f.notes))
            }
            Method::Nng(kind, rule) => {
                let init = compute_initial(d, *kind, Rule::Optimal, k, init_seed)?;
                let f = nng_cv(d, &init, k, main_seed, *rule)?;
                let nv = f.selected().len();
                Ok((f.coefficients.clone(), f.intercept, nv, f.notes))
            }
            Method::Alasso(kind, rule) => {
                let init = compute_initial(d, *kind, Rule::Optimal, k, init_seed)?;
                let f = alasso_cv(d, &init, &DEFAULT_GAMMAS, k, main_seed, *rule)?;
                let nv = f.selected().len();
                Ok((f.coefficients.clone(), f.intercept, nv, f.notes))
            }
            Method::SubsetCv => {
                let (f, _, _) = subset_cv(d, k, main_seed)?;
                let nv = f.support.len();
                Ok((f.coefficients, f.intercept, nv, Vec::new()))
            }
            Method::SubsetBic => {
                let (f, _) = select_subset_bic(d)?;
                let nv = f.support.len();
                Ok((f.coefficients, f.intercept, nv, Vec::new()))
            }
        }
    }
}
