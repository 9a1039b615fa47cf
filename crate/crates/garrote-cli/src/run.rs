use garrote::{
    alasso_cv, assign_folds, auc, build_comparison, compute_initial, cv_curve_csv,
    cv_prediction_error, derive_seed, fit_full, nng_cv, r_squared_of, rlasso_cv,
    sandwich_se, select_subset_bic, subset_cv, bootstrap_se, BootstrapSpec, CvCurve, Dataset,
    Error, Family, InitialKind, Method, Result, Rule, MAX_SUBSET_COLS,
};
use nalgebra::DVector;
use serde::Serialize;
use std::fmt::Write as _;

use crate::args::{
    BootstrapArgs, CompareArgs, CvArgs, FitArgs, Format, InitArg, MethodArg, RuleArg,
    SubsetCriterion, TuneArgs,
};
use crate::data::{load, LoadedData};
use crate::output::{announce, OutDir};

/// Seed salts shared with the library's method pipelines so `fit`,
/// `tune`, and `cv` agree on fold assignments.
pub(crate) const INIT_SALT: u64 = 0x1111;
pub(crate) const MAIN_SALT: u64 = 0x2222;
const OUTER_FOLD_SALT: u64 = 0xF01D;

fn family_tag(f: Family) -> &'static str {
    match f {
        Family::Gaussian => "gaussian",
        Family::Binomial => "binomial",
    }
}

fn init_kind_or_default(
    method: MethodArg,
    init: Option<InitArg>,
) -> Result<Option<InitialKind>> {
    if init.is_some() && !method.takes_init() {
        return Err(Error::InvalidArgument(
            "--init only applies to nng and alasso".into(),
        ));
    }
    Ok(if method.takes_init() {
        Some(init.unwrap_or(InitArg::Ols).kind())
    } else {
        None
    })
}

fn guard_subset(d: &Dataset) -> Result<()> {
    if d.p() > MAX_SUBSET_COLS {
        return Err(Error::InvalidArgument("subset requires p ≤ 16".into()));
    }
    if d.family != Family::Gaussian {
        return Err(Error::InvalidArgument(
            "subset requires a gaussian response".into(),
        ));
    }
    Ok(())
}

#[derive(Serialize)]
pub struct FitReport {
    pub dataset: String,
    pub family: String,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init: Option<String>,
    pub rule: String,
    pub seed: u64,
    pub folds: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_init: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub raw_coefficients: Vec<f64>,
    pub raw_intercept: f64,
    pub selected: Vec<String>,
    pub n_vars: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shrinkage_factors: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sandwich_se: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ols_se: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adj_r2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_sample_auc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset_bic: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset_cv_mean: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset_cv_se: Option<Vec<f64>>,
    pub notes: Vec<String>,
}

struct FitPieces {
    coefficients: DVector<f64>,
    intercept: f64,
    lambda: Option<f64>,
    lambda_init: Option<f64>,
    gamma: Option<f64>,
    phi: Option<f64>,
    shrinkage_factors: Option<Vec<f64>>,
    sandwich_se: Option<Vec<f64>>,
    ols_se: Option<Vec<f64>>,
    p_values: Option<Vec<f64>>,
    subset_bic: Option<Vec<f64>>,
    subset_cv_mean: Option<Vec<f64>>,
    subset_cv_se: Option<Vec<f64>>,
    notes: Vec<String>,
}

impl FitPieces {
    fn bare(coefficients: DVector<f64>, intercept: f64) -> Self {
        FitPieces {
            coefficients,
            intercept,
            lambda: None,
            lambda_init: None,
            gamma: None,
            phi: None,
            shrinkage_factors: None,
            sandwich_se: None,
            ols_se: None,
            p_values: None,
            subset_bic: None,
            subset_cv_mean: None,
            subset_cv_se: None,
            notes: Vec::new(),
        }
    }
}

fn fit_pieces(d: &Dataset, args: &FitArgs, init_rule: Rule) -> Result<FitPieces> {
    let k = args.data.folds;
    let seed = args.data.seed;
    let init_seed = derive_seed(seed, INIT_SALT);
    let main_seed = derive_seed(seed, MAIN_SALT);
    let rule = args.rule.rule();
    match args.method {
        MethodArg::Ols => {
            let f = fit_full(d)?;
            let mut p = FitPieces::bare(f.coefficients.clone(), f.intercept);
            p.ols_se = Some(f.se.clone());
            p.p_values = Some(f.p_values.clone());
            Ok(p)
        }
        MethodArg::Ridge | MethodArg::Lasso => {
            let kind = if args.method == MethodArg::Ridge {
                InitialKind::Ridge
            } else {
                InitialKind::Lasso
            };
            let est = compute_initial(d, kind, rule, k, main_seed)?;
            let mut p = FitPieces::bare(est.coefficients.clone(), est.intercept);
            p.lambda = est.lambda;
            Ok(p)
        }
        MethodArg::Rlasso => {
            let phis = args.phis.clone().unwrap_or_else(|| garrote::DEFAULT_PHIS.to_vec());
            let f = rlasso_cv(d, &phis, k, main_seed, rule)?;
            let mut p = FitPieces::bare(f.coefficients.clone(), f.intercept);
            p.lambda = Some(f.lambda);
            p.phi = Some(f.phi);
            p.notes = f.notes.clone();
            Ok(p)
        }
        MethodArg::Nng => {
            let kind = init_kind_or_default(args.method, args.init)?.unwrap();
            let est = compute_initial(d, kind, init_rule, k, init_seed)?;
            let f = nng_cv(d, &est, k, main_seed, rule)?;
            let mut p = FitPieces::bare(f.coefficients.clone(), f.intercept);
            p.lambda = Some(f.lambda);
            p.lambda_init = est.lambda;
            p.shrinkage_factors = Some(f.c.iter().cloned().collect());
            if d.family == Family::Gaussian {
                p.sandwich_se = Some(sandwich_se(d, &f)?.se);
            }
            p.notes = f.notes.clone();
            Ok(p)
        }
        MethodArg::Alasso => {
            let kind = init_kind_or_default(args.method, args.init)?.unwrap();
            let est = compute_initial(d, kind, init_rule, k, init_seed)?;
            let gammas = args
                .gammas
                .clone()
                .unwrap_or_else(|| garrote::DEFAULT_GAMMAS.to_vec());
            let f = alasso_cv(d, &est, &gammas, k, main_seed, rule)?;
            let mut p = FitPieces::bare(f.coefficients.clone(), f.intercept);
            p.lambda = Some(f.lambda);
            p.lambda_init = est.lambda;
            p.gamma = Some(f.gamma);
            p.notes = f.notes.clone();
            Ok(p)
        }
        MethodArg::Subset => {
            guard_subset(d)?;
            match args.criterion {
                SubsetCriterion::Bic => {
                    let (f, bics) = select_subset_bic(d)?;
                    let mut p = FitPieces::bare(f.coefficients.clone(), f.intercept);
                    p.subset_bic = Some(bics);
                    Ok(p)
                }
                SubsetCriterion::Cv => {
                    let (f, mean, se) = subset_cv(d, k, main_seed)?;
                    let mut p = FitPieces::bare(f.coefficients.clone(), f.intercept);
                    p.subset_cv_mean = Some(mean);
                    p.subset_cv_se = Some(se);
                    Ok(p)
                }
            }
        }
    }
}

pub fn fit_report(loaded: &LoadedData, args: &FitArgs, init_rule: Rule) -> Result<FitReport> {
    let d = &loaded.data;
    let pieces = fit_pieces(d, args, init_rule)?;
    let selected_idx: Vec<usize> = (0..d.p())
        .filter(|&j| pieces.coefficients[j] != 0.0)
        .collect();
    let coef_vec: Vec<f64> = pieces.coefficients.iter().cloned().collect();
    let (raw_coefficients, raw_intercept) =
        loaded.record.destandardize(&coef_vec, pieces.intercept);
    let fitted = {
        let mut e = &d.x * &pieces.coefficients;
        e.iter_mut().for_each(|v| *v += pieces.intercept);
        e
    };
    let (r2, adj_r2, in_sample_auc) = match d.family {
        Family::Gaussian => {
            let (r2, adj) = r_squared_of(&d.y, &fitted, selected_idx.len())?;
            (Some(r2), Some(adj), None)
        }
        Family::Binomial => {
            let labels: Vec<f64> = d.y.iter().cloned().collect();
            let scores: Vec<f64> = fitted.iter().cloned().collect();
            (None, None, Some(auc(&labels, &scores)?))
        }
    };
    let init_label = init_kind_or_default(args.method, args.init)?.map(|k| k.label().to_string());
    Ok(FitReport {
        dataset: loaded.label.clone(),
        family: family_tag(d.family).into(),
        method: format!("{:?}", args.method).to_lowercase(),
        init: init_label,
        rule: args.rule.tag().into(),
        seed: args.data.seed,
        folds: args.data.folds,
        lambda: pieces.lambda,
        lambda_init: pieces.lambda_init,
        gamma: pieces.gamma,
        phi: pieces.phi,
        names: d.names.clone(),
        coefficients: coef_vec,
        intercept: pieces.intercept,
        raw_coefficients,
        raw_intercept,
        selected: selected_idx.iter().map(|&j| d.names[j].clone()).collect(),
        n_vars: selected_idx.len(),
        shrinkage_factors: pieces.shrinkage_factors,
        sandwich_se: pieces.sandwich_se,
        ols_se: pieces.ols_se,
        p_values: pieces.p_values,
        r2,
        adj_r2,
        in_sample_auc,
        subset_bic: pieces.subset_bic,
        subset_cv_mean: pieces.subset_cv_mean,
        subset_cv_se: pieces.subset_cv_se,
        notes: pieces.notes,
    })
}

fn fit_csv(report: &FitReport) -> String {
    let mut out = String::from("variable,coefficient,raw_coefficient,selected,sandwich_se\n");
    for (j, name) in report.names.iter().enumerate() {
        let se = report
            .sandwich_se
            .as_ref()
            .map(|s| s[j].to_string())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{name},{},{},{},{se}",
            report.coefficients[j],
            report.raw_coefficients[j],
            (report.coefficients[j] != 0.0) as u8
        );
    }
    out
}

pub fn cmd_fit(args: &FitArgs, out: &OutDir, format: Format) -> Result<i32> {
    let loaded = load(&args.data)?;
    let report = fit_report(&loaded, args, Rule::Optimal)?;
    announce(&out.write_json("fit.json", &report)?);
    if format == Format::Csv {
        announce(&out.write_text("fit.csv", &fit_csv(&report))?);
    }
    println!(
        "{} on {}: {} variables selected [{}]",
        report.method,
        report.dataset,
        report.n_vars,
        report.selected.join(", ")
    );
    if let (Some(r2), Some(adj)) = (report.r2, report.adj_r2) {
        println!("r2 {:.4}, adjusted {:.4}", r2, adj);
    }
    if let Some(a) = report.in_sample_auc {
        println!("in-sample auc {:.4}", a);
    }
    Ok(0)
}

#[derive(Serialize)]
pub struct CvReport {
    pub dataset: String,
    pub family: String,
    pub method: String,
    pub seed: u64,
    pub folds: usize,
    pub metric_name: String,
    pub metric: f64,
    pub se: f64,
    pub per_fold: Vec<f64>,
    pub avg_vars: f64,
    pub sd_vars: f64,
}

pub fn method_of(
    method: MethodArg,
    init: Option<InitArg>,
    rule: RuleArg,
    criterion: SubsetCriterion,
) -> Result<Method> {
    let kind = init_kind_or_default(method, init)?;
    Ok(match method {
        MethodArg::Ols => Method::FullOls,
        MethodArg::Ridge => Method::Ridge(rule.rule()),
        MethodArg::Lasso => Method::Lasso(rule.rule()),
        MethodArg::Rlasso => Method::Rlasso(rule.rule()),
        MethodArg::Nng => Method::Nng(kind.unwrap(), rule.rule()),
        MethodArg::Alasso => Method::Alasso(kind.unwrap(), rule.rule()),
        MethodArg::Subset => match criterion {
            SubsetCriterion::Bic => Method::SubsetBic,
            SubsetCriterion::Cv => Method::SubsetCv,
        },
    })
}

pub fn nested_cv_report(
    d: &Dataset,
    label: &str,
    method: Method,
    k: usize,
    seed: u64,
) -> Result<CvReport> {
    let folds = assign_folds(d.n(), k, derive_seed(seed, OUTER_FOLD_SALT))?;
    let report = cv_prediction_error(d, &folds, seed, |train, s| {
        method.fit(train, k, s).map(|(b, b0, nv, _)| (b, b0, nv))
    })?;
    let metric_name = match d.family {
        Family::Gaussian => "cv_mse",
        Family::Binomial => "pooled_auc",
    };
    Ok(CvReport {
        dataset: label.to_string(),
        family: family_tag(d.family).into(),
        method: method.label(),
        seed,
        folds: k,
        metric_name: metric_name.into(),
        metric: report.metric,
        se: report.se,
        per_fold: report.per_fold,
        avg_vars: report.avg_vars,
        sd_vars: report.sd_vars,
    })
}

pub fn cmd_cv(args: &CvArgs, out: &OutDir, format: Format) -> Result<i32> {
    let loaded = load(&args.data)?;
    if args.method == MethodArg::Subset {
        guard_subset(&loaded.data)?;
    }
    let method = method_of(args.method, args.init, args.rule, args.criterion)?;
    let report = nested_cv_report(
        &loaded.data,
        &loaded.label,
        method,
        args.data.folds,
        args.data.seed,
    )?;
    announce(&out.write_json("cv.json", &report)?);
    if format == Format::Csv {
        let mut csv = String::from("fold,metric\n");
        for (i, v) in report.per_fold.iter().enumerate() {
            let _ = writeln!(csv, "{i},{v}");
        }
        announce(&out.write_text("cv.csv", &csv)?);
    }
    println!(
        "{} on {}: {} {:.4} (se {:.4}), avg vars {:.1}",
        report.method, report.dataset, report.metric_name, report.metric, report.se, report.avg_vars
    );
    Ok(0)
}

#[derive(Serialize)]
pub struct TuneReport {
    pub dataset: String,
    pub family: String,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init: Option<String>,
    pub seed: u64,
    pub folds: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<f64>>,
    pub curves: Vec<CvCurve>,
    pub opt_lambda: f64,
    pub one_se_lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub opt_gamma: Option<f64>,
}

pub fn cmd_tune(args: &TuneArgs, out: &OutDir, format: Format) -> Result<i32> {
    let loaded = load(&args.data)?;
    let d = &loaded.data;
    let k = args.data.folds;
    let seed = args.data.seed;
    let init_seed = derive_seed(seed, INIT_SALT);
    let main_seed = derive_seed(seed, MAIN_SALT);
    let (curves, gammas, opt_lambda, one_se_lambda, opt_gamma, init_label) = match args.method {
        MethodArg::Ridge | MethodArg::Lasso => {
            if args.init.is_some() {
                return Err(Error::InvalidArgument(
                    "--init only applies to nng and alasso".into(),
                ));
            }
            let kind = if args.method == MethodArg::Ridge {
                InitialKind::Ridge
            } else {
                InitialKind::Lasso
            };
            let est = compute_initial(d, kind, Rule::Optimal, k, main_seed)?;
            let curve = est.curve.ok_or_else(|| {
                Error::Numeric("tuning curve missing from penalized fit".into())
            })?;
            let (o, s) = (curve.lambda(Rule::Optimal), curve.lambda(Rule::OneSe));
            (vec![curve], None, o, s, None, None)
        }
        MethodArg::Nng => {
            let kind = args.init.unwrap_or(InitArg::Ols).kind();
            let est = compute_initial(d, kind, Rule::Optimal, k, init_seed)?;
            let f = nng_cv(d, &est, k, main_seed, Rule::Optimal)?;
            let curve = f.curve.ok_or_else(|| {
                Error::Numeric("tuning curve missing from garrote fit".into())
            })?;
            let (o, s) = (curve.lambda(Rule::Optimal), curve.lambda(Rule::OneSe));
            (
                vec![curve],
                None,
                o,
                s,
                None,
                Some(kind.label().to_string()),
            )
        }
        MethodArg::Alasso => {
            let kind = args.init.unwrap_or(InitArg::Ols).kind();
            let est = compute_initial(d, kind, Rule::Optimal, k, init_seed)?;
            let gammas = args
                .gammas
                .clone()
                .unwrap_or_else(|| garrote::DEFAULT_GAMMAS.to_vec());
            let f = alasso_cv(d, &est, &gammas, k, main_seed, Rule::Optimal)?;
            let grid = f.grid.ok_or_else(|| {
                Error::Numeric("tuning grid missing from adaptive-lasso fit".into())
            })?;
            let (gi, li) = grid.opt;
            let (si, sl) = grid.one_se;
            let opt_lambda = grid.curves[gi].lambdas[li];
            let one_se_lambda = grid.curves[si].lambdas[sl];
            (
                grid.curves,
                Some(grid.params),
                opt_lambda,
                one_se_lambda,
                Some(gammas[gi]),
                Some(kind.label().to_string()),
            )
        }
        _ => {
            return Err(Error::InvalidArgument(
                "tune supports ridge, lasso, nng, and alasso".into(),
            ))
        }
    };
    let report = TuneReport {
        dataset: loaded.label.clone(),
        family: family_tag(d.family).into(),
        method: format!("{:?}", args.method).to_lowercase(),
        init: init_label,
        seed,
        folds: k,
        gammas: gammas.clone(),
        curves,
        opt_lambda,
        one_se_lambda,
        opt_gamma,
    };
    announce(&out.write_json("tune.json", &report)?);
    if format == Format::Csv {
        let csv = match &gammas {
            None => cv_curve_csv(
                &report.curves[0].lambdas,
                &report.curves[0].mean,
                &report.curves[0].se,
            ),
            Some(gs) => {
                let mut s = String::from("gamma,lambda,mean,se\n");
                for (g, c) in gs.iter().zip(&report.curves) {
                    for i in 0..c.lambdas.len() {
                        let _ = writeln!(s, "{g},{},{},{}", c.lambdas[i], c.mean[i], c.se[i]);
                    }
                }
                s
            }
        };
        announce(&out.write_text("tune_curve.csv", &csv)?);
    }
    println!(
        "{} on {}: optimal lambda {:.6}, one-se lambda {:.6}",
        report.method, report.dataset, report.opt_lambda, report.one_se_lambda
    );
    Ok(0)
}

#[derive(Serialize)]
pub struct BootstrapReport {
    pub dataset: String,
    pub family: String,
    pub mode: String,
    pub init: String,
    pub replicates: usize,
    pub folds: usize,
    pub seed: u64,
    pub names: Vec<String>,
    pub original: Vec<f64>,
    pub mean: Vec<f64>,
    pub se: Vec<f64>,
    pub selection_freq: Vec<f64>,
    pub completed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_init: Option<f64>,
    pub lambda_nng: f64,
}

pub fn cmd_bootstrap(args: &BootstrapArgs, out: &OutDir, format: Format) -> Result<i32> {
    if args.replicates < 2 {
        return Err(Error::InvalidArgument("bootstrap needs B ≥ 2".into()));
    }
    let loaded = load(&args.data)?;
    let d = &loaded.data;
    let spec = BootstrapSpec {
        init_kind: args.init.unwrap_or(InitArg::Ols).kind(),
        init_rule: Rule::Optimal,
        nng_rule: args.mode.rule(),
        reestimate: args.mode.reestimate(),
        replicates: args.replicates,
        folds: args.data.folds,
    };
    let summary = bootstrap_se(d, &spec, args.data.seed)?;
    let report = BootstrapReport {
        dataset: loaded.label.clone(),
        family: family_tag(d.family).into(),
        mode: args.mode.tag().into(),
        init: spec.init_kind.label().into(),
        replicates: args.replicates,
        folds: args.data.folds,
        seed: args.data.seed,
        names: d.names.clone(),
        original: summary.original.iter().cloned().collect(),
        mean: summary.mean.iter().cloned().collect(),
        se: summary.se.iter().cloned().collect(),
        selection_freq: summary.selection_freq.iter().cloned().collect(),
        completed: summary.completed,
        failed: summary.failed,
        lambda_init: summary.lambda_init,
        lambda_nng: summary.lambda_nng,
    };
    announce(&out.write_json("bootstrap.json", &report)?);
    if format == Format::Csv {
        let mut csv = String::from("variable,original,mean,se,selection_freq\n");
        for (j, name) in report.names.iter().enumerate() {
            let _ = writeln!(
                csv,
                "{name},{},{},{},{}",
                report.original[j], report.mean[j], report.se[j], report.selection_freq[j]
            );
        }
        announce(&out.write_text("bootstrap.csv", &csv)?);
    }
    println!(
        "bootstrap {} on {}: {} of {} replicates completed",
        report.mode, report.dataset, report.completed, report.replicates
    );
    Ok(0)
}

/// The standard battery at one rule: least squares, ridge, lasso,
/// relaxed lasso, garrote and adaptive lasso under each initial
/// estimator, and both subset searches when feasible.
pub fn battery(rule: Rule, p: usize, gaussian: bool) -> Vec<Method> {
    let mut methods = vec![
        Method::FullOls,
        Method::Ridge(rule),
        Method::Lasso(rule),
        Method::Rlasso(rule),
        Method::Nng(InitialKind::Ols, rule),
        Method::Nng(InitialKind::Ridge, rule),
        Method::Nng(InitialKind::Lasso, rule),
        Method::Alasso(InitialKind::Ols, rule),
        Method::Alasso(InitialKind::Ridge, rule),
        Method::Alasso(InitialKind::Lasso, rule),
    ];
    if gaussian && p <= MAX_SUBSET_COLS {
        methods.push(Method::SubsetCv);
        methods.push(Method::SubsetBic);
    }
    methods
}

pub fn cmd_compare(args: &CompareArgs, out: &OutDir, format: Format) -> Result<i32> {
    let loaded = load(&args.data)?;
    let d = &loaded.data;
    if d.family != Family::Gaussian {
        return Err(Error::InvalidArgument(
            "compare requires a gaussian response".into(),
        ));
    }
    let mut methods = battery(args.rule.rule(), d.p(), true);
    if args.both_rules {
        let other = match args.rule {
            RuleArg::Opt => Rule::OneSe,
            RuleArg::OneSe => Rule::Optimal,
        };
        methods.extend(
            battery(other, d.p(), true)
                .into_iter()
                .filter(|m| !matches!(m, Method::FullOls | Method::SubsetCv | Method::SubsetBic)),
        );
    }
    let mut fits = Vec::with_capacity(methods.len());
    for m in &methods {
        let (beta, b0, _, notes) = m.fit(d, args.data.folds, args.data.seed)?;
        fits.push((m.label(), beta, b0, notes));
    }
    let table = build_comparison(d, &fits)?;
    let text = table.render_text();
    announce(&out.write_json("compare.json", &table)?);
    announce(&out.write_text("compare.txt", &text)?);
    if format == Format::Csv {
        announce(&out.write_text("compare.csv", &table.to_csv())?);
    }
    print!("{text}");
    Ok(0)
}

/// In-sample fit summary rows reused by `fit` and the reproduction
/// analyses.
pub fn fitted_r2(d: &Dataset, beta: &DVector<f64>, b0: f64) -> Result<(f64, f64)> {
    let mut e = &d.x * beta;
    e.iter_mut().for_each(|v| *v += b0);
    let k = beta.iter().filter(|&&b| b != 0.0).count();
    r_squared_of(&d.y, &e, k)
}
