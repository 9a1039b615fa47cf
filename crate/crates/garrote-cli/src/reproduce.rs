use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use garrote::{
    bland_altman, bland_altman_csv, bootstrap_se, build_comparison, collinearity,
    compute_initial, derive_seed, drop_one_r2, fit_full, nng_cv, r_squared, sandwich_se,
    BootstrapSpec, Dataset, Error, InitialKind, Method, NngFit, Result, Rule,
};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::args::{AnalysisArg, DataOpts, FamilyArg, Format, ReproduceArgs};
use crate::data::{load, LoadedData};
use crate::output::{announce, OutDir};
use crate::run::{battery, nested_cv_report, CvReport, INIT_SALT, MAIN_SALT};

#[derive(Deserialize, Clone, Copy, PartialEq, Debug)]
#[serde(rename_all = "snake_case")]
enum CheckKind {
    /// |computed - target| <= tolerance.
    Abs,
    /// computed >= target - tolerance.
    Min,
    /// computed <= target + tolerance.
    Max,
    /// truth of computed matches truth of target.
    Bool,
    /// computed name set equals target set.
    Set,
}

#[derive(Deserialize)]
struct TargetCheck {
    name: String,
    kind: CheckKind,
    #[serde(default)]
    target: f64,
    #[serde(default)]
    tolerance: f64,
    #[serde(default)]
    target_set: Vec<String>,
}

#[derive(Deserialize)]
struct TargetFile {
    checks: Vec<TargetCheck>,
}

#[derive(Clone, Debug)]
enum Computed {
    Num(f64),
    Set(Vec<String>),
}

#[derive(Serialize)]
struct CheckResult {
    name: String,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    computed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_set: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    computed_set: Option<Vec<String>>,
    pass: bool,
}

#[derive(Serialize)]
struct Manifest {
    analysis: String,
    seed: u64,
    folds: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    replicates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    checks: Vec<CheckResult>,
    passed: usize,
    failed: usize,
    pass: bool,
}

fn kind_tag(k: CheckKind) -> &'static str {
    match k {
        CheckKind::Abs => "abs",
        CheckKind::Min => "min",
        CheckKind::Max => "max",
        CheckKind::Bool => "bool",
        CheckKind::Set => "set",
    }
}

struct Checker {
    computed: BTreeMap<String, Computed>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            computed: BTreeMap::new(),
        }
    }

    fn put(&mut self, name: &str, v: f64) {
        self.computed.insert(name.to_string(), Computed::Num(v));
    }

    fn put_set(&mut self, name: &str, mut v: Vec<String>) {
        v.sort();
        self.computed.insert(name.to_string(), Computed::Set(v));
    }

    fn evaluate(
        &self,
        targets: &TargetFile,
        skip_bootstrap: bool,
        skip_cv: bool,
    ) -> Vec<CheckResult> {
        let mut out = Vec::new();
        for t in &targets.checks {
            let skipped = (skip_bootstrap && t.name.starts_with("bootstrap_"))
                || (skip_cv && t.name.starts_with("cv_"));
            if skipped {
                continue;
            }
            let entry = self.computed.get(&t.name);
            let result = match (t.kind, entry) {
                (CheckKind::Set, Some(Computed::Set(s))) => {
                    let mut want = t.target_set.clone();
                    want.sort();
                    CheckResult {
                        name: t.name.clone(),
                        kind: kind_tag(t.kind).into(),
                        target: None,
                        computed: None,
                        tolerance: None,
                        target_set: Some(want.clone()),
                        computed_set: Some(s.clone()),
                        pass: *s == want,
                    }
                }
                (kind, Some(Computed::Num(v))) if kind != CheckKind::Set => {
                    let pass = match kind {
                        CheckKind::Abs => (v - t.target).abs() <= t.tolerance,
                        CheckKind::Min => *v >= t.target - t.tolerance,
                        CheckKind::Max => *v <= t.target + t.tolerance,
                        CheckKind::Bool => (*v != 0.0) == (t.target != 0.0),
                        CheckKind::Set => unreachable!(),
                    };
                    CheckResult {
                        name: t.name.clone(),
                        kind: kind_tag(t.kind).into(),
                        target: Some(t.target),
                        computed: Some(*v),
                        tolerance: Some(t.tolerance),
                        target_set: None,
                        computed_set: None,
                        pass,
                    }
                }
                _ => CheckResult {
                    name: t.name.clone(),
                    kind: kind_tag(t.kind).into(),
                    target: Some(t.target),
                    computed: None,
                    tolerance: Some(t.tolerance),
                    target_set: if t.kind == CheckKind::Set {
                        Some(t.target_set.clone())
                    } else {
                        None
                    },
                    computed_set: None,
                    pass: false,
                },
            };
            out.push(result);
        }
        out
    }
}

fn finish(
    analysis: &str,
    args: &ReproduceArgs,
    no_timestamp: bool,
    checker: &Checker,
    targets: &TargetFile,
    out: &OutDir,
) -> Result<i32> {
    let checks = checker.evaluate(targets, args.skip_bootstrap, args.skip_cv);
    let passed = checks.iter().filter(|c| c.pass).count();
    let failed = checks.len() - passed;
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        match (&c.computed, &c.computed_set) {
            (Some(v), _) => println!(
                "[{status}] {}: computed {:.4} target {:.4} (tol {:.4})",
                c.name,
                v,
                c.target.unwrap_or(f64::NAN),
                c.tolerance.unwrap_or(0.0)
            ),
            (_, Some(s)) => println!(
                "[{status}] {}: computed {{{}}} target {{{}}}",
                c.name,
                s.join(", "),
                c.target_set.as_deref().unwrap_or(&[]).join(", ")
            ),
            _ => println!("[{status}] {}: not computed", c.name),
        }
    }
    let manifest = Manifest {
        analysis: analysis.to_string(),
        seed: args.seed,
        folds: args.folds,
        replicates: if args.skip_bootstrap || analysis != "prostate" {
            None
        } else {
            Some(args.replicates)
        },
        timestamp: if no_timestamp {
            None
        } else {
            Some(
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
            )
        },
        checks,
        passed,
        failed,
        pass: failed == 0,
    };
    announce(&out.write_json("manifest.json", &manifest)?);
    if std::env::var_os("GARROTE_DUMP_COMPUTED").is_some() {
        let dump: BTreeMap<&String, serde_json::Value> = checker
            .computed
            .iter()
            .map(|(k, v)| {
                let val = match v {
                    Computed::Num(x) => serde_json::json!(x),
                    Computed::Set(s) => serde_json::json!(s),
                };
                (k, val)
            })
            .collect();
        announce(&out.write_json("computed_values.json", &dump)?);
    }
    println!("{analysis}: {passed} checks passed, {failed} failed");
    Ok(if failed == 0 { 0 } else { 1 })
}

fn data_opts(name: &str, seed: u64, folds: usize, family: FamilyArg) -> DataOpts {
    DataOpts {
        data: name.to_string(),
        response: None,
        family,
        seed,
        folds,
    }
}

fn selection_names(d: &Dataset, beta: &DVector<f64>) -> Vec<String> {
    (0..d.p())
        .filter(|&j| beta[j] != 0.0)
        .map(|j| d.names[j].clone())
        .collect()
}

fn shrunken_r2(d: &Dataset, beta: &DVector<f64>, b0: f64) -> Result<(f64, f64)> {
    crate::run::fitted_r2(d, beta, b0)
}

#[derive(Serialize)]
struct MethodArtifact {
    method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    coefficients: Vec<f64>,
    intercept: f64,
    selected: Vec<String>,
    n_vars: usize,
    r2: f64,
    adj_r2: f64,
    notes: Vec<String>,
}

fn method_artifact(
    d: &Dataset,
    label: &str,
    lambda: Option<f64>,
    beta: &DVector<f64>,
    b0: f64,
    notes: Vec<String>,
) -> Result<MethodArtifact> {
    let (r2, adj_r2) = shrunken_r2(d, beta, b0)?;
    let selected = selection_names(d, beta);
    Ok(MethodArtifact {
        method: label.to_string(),
        lambda,
        coefficients: beta.iter().cloned().collect(),
        intercept: b0,
        selected: selected.clone(),
        n_vars: selected.len(),
        r2,
        adj_r2,
        notes,
    })
}

fn nng_with(
    d: &Dataset,
    kind: InitialKind,
    init_rule: Rule,
    nng_rule: Rule,
    k: usize,
    seed: u64,
) -> Result<(garrote::InitialEstimate, NngFit)> {
    let est = compute_initial(d, kind, init_rule, k, derive_seed(seed, INIT_SALT))?;
    let fit = nng_cv(d, &est, k, derive_seed(seed, MAIN_SALT), nng_rule)?;
    Ok((est, fit))
}

fn cv_battery(
    d: &Dataset,
    label: &str,
    methods: &[Method],
    k: usize,
    seed: u64,
) -> Result<Vec<CvReport>> {
    use rayon::prelude::*;
    methods
        .par_iter()
        .map(|m| nested_cv_report(d, label, *m, k, seed))
        .collect()
}

fn sanitize(label: &str) -> String {
    label
        .replace(['(', ')'], "_")
        .replace('-', "_")
        .trim_end_matches('_')
        .to_string()
}

fn record_cv_rows(checker: &mut Checker, rows: &[CvReport]) {
    for r in rows {
        let tag = sanitize(&r.method);
        checker.put(&format!("cv_{tag}_metric"), r.metric);
        checker.put(&format!("cv_{tag}_vars"), r.avg_vars);
    }
}

/// 1 when every penalized method keeps no more variables under the
/// one-standard-error rule than under the optimal rule.
fn one_se_reduction_flag(rows: &[CvReport]) -> f64 {
    let find = |name: &str| rows.iter().find(|r| r.method == name).map(|r| r.avg_vars);
    let pairs = [
        ("lasso(cv-min)", "lasso(cv-1se)"),
        ("rlasso(cv-min)", "rlasso(cv-1se)"),
        ("nng-ols(cv-min)", "nng-ols(cv-1se)"),
        ("nng-ridge(cv-min)", "nng-ridge(cv-1se)"),
        ("nng-lasso(cv-min)", "nng-lasso(cv-1se)"),
        ("alasso-ols(cv-min)", "alasso-ols(cv-1se)"),
        ("alasso-ridge(cv-min)", "alasso-ridge(cv-1se)"),
        ("alasso-lasso(cv-min)", "alasso-lasso(cv-1se)"),
        ("ridge(cv-min)", "ridge(cv-1se)"),
    ];
    let mut all = true;
    let mut any = false;
    for (a, b) in pairs {
        if let (Some(opt), Some(se)) = (find(a), find(b)) {
            any = true;
            if se > opt + 1e-12 {
                all = false;
            }
        }
    }
    (any && all) as u8 as f64
}

pub fn cmd_reproduce(args: &ReproduceArgs, out: &OutDir, no_timestamp: bool, format: Format) -> Result<i32> {
    match args.name {
        AnalysisArg::Prostate => reproduce_prostate(args, out, no_timestamp, format),
        AnalysisArg::Bodyfat => reproduce_bodyfat(args, out, no_timestamp, format),
        AnalysisArg::Highdim => reproduce_highdim(args, out, no_timestamp),
    }
}

fn reproduce_prostate(
    args: &ReproduceArgs,
    out: &OutDir,
    no_timestamp: bool,
    format: Format,
) -> Result<i32> {
    let targets: TargetFile = serde_json::from_str(include_str!("../targets/prostate.json"))
        .map_err(|e| Error::Parse(format!("bad target file: {e}")))?;
    let loaded: LoadedData = load(&data_opts("prostate", args.seed, args.folds, FamilyArg::Gaussian))?;
    let d = &loaded.data;
    let k = args.folds;
    let seed = args.seed;
    let mut checker = Checker::new();

    // Full least squares: coefficients, tests, fit.
    let full = fit_full(d)?;
    let (r2, adj) = r_squared(&full, d)?;
    for (j, name) in d.names.iter().enumerate() {
        checker.put(&format!("ols_coef_{name}"), full.coefficients[j]);
        checker.put(&format!("ols_pvalue_{name}"), full.p_values[j]);
    }
    checker.put("ols_r2", r2);
    checker.put("ols_adj_r2", adj);

    // Collinearity diagnostics.
    let col = collinearity(d)?;
    let vif_min = col.vif.iter().cloned().fold(f64::INFINITY, f64::min);
    let vif_max = col.vif.iter().cloned().fold(0.0, f64::max);
    checker.put("vif_min", vif_min);
    checker.put("vif_max", vif_max);
    checker.put("condition_number", col.condition_number);

    // Initial estimators tuned on the full data.
    let main_seed = derive_seed(seed, MAIN_SALT);
    let init_seed = derive_seed(seed, INIT_SALT);
    let ridge = compute_initial(d, InitialKind::Ridge, Rule::Optimal, k, main_seed)?;
    let lasso_opt = compute_initial(d, InitialKind::Lasso, Rule::Optimal, k, main_seed)?;
    let lasso_1se = compute_initial(d, InitialKind::Lasso, Rule::OneSe, k, main_seed)?;
    for (label, est) in [
        ("ridge", &ridge),
        ("lasso_opt", &lasso_opt),
        ("lasso_1se", &lasso_1se),
    ] {
        let (er2, _) = shrunken_r2(d, &est.coefficients, est.intercept)?;
        checker.put(&format!("{label}_r2"), er2);
        for (j, name) in d.names.iter().enumerate() {
            checker.put(&format!("{label}_coef_{name}"), est.coefficients[j]);
        }
    }
    checker.put_set(
        "lasso_1se_selection",
        selection_names(d, &lasso_1se.coefficients),
    );

    let mut artifacts = vec![method_artifact(
        d,
        "ols",
        None,
        &full.coefficients,
        full.intercept,
        Vec::new(),
    )?];
    for (label, est) in [
        ("ridge(cv-min)", &ridge),
        ("lasso(cv-min)", &lasso_opt),
        ("lasso(cv-1se)", &lasso_1se),
    ] {
        artifacts.push(method_artifact(
            d,
            label,
            est.lambda,
            &est.coefficients,
            est.intercept,
            Vec::new(),
        )?);
    }
    announce(&out.write_json("prostate_initial_estimates.json", &artifacts)?);

    // Garrote fits under each initial estimator, both rules.
    let mut nng_artifacts = Vec::new();
    let mut nng_ols_fits: BTreeMap<&'static str, NngFit> = BTreeMap::new();
    for kind in [InitialKind::Ols, InitialKind::Ridge, InitialKind::Lasso] {
        for (rule, rtag) in [(Rule::Optimal, "opt"), (Rule::OneSe, "1se")] {
            let (_, fit) = nng_with(d, kind, Rule::Optimal, rule, k, seed)?;
            let tag = format!("nng_{}_{rtag}", kind.label());
            checker.put_set(
                &format!("{tag}_selection"),
                selection_names(d, &fit.coefficients),
            );
            let (fr2, _) = shrunken_r2(d, &fit.coefficients, fit.intercept)?;
            checker.put(&format!("{tag}_r2"), fr2);
            checker.put(&format!("{tag}_vars"), fit.selected().len() as f64);
            nng_artifacts.push(method_artifact(
                d,
                &format!(
                    "nng-{}({})",
                    kind.label(),
                    if rule == Rule::Optimal { "cv-min" } else { "cv-1se" }
                ),
                Some(fit.lambda),
                &fit.coefficients,
                fit.intercept,
                fit.notes.clone(),
            )?);
            if kind == InitialKind::Ols {
                nng_ols_fits.insert(if rule == Rule::Optimal { "opt" } else { "1se" }, fit);
            }
        }
    }

    // Garrote on the one-standard-error lasso initial: shrinkage
    // factors relative to least squares.
    let lasso_1se_init = compute_initial(d, InitialKind::Lasso, Rule::OneSe, k, init_seed)?;
    let nng_l1se = nng_cv(d, &lasso_1se_init, k, main_seed, Rule::Optimal)?;
    let (nl_r2, _) = shrunken_r2(d, &nng_l1se.coefficients, nng_l1se.intercept)?;
    checker.put("nng_lasso1se_r2", nl_r2);
    for name in ["lcavol", "lweight", "svi"] {
        let j = d.names.iter().position(|s| s == name).unwrap();
        let ols_b = full.coefficients[j];
        if lasso_1se.coefficients[j] != 0.0 {
            checker.put(
                &format!("shrink_ols_lasso1se_{name}"),
                ols_b / lasso_1se.coefficients[j],
            );
        }
        if nng_l1se.c[j] > 0.0 {
            checker.put(&format!("garrote_c_{name}"), nng_l1se.c[j]);
        }
    }
    nng_artifacts.push(method_artifact(
        d,
        "nng-lasso1se(cv-min)",
        Some(nng_l1se.lambda),
        &nng_l1se.coefficients,
        nng_l1se.intercept,
        nng_l1se.notes.clone(),
    )?);
    announce(&out.write_json("prostate_garrote_fits.json", &nng_artifacts)?);

    // Sandwich standard errors for the garrote with least-squares
    // initial, both rules.
    #[derive(Serialize)]
    struct SandwichArtifact {
        rule: String,
        lambda: f64,
        estimate: Vec<f64>,
        se: Vec<f64>,
        sigma2: f64,
    }
    let mut sw_artifacts = Vec::new();
    for (rtag, fit) in &nng_ols_fits {
        let sw = sandwich_se(d, fit)?;
        for (j, name) in d.names.iter().enumerate() {
            checker.put(&format!("sandwich_{rtag}_est_{name}"), fit.coefficients[j]);
            checker.put(&format!("sandwich_{rtag}_se_{name}"), sw.se[j]);
        }
        sw_artifacts.push(SandwichArtifact {
            rule: rtag.to_string(),
            lambda: fit.lambda,
            estimate: fit.coefficients.iter().cloned().collect(),
            se: sw.se.clone(),
            sigma2: sw.sigma2,
        });
    }
    announce(&out.write_json("prostate_sandwich.json", &sw_artifacts)?);

    // Method battery side by side.
    let mut methods = battery(Rule::OneSe, d.p(), true);
    methods.extend(
        battery(Rule::Optimal, d.p(), true)
            .into_iter()
            .filter(|m| !matches!(m, Method::FullOls | Method::SubsetCv | Method::SubsetBic)),
    );
    let mut fits = Vec::new();
    for m in &methods {
        let (beta, b0, _, notes) = m.fit(d, k, seed)?;
        fits.push((m.label(), beta, b0, notes));
    }
    let table = build_comparison(d, &fits)?;
    announce(&out.write_json("prostate_battery.json", &table)?);
    announce(&out.write_text("prostate_battery.txt", &table.render_text())?);
    if format == Format::Csv {
        announce(&out.write_text("prostate_battery.csv", &table.to_csv())?);
    }

    // Bootstrap resampling of the garrote, four designs.
    if !args.skip_bootstrap {
        for (mode, reestimate, rule) in [
            ("fixed_opt", false, Rule::Optimal),
            ("fixed_1se", false, Rule::OneSe),
            ("reestimated_opt", true, Rule::Optimal),
            ("reestimated_1se", true, Rule::OneSe),
        ] {
            let spec = BootstrapSpec {
                init_kind: InitialKind::Ols,
                init_rule: Rule::Optimal,
                nng_rule: rule,
                reestimate,
                replicates: args.replicates,
                folds: k,
            };
            let summary = bootstrap_se(d, &spec, seed)?;
            for (j, name) in d.names.iter().enumerate() {
                checker.put(&format!("bootstrap_{mode}_mean_{name}"), summary.mean[j]);
                checker.put(&format!("bootstrap_{mode}_se_{name}"), summary.se[j]);
                checker.put(
                    &format!("bootstrap_{mode}_freq_{name}"),
                    summary.selection_freq[j],
                );
            }
            checker.put(
                &format!("bootstrap_{mode}_completed"),
                summary.completed as f64,
            );
            announce(&out.write_json(&format!("prostate_bootstrap_{mode}.json"), &summary)?);
        }
    }

    // Nested cross-validated prediction error for the whole battery.
    if !args.skip_cv {
        let mut cv_methods = battery(Rule::Optimal, d.p(), true);
        cv_methods.extend(
            battery(Rule::OneSe, d.p(), true)
                .into_iter()
                .filter(|m| !matches!(m, Method::FullOls | Method::SubsetCv | Method::SubsetBic)),
        );
        let rows = cv_battery(d, &loaded.label, &cv_methods, k, seed)?;
        record_cv_rows(&mut checker, &rows);
        checker.put("cv_one_se_reduces_vars", one_se_reduction_flag(&rows));
        announce(&out.write_json("prostate_cv_report.json", &rows)?);
    }

    finish("prostate", args, no_timestamp, &checker, &targets, out)
}

fn reproduce_bodyfat(
    args: &ReproduceArgs,
    out: &OutDir,
    no_timestamp: bool,
    format: Format,
) -> Result<i32> {
    let targets: TargetFile = serde_json::from_str(include_str!("../targets/bodyfat.json"))
        .map_err(|e| Error::Parse(format!("bad target file: {e}")))?;
    let loaded = load(&data_opts("bodyfat", args.seed, args.folds, FamilyArg::Gaussian))?;
    let d = &loaded.data;
    let k = args.folds;
    let seed = args.seed;
    let mut checker = Checker::new();

    // Full least squares with drop-one importance.
    let full = fit_full(d)?;
    let (r2, adj) = r_squared(&full, d)?;
    checker.put("ols_r2", r2);
    checker.put("ols_adj_r2", adj);
    let reductions = drop_one_r2(d)?;
    for (j, name) in d.names.iter().enumerate() {
        checker.put(&format!("ols_coef_{name}"), full.coefficients[j]);
        checker.put(&format!("ols_pvalue_{name}"), full.p_values[j]);
        checker.put(&format!("drop_one_{name}"), reductions[j]);
    }
    #[derive(Serialize)]
    struct DropOneRow {
        variable: String,
        coefficient: f64,
        p_value: f64,
        r2_reduction_pct: f64,
    }
    let mut drop_rows: Vec<DropOneRow> = (0..d.p())
        .map(|j| DropOneRow {
            variable: d.names[j].clone(),
            coefficient: full.coefficients[j],
            p_value: full.p_values[j],
            r2_reduction_pct: reductions[j],
        })
        .collect();
    drop_rows.sort_by(|a, b| b.r2_reduction_pct.partial_cmp(&a.r2_reduction_pct).unwrap());
    announce(&out.write_json("bodyfat_full_fit.json", &drop_rows)?);

    // Collinearity diagnostics.
    let col = collinearity(d)?;
    let vif_max = col.vif.iter().cloned().fold(0.0, f64::max);
    checker.put("vif_max", vif_max);
    checker.put("condition_number", col.condition_number);

    // Method battery at the optimal rule.
    let methods = battery(Rule::Optimal, d.p(), true);
    let mut fits = Vec::new();
    for m in &methods {
        let (beta, b0, _, notes) = m.fit(d, k, seed)?;
        fits.push((m.label(), beta, b0, notes));
    }
    let table = build_comparison(d, &fits)?;
    for row in &table.rows {
        let tag = sanitize(&row.label);
        checker.put(&format!("fit_{tag}_vars"), row.n_vars as f64);
        for (j, name) in d.names.iter().enumerate() {
            checker.put(&format!("fit_{tag}_coef_{name}"), row.coefficients[j]);
        }
    }
    let bic_row = table
        .rows
        .iter()
        .find(|r| r.label == "subset(bic)")
        .ok_or_else(|| Error::Numeric("subset(bic) missing from battery".into()))?;
    checker.put_set(
        "fit_subset_bic_selection",
        bic_row
            .selected
            .iter()
            .map(|&j| d.names[j].clone())
            .collect(),
    );
    announce(&out.write_json("bodyfat_battery.json", &table)?);
    announce(&out.write_text("bodyfat_battery.txt", &table.render_text())?);
    if format == Format::Csv {
        announce(&out.write_text("bodyfat_battery.csv", &table.to_csv())?);
    }

    // Agreement between predictions of close competitors.
    let fitted_of = |label: &str| -> Result<Vec<f64>> {
        let row = table
            .rows
            .iter()
            .find(|r| r.label == label)
            .ok_or_else(|| Error::Numeric(format!("{label} missing from battery")))?;
        let beta = DVector::from_vec(row.coefficients.clone());
        let mut e = &d.x * &beta;
        e.iter_mut().for_each(|v| *v += row.intercept);
        Ok(e.iter().cloned().collect())
    };
    let nng_r = fitted_of("nng-ridge(cv-min)")?;
    let nng_l = fitted_of("nng-lasso(cv-min)")?;
    let bs_bic = fitted_of("subset(bic)")?;
    let ba_rl = bland_altman(&nng_r, &nng_l)?;
    let ba_rb = bland_altman(&nng_r, &bs_bic)?;
    checker.put("ba_nng_mean_abs", ba_rl.mean_diff.abs());
    checker.put("ba_nng_loa_width", ba_rl.loa.1 - ba_rl.loa.0);
    checker.put("ba_bs_loa_lower", ba_rb.loa.0);
    checker.put("ba_bs_loa_upper", ba_rb.loa.1);
    #[derive(Serialize)]
    struct Agreement {
        pair: String,
        mean_diff: f64,
        sd_diff: f64,
        loa: (f64, f64),
        ci_mean: (f64, f64),
    }
    let agreements = vec![
        Agreement {
            pair: "nng-ridge vs nng-lasso".into(),
            mean_diff: ba_rl.mean_diff,
            sd_diff: ba_rl.sd_diff,
            loa: ba_rl.loa,
            ci_mean: ba_rl.ci_mean,
        },
        Agreement {
            pair: "nng-ridge vs subset(bic)".into(),
            mean_diff: ba_rb.mean_diff,
            sd_diff: ba_rb.sd_diff,
            loa: ba_rb.loa,
            ci_mean: ba_rb.ci_mean,
        },
    ];
    announce(&out.write_json("bodyfat_agreement.json", &agreements)?);
    announce(&out.write_text("bodyfat_agreement_nngridge_nnglasso.csv", &bland_altman_csv(&ba_rl))?);
    announce(&out.write_text("bodyfat_agreement_nngridge_subsetbic.csv", &bland_altman_csv(&ba_rb))?);

    // Nested cross-validated prediction error for the whole battery.
    if !args.skip_cv {
        let mut cv_methods = battery(Rule::Optimal, d.p(), true);
        cv_methods.extend(
            battery(Rule::OneSe, d.p(), true)
                .into_iter()
                .filter(|m| !matches!(m, Method::FullOls | Method::SubsetCv | Method::SubsetBic)),
        );
        let rows = cv_battery(d, &loaded.label, &cv_methods, k, seed)?;
        record_cv_rows(&mut checker, &rows);
        checker.put("cv_one_se_reduces_vars", one_se_reduction_flag(&rows));
        announce(&out.write_json("bodyfat_cv_report.json", &rows)?);
    }

    finish("bodyfat", args, no_timestamp, &checker, &targets, out)
}

fn reproduce_highdim(args: &ReproduceArgs, out: &OutDir, no_timestamp: bool) -> Result<i32> {
    let targets: TargetFile = serde_json::from_str(include_str!("../targets/highdim.json"))
        .map_err(|e| Error::Parse(format!("bad target file: {e}")))?;
    let k = args.folds;
    let seed = args.seed;
    let loaded = match &args.data {
        Some(path) => load(&DataOpts {
            data: path.clone(),
            response: None,
            family: FamilyArg::Binomial,
            seed,
            folds: k,
        })?,
        None => load(&data_opts(
            "highdim-synthetic",
            seed,
            k,
            FamilyArg::Binomial,
        ))?,
    };
    let d = &loaded.data;
    let mut checker = Checker::new();

    // Full-data fits: the garrote with a lasso initial against the
    // lasso itself.
    let lasso_opt = compute_initial(d, InitialKind::Lasso, Rule::Optimal, k, derive_seed(seed, MAIN_SALT))?;
    let lasso_vars = lasso_opt.coefficients.iter().filter(|&&b| b != 0.0).count();
    let (_, nng_fit) = nng_with(d, InitialKind::Lasso, Rule::Optimal, Rule::Optimal, k, seed)?;
    let nng_vars = nng_fit.selected().len();
    checker.put("fit_lasso_opt_vars", lasso_vars as f64);
    checker.put("fit_nng_lasso_opt_vars", nng_vars as f64);
    checker.put(
        "fit_nng_not_larger",
        (nng_vars <= lasso_vars) as u8 as f64,
    );
    #[derive(Serialize)]
    struct HighdimFit {
        method: String,
        lambda: f64,
        n_vars: usize,
    }
    let fits = vec![
        HighdimFit {
            method: "lasso(cv-min)".into(),
            lambda: lasso_opt.lambda.unwrap_or(f64::NAN),
            n_vars: lasso_vars,
        },
        HighdimFit {
            method: "nng-lasso(cv-min)".into(),
            lambda: nng_fit.lambda,
            n_vars: nng_vars,
        },
    ];
    announce(&out.write_json("highdim_fits.json", &fits)?);

    // Nested cross-validation: discrimination and sparsity.
    if !args.skip_cv {
        let methods = [
            Method::Lasso(Rule::Optimal),
            Method::Lasso(Rule::OneSe),
            Method::Nng(InitialKind::Lasso, Rule::Optimal),
            Method::Nng(InitialKind::Lasso, Rule::OneSe),
            Method::Alasso(InitialKind::Lasso, Rule::Optimal),
        ];
        let rows = cv_battery(d, &loaded.label, &methods, k, seed)?;
        record_cv_rows(&mut checker, &rows);
        let auc_of = |name: &str| {
            rows.iter()
                .find(|r| r.method == name)
                .map(|r| r.metric)
                .unwrap_or(f64::NAN)
        };
        let vars_of = |name: &str| {
            rows.iter()
                .find(|r| r.method == name)
                .map(|r| r.avg_vars)
                .unwrap_or(f64::NAN)
        };
        checker.put(
            "cv_nng_fewer_vars",
            (vars_of("nng-lasso(cv-min)") < vars_of("lasso(cv-min)")) as u8 as f64,
        );
        checker.put(
            "cv_auc_gap_nng_lasso",
            (auc_of("nng-lasso(cv-min)") - auc_of("lasso(cv-min)")).abs(),
        );
        checker.put(
            "cv_one_se_drop_lasso",
            auc_of("lasso(cv-min)") - auc_of("lasso(cv-1se)"),
        );
        checker.put(
            "cv_one_se_drop_nng",
            auc_of("nng-lasso(cv-min)") - auc_of("nng-lasso(cv-1se)"),
        );
        announce(&out.write_json("highdim_cv_report.json", &rows)?);
    }

    finish("highdim", args, no_timestamp, &checker, &targets, out)
}
