use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::dataset::{Dataset, Family};
use crate::error::{Error, Result};
use crate::glm::{fit_full, r_squared, r_squared_of};

/// Agreement analysis between two sets of predictions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlandAltman {
    pub mean_diff: f64,
    /// Standard deviation of the differences (denominator n-1).
    pub sd_diff: f64,
    /// Limits of agreement: mean difference +/- 2 standard deviations.
    pub loa: (f64, f64),
    /// 95% confidence interval for the mean difference.
    pub ci_mean: (f64, f64),
    pub diffs: Vec<f64>,
    /// Pairwise means, the x-axis of the agreement plot.
    pub means: Vec<f64>,
}

/// Bland-Altman agreement between paired predictions a and b
/// (differences a - b).
pub fn bland_altman(a: &[f64], b: &[f64]) -> Result<BlandAltman> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "paired comparison needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::InvalidArgument(
            "agreement analysis needs at least 2 pairs".into(),
        ));
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Numeric("nonfinite predictions".into()));
    }
    let n = a.len() as f64;
    let diffs: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
    let means: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| (x + y) / 2.0).collect();
    let mean_diff = diffs.iter().sum::<f64>() / n;
    let var = diffs
        .iter()
        .map(|d| (d - mean_diff) * (d - mean_diff))
        .sum::<f64>()
        / (n - 1.0);
    let sd_diff = var.sqrt();
    let loa = (mean_diff - 2.0 * sd_diff, mean_diff + 2.0 * sd_diff);
    let half = 1.96 * sd_diff / n.sqrt();
    Ok(BlandAltman {
        mean_diff,
        sd_diff,
        loa,
        ci_mean: (mean_diff - half, mean_diff + half),
        diffs,
        means,
    })
}

/// Relative drop in R-squared when each covariate is removed and the
/// model refitted: 100 * (R2_full - R2_without_j) / R2_full.
pub fn drop_one_r2(d: &Dataset) -> Result<Vec<f64>> {
    if d.family != Family::Gaussian {
        return Err(Error::InvalidArgument(
            "drop-one R-squared needs a gaussian response".into(),
        ));
    }
    if d.p() < 2 {
        return Err(Error::InvalidArgument(
            "drop-one comparison needs at least 2 covariates".into(),
        ));
    }
    let full = fit_full(d)?;
    let (r2_full, _) = r_squared(&full, d)?;
    if r2_full <= 0.0 {
        return Err(Error::InvalidArgument(
            "full model explains nothing; relative reductions are undefined".into(),
        ));
    }
    let mut out = Vec::with_capacity(d.p());
    for j in 0..d.p() {
        let cols: Vec<usize> = (0..d.p()).filter(|&c| c != j).collect();
        let sub = d.subset_cols(&cols);
        let f = fit_full(&sub)?;
        let (r2, _) = r_squared(&f, &sub)?;
        out.push(100.0 * (r2_full - r2) / r2_full);
    }
    Ok(out)
}

/// One fitted method in a side-by-side comparison.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub label: String,
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub selected: Vec<usize>,
    pub n_vars: usize,
    /// R-squared of this method's own (shrunken) fitted values.
    pub r2: f64,
    /// Adjusted with the selected-variable count.
    pub adj_r2: f64,
    pub notes: Vec<String>,
}

/// Methods side by side on one dataset: selection markers, coefficient
/// values, and fit summaries recomputed from each method's own fitted
/// values.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub names: Vec<String>,
    pub rows: Vec<ComparisonRow>,
}

/// Builds the comparison from (label, coefficients, intercept, notes)
/// tuples fitted elsewhere.
pub fn build_comparison(
    d: &Dataset,
    fits: &[(String, DVector<f64>, f64, Vec<String>)],
) -> Result<ComparisonTable> {
    if d.family != Family::Gaussian {
        return Err(Error::InvalidArgument(
            "fit comparisons are defined for gaussian responses".into(),
        ));
    }
    if fits.is_empty() {
        return Err(Error::InvalidArgument("no fits to compare".into()));
    }
    let mut rows = Vec::with_capacity(fits.len());
    for (label, beta, b0, notes) in fits {
        if beta.len() != d.p() {
            return Err(Error::Dimension(format!(
                "fit '{label}' has {} coefficients for {} columns",
                beta.len(),
                d.p()
            )));
        }
        let fitted = {
            let mut e = &d.x * beta;
            e.iter_mut().for_each(|v| *v += b0);
            e
        };
        let selected: Vec<usize> = (0..d.p()).filter(|&j| beta[j] != 0.0).collect();
        let (r2, adj_r2) = r_squared_of(&d.y, &fitted, selected.len())?;
        rows.push(ComparisonRow {
            label: label.clone(),
            coefficients: beta.iter().cloned().collect(),
            intercept: *b0,
            n_vars: selected.len(),
            selected,
            r2,
            adj_r2,
            notes: notes.clone(),
        });
    }
    Ok(ComparisonTable {
        names: d.names.clone(),
        rows,
    })
}

impl ComparisonTable {
    /// Selection matrix with x / - markers and fit summaries, one method
    /// per column.
    pub fn render_text(&self) -> String {
        let name_w = self
            .names
            .iter()
            .map(|n| n.len())
            .max()
            .unwrap_or(4)
            .max(8);
        let col_w = self.rows.iter().map(|r| r.label.len()).max().unwrap_or(6).max(6) + 2;
        let mut out = String::new();
        let _ = write!(out, "{:name_w$}", "variable");
        for r in &self.rows {
            let _ = write!(out, "{:>col_w$}", r.label);
        }
        out.push('\n');
        for (j, name) in self.names.iter().enumerate() {
            let _ = write!(out, "{name:name_w$}");
            for r in &self.rows {
                let mark = if r.coefficients[j] != 0.0 { "x" } else { "-" };
                let _ = write!(out, "{mark:>col_w$}");
            }
            out.push('\n');
        }
        let _ = write!(out, "{:name_w$}", "n_vars");
        for r in &self.rows {
            let _ = write!(out, "{:>col_w$}", r.n_vars);
        }
        out.push('\n');
        let _ = write!(out, "{:name_w$}", "r2");
        for r in &self.rows {
            let _ = write!(out, "{:>col_w$.3}", r.r2);
        }
        out.push('\n');
        let _ = write!(out, "{:name_w$}", "adj_r2");
        for r in &self.rows {
            let _ = write!(out, "{:>col_w$.3}", r.adj_r2);
        }
        out.push('\n');
        for r in &self.rows {
            for note in &r.notes {
                let _ = writeln!(out, "note [{}]: {note}", r.label);
            }
        }
        out
    }

    /// Long-format rows: variable, method, coefficient, selected.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("variable,method,coefficient,selected\n");
        for (j, name) in self.names.iter().enumerate() {
            for r in &self.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    csv_field(name),
                    csv_field(&r.label),
                    r.coefficients[j],
                    (r.coefficients[j] != 0.0) as u8
                );
            }
        }
        for r in &self.rows {
            let _ = writeln!(out, "r2,{},{},", csv_field(&r.label), r.r2);
            let _ = writeln!(out, "adj_r2,{},{},", csv_field(&r.label), r.adj_r2);
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Cross-validation curve rows: lambda, mean, se.
pub fn cv_curve_csv(lambdas: &[f64], mean: &[f64], se: &[f64]) -> String {
    let mut out = String::from("lambda,mean,se\n");
    for i in 0..lambdas.len() {
        let _ = writeln!(out, "{},{},{}", lambdas[i], mean[i], se[i]);
    }
    out
}

/// Agreement plot rows: pairwise mean, difference.
pub fn bland_altman_csv(ba: &BlandAltman) -> String {
    let mut out = String::from("mean,diff\n");
    for (m, d) in ba.means.iter().zip(ba.diffs.iter()) {
        let _ = writeln!(out, "{m},{d}");
    }
    out
}
