use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Response distribution family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Gaussian,
    Binomial,
}

/// A regression problem: covariate matrix, response, column labels, family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Dataset {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub names: Vec<String>,
    pub family: Family,
}

impl Dataset {
    /// Validates shapes and values: n >= 2, p >= 1, all finite, binomial y in {0,1}.
    pub fn new(
        x: DMatrix<f64>,
        y: DVector<f64>,
        names: Vec<String>,
        family: Family,
    ) -> Result<Self> {
        let (n, p) = (x.nrows(), x.ncols());
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
        }
        if p < 1 {
            return Err(Error::InvalidArgument("need p >= 1".into()));
        }
        if y.len() != n {
            return Err(Error::Dimension(format!(
                "x has {n} rows but y has {} entries",
                y.len()
            )));
        }
        if names.len() != p {
            return Err(Error::Dimension(format!(
                "x has {p} columns but {} names given",
                names.len()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "non-finite value in data".into(),
            ));
        }
        if family == Family::Binomial && y.iter().any(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::InvalidArgument(
                "binomial response must be 0 or 1".into(),
            ));
        }
        Ok(Dataset { x, y, names, family })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// New dataset containing only the given rows, in the given order.
    pub fn subset_rows(&self, rows: &[usize]) -> Dataset {
        let x = DMatrix::from_fn(rows.len(), self.p(), |i, j| self.x[(rows[i], j)]);
        let y = DVector::from_fn(rows.len(), |i, _| self.y[rows[i]]);
        Dataset {
            x,
            y,
            names: self.names.clone(),
            family: self.family,
        }
    }

    /// New dataset containing only the given columns, in the given order.
    pub fn subset_cols(&self, cols: &[usize]) -> Dataset {
        let x = DMatrix::from_fn(self.n(), cols.len(), |i, j| self.x[(i, cols[j])]);
        let names = cols.iter().map(|&j| self.names[j].clone()).collect();
        Dataset {
            x,
            y: self.y.clone(),
            names,
            family: self.family,
        }
    }
}

/// Denominator convention for column standard deviations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdConvention {
    /// Denominator n-1 (default; matches conventional software).
    Sample,
    /// Denominator n.
    Population,
}

/// Inverse transform for a standardized dataset.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StandardizationRecord {
    pub scale: Vec<f64>,
    pub center_x: Vec<f64>,
    pub center_y: Option<f64>,
    pub convention: SdConvention,
}

impl StandardizationRecord {
    /// Reconstructs the original data from its standardized form.
    pub fn invert(&self, d: &Dataset) -> Dataset {
        let mut x = d.x.clone();
        for j in 0..d.p() {
            for i in 0..d.n() {
                x[(i, j)] = x[(i, j)] * self.scale[j] + self.center_x[j];
            }
        }
        let y = match self.center_y {
            Some(cy) => d.y.map(|v| v + cy),
            None => d.y.clone(),
        };
        Dataset {
            x,
            y,
            names: d.names.clone(),
            family: d.family,
        }
    }

    /// Maps coefficients fit on the standardized scale back to raw-unit
    /// coefficients and intercept.
    pub fn destandardize(&self, coefs: &[f64], intercept: f64) -> (Vec<f64>, f64) {
        let raw: Vec<f64> = coefs
            .iter()
            .zip(&self.scale)
            .map(|(b, s)| b / s)
            .collect();
        let mut a = intercept + self.center_y.unwrap_or(0.0);
        for (b_raw, m) in raw.iter().zip(&self.center_x) {
            a -= b_raw * m;
        }
        (raw, a)
    }
}

fn column_mean_sd(col: &[f64], convention: SdConvention) -> (f64, f64) {
    let n = col.len() as f64;
    let mean = col.iter().sum::<f64>() / n;
    // two-pass sum of squared deviations for numerical stability
    let ss: f64 = col.iter().map(|v| (v - mean) * (v - mean)).sum();
    let denom = match convention {
        SdConvention::Sample => n - 1.0,
        SdConvention::Population => n,
    };
    (mean, (ss / denom).sqrt())
}

/// Centers each covariate column and scales it to unit sample standard
/// deviation (denominator n-1); for gaussian data the response is
/// mean-centered as well. Returns the transformed data and the record
/// needed to invert the transform.
pub fn standardize(d: &Dataset) -> Result<(Dataset, StandardizationRecord)> {
    standardize_with(d, SdConvention::Sample)
}

/// `standardize` with an explicit standard-deviation denominator convention.
pub fn standardize_with(
    d: &Dataset,
    convention: SdConvention,
) -> Result<(Dataset, StandardizationRecord)> {
    let (n, p) = (d.n(), d.p());
    let mut x = d.x.clone();
    let mut scale = Vec::with_capacity(p);
    let mut center_x = Vec::with_capacity(p);
    for j in 0..p {
        let col: Vec<f64> = d.x.column(j).iter().copied().collect();
        let (mean, sd) = column_mean_sd(&col, convention);
        if sd <= 0.0 || !sd.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "column {} has zero variance",
                d.names[j]
            )));
        }
        for i in 0..n {
            x[(i, j)] = (x[(i, j)] - mean) / sd;
        }
        scale.push(sd);
        center_x.push(mean);
    }
    let (y, center_y) = match d.family {
        Family::Gaussian => {
            let cy = d.y.iter().sum::<f64>() / n as f64;
            (d.y.map(|v| v - cy), Some(cy))
        }
        Family::Binomial => (d.y.clone(), None),
    };
    Ok((
        Dataset {
            x,
            y,
            names: d.names.clone(),
            family: d.family,
        },
        StandardizationRecord {
            scale,
            center_x,
            center_y,
            convention,
        },
    ))
}

/// Parses a comma-delimited table with a header row. The named response
/// column becomes y; every other column becomes a covariate, file order
/// preserved.
pub fn load_csv(path: &std::path::Path, response: &str, family: Family) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    load_csv_reader(file, response, family)
}

/// `load_csv` over an in-memory string.
pub fn load_csv_str(content: &str, response: &str, family: Family) -> Result<Dataset> {
    load_csv_reader(content.as_bytes(), response, family)
}

/// `load_csv` over any reader.
pub fn load_csv_reader<R: std::io::Read>(
    reader: R,
    response: &str,
    family: Family,
) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .map(|s| s.to_string())
        .collect();
    let y_idx = headers
        .iter()
        .position(|h| h == response)
        .ok_or_else(|| Error::Parse(format!("response column '{response}' not found")))?;
    let names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != y_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut y_vals: Vec<f64> = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.len() != headers.len() {
            return Err(Error::Parse(format!(
                "row {} has {} fields, expected {}",
                line + 2,
                record.len(),
                headers.len()
            )));
        }
        let mut row = Vec::with_capacity(headers.len() - 1);
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                Error::Parse(format!(
                    "non-numeric value '{}' in column {} row {}",
                    field,
                    headers[j],
                    line + 2
                ))
            })?;
            if j == y_idx {
                y_vals.push(v);
            } else {
                row.push(v);
            }
        }
        rows.push(row);
    }
    let n = rows.len();
    let p = headers.len() - 1;
    if n == 0 || p == 0 {
        return Err(Error::Parse("empty table".into()));
    }
    let x = DMatrix::from_fn(n, p, |i, j| rows[i][j]);
    Dataset::new(x, DVector::from_vec(y_vals), names, family)
}

/// Bundled prostate data: 97 prostatectomy records, response lpsa
/// (log prostate-specific antigen), eight clinical covariates.
pub fn builtin_prostate() -> Dataset {
    load_csv_str(
        include_str!("../data/prostate.csv"),
        "lpsa",
        Family::Gaussian,
    )
    .expect("bundled prostate data is valid")
}

/// Bundled body-composition data: 252 records, response siri (percent
/// body fat), thirteen body measurements. The widely documented
/// height misprint in record 42 is corrected in the bundled file;
/// use `prepare_bodyfat` to drop the two influential records before
/// analysis.
pub fn builtin_bodyfat() -> Dataset {
    load_csv_str(include_str!("../data/bodyfat.csv"), "siri", Family::Gaussian)
        .expect("bundled body fat data is valid")
}

/// Drops the two influential records (original 1-based rows 39 and 216)
/// from the 252-row body-composition dataset.
pub fn prepare_bodyfat(d: &Dataset) -> Result<Dataset> {
    if d.n() != 252 {
        return Err(Error::InvalidArgument(format!(
            "expected the 252-row body fat dataset, got {} rows",
            d.n()
        )));
    }
    let keep: Vec<usize> = (0..252).filter(|&i| i != 38 && i != 215).collect();
    Ok(d.subset_rows(&keep))
}

/// Generates a high-dimensional problem with AR(1) column correlation
/// `rho`: column j is rho * column (j-1) + sqrt(1-rho^2) * fresh noise,
/// so each column is marginally standard normal and cor(x_j, x_k) =
/// rho^|j-k|. The first `k_true` coefficients are nonzero with
/// alternating signs, scaled so the linear predictor has variance `snr`
/// relative to unit noise. Binomial responses are drawn through the
/// logistic link. Deterministic given `seed`.
pub fn make_synthetic_highdim(
    n: usize,
    p: usize,
    k_true: usize,
    rho: f64,
    snr: f64,
    seed: u64,
    family: Family,
) -> Result<Dataset> {
    if n < 10 {
        return Err(Error::InvalidArgument(format!("need n >= 10, got {n}")));
    }
    if k_true > p || k_true == 0 {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k_true <= p, got k_true={k_true}, p={p}"
        )));
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= rho < 1, got {rho}"
        )));
    }
    if snr <= 0.0 || !snr.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need snr > 0, got {snr}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let cross = (1.0 - rho * rho).sqrt();
    let mut x = DMatrix::zeros(n, p);
    for i in 0..n {
        let mut prev: f64 = normal.sample(&mut rng);
        x[(i, 0)] = prev;
        for j in 1..p {
            let z: f64 = normal.sample(&mut rng);
            prev = rho * prev + cross * z;
            x[(i, j)] = prev;
        }
    }

    // beta'Sigma beta with Sigma_jk = rho^|j-k| over the signal block
    let signs: Vec<f64> = (0..k_true)
        .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let mut signal_var = 0.0;
    for a in 0..k_true {
        for b in 0..k_true {
            signal_var += signs[a] * signs[b] * rho.powi((a as i32 - b as i32).abs());
        }
    }
    let amp = (snr / signal_var).sqrt();
    let mut beta = DVector::zeros(p);
    for j in 0..k_true {
        beta[j] = amp * signs[j];
    }
    let eta = &x * &beta;

    let y = match family {
        Family::Gaussian => {
            DVector::from_fn(n, |i, _| {
                let z: f64 = normal.sample(&mut rng);
                eta[i] + z
            })
        }
        Family::Binomial => DVector::from_fn(n, |i, _| {
            let prob = 1.0 / (1.0 + (-eta[i]).exp());
            if rng.gen::<f64>() < prob {
                1.0
            } else {
                0.0
            }
        }),
    };
    let names = (1..=p).map(|j| format!("x{j}")).collect();
    Dataset::new(x, y, names, family)
}

/// A partition of n observations into K cross-validation folds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FoldAssignment {
    /// Fold label in 0..k for each observation.
    pub fold_of: Vec<usize>,
    pub k: usize,
    pub seed: u64,
}

impl FoldAssignment {
    /// Row indices of the held-out fold and of its training complement.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (i, &f) in self.fold_of.iter().enumerate() {
            if f == fold {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (train, test)
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &f in &self.fold_of {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Randomly partitions n observations into K folds whose sizes differ by
/// at most one. Deterministic given (n, K, seed).
pub fn assign_folds(n: usize, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= K <= n, got K={k}, n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    // Fisher-Yates
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut fold_of = vec![0usize; n];
    for (pos, &obs) in perm.iter().enumerate() {
        fold_of[obs] = pos % k;
    }
    Ok(FoldAssignment { fold_of, k, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn toy(xcol: &[f64]) -> Dataset {
        let n = xcol.len();
        let x = DMatrix::from_column_slice(n, 1, xcol);
        let y = DVector::from_fn(n, |i, _| i as f64);
        Dataset::new(x, y, vec!["a".into()], Family::Gaussian).unwrap()
    }

    #[test]
    fn standardize_unit_sd_column() {
        let d = toy(&[1.0, 2.0, 3.0]);
        let (s, rec) = standardize(&d).unwrap();
        assert_abs_diff_eq!(rec.scale[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rec.center_x[0], 2.0, epsilon = 1e-15);
        let col: Vec<f64> = s.x.column(0).iter().copied().collect();
        assert_abs_diff_eq!(col[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(col[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(col[2], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn standardize_scale_two() {
        let d = toy(&[0.0, 2.0, 4.0]);
        let (s, rec) = standardize(&d).unwrap();
        assert_abs_diff_eq!(rec.scale[0], 2.0, epsilon = 1e-15);
        let col: Vec<f64> = s.x.column(0).iter().copied().collect();
        assert_eq!(col, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn standardize_population_convention() {
        let d = toy(&[1.0, 2.0, 3.0]);
        let (_, rec) = standardize_with(&d, SdConvention::Population).unwrap();
        assert_abs_diff_eq!(rec.scale[0], (2.0f64 / 3.0).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn standardize_centers_gaussian_response() {
        let d = toy(&[1.0, 2.0, 3.0]);
        let (s, rec) = standardize(&d).unwrap();
        assert_abs_diff_eq!(rec.center_y.unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.y.iter().sum::<f64>(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn standardize_zero_variance_names_column() {
        let x = DMatrix::from_column_slice(3, 2, &[1.0, 2.0, 3.0, 5.0, 5.0, 5.0]);
        let y = DVector::zeros(3);
        let d = Dataset::new(x, y, vec!["good".into(), "flat".into()], Family::Gaussian).unwrap();
        let err = standardize(&d).unwrap_err();
        assert!(err.to_string().contains("flat"));
    }

    #[test]
    fn bodyfat_abdomen_scale_matches_two_pass_sd() {
        let d = builtin_bodyfat();
        let (_, rec) = standardize(&d).unwrap();
        let j = d.names.iter().position(|s| s == "abdomen").unwrap();
        let col: Vec<f64> = d.x.column(j).iter().copied().collect();
        let mean = col.iter().sum::<f64>() / col.len() as f64;
        let sd =
            (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (col.len() as f64 - 1.0)).sqrt();
        assert_abs_diff_eq!(rec.scale[j], sd, epsilon = 1e-12);
    }

    #[test]
    fn round_trip_bodyfat() {
        let d = builtin_bodyfat();
        let (s, rec) = standardize(&d).unwrap();
        let back = rec.invert(&s);
        for (orig, rebuilt) in d.x.iter().zip(back.x.iter()) {
            let tol = 1e-12 * orig.abs().max(1.0);
            assert!((orig - rebuilt).abs() <= tol);
        }
        for (orig, rebuilt) in d.y.iter().zip(back.y.iter()) {
            assert!((orig - rebuilt).abs() <= 1e-12 * orig.abs().max(1.0));
        }
    }

    #[test]
    fn destandardize_recovers_raw_fit() {
        // raw y = 3 + 2*x exactly; standardized fit must map back to it
        let x = DMatrix::from_column_slice(4, 1, &[1.0, 2.0, 3.0, 4.0]);
        let y = DVector::from_vec(vec![5.0, 7.0, 9.0, 11.0]);
        let d = Dataset::new(x, y, vec!["a".into()], Family::Gaussian).unwrap();
        let (s, rec) = standardize(&d).unwrap();
        // on standardized scale slope = cov(xs, ys) / var(xs)
        let num: f64 = s.x.column(0).iter().zip(s.y.iter()).map(|(a, b)| a * b).sum();
        let den: f64 = s.x.column(0).iter().map(|a| a * a).sum();
        let b_std = num / den;
        let (raw, a) = rec.destandardize(&[b_std], 0.0);
        assert_abs_diff_eq!(raw[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn load_csv_small_table() {
        let d = load_csv_str("a,b,y\n1,2,3\n4,5,6\n7,8,9\n", "y", Family::Gaussian).unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.p(), 2);
        assert_eq!(d.names, vec!["a", "b"]);
        assert_eq!(d.y.as_slice(), &[3.0, 6.0, 9.0]);
        assert_eq!(d.x[(2, 0)], 7.0);
    }

    #[test]
    fn load_csv_missing_response() {
        let err = load_csv_str("a,b\n1,2\n", "y", Family::Gaussian).unwrap_err();
        assert!(err.to_string().contains("response column"));
    }

    #[test]
    fn load_csv_non_numeric_cell() {
        let err = load_csv_str("a,y\n1,2\nfoo,3\n", "y", Family::Gaussian).unwrap_err();
        assert!(err.to_string().contains("non-numeric"));
    }

    #[test]
    fn load_csv_binomial_requires_binary() {
        let err = load_csv_str("a,y\n1,0\n2,1\n3,2\n", "y", Family::Binomial).unwrap_err();
        assert!(err.to_string().contains("0 or 1"));
    }

    #[test]
    fn builtin_shapes() {
        let pr = builtin_prostate();
        assert_eq!((pr.n(), pr.p()), (97, 8));
        assert_eq!(
            pr.names,
            vec!["lcavol", "lweight", "age", "lbph", "svi", "lcp", "gleason", "pgg45"]
        );
        let bf = builtin_bodyfat();
        assert_eq!((bf.n(), bf.p()), (252, 13));
    }

    #[test]
    fn prepare_bodyfat_drops_the_two_rows() {
        let d = builtin_bodyfat();
        let out = prepare_bodyfat(&d).unwrap();
        assert_eq!(out.n(), 250);
        // independent reconstruction by filtering row indices
        let keep: Vec<usize> = (0..252).filter(|&i| i + 1 != 39 && i + 1 != 216).collect();
        for (new_i, &old_i) in keep.iter().enumerate() {
            assert_eq!(out.y[new_i], d.y[old_i]);
            for j in 0..d.p() {
                assert_eq!(out.x[(new_i, j)], d.x[(old_i, j)]);
            }
        }
    }

    #[test]
    fn prepare_bodyfat_rejects_wrong_row_count() {
        let d = builtin_bodyfat();
        let rows: Vec<usize> = (0..251).collect();
        let short = d.subset_rows(&rows);
        assert!(prepare_bodyfat(&short).is_err());
        // applying twice fails: output no longer has 252 rows
        let once = prepare_bodyfat(&d).unwrap();
        assert!(prepare_bodyfat(&once).is_err());
    }

    #[test]
    fn synthetic_shape_and_determinism() {
        let a = make_synthetic_highdim(200, 2000, 10, 0.0, 2.0, 1, Family::Binomial).unwrap();
        assert_eq!((a.n(), a.p()), (200, 2000));
        let b = make_synthetic_highdim(200, 2000, 10, 0.0, 2.0, 1, Family::Binomial).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.y, b.y);
        assert!(a.y.iter().any(|&v| v == 0.0) && a.y.iter().any(|&v| v == 1.0));
    }

    #[test]
    fn synthetic_rho_zero_has_uncorrelated_columns() {
        let d = make_synthetic_highdim(200, 40, 5, 0.0, 2.0, 7, Family::Gaussian).unwrap();
        let (s, _) = standardize(&d).unwrap();
        let n = s.n() as f64;
        let mut total = 0.0;
        let mut count = 0;
        for a in 0..s.p() {
            for b in (a + 1)..s.p() {
                let r: f64 =
                    s.x.column(a).iter().zip(s.x.column(b).iter()).map(|(u, v)| u * v).sum::<f64>()
                        / (n - 1.0);
                total += r;
                count += 1;
            }
        }
        assert!((total / count as f64).abs() < 0.05);
    }

    #[test]
    fn synthetic_ar1_correlation_decays() {
        let d = make_synthetic_highdim(4000, 3, 2, 0.6, 2.0, 3, Family::Gaussian).unwrap();
        let (s, _) = standardize(&d).unwrap();
        let n = s.n() as f64;
        let r01: f64 = s.x.column(0).iter().zip(s.x.column(1).iter()).map(|(u, v)| u * v).sum::<f64>()
            / (n - 1.0);
        let r02: f64 = s.x.column(0).iter().zip(s.x.column(2).iter()).map(|(u, v)| u * v).sum::<f64>()
            / (n - 1.0);
        assert_abs_diff_eq!(r01, 0.6, epsilon = 0.05);
        assert_abs_diff_eq!(r02, 0.36, epsilon = 0.05);
    }

    #[test]
    fn synthetic_rejects_bad_arguments() {
        assert!(make_synthetic_highdim(5, 10, 2, 0.0, 2.0, 0, Family::Gaussian).is_err());
        assert!(make_synthetic_highdim(50, 10, 11, 0.0, 2.0, 0, Family::Gaussian).is_err());
        assert!(make_synthetic_highdim(50, 10, 2, 1.0, 2.0, 0, Family::Gaussian).is_err());
        assert!(make_synthetic_highdim(50, 10, 2, -0.1, 2.0, 0, Family::Gaussian).is_err());
        assert!(make_synthetic_highdim(50, 10, 2, 0.5, 0.0, 0, Family::Gaussian).is_err());
    }

    #[test]
    fn folds_k_equals_n() {
        let f = assign_folds(10, 10, 0).unwrap();
        let sizes = f.fold_sizes();
        assert!(sizes.iter().all(|&s| s == 1));
    }

    #[test]
    fn folds_97_into_10() {
        let f = assign_folds(97, 10, 42).unwrap();
        let mut sizes = f.fold_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![9, 9, 9, 10, 10, 10, 10, 10, 10, 10]);
    }

    #[test]
    fn folds_deterministic_and_seed_sensitive() {
        let a = assign_folds(97, 10, 1).unwrap();
        let b = assign_folds(97, 10, 1).unwrap();
        let c = assign_folds(97, 10, 2).unwrap();
        assert_eq!(a.fold_of, b.fold_of);
        assert_ne!(a.fold_of, c.fold_of);
    }

    #[test]
    fn folds_reject_bad_k() {
        assert!(assign_folds(5, 6, 0).is_err());
        assert!(assign_folds(5, 1, 0).is_err());
    }

    #[test]
    fn split_partitions_everything() {
        let f = assign_folds(23, 4, 9).unwrap();
        for fold in 0..4 {
            let (train, test) = f.split(fold);
            assert_eq!(train.len() + test.len(), 23);
            let mut all: Vec<usize> = train.iter().chain(test.iter()).copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..23).collect::<Vec<_>>());
        }
    }

    proptest! {
        #[test]
        fn prop_round_trip(rows in 2usize..30, cols in 1usize..5, seed in 0u64..1000) {
            let d = make_synthetic_highdim(rows.max(10), cols, 1, 0.0, 1.0, seed, Family::Gaussian).unwrap();
            let (s, rec) = standardize(&d).unwrap();
            let back = rec.invert(&s);
            for (a, b) in d.x.iter().zip(back.x.iter()) {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }

        #[test]
        fn prop_fold_sizes_balanced(n in 4usize..200, k in 2usize..12, seed in 0u64..500) {
            prop_assume!(k <= n);
            let f = assign_folds(n, k, seed).unwrap();
            let sizes = f.fold_sizes();
            let lo = sizes.iter().min().unwrap();
            let hi = sizes.iter().max().unwrap();
            prop_assert!(hi - lo <= 1);
            prop_assert!(*lo >= 1);
        }
    }
}
