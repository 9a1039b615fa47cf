use std::path::{Path, PathBuf};

use garrote::{
    builtin_bodyfat, builtin_prostate, load_csv, make_synthetic_highdim, prepare_bodyfat,
    standardize_with, Dataset, Error, Family, Result, SdConvention, StandardizationRecord,
};

use crate::args::{DataOpts, FamilyArg};

const DATA_DIR_ENV: &str = "GARROTE_DATA_DIR";

/// Synthetic high-dimensional design: 286 observations, 2000 AR(1)
/// covariates, 20 signal columns, binary response.
pub const HIGHDIM_N: usize = 286;
pub const HIGHDIM_P: usize = 2000;
pub const HIGHDIM_K: usize = 20;
pub const HIGHDIM_RHO: f64 = 0.3;
pub const HIGHDIM_SNR: f64 = 2.0;
pub const HIGHDIM_SEED_SALT: u64 = 0xDA7A;

pub struct LoadedData {
    pub data: Dataset,
    pub record: StandardizationRecord,
    /// Short label for file names and reports.
    pub label: String,
}

fn from_dir(dir: &str, file: &str, response: &str, family: Family) -> Result<Dataset> {
    let path = PathBuf::from(dir).join(file);
    if !path.exists() {
        return Err(Error::InvalidArgument(format!(
            "{DATA_DIR_ENV} is set but {} is missing",
            path.display()
        )));
    }
    load_csv(&path, response, family)
}

fn builtin(name: &str) -> Result<Dataset> {
    let dir = std::env::var(DATA_DIR_ENV).ok();
    match name {
        "prostate" => match dir {
            Some(d) => from_dir(&d, "prostate.csv", "lpsa", Family::Gaussian),
            None => Ok(builtin_prostate()),
        },
        "bodyfat" => {
            let raw = match dir {
                Some(d) => from_dir(&d, "bodyfat.csv", "siri", Family::Gaussian)?,
                None => builtin_bodyfat(),
            };
            prepare_bodyfat(&raw)
        }
        _ => unreachable!(),
    }
}

fn last_header_column(path: &Path) -> Result<String> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| Error::Parse(format!("cannot open {}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse(format!("cannot read header of {}: {e}", path.display())))?;
    headers
        .iter()
        .last()
        .map(|s| s.trim().to_string())
        .ok_or_else(|| Error::Parse(format!("{} has no header columns", path.display())))
}

fn from_path(path: &str, opts: &DataOpts) -> Result<(Dataset, String)> {
    let p = Path::new(path);
    let family = match opts.family {
        FamilyArg::Gaussian => Family::Gaussian,
        FamilyArg::Binomial => Family::Binomial,
    };
    let response = match &opts.response {
        Some(r) => r.clone(),
        None => last_header_column(p)?,
    };
    let label = p
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("data")
        .to_string();
    Ok((load_csv(p, &response, family)?, label))
}

/// Synthesizes the high-dimensional binary dataset for a master seed.
pub fn synth_highdim(seed: u64) -> Result<Dataset> {
    make_synthetic_highdim(
        HIGHDIM_N,
        HIGHDIM_P,
        HIGHDIM_K,
        HIGHDIM_RHO,
        HIGHDIM_SNR,
        garrote::derive_seed(seed, HIGHDIM_SEED_SALT),
        Family::Binomial,
    )
}

/// Resolves --data (built-in name, synthetic, or CSV path), then
/// standardizes covariates to unit population standard deviation;
/// gaussian responses are mean-centered.
pub fn load(opts: &DataOpts) -> Result<LoadedData> {
    let (raw, label) = match opts.data.as_str() {
        "prostate" => (builtin("prostate")?, "prostate".to_string()),
        "bodyfat" => (builtin("bodyfat")?, "bodyfat".to_string()),
        "highdim-synthetic" => (synth_highdim(opts.seed)?, "highdim-synthetic".to_string()),
        path => from_path(path, opts)?,
    };
    let (data, record) = standardize_with(&raw, SdConvention::Population)?;
    Ok(LoadedData {
        data,
        record,
        label,
    })
}
