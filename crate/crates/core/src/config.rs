use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bessel::{MAX_ARGUMENT, MAX_ORDER};
use crate::zeros::{ZeroFinder, DEFAULT_TOL, MIN_TOL};
use crate::{Error, Result};

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "DISKGROWTH_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Domain(format!("unknown output format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tol: f64,
    pub n_cap: u32,
    pub x_cap: f64,
    /// `None` disables the disk cache.
    pub cache_dir: Option<PathBuf>,
    pub workers: usize,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: DEFAULT_TOL,
            n_cap: MAX_ORDER,
            x_cap: MAX_ARGUMENT,
            cache_dir: None,
            workers: 1,
            output_format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol >= MIN_TOL) || !self.tol.is_finite() {
            return Err(Error::Domain(format!(
                "tol must be >= {MIN_TOL:e}, got {}",
                self.tol
            )));
        }
        if self.workers == 0 {
            return Err(Error::Domain("workers must be >= 1".into()));
        }
        if self.n_cap > MAX_ORDER {
            return Err(Error::Domain(format!("n_cap may not exceed {MAX_ORDER}")));
        }
        if !(self.x_cap > 0.0) || self.x_cap > MAX_ARGUMENT {
            return Err(Error::Domain(format!(
                "x_cap must lie in (0, {MAX_ARGUMENT:e}]"
            )));
        }
        Ok(())
    }

    /// Zero finder honouring `tol` and `cache_dir`.
    pub fn zero_finder(&self) -> Result<ZeroFinder> {
        self.validate()?;
        let f = ZeroFinder::new(self.tol)?;
        match &self.cache_dir {
            Some(dir) => f.with_cache_dir(dir),
            None => Ok(f),
        }
    }

    /// Check an order against `n_cap`.
    pub fn check_order(&self, n: u32) -> Result<()> {
        if n > self.n_cap {
            return Err(Error::Capacity(format!(
                "order n={n} exceeds cap {}",
                self.n_cap
            )));
        }
        Ok(())
    }
}
