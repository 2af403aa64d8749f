//! Growth exponents `log ||F||_inf / log lambda` along `m = floor(n^gamma)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::{MAX_ARGUMENT, MAX_ORDER};
use crate::modes::{DiskModes, ModeIndex};
use crate::output::{fmt_sig17, parse_f64};
use crate::zeros::{BoundaryCondition, ZeroFinder};
use crate::{Error, Result};

/// Largest `m` any table row is allowed to reach. Rows are cut at
/// `n <= M_CAP^{1/gamma}`, which gives `n <= 20` for `gamma = 4`.
pub const TABLE_M_CAP: u64 = 160_000;
/// Points on the default n-grid.
pub const DEFAULT_BUDGET: usize = 12;
/// Default largest order for tables and exponent runs.
pub const DEFAULT_N_MAX: u32 = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaPath {
    pub gamma: f64,
    pub bc: BoundaryCondition,
    pub n_values: Vec<u32>,
}

impl GammaPath {
    pub fn m_values(&self) -> Result<Vec<u32>> {
        self.n_values
            .iter()
            .map(|&n| path_m(self.gamma, n))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentSample {
    pub n: u32,
    pub m: u32,
    pub lambda: f64,
    pub sup_norm: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiEstimate {
    /// Intercept `a` of `ratio = a + b / log(lambda)`.
    pub phi: f64,
    pub slope: f64,
    /// Ratio at the largest `lambda`, not extrapolated.
    pub last_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalBound {
    pub lower: f64,
    pub conjectured: Option<f64>,
    pub exact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaReport {
    pub gamma: f64,
    pub bc: BoundaryCondition,
    pub samples: Vec<ExponentSample>,
    pub phi_estimate: f64,
    pub fit_slope: f64,
    pub last_ratio: f64,
    pub theoretical_lower: f64,
    pub conjectured: Option<f64>,
    pub exact: Option<f64>,
}

impl GammaReport {
    /// `phi_estimate >= lower - slack`.
    pub fn estimate_respects_lower(&self, slack: f64) -> bool {
        self.phi_estimate >= self.theoretical_lower - slack
    }

    /// Samples outside `[lower - slack, 1/4 + slack]`.
    pub fn ratios_outside_bounds(&self, slack: f64) -> Vec<ExponentSample> {
        self.samples
            .iter()
            .filter(|s| s.ratio < self.theoretical_lower - slack || s.ratio > 0.25 + slack)
            .copied()
            .collect()
    }

    /// Samples above the `1/4 + slack` ceiling.
    pub fn ratios_above_ceiling(&self, slack: f64) -> Vec<ExponentSample> {
        self.samples
            .iter()
            .filter(|s| s.ratio > 0.25 + slack)
            .copied()
            .collect()
    }
}

/// `max(1, floor(n^gamma))`, exact for integer powers despite rounding in `powf`.
pub fn path_m(gamma: f64, n: u32) -> Result<u32> {
    let v = floor_power(f64::from(n), gamma);
    if v > f64::from(u32::MAX) {
        return Err(Error::Capacity(format!(
            "m = floor({n}^{gamma}) does not fit a 32-bit index"
        )));
    }
    Ok((v as u32).max(1))
}

fn floor_power(base: f64, exp: f64) -> f64 {
    let v = base.powf(exp);
    let r = v.round();
    // powf is within a few ulps for exact integer powers
    if (v - r).abs() <= 8.0 * f64::EPSILON * r.max(1.0) {
        r
    } else {
        v.floor()
    }
}

/// Largest `n` with `n^gamma <= TABLE_M_CAP`, capped at `n_max`.
pub fn row_n_max(gamma: f64, n_max: u32) -> u32 {
    if gamma <= 0.0 {
        return n_max;
    }
    let cap = floor_power(TABLE_M_CAP as f64, 1.0 / gamma);
    if cap >= f64::from(n_max) {
        n_max
    } else {
        cap as u32
    }
}

/// Start of the default grid: `max(8, n_max / 32)`.
pub fn default_n_min(n_max: u32) -> u32 {
    8.max(n_max / 32)
}

/// Up to `budget` geometrically spaced orders in `[2, n_max]`.
pub fn build_path(
    gamma: f64,
    n_max: u32,
    bc: BoundaryCondition,
    budget: usize,
) -> Result<GammaPath> {
    build_path_between(gamma, 2, n_max, bc, budget)
}

/// Up to `budget` geometrically spaced orders in `[n_min, n_max]`; entries that
/// would not increase `lambda` are dropped.
pub fn build_path_between(
    gamma: f64,
    n_min: u32,
    n_max: u32,
    bc: BoundaryCondition,
    budget: usize,
) -> Result<GammaPath> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!(
            "gamma must be finite and >= 0, got {gamma}"
        )));
    }
    if n_max < 4 {
        return Err(Error::Domain(format!("n_max must be >= 4, got {n_max}")));
    }
    if budget < 8 {
        return Err(Error::Domain(format!("budget must be >= 8, got {budget}")));
    }
    let n_min = n_min.max(2);
    if n_min > n_max {
        return Err(Error::Path(format!("n range [{n_min}, {n_max}] is empty")));
    }
    let ratio = f64::from(n_max) / f64::from(n_min);
    let mut n_values: Vec<u32> = Vec::with_capacity(budget);
    let mut last_m = 0u32;
    for i in 0..budget {
        let t = i as f64 / (budget - 1) as f64;
        let n = if i + 1 == budget {
            n_max
        } else {
            (f64::from(n_min) * ratio.powf(t)).round() as u32
        };
        if n_values.last().is_some_and(|&p| p >= n) {
            continue;
        }
        // k_{n,m} grows strictly in n and in m, so this keeps lambda increasing
        let m = path_m(gamma, n)?;
        if m < last_m {
            continue;
        }
        last_m = m;
        n_values.push(n);
    }
    if n_values.is_empty() {
        return Err(Error::Path(format!(
            "no admissible orders for gamma={gamma}"
        )));
    }
    Ok(GammaPath {
        gamma,
        bc,
        n_values,
    })
}

/// Least-squares fit of `ratio = a + b / log(lambda)`.
pub fn estimate_phi(samples: &[ExponentSample]) -> Result<PhiEstimate> {
    if samples.len() < 4 {
        return Err(Error::Estimator(format!(
            "need at least 4 samples, got {}",
            samples.len()
        )));
    }
    if samples
        .iter()
        .any(|s| !(s.lambda > 1.0) || !s.ratio.is_finite())
    {
        return Err(Error::Estimator(
            "every sample needs lambda > 1 and a finite ratio".into(),
        ));
    }
    let xs: Vec<f64> = samples.iter().map(|s| 1.0 / s.lambda.ln()).collect();
    let k = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / k;
    let ym = samples.iter().map(|s| s.ratio).sum::<f64>() / k;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, s) in xs.iter().zip(samples) {
        sxx += (x - xm) * (x - xm);
        sxy += (x - xm) * (s.ratio - ym);
    }
    if !(sxx > 1e-28 * xm * xm) {
        return Err(Error::Estimator("all samples share the same lambda".into()));
    }
    let slope = sxy / sxx;
    let last = samples
        .iter()
        .max_by(|a, b| a.lambda.total_cmp(&b.lambda))
        .expect("non-empty");
    Ok(PhiEstimate {
        phi: ym - slope * xm,
        slope,
        last_ratio: last.ratio,
    })
}

/// Proven lower bound, conjectured value and exact value of `phi(gamma)`.
pub fn theoretical_bound(gamma: f64, bc: BoundaryCondition) -> Result<TheoreticalBound> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!(
            "gamma must be finite and >= 0, got {gamma}"
        )));
    }
    let law = 0.25 - 1.0 / (6.0 * gamma);
    Ok(match bc {
        BoundaryCondition::Dirichlet => {
            if gamma < 1.0 {
                TheoreticalBound {
                    lower: f64::max((1.0 - gamma) / 6.0, gamma / 12.0),
                    conjectured: None,
                    exact: None,
                }
            } else if gamma <= 3.0 {
                TheoreticalBound {
                    lower: 1.0 / 12.0,
                    conjectured: (gamma < 3.0).then_some(law),
                    exact: None,
                }
            } else {
                TheoreticalBound {
                    lower: law,
                    conjectured: None,
                    exact: Some(law),
                }
            }
        }
        BoundaryCondition::Neumann => {
            if gamma < 1.0 {
                TheoreticalBound {
                    lower: (2.0 - gamma) / 12.0,
                    conjectured: None,
                    exact: None,
                }
            } else {
                TheoreticalBound {
                    lower: 1.0 / 12.0,
                    conjectured: Some(law),
                    exact: None,
                }
            }
        }
    })
}

/// Table gammas with their display labels.
pub fn table_gammas(bc: BoundaryCondition) -> &'static [(&'static str, f64)] {
    match bc {
        BoundaryCondition::Dirichlet => &[
            ("0", 0.0),
            ("1/2", 0.5),
            ("2/3", 2.0 / 3.0),
            ("3/4", 0.75),
            ("1", 1.0),
            ("3/2", 1.5),
            ("7/4", 1.75),
            ("2", 2.0),
            ("4", 4.0),
        ],
        BoundaryCondition::Neumann => &[
            ("1", 1.0),
            ("5/4", 1.25),
            ("3/2", 1.5),
            ("7/4", 1.75),
            ("2", 2.0),
            ("5/2", 2.5),
            ("3", 3.0),
            ("4", 4.0),
        ],
    }
}

/// Pipeline over a shared zero finder with order/argument caps.
#[derive(Debug, Clone, Copy)]
pub struct Explorer<'a> {
    zeros: &'a ZeroFinder,
    n_cap: u32,
    x_cap: f64,
}

impl<'a> Explorer<'a> {
    pub fn new(zeros: &'a ZeroFinder) -> Self {
        Explorer {
            zeros,
            n_cap: MAX_ORDER,
            x_cap: MAX_ARGUMENT,
        }
    }

    /// Tighter caps than the evaluator's own limits.
    pub fn with_caps(mut self, n_cap: u32, x_cap: f64) -> Result<Self> {
        if n_cap > MAX_ORDER || !(x_cap > 0.0) || x_cap > MAX_ARGUMENT {
            return Err(Error::Domain(format!(
                "caps must satisfy n_cap <= {MAX_ORDER} and 0 < x_cap <= {MAX_ARGUMENT:e}"
            )));
        }
        self.n_cap = n_cap;
        self.x_cap = x_cap;
        Ok(self)
    }

    fn check_caps(&self, n: u32, m: u32) -> Result<()> {
        if n > self.n_cap {
            return Err(Error::Capacity(format!(
                "(n={n}, m={m}): order exceeds cap {}",
                self.n_cap
            )));
        }
        // McMahon's leading term bounds k_{n,m} from above
        let k_bound = (f64::from(m) + 0.5 * f64::from(n)) * PI;
        if k_bound > self.x_cap {
            return Err(Error::Capacity(format!(
                "(n={n}, m={m}): zero near {k_bound:.3e} exceeds argument cap {:e}",
                self.x_cap
            )));
        }
        Ok(())
    }

    /// One sample per order on the path, in path order.
    pub fn exponent_samples(&self, path: &GammaPath) -> Result<Vec<ExponentSample>> {
        let ms = path.m_values()?;
        for (&n, &m) in path.n_values.iter().zip(&ms) {
            self.check_caps(n, m)?;
        }
        let modes = DiskModes::new(self.zeros);
        path.n_values
            .par_iter()
            .zip(ms.par_iter())
            .map(|(&n, &m)| {
                let p = modes.profile(ModeIndex::new(n, m, path.bc))?;
                let lambda = p.k * p.k;
                Ok(ExponentSample {
                    n,
                    m,
                    lambda,
                    sup_norm: p.sup_norm,
                    ratio: p.sup_norm.ln() / lambda.ln(),
                })
            })
            .collect()
    }

    /// Default-grid run: `DEFAULT_BUDGET` points from `max(8, N/32)` to `N`,
    /// where `N = row_n_max(gamma, n_max)`.
    pub fn report(&self, gamma: f64, bc: BoundaryCondition, n_max: u32) -> Result<GammaReport> {
        let top = row_n_max(gamma, n_max);
        let path = build_path_between(gamma, default_n_min(top), top, bc, DEFAULT_BUDGET)?;
        self.report_for_path(&path)
    }

    pub fn report_for_path(&self, path: &GammaPath) -> Result<GammaReport> {
        let samples = self.exponent_samples(path)?;
        let est = estimate_phi(&samples)?;
        let bound = theoretical_bound(path.gamma, path.bc)?;
        Ok(GammaReport {
            gamma: path.gamma,
            bc: path.bc,
            samples,
            phi_estimate: est.phi,
            fit_slope: est.slope,
            last_ratio: est.last_ratio,
            theoretical_lower: bound.lower,
            conjectured: bound.conjectured,
            exact: bound.exact,
        })
    }

    /// One row per table gamma; rows that hit a cap are marked skipped.
    pub fn reproduce_table(&self, bc: BoundaryCondition, n_max: u32) -> Result<GrowthTable> {
        let mut rows = Vec::new();
        for &(label, gamma) in table_gammas(bc) {
            let top = row_n_max(gamma, n_max);
            let bound = theoretical_bound(gamma, bc)?;
            let mut row = TableRow {
                gamma_label: label.to_string(),
                gamma,
                status: RowStatus::Skipped,
                n_min: default_n_min(top),
                n_max: top,
                samples: 0,
                phi_estimate: None,
                last_ratio: None,
                min_ratio: None,
                max_ratio: None,
                theoretical: bound.exact.unwrap_or(bound.lower),
                conjectured: bound.conjectured,
            };
            match self.report(gamma, bc, n_max) {
                Ok(rep) => {
                    row.status = RowStatus::Computed;
                    row.samples = rep.samples.len();
                    row.phi_estimate = Some(rep.phi_estimate);
                    row.last_ratio = Some(rep.last_ratio);
                    row.min_ratio = rep.samples.iter().map(|s| s.ratio).min_by(f64::total_cmp);
                    row.max_ratio = rep.samples.iter().map(|s| s.ratio).max_by(f64::total_cmp);
                }
                Err(Error::Capacity(_)) | Err(Error::Path(_)) => {}
                Err(e) => return Err(e),
            }
            rows.push(row);
        }
        Ok(GrowthTable { bc, rows })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Computed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub gamma_label: String,
    pub gamma: f64,
    pub status: RowStatus,
    pub n_min: u32,
    pub n_max: u32,
    pub samples: usize,
    pub phi_estimate: Option<f64>,
    pub last_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    /// Exact value where known, otherwise the proven lower bound.
    pub theoretical: f64,
    pub conjectured: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub bc: BoundaryCondition,
    pub rows: Vec<TableRow>,
}

pub const TABLE_HEADER: &str = "gamma,gamma_value,status,n_min,n_max,samples,phi_estimate,phi_inverse,last_ratio,min_ratio,max_ratio,theoretical,theoretical_inverse,conjectured,conjectured_inverse";

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig17).unwrap_or_default()
}

fn inv(x: Option<f64>) -> String {
    x.map(|v| fmt_sig17(1.0 / v)).unwrap_or_default()
}

impl GrowthTable {
    /// CSV with one row per gamma; ratios also given as `x` in `1/x`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(TABLE_HEADER);
        s.push('\n');
        for r in &self.rows {
            let status = match r.status {
                RowStatus::Computed => "computed",
                RowStatus::Skipped => "skipped",
            };
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.gamma_label,
                fmt_sig17(r.gamma),
                status,
                r.n_min,
                r.n_max,
                r.samples,
                opt(r.phi_estimate),
                inv(r.phi_estimate),
                opt(r.last_ratio),
                opt(r.min_ratio),
                opt(r.max_ratio),
                fmt_sig17(r.theoretical),
                fmt_sig17(1.0 / r.theoretical),
                opt(r.conjectured),
                inv(r.conjectured),
            )
            .expect("write to string");
        }
        s
    }

    pub fn from_csv(bc: BoundaryCondition, text: &str) -> Result<Self> {
        let bad = |detail: String| Error::Parse {
            path: "<table>".into(),
            detail,
        };
        let mut lines = text.lines();
        if lines.next() != Some(TABLE_HEADER) {
            return Err(bad("missing or unexpected header".into()));
        }
        let num = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                parse_f64(s).map(Some)
            }
        };
        let int =
            |s: &str| -> Result<u64> { s.parse().map_err(|_| bad(format!("bad integer '{s}'"))) };
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 15 {
                return Err(bad(format!(
                    "expected 15 fields, got {}: '{line}'",
                    f.len()
                )));
            }
            let status = match f[2] {
                "computed" => RowStatus::Computed,
                "skipped" => RowStatus::Skipped,
                other => return Err(bad(format!("bad status '{other}'"))),
            };
            rows.push(TableRow {
                gamma_label: f[0].to_string(),
                gamma: parse_f64(f[1])?,
                status,
                n_min: int(f[3])? as u32,
                n_max: int(f[4])? as u32,
                samples: int(f[5])? as usize,
                phi_estimate: num(f[6])?,
                last_ratio: num(f[8])?,
                min_ratio: num(f[9])?,
                max_ratio: num(f[10])?,
                theoretical: parse_f64(f[11])?,
                conjectured: num(f[13])?,
            });
        }
        Ok(GrowthTable { bc, rows })
    }
}
