//! Command pipelines behind the CLI, returning the exact bytes to write.
//!
//! CSV uses a header row, `.` decimals and 17 significant digits; JSON keys are
//! snake_case. Nothing here depends on time, locale or execution order.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bessel::{bessel_j, bessel_j_prime, EvalRegime, Order};
use crate::config::{OutputFormat, RunConfig};
use crate::gallery::{decay_sweep, DecayFit, GalleryProfile};
use crate::growth::{Explorer, ExponentSample, GammaReport};
use crate::modes::{DiskModes, ModeIndex};
use crate::output::fmt_sig17;
use crate::zeros::{BoundaryCondition, ZeroFinder};
use crate::{Error, Result};

/// Main output plus an optional JSON side document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub data: String,
    pub summary: Option<String>,
}

impl CommandOutput {
    fn data(data: String) -> Self {
        CommandOutput {
            data,
            summary: None,
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Numerical(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Everything a command needs: validated config and its zero finder.
#[derive(Debug)]
pub struct Session {
    pub config: RunConfig,
    pub zeros: ZeroFinder,
}

impl Session {
    pub fn new(config: RunConfig) -> Result<Self> {
        let zeros = config.zero_finder()?;
        Ok(Session { config, zeros })
    }

    fn explorer(&self) -> Result<Explorer<'_>> {
        Explorer::new(&self.zeros).with_caps(self.config.n_cap, self.config.x_cap)
    }

    /// Rows `m,k,lambda` for `m = 1..=m_max`.
    pub fn zeros(&self, n: u32, m_max: u32, bc: BoundaryCondition) -> Result<CommandOutput> {
        self.config.check_order(n)?;
        let table = self.zeros.zero_table(Order(n), m_max, bc)?;
        if let Some(last) = table.last() {
            if last.k > self.config.x_cap {
                return Err(Error::Capacity(format!(
                    "k_{{{n},{m_max}}} = {} exceeds argument cap {:e}",
                    last.k, self.config.x_cap
                )));
            }
        }
        Ok(CommandOutput::data(match self.config.output_format {
            OutputFormat::Csv => {
                let mut s = String::from("m,k,lambda\n");
                for p in &table {
                    writeln!(s, "{},{},{}", p.mode.m, fmt_sig17(p.k), fmt_sig17(p.lambda)).unwrap();
                }
                s
            }
            OutputFormat::Json => to_json(&table)?,
        }))
    }

    /// `J_n(x)` (or `J_n'(x)`) in the requested regime.
    pub fn eval(
        &self,
        n: u32,
        x: f64,
        regime: EvalRegime,
        derivative: bool,
    ) -> Result<CommandOutput> {
        self.config.check_order(n)?;
        let value = if derivative {
            bessel_j_prime(Order(n), x)?
        } else {
            bessel_j(Order(n), x, regime)?
        };
        #[derive(Serialize)]
        struct Row {
            n: u32,
            x: f64,
            regime: EvalRegime,
            derivative: bool,
            value: f64,
        }
        let regime_name = serde_json::to_value(regime)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        Ok(CommandOutput::data(match self.config.output_format {
            OutputFormat::Csv => format!(
                "n,x,regime,derivative,value\n{n},{},{regime_name},{derivative},{}\n",
                fmt_sig17(x),
                fmt_sig17(value)
            ),
            OutputFormat::Json => to_json(&Row {
                n,
                x,
                regime,
                derivative,
                value,
            })?,
        }))
    }

    /// Line `n,m,k,lambda,supnorm,ratio`.
    pub fn supnorm(&self, n: u32, m: u32, bc: BoundaryCondition) -> Result<CommandOutput> {
        self.config.check_order(n)?;
        let p = DiskModes::new(&self.zeros).profile(ModeIndex::new(n, m, bc))?;
        let lambda = p.k * p.k;
        let ratio = p.sup_norm.ln() / lambda.ln();
        #[derive(Serialize)]
        struct Row {
            n: u32,
            m: u32,
            k: f64,
            lambda: f64,
            supnorm: f64,
            ratio: f64,
            sup_location: f64,
        }
        Ok(CommandOutput::data(match self.config.output_format {
            OutputFormat::Csv => format!(
                "n,m,k,lambda,supnorm,ratio\n{n},{m},{},{},{},{}\n",
                fmt_sig17(p.k),
                fmt_sig17(lambda),
                fmt_sig17(p.sup_norm),
                fmt_sig17(ratio)
            ),
            OutputFormat::Json => to_json(&Row {
                n,
                m,
                k: p.k,
                lambda,
                supnorm: p.sup_norm,
                ratio,
                sup_location: p.sup_location,
            })?,
        }))
    }

    /// Samples along the default grid plus a JSON summary.
    pub fn exponents(
        &self,
        gamma: f64,
        bc: BoundaryCondition,
        n_max: u32,
    ) -> Result<CommandOutput> {
        let report = self.explorer()?.report(gamma, bc, n_max)?;
        let summary = ExponentSummary::from(&report);
        Ok(match self.config.output_format {
            OutputFormat::Csv => CommandOutput {
                data: samples_csv(&report.samples),
                summary: Some(to_json(&summary)?),
            },
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Full<'a> {
                    summary: &'a ExponentSummary,
                    samples: &'a [ExponentSample],
                }
                CommandOutput::data(to_json(&Full {
                    summary: &summary,
                    samples: &report.samples,
                })?)
            }
        })
    }

    pub fn table(&self, bc: BoundaryCondition, n_max: u32) -> Result<CommandOutput> {
        let t = self.explorer()?.reproduce_table(bc, n_max)?;
        Ok(CommandOutput::data(match self.config.output_format {
            OutputFormat::Csv => t.to_csv(),
            OutputFormat::Json => to_json(&t)?,
        }))
    }

    pub fn gallery(
        &self,
        gamma: f64,
        bc: BoundaryCondition,
        n_list: &[u32],
        margin: f64,
    ) -> Result<CommandOutput> {
        for &n in n_list {
            self.config.check_order(n)?;
        }
        let sweep = decay_sweep(&DiskModes::new(&self.zeros), gamma, bc, n_list, margin)?;
        let fit = if sweep.profiles.len() >= 3 {
            sweep.decay_fit().ok()
        } else {
            None
        };
        #[derive(Serialize)]
        struct Summary<'a> {
            gamma: f64,
            bc: BoundaryCondition,
            margin: f64,
            interior_strictly_decreasing: bool,
            annulus_increasing: bool,
            violations: &'a [String],
            decay_fit: Option<DecayFit>,
        }
        let summary = Summary {
            gamma,
            bc,
            margin,
            interior_strictly_decreasing: sweep.interior_strictly_decreasing(),
            annulus_increasing: sweep.annulus_increasing(),
            violations: &sweep.violations,
            decay_fit: fit,
        };
        Ok(match self.config.output_format {
            OutputFormat::Csv => CommandOutput {
                data: gallery_csv(&sweep.profiles),
                summary: Some(to_json(&summary)?),
            },
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Full<'a> {
                    summary: Summary<'a>,
                    profiles: &'a [GalleryProfile],
                }
                CommandOutput::data(to_json(&Full {
                    profiles: &sweep.profiles,
                    summary,
                })?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentSummary {
    pub gamma: f64,
    pub bc: BoundaryCondition,
    pub n_min: u32,
    pub n_max: u32,
    pub samples: usize,
    pub phi_estimate: f64,
    pub phi_inverse: f64,
    pub fit_slope: f64,
    pub last_ratio: f64,
    pub theoretical_lower: f64,
    pub conjectured: Option<f64>,
    pub exact: Option<f64>,
    pub estimate_respects_lower: bool,
    pub ratios_above_ceiling: usize,
    pub ratios_below_lower: usize,
}

impl From<&GammaReport> for ExponentSummary {
    fn from(r: &GammaReport) -> Self {
        let slack = 0.02;
        ExponentSummary {
            gamma: r.gamma,
            bc: r.bc,
            n_min: r.samples.first().map_or(0, |s| s.n),
            n_max: r.samples.last().map_or(0, |s| s.n),
            samples: r.samples.len(),
            phi_estimate: r.phi_estimate,
            phi_inverse: 1.0 / r.phi_estimate,
            fit_slope: r.fit_slope,
            last_ratio: r.last_ratio,
            theoretical_lower: r.theoretical_lower,
            conjectured: r.conjectured,
            exact: r.exact,
            estimate_respects_lower: r.estimate_respects_lower(slack),
            ratios_above_ceiling: r.ratios_above_ceiling(slack).len(),
            ratios_below_lower: r
                .samples
                .iter()
                .filter(|s| s.ratio < r.theoretical_lower - slack)
                .count(),
        }
    }
}

pub fn samples_csv(samples: &[ExponentSample]) -> String {
    let mut rows: Vec<&ExponentSample> = samples.iter().collect();
    rows.sort_by_key(|s| (s.n, s.m));
    let mut s = String::from("n,m,lambda,sup_norm,ratio\n");
    for r in rows {
        writeln!(
            s,
            "{},{},{},{},{}",
            r.n,
            r.m,
            fmt_sig17(r.lambda),
            fmt_sig17(r.sup_norm),
            fmt_sig17(r.ratio)
        )
        .unwrap();
    }
    s
}

pub fn gallery_csv(profiles: &[GalleryProfile]) -> String {
    let mut rows: Vec<&GalleryProfile> = profiles.iter().collect();
    rows.sort_by_key(|p| (p.mode.n, p.mode.m));
    let mut s = String::from("n,m,k,alpha,rho,interior_sup,annulus_mass,annulus_width\n");
    for p in rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            p.mode.n,
            p.mode.m,
            fmt_sig17(p.k),
            fmt_sig17(p.alpha),
            fmt_sig17(p.rho),
            fmt_sig17(p.interior_sup),
            fmt_sig17(p.annulus_mass),
            fmt_sig17(p.annulus_width)
        )
        .unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_csv() {
        let s = Session::new(RunConfig::default()).unwrap();
        let out = s.zeros(0, 3, BoundaryCondition::Dirichlet).unwrap();
        let lines: Vec<&str> = out.data.lines().collect();
        assert_eq!(lines[0], "m,k,lambda");
        assert!(lines[1].starts_with("1,2.40482555769577"));
        assert!(lines[3].starts_with("3,8.6537279129110"));
    }

    #[test]
    fn supnorm_line() {
        let s = Session::new(RunConfig::default()).unwrap();
        let out = s.supnorm(0, 1, BoundaryCondition::Dirichlet).unwrap();
        let row: Vec<f64> = out
            .data
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert!((row[4] - 1.08676).abs() < 1e-5);
        assert!((row[5] - row[4].ln() / row[3].ln()).abs() < 1e-15);
    }

    #[test]
    fn gallery_rejects_gamma_one() {
        let s = Session::new(RunConfig::default()).unwrap();
        assert!(s
            .gallery(1.0, BoundaryCondition::Dirichlet, &[20, 40], 0.05)
            .unwrap_err()
            .is_usage());
    }

    #[test]
    fn json_keys_are_snake_case() {
        let s = Session::new(RunConfig {
            output_format: OutputFormat::Json,
            ..RunConfig::default()
        })
        .unwrap();
        let out = s.supnorm(2, 3, BoundaryCondition::Neumann).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.data).unwrap();
        assert!(v.get("sup_location").is_some() && v.get("supnorm").is_some());
    }
}
