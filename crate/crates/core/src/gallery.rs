//! Whispering-gallery diagnostics for `gamma < 1`: smallness of the mode on
//! `r < rho = n/k` and concentration of its L² mass in the annulus `rho <= r <= 1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::{bessel_j, EvalRegime};
use crate::growth::path_m;
use crate::modes::{golden_max, DiskModes, ModeIndex};
use crate::zeros::{BoundaryCondition, C1};
use crate::{Error, Result};

/// Interior region is `[0, rho (1 - margin)]`.
pub const DEFAULT_MARGIN: f64 = 0.02;
pub const MAX_MARGIN: f64 = 0.1;

const INTERIOR_GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GalleryProfile {
    pub mode: ModeIndex,
    pub k: f64,
    pub alpha: f64,
    pub rho: f64,
    pub interior_sup: f64,
    pub interior_mass: f64,
    pub annulus_mass: f64,
    pub annulus_width: f64,
    pub margin: f64,
}

/// Leading-order annulus width `C1 n^{2 (gamma - 1) / 3}`.
pub fn predicted_width(n: u32, gamma: f64) -> f64 {
    C1 * f64::from(n).powf(2.0 * (gamma - 1.0) / 3.0)
}

pub fn gallery_profile(
    modes: &DiskModes<'_>,
    mode: ModeIndex,
    margin: f64,
) -> Result<GalleryProfile> {
    if !(0.0..=MAX_MARGIN).contains(&margin) {
        return Err(Error::Domain(format!(
            "margin {margin} outside [0, {MAX_MARGIN}]"
        )));
    }
    if mode.m >= mode.n.get() {
        return Err(Error::Domain(format!(
            "{mode} is not in the gallery regime m < n"
        )));
    }
    let p = modes.profile(mode)?;
    let nf = mode.n.as_f64();
    if !(p.k > nf) {
        return Err(Error::Numerical(format!(
            "{mode}: zero k={} not above n",
            p.k
        )));
    }
    let alpha = p.k / nf;
    let rho = 1.0 / alpha;
    let edge = rho * (1.0 - margin);
    let f = |r: f64| -> Result<f64> {
        Ok(p.norm_const * bessel_j(mode.n, p.k * r, EvalRegime::Reference)?.abs())
    };
    // coarse grid, then golden section around the best node
    let mut best = (0usize, f(0.0)?);
    for i in 1..=INTERIOR_GRID {
        let v = f(edge * i as f64 / INTERIOR_GRID as f64)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    let step = edge / INTERIOR_GRID as f64;
    let lo = step * best.0.saturating_sub(1) as f64;
    let hi = (step * (best.0 + 1) as f64).min(edge);
    let (_, refined) = golden_max(lo, hi, &f)?;
    let interior_sup = best.1.max(refined);

    let interior_mass = modes.radial_mass(mode, 0.0, rho)?;
    let annulus_mass = modes.radial_mass(mode, rho, 1.0)?;
    Ok(GalleryProfile {
        mode,
        k: p.k,
        alpha,
        rho,
        interior_sup,
        interior_mass,
        annulus_mass,
        annulus_width: 1.0 - rho,
        margin,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecaySweep {
    pub gamma: f64,
    pub bc: BoundaryCondition,
    pub profiles: Vec<GalleryProfile>,
    /// Human-readable monotonicity violations; empty when none.
    pub violations: Vec<String>,
}

impl DecaySweep {
    pub fn interior_strictly_decreasing(&self) -> bool {
        self.profiles
            .windows(2)
            .all(|w| w[1].interior_sup < w[0].interior_sup)
    }

    pub fn annulus_increasing(&self) -> bool {
        self.profiles
            .windows(2)
            .all(|w| w[1].annulus_mass > w[0].annulus_mass)
    }

    pub fn decay_fit(&self) -> Result<DecayFit> {
        let pts: Vec<(f64, f64)> = self
            .profiles
            .iter()
            .map(|p| (p.mode.n.as_f64(), p.interior_sup.ln()))
            .collect();
        fit_exponential_decay(&pts)
    }
}

pub fn decay_sweep(
    modes: &DiskModes<'_>,
    gamma: f64,
    bc: BoundaryCondition,
    n_values: &[u32],
    margin: f64,
) -> Result<DecaySweep> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Domain(format!(
            "gallery sweeps need 0 <= gamma < 1, got {gamma}"
        )));
    }
    let mut ns = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        return Err(Error::Path("no orders given for the sweep".into()));
    }
    let profiles = ns
        .par_iter()
        .map(|&n| gallery_profile(modes, ModeIndex::new(n, path_m(gamma, n)?, bc), margin))
        .collect::<Result<Vec<_>>>()?;
    let mut violations = Vec::new();
    for w in profiles.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.interior_sup > a.interior_sup {
            violations.push(format!(
                "interior_sup rises from n={} ({:e}) to n={} ({:e})",
                a.mode.n, a.interior_sup, b.mode.n, b.interior_sup
            ));
        }
        if b.annulus_mass <= a.annulus_mass {
            violations.push(format!(
                "annulus_mass does not increase from n={} ({}) to n={} ({})",
                a.mode.n, a.annulus_mass, b.mode.n, b.annulus_mass
            ));
        }
    }
    Ok(DecaySweep {
        gamma,
        bc,
        profiles,
        violations,
    })
}

/// Fit of `log(interior_sup) = intercept - c n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub c: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_exponential_decay(points: &[(f64, f64)]) -> Result<DecayFit> {
    if points.len() < 3 {
        return Err(Error::Estimator("decay fit needs at least 3 points".into()));
    }
    let k = points.len() as f64;
    let xm = points.iter().map(|p| p.0).sum::<f64>() / k;
    let ym = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - xm).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - ym).powi(2)).sum();
    if !(sxx > 0.0) || points.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::Estimator("degenerate decay fit input".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        1.0
    };
    Ok(DecayFit {
        c: -slope,
        intercept: ym - slope * xm,
        r_squared,
    })
}
