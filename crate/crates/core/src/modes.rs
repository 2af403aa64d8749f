//! L²-normalised eigenfunctions of the unit disk, cosine family.
//!
//! Dirichlet: `F = c J_n(k r) / J_{n+1}(k) cos(n theta)`,
//! Neumann: `F = c (1 - n^2/k^2)^{-1/2} J_n(k r) / J_n(k) cos(n theta)`,
//! with `c = sqrt(1/pi)` for `n = 0` and `sqrt(2/pi)` otherwise.

use std::f64::consts::{FRAC_1_PI, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bessel::{
    bessel_j, bessel_j_pair, krasikov_bound, krasikov_tail_decreasing, krasikov_threshold,
    EvalRegime, Order,
};
use crate::quadrature::GaussLegendre;
use crate::zeros::{BoundaryCondition, ZeroFinder};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeIndex {
    pub n: Order,
    pub m: u32,
    pub bc: BoundaryCondition,
}

impl ModeIndex {
    pub fn new(n: u32, m: u32, bc: BoundaryCondition) -> Self {
        ModeIndex { n: Order(n), m, bc }
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, m={}, {})", self.n, self.m, self.bc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeProfile {
    pub mode: ModeIndex,
    pub k: f64,
    /// Positive prefactor multiplying `|J_n(k r) cos(n theta)|`.
    pub norm_const: f64,
    pub sup_norm: f64,
    pub sup_location: f64,
}

/// Radial factor `coef * J_n(k r)`; `coef` carries the sign of the
/// normalising Bessel value.
#[derive(Debug, Clone, Copy)]
struct Radial {
    n: Order,
    k: f64,
    coef: f64,
}

impl Radial {
    fn at(&self, r: f64) -> Result<f64> {
        Ok(self.coef * bessel_j(self.n, self.k * r, EvalRegime::Reference)?)
    }
}

fn angular_norm(n: Order) -> f64 {
    if n.get() == 0 {
        FRAC_1_PI.sqrt()
    } else {
        (2.0 * FRAC_1_PI).sqrt()
    }
}

/// `int_0^{2 pi} cos^2(n theta) d theta`
fn angular_integral(n: Order) -> f64 {
    if n.get() == 0 {
        2.0 * PI
    } else {
        PI
    }
}

/// Mode evaluation on top of a shared [`ZeroFinder`].
#[derive(Debug, Clone, Copy)]
pub struct DiskModes<'a> {
    zeros: &'a ZeroFinder,
}

impl<'a> DiskModes<'a> {
    pub fn new(zeros: &'a ZeroFinder) -> Self {
        DiskModes { zeros }
    }

    pub fn zeros(&self) -> &'a ZeroFinder {
        self.zeros
    }

    fn radial(&self, mode: ModeIndex) -> Result<Radial> {
        if mode.m == 0 {
            return Err(Error::Index(format!("mode {mode}: m must be >= 1")));
        }
        let n = mode.n;
        let k = self.zeros.find_zero(n, mode.m, mode.bc)?.k;
        let (jn, jn1) = bessel_j_pair(n, k)?;
        let a = angular_norm(n);
        let coef = match mode.bc {
            BoundaryCondition::Dirichlet => a / jn1,
            BoundaryCondition::Neumann => {
                let nf = n.as_f64();
                a / ((1.0 - nf * nf / (k * k)).sqrt() * jn)
            }
        };
        if !coef.is_finite() {
            return Err(Error::Numerical(format!(
                "mode {mode}: normalisation overflow"
            )));
        }
        Ok(Radial { n, k, coef })
    }

    /// `F(r, theta)` for the cosine family.
    pub fn eigenfunction_value(&self, mode: ModeIndex, r: f64, theta: f64) -> Result<f64> {
        check_radius(r)?;
        let rad = self.radial(mode)?;
        Ok(rad.at(r)? * (mode.n.as_f64() * theta).cos())
    }

    /// Radial factor at each radius (the `theta = 0` section).
    pub fn radial_profile(&self, mode: ModeIndex, r_grid: &[f64]) -> Result<Vec<f64>> {
        let rad = self.radial(mode)?;
        r_grid
            .iter()
            .map(|&r| {
                check_radius(r)?;
                rad.at(r)
            })
            .collect()
    }

    /// `int_D F^2 dA` by Gauss-Legendre in `r`, exact in `theta`.
    pub fn l2_norm_check(&self, mode: ModeIndex) -> Result<f64> {
        self.inner_product(mode, mode)
    }

    /// `int_D F_a F_b dA` for two modes of the same order.
    pub fn inner_product(&self, a: ModeIndex, b: ModeIndex) -> Result<f64> {
        if a.n != b.n {
            return Ok(0.0);
        }
        let ra = self.radial(a)?;
        let rb = self.radial(b)?;
        let nodes = 64.max(4 * (a.m.max(b.m) as usize + a.n.get() as usize));
        let g = GaussLegendre::new(nodes)?;
        let radial = g.integrate(0.0, 1.0, |r| Ok(ra.at(r)? * rb.at(r)? * r))?;
        let v = radial * angular_integral(a.n);
        if !v.is_finite() {
            return Err(Error::Numerical(format!("quadrature for {a} not finite")));
        }
        Ok(v)
    }

    /// Radial mass `int_{r0}^{r1} F^2 r dr dtheta` by composite Gauss-Legendre.
    pub fn radial_mass(&self, mode: ModeIndex, r0: f64, r1: f64) -> Result<f64> {
        let rad = self.radial(mode)?;
        let g = GaussLegendre::new(16)?;
        // about four panels per half-oscillation of J_n(k r) on the piece
        let panels = (((r1 - r0) * rad.k / PI).ceil() as usize * 4).clamp(4, 1 << 16);
        let v = g.integrate_composite(r0, r1, panels, |r| {
            let f = rad.at(r)?;
            Ok(f * f * r)
        })?;
        Ok(v * angular_integral(mode.n))
    }

    /// `(sup |F|, radius of the maximum)`.
    pub fn sup_norm(&self, mode: ModeIndex) -> Result<(f64, f64)> {
        let p = self.profile(mode)?;
        Ok((p.sup_norm, p.sup_location))
    }

    pub fn profile(&self, mode: ModeIndex) -> Result<ModeProfile> {
        let rad = self.radial(mode)?;
        let (peak, x) = self.max_abs_j(mode, rad.k)?;
        let norm_const = rad.coef.abs();
        Ok(ModeProfile {
            mode,
            k: rad.k,
            norm_const,
            sup_norm: norm_const * peak,
            sup_location: (x / rad.k).clamp(0.0, 1.0),
        })
    }

    /// `max |J_n(x)|` over `x in [0, k]` and where it is attained.
    ///
    /// Extrema of `J_n` are the zeros of `J_n'`; they are visited in order and
    /// the walk stops once the Krasikov envelope, decreasing from that point
    /// on, drops below the best value found.
    fn max_abs_j(&self, mode: ModeIndex, k: f64) -> Result<(f64, f64)> {
        let n = mode.n;
        if n.get() == 0 {
            // |J_0| <= 1 = J_0(0)
            return Ok((1.0, 0.0));
        }
        let eval = |x: f64| -> Result<f64> { Ok(bessel_j(n, x, EvalRegime::Reference)?.abs()) };
        let mut best = (eval(k)?, k, 0u32);
        let threshold = krasikov_threshold(n);
        for i in 1.. {
            let kp = self.zeros.find_zero(n, i, BoundaryCondition::Neumann)?.k;
            if kp > k {
                break;
            }
            let v = eval(kp)?;
            if v > best.0 {
                best = (v, kp, i);
            }
            if kp > threshold
                && krasikov_tail_decreasing(n, kp)
                && krasikov_bound(n, kp)?.sqrt() < best.0
            {
                break;
            }
        }
        if best.2 == 0 {
            return Ok((best.0, best.1));
        }
        // golden-section confirmation between the neighbouring zeros of J_n
        let i = best.2;
        let lo = if i == 1 {
            0.0
        } else {
            self.zeros
                .find_zero(n, i - 1, BoundaryCondition::Dirichlet)?
                .k
        };
        let hi = self
            .zeros
            .find_zero(n, i, BoundaryCondition::Dirichlet)?
            .k
            .min(k);
        let (gx, gv) = golden_max(lo, hi, &eval)?;
        if gv > best.0 {
            Ok((gv, gx))
        } else {
            Ok((best.0, best.1))
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} outside [0, 1]")));
    }
    Ok(())
}

/// Maximum of a unimodal function on `[a, b]`.
pub(crate) fn golden_max<F: Fn(f64) -> Result<f64>>(a: f64, b: f64, f: &F) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if (b - a).abs() <= 1e-12 * b.abs().max(1.0) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc > fd { (c, fc) } else { (d, fd) })
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: BoundaryCondition = BoundaryCondition::Dirichlet;
    const N: BoundaryCondition = BoundaryCondition::Neumann;

    #[test]
    fn ground_state_value_at_centre() {
        let z = ZeroFinder::default();
        let dm = DiskModes::new(&z);
        let v = dm
            .eigenfunction_value(ModeIndex::new(0, 1, D), 0.0, 0.0)
            .unwrap();
        let want = FRAC_1_PI.sqrt() / 0.5191474972894669;
        assert!((v - want).abs() < 1e-12, "{v} vs {want}");
        let (s, at) = dm.sup_norm(ModeIndex::new(0, 1, D)).unwrap();
        assert!((s - 1.08676).abs() < 1e-5 && at == 0.0);
    }

    #[test]
    fn dirichlet_boundary_vanishes() {
        let z = ZeroFinder::default();
        let dm = DiskModes::new(&z);
        for (n, m) in [(0, 4), (3, 2), (17, 9)] {
            let mode = ModeIndex::new(n, m, D);
            let p = dm.profile(mode).unwrap();
            let v = dm.eigenfunction_value(mode, 1.0, 0.3).unwrap();
            assert!(v.abs() < 1e-9 * p.norm_const);
        }
    }

    #[test]
    fn neumann_nodal_direction() {
        let z = ZeroFinder::default();
        let dm = DiskModes::new(&z);
        let mode = ModeIndex::new(4, 2, N);
        let v = dm.eigenfunction_value(mode, 0.7, PI / 8.0).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn normalisation() {
        let z = ZeroFinder::default();
        let dm = DiskModes::new(&z);
        assert!((dm.l2_norm_check(ModeIndex::new(0, 1, D)).unwrap() - 1.0).abs() < 1e-8);
        assert!((dm.l2_norm_check(ModeIndex::new(10, 10, D)).unwrap() - 1.0).abs() < 1e-6);
        assert!((dm.l2_norm_check(ModeIndex::new(1, 1, N)).unwrap() - 1.0).abs() < 1e-6);
        assert!((dm.l2_norm_check(ModeIndex::new(0, 3, N)).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn sup_at_first_derivative_zero() {
        let z = ZeroFinder::default();
        let dm = DiskModes::new(&z);
        let mode = ModeIndex::new(20, 5, D);
        let p = dm.profile(mode).unwrap();
        let k1 = z.find_zero(Order(20), 1, N).unwrap().k;
        assert!((p.sup_location - k1 / p.k).abs() < 1e-9);
    }

    #[test]
    fn sup_matches_dense_grid() {
        let z = ZeroFinder::default();
        let dm = DiskModes::new(&z);
        for mode in [
            ModeIndex::new(7, 12, D),
            ModeIndex::new(3, 6, N),
            ModeIndex::new(30, 2, N),
        ] {
            let p = dm.profile(mode).unwrap();
            let grid: Vec<f64> = (0..=20_000).map(|i| i as f64 / 20_000.0).collect();
            let g = dm
                .radial_profile(mode, &grid)
                .unwrap()
                .into_iter()
                .fold(0.0f64, |acc, v| acc.max(v.abs()));
            assert!(g <= p.sup_norm * (1.0 + 1e-12));
            assert!(
                (p.sup_norm - g) / p.sup_norm < 1e-6,
                "{mode}: {} vs {g}",
                p.sup_norm
            );
        }
    }

    #[test]
    fn radius_checked() {
        let z = ZeroFinder::default();
        let dm = DiskModes::new(&z);
        assert!(matches!(
            dm.eigenfunction_value(ModeIndex::new(1, 1, D), 1.5, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            dm.eigenfunction_value(ModeIndex::new(0, 0, N), 0.5, 0.0),
            Err(Error::Index(_))
        ));
    }
}
