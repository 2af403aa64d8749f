//! Negative zeros of the Airy function.
//!
//! `Ai(-x) = (sqrt(x)/3) [J_{1/3}(zeta) + J_{-1/3}(zeta)]` with
//! `zeta = 2/3 x^{3/2}`; the fractional-order Bessel functions are evaluated by
//! their ascending series for small `zeta` and by Hankel's expansion otherwise.

use std::f64::consts::PI;

use super::reference::{hankel, series_sum};
use crate::error::{Error, Result};

const GAMMA_4_3: f64 = 0.892_979_511_569_249_2;
const GAMMA_2_3: f64 = 1.354_117_939_426_400_4;
const SERIES_LIMIT: f64 = 15.0;

/// Leading-order magnitude `(3 pi m / 2)^{2/3}` of the `m`-th negative zero.
pub fn airy_zero_estimate(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("Airy zeros are indexed from m = 1".into()));
    }
    Ok((1.5 * PI * f64::from(m)).powf(2.0 / 3.0))
}

fn j_third(sign: f64, zeta: f64) -> f64 {
    let nu = sign / 3.0;
    if zeta <= SERIES_LIMIT {
        let gamma = if sign > 0.0 { GAMMA_4_3 } else { GAMMA_2_3 };
        let half = 0.5 * zeta;
        series_sum(nu, half * half, half.powf(nu) / gamma)
    } else {
        hankel(nu, zeta)
    }
}

/// `Ai(-x)` for `x >= 0`.
pub fn airy_ai_neg(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "Ai(-x) needs finite x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        // Ai(0) = 1 / (3^{2/3} Gamma(2/3))
        return Ok(1.0 / (3f64.powf(2.0 / 3.0) * GAMMA_2_3));
    }
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    Ok(x.sqrt() / 3.0 * (j_third(1.0, zeta) + j_third(-1.0, zeta)))
}

fn asymptotic_zero(m: u32) -> f64 {
    let t = 3.0 * PI * (4.0 * f64::from(m) - 1.0) / 8.0;
    let u = 1.0 / (t * t);
    t.powf(2.0 / 3.0)
        * (1.0
            + u * (5.0 / 48.0
                - u * (5.0 / 36.0 - u * (77125.0 / 82944.0 - u * 108_056_875.0 / 6_967_296.0))))
}

/// Absolute value of the `m`-th negative zero of `Ai`, refined by bisection of
/// the Bessel representation inside a bracket around the asymptotic estimate.
pub fn airy_zero(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("Airy zeros are indexed from m = 1".into()));
    }
    let guess = asymptotic_zero(m);
    let half_width = 0.25 * PI / guess.sqrt();
    let (mut lo, mut hi) = (guess - half_width, guess + half_width);
    let mut f_lo = airy_ai_neg(lo)?;
    let f_hi = airy_ai_neg(hi)?;
    if f_lo * f_hi > 0.0 {
        return Err(Error::Numerical(format!(
            "no sign change around Airy zero m={m}"
        )));
    }
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        let f_mid = airy_ai_neg(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
