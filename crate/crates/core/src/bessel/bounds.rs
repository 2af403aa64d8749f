//! Uniform (Landau) and pointwise (Krasikov) upper bounds on `|J_n|`.

use std::f64::consts::PI;

use super::Order;
use crate::error::{Error, Result};

/// Landau's constant `b` in `|J_n(x)| < b n^{-1/3}`.
pub const LANDAU_B: f64 = 0.674885;

pub fn landau_bound(order: Order) -> Result<f64> {
    if order.get() == 0 {
        return Err(Error::Domain("Landau bound needs n >= 1".into()));
    }
    Ok(LANDAU_B / order.as_f64().cbrt())
}

fn mu(n: f64) -> f64 {
    (2.0 * n + 1.0) * (2.0 * n + 3.0)
}

/// `sqrt(mu + mu^{2/3}) / 2` with `mu = (2n+1)(2n+3)`.
pub fn krasikov_threshold(order: Order) -> f64 {
    let m = mu(order.as_f64());
    (m + m.powf(2.0 / 3.0)).sqrt() / 2.0
}

/// Right-hand side of Krasikov's inequality, an upper bound for `J_n(x)^2`.
pub fn krasikov_bound(order: Order, x: f64) -> Result<f64> {
    if order.get() == 0 {
        return Err(Error::Domain("Krasikov bound needs n >= 1".into()));
    }
    let threshold = krasikov_threshold(order);
    if !(x > threshold) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "Krasikov bound needs x > {threshold} for n={order}, got {x}"
        )));
    }
    let n = order.as_f64();
    let m = mu(n);
    let four_x2 = 4.0 * x * x;
    let num = 4.0 * (four_x2 - (2.0 * n + 1.0) * (2.0 * n + 5.0));
    let den = PI * ((four_x2 - m).powf(1.5) - m);
    Ok(num / den)
}

/// Whether `krasikov_bound(n, .)` is non-increasing on `[x, inf)`.
///
/// With `s = sqrt(4x^2 - mu)` and `d = 2(2n+1)` the derivative has the sign of
/// `g(s) = -s^3/2 + 3 d s / 2 - mu`, which decreases for `s >= sqrt(d)`.
pub fn krasikov_tail_decreasing(order: Order, x: f64) -> bool {
    if order.get() == 0 || !(x > krasikov_threshold(order)) {
        return false;
    }
    let n = order.as_f64();
    let m = mu(n);
    let d = 2.0 * (2.0 * n + 1.0);
    let s = (4.0 * x * x - m).sqrt();
    s >= d.sqrt() && (-0.5 * s * s * s + 1.5 * d * s - m) <= 0.0
}
