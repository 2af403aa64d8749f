//! Classical asymptotic developments of `J_n`: Meissel (both sides of the
//! turning point), Jacobi (large argument) and Cauchy (diagonal `x = n`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Order;
use crate::error::{Error, Result};

/// Leading constant of `J_n(n) n^{1/3}` in the form used by `cauchy_diag`,
/// `Gamma(1/3) / (2^{1/3} 3^{1/6} pi)`.
pub const CAUCHY_CONSTANT_STATED: f64 = 0.563_571_906_219_743_7;
/// Standard value `2^{1/3} / (3^{2/3} Gamma(2/3))`, which is what the
/// reference evaluator reproduces.
pub const CAUCHY_CONSTANT_LITERATURE: f64 = 0.447_307_318_396_472_3;

/// Correction quantities of the two Meissel developments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeisselTerms {
    /// Exponent correction `V_n` of the first development (`z < 1`), `NaN` otherwise.
    pub v_n: f64,
    /// Angle with `z = sec(beta)` for the second development (`z > 1`), `NaN` otherwise.
    pub beta: f64,
}

fn ln_factorial(n: u32) -> f64 {
    if n < 30 {
        return (2..=n).map(|k| f64::from(k).ln()).sum();
    }
    let x = f64::from(n);
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x
        + 0.5 * (2.0 * PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

pub fn meissel_terms(order: Order, z: f64) -> MeisselTerms {
    let n = order.as_f64();
    if z > 0.0 && z < 1.0 {
        let s = (1.0 - z * z).sqrt();
        MeisselTerms {
            v_n: ((2.0 + 3.0 * z * z) / (s * s * s) - 2.0) / (24.0 * n),
            beta: f64::NAN,
        }
    } else if z > 1.0 {
        MeisselTerms {
            v_n: f64::NAN,
            beta: (1.0 / z).acos(),
        }
    } else {
        MeisselTerms {
            v_n: f64::NAN,
            beta: f64::NAN,
        }
    }
}

/// Meissel's first development of `J_n(n z)` for `0 < z < 1`, including the
/// `V_n` correction.
pub fn meissel_one(order: Order, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain(format!(
            "Meissel I needs z in (0,1), got {z}"
        )));
    }
    if order.get() == 0 {
        return Err(Error::Domain("Meissel I needs n >= 1".into()));
    }
    let n = order.as_f64();
    let s = (1.0 - z * z).sqrt();
    let v = meissel_terms(order, z).v_n;
    let log_j = n * (n * z).ln() + n * s
        - v
        - n
        - ln_factorial(order.get())
        - 0.25 * (1.0 - z * z).ln()
        - n * (1.0 + s).ln();
    Ok(log_j.exp())
}

/// Exponent `f(z) = log z + sqrt(1-z^2) - log(1 + sqrt(1-z^2))` of the
/// Stirling-simplified first development, `J_n(nz) ~ e^{n f(z)}`.
pub fn meissel_exponent(z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain(format!("exponent needs z in (0,1), got {z}")));
    }
    let s = (1.0 - z * z).sqrt();
    Ok(z.ln() + s - (1.0 + s).ln())
}

/// Meissel's second development of `J_n(n z)` for `z > 1`.
pub fn meissel_two(order: Order, z: f64) -> Result<f64> {
    if !(z > 1.0) || !z.is_finite() {
        return Err(Error::Domain(format!("Meissel II needs z > 1, got {z}")));
    }
    if order.get() == 0 {
        return Err(Error::Domain("Meissel II needs n >= 1".into()));
    }
    let n = order.as_f64();
    let beta = meissel_terms(order, z).beta;
    let t = beta.tan();
    Ok(2f64.sqrt() * (n * (t - beta) - 0.25 * PI).cos() / (PI * n * t).sqrt())
}

/// Concrete cut-off for the Jacobi form, `50 max(1, n^2)`.
pub fn jacobi_threshold(order: Order) -> f64 {
    let n = order.as_f64();
    50.0 * f64::max(1.0, n * n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiValue {
    pub value: f64,
    /// Magnitude `sqrt(2/(pi x)) |4n^2 - 1| / x` of the neglected term.
    pub error_term: f64,
}

/// Leading-order Jacobi form `sqrt(2/(pi x)) cos(x - n pi/2 - pi/4)`.
pub fn jacobi_asym(order: Order, x: f64) -> Result<JacobiValue> {
    let threshold = jacobi_threshold(order);
    if !(x > threshold) {
        return Err(Error::Domain(format!(
            "Jacobi form needs x > {threshold} for n={order}, got {x}"
        )));
    }
    let n = order.as_f64();
    let amp = (2.0 / (PI * x)).sqrt();
    let (c, _) = super::reference::phase_cos_sin(n, x);
    Ok(JacobiValue {
        value: amp * c,
        error_term: amp * (4.0 * n * n - 1.0).abs() / x,
    })
}

/// Leading-order Cauchy value of `J_n(n)` with the stated constant.
pub fn cauchy_diag(order: Order) -> Result<f64> {
    if order.get() == 0 {
        return Err(Error::Domain("Cauchy formula needs n >= 1".into()));
    }
    Ok(CAUCHY_CONSTANT_STATED * order.as_f64().cbrt().recip())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_branches_meet() {
        let direct: f64 = (2..=40).map(|k| f64::from(k).ln()).sum();
        assert!((ln_factorial(40) - direct).abs() < 1e-12);
    }

    #[test]
    fn exponent_is_negative() {
        for z in [0.1, 0.5, 0.9] {
            assert!(meissel_exponent(z).unwrap() < 0.0);
        }
        assert!(meissel_exponent(1.0).is_err());
    }

    #[test]
    fn meissel_one_decays_exponentially_in_n() {
        let z = 0.5;
        let f = meissel_exponent(z).unwrap();
        for n in [10u32, 20, 40] {
            let a = meissel_one(Order(n), z).unwrap();
            let b = meissel_one(Order(2 * n), z).unwrap();
            // e^{2n f} vs (e^{n f})^2 up to algebraic prefactors
            assert!(b < a * a * (4.0 * PI * f64::from(n)).sqrt());
            assert!(b / a < (f64::from(n) * f).exp() * 2.0);
        }
    }

    #[test]
    fn meissel_two_respects_amplitude() {
        let n = 200.0;
        let beta = (0.5f64).acos();
        let amp = 2f64.sqrt() / (PI * n * beta.tan()).sqrt();
        assert!(meissel_two(Order(200), 2.0).unwrap().abs() <= amp);
        assert!(meissel_two(Order(5), 1.0).is_err());
    }

    #[test]
    fn cauchy_scaling() {
        for n in [1u32, 3, 17, 125] {
            let r = cauchy_diag(Order(8 * n)).unwrap() / cauchy_diag(Order(n)).unwrap();
            assert!((r - 0.5).abs() < 1e-15);
        }
        assert!((CAUCHY_CONSTANT_STATED / CAUCHY_CONSTANT_LITERATURE - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn jacobi_cosine_zero() {
        // n = 2: phase x - 5 pi / 4 vanishes at x = (m + 3/4) pi
        let x = (4000.0 + 0.75) * PI;
        let v = jacobi_asym(Order(2), x).unwrap();
        assert!(v.value.abs() < 1e-12);
    }
}
