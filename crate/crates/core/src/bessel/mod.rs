//! Bessel functions of the first kind of integer order.
//!
//! [`bessel_j`] dispatches between a reference evaluator (ascending series,
//! Miller backward recurrence, Hankel large-argument expansion) and the
//! classical asymptotic developments in [`asymptotic`]. The asymptotic forms
//! are only selected when asked for explicitly; `Auto` always routes through
//! the reference evaluator.

pub mod airy;
pub mod asymptotic;
pub mod bounds;
pub(crate) mod reference;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use airy::{airy_ai_neg, airy_zero, airy_zero_estimate};
pub use asymptotic::{
    cauchy_diag, jacobi_asym, jacobi_threshold, meissel_exponent, meissel_one, meissel_terms,
    meissel_two, JacobiValue, MeisselTerms, CAUCHY_CONSTANT_LITERATURE, CAUCHY_CONSTANT_STATED,
};
pub use bounds::{
    krasikov_bound, krasikov_tail_decreasing, krasikov_threshold, landau_bound, LANDAU_B,
};

/// Largest order accepted by the evaluators.
pub const MAX_ORDER: u32 = 10_000;
/// Largest argument accepted by the evaluators.
pub const MAX_ARGUMENT: f64 = 1e9;

/// Integer Bessel order `n >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Order(pub u32);

impl Order {
    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }
}

impl From<u32> for Order {
    fn from(n: u32) -> Self {
        Order(n)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalRegime {
    /// Series / recurrence / Hankel evaluator used as the in-repo oracle.
    Reference,
    /// Ascending power series only.
    PowerSeries,
    /// Meissel's first development, `x = n z` with `z in (0, 1)`.
    MeisselOne,
    /// Meissel's second development, `x = n z` with `z > 1`.
    MeisselTwo,
    /// Leading-order Jacobi form for `x >> n^2`.
    JacobiLarge,
    Auto,
}

pub(crate) fn check_caps(n: u32, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "argument x={x} must be finite and >= 0"
        )));
    }
    if n > MAX_ORDER {
        return Err(Error::Capacity(format!(
            "order n={n} exceeds cap {MAX_ORDER}"
        )));
    }
    if x > MAX_ARGUMENT {
        return Err(Error::Capacity(format!(
            "argument x={x} exceeds cap {MAX_ARGUMENT:e}"
        )));
    }
    Ok(())
}

/// Largest argument handled by the `PowerSeries` regime.
pub fn power_series_limit(n: Order) -> f64 {
    f64::max(12.0, n.as_f64() / 2.0)
}

/// Evaluate `J_n(x)` with the requested regime.
pub fn bessel_j(order: Order, x: f64, regime: EvalRegime) -> Result<f64> {
    let n = order.get();
    check_caps(n, x)?;
    match regime {
        EvalRegime::Reference | EvalRegime::Auto => Ok(reference::bessel_j(n, x)),
        EvalRegime::PowerSeries => {
            let limit = power_series_limit(order);
            if x > limit {
                return Err(Error::Domain(format!(
                    "power series regime requires x <= {limit}, got {x}"
                )));
            }
            Ok(reference::power_series(f64::from(n), x))
        }
        EvalRegime::MeisselOne => {
            if n == 0 {
                return Err(Error::Domain("Meissel developments need n >= 1".into()));
            }
            meissel_one(order, x / order.as_f64())
        }
        EvalRegime::MeisselTwo => {
            if n == 0 {
                return Err(Error::Domain("Meissel developments need n >= 1".into()));
            }
            meissel_two(order, x / order.as_f64())
        }
        EvalRegime::JacobiLarge => jacobi_asym(order, x).map(|j| j.value),
    }
}

/// `J_n'(x)` from `(J_{n-1} - J_{n+1}) / 2`, with `J_0' = -J_1`.
pub fn bessel_j_prime(order: Order, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("derivative needs x > 0, got {x}")));
    }
    check_caps(order.get(), x)?;
    Ok(reference::triplet(order.get(), x).derivative())
}

/// Values of `J_n`, `J_n'` and `J_n''` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselJet {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

/// `J_n(x)` together with its first two derivatives (the second from
/// Bessel's equation).
pub fn bessel_jet(order: Order, x: f64) -> Result<BesselJet> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("jet needs x > 0, got {x}")));
    }
    check_caps(order.get(), x)?;
    let t = reference::triplet(order.get(), x);
    let value = t.cur;
    let first = t.derivative();
    let nf = order.as_f64();
    let second = -first / x - (1.0 - nf * nf / (x * x)) * value;
    Ok(BesselJet {
        value,
        first,
        second,
    })
}

/// `J_n(x)` and `J_{n+1}(x)` from a single reference evaluation.
pub fn bessel_j_pair(order: Order, x: f64) -> Result<(f64, f64)> {
    check_caps(order.get(), x)?;
    let t = reference::triplet(order.get(), x);
    Ok((t.cur, t.next))
}
