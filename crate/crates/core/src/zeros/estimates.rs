use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::{airy_bracket, BoundaryCondition, ZeroFinder};
use crate::bessel::Order;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateCheck {
    pub m: u32,
    pub k: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl EstimateCheck {
    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub n: Order,
    pub bc: BoundaryCondition,
    pub checks: Vec<EstimateCheck>,
    /// Smallest m in the range from which every check holds; `None` if the
    /// last one fails.
    pub m0: Option<u32>,
}

impl EstimateReport {
    pub fn failures(&self) -> impl Iterator<Item = &EstimateCheck> {
        self.checks.iter().filter(|c| !c.holds())
    }
}

/// Check the two-sided Airy-type estimates against computed zeros.
pub fn verify_zero_estimates(
    finder: &ZeroFinder,
    n: Order,
    m_range: RangeInclusive<u32>,
    bc: BoundaryCondition,
) -> Result<EstimateReport> {
    if n.get() == 0 {
        return Err(Error::Domain("zero estimates need n >= 1".into()));
    }
    if *m_range.start() == 0 || m_range.is_empty() {
        return Err(Error::Index(format!("bad m range {m_range:?}")));
    }
    let mut checks = Vec::new();
    for m in m_range {
        let k = finder.find_zero(n, m, bc)?.k;
        let (lower, upper) = airy_bracket(n, m, bc).expect("n >= 1");
        checks.push(EstimateCheck {
            m,
            k,
            lower,
            upper,
            lower_ok: lower < k,
            upper_ok: k < upper,
        });
    }
    let m0 = match checks.iter().rposition(|c| !c.holds()) {
        None => Some(checks[0].m),
        Some(i) if i + 1 < checks.len() => Some(checks[i + 1].m),
        Some(_) => None,
    };
    Ok(EstimateReport { n, bc, checks, m0 })
}
