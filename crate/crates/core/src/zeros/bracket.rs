//! Bracket construction for the m-th zero.
//!
//! Index certification for `J_n` zeros uses the Debye phase
//! `psi(x) = sqrt(x^2 - n^2) - n arccos(n/x)`: the m-th zero sits at
//! `psi = (m - 1/4) pi` up to a small error (below `0.02 pi` for every order and
//! index we have checked), so a bracket whose endpoints have phases in
//! `((m - 1) pi, (m + 1/2) pi)` cannot contain any neighbouring zero.

use std::f64::consts::{FRAC_PI_4, PI};

use super::{BoundaryCondition, BracketSource, ZeroBracket};
use crate::bessel::reference;
use crate::bessel::Order;
use crate::{Error, Result};

/// `(9 pi^2)^{1/3} / 2`
pub const C1: f64 = 2.230_920_474_450_711_6;
/// `9 (3 pi^4)^{1/3} / 40`
pub const C2: f64 = 1.493_101_848_997_016_4;

/// Airy-type brackets are tried only when narrower than this.
const AIRY_MAX_WIDTH: f64 = 0.4 * PI;

/// Two-sided zero estimate `(lower, upper)` for order `n >= 1`.
///
/// Dirichlet: `n + C1 m^{2/3} n^{1/3} < k < n + C1 m^{2/3} n^{1/3} + C2 m^{4/3} n^{-1/3}`.
/// Neumann uses `(m - 1)^{2/3}` in the lower bound.
pub fn airy_bracket(n: Order, m: u32, bc: BoundaryCondition) -> Option<(f64, f64)> {
    if n.get() == 0 || m == 0 {
        return None;
    }
    let nf = n.as_f64();
    let mf = f64::from(m);
    let main = nf + C1 * mf.powf(2.0 / 3.0) * nf.cbrt();
    let upper = main + C2 * mf.powf(4.0 / 3.0) / nf.cbrt();
    let lower = match bc {
        BoundaryCondition::Dirichlet => main,
        BoundaryCondition::Neumann => nf + C1 * (mf - 1.0).powf(2.0 / 3.0) * nf.cbrt(),
    };
    Some((lower, upper))
}

/// McMahon's large-zero expansion (three correction terms).
///
/// For Neumann `n = 0` this is the expansion of `j_{1,m}`, since the trivial
/// zero of `J_0'` is not counted.
pub fn mcmahon_estimate(n: Order, m: u32, bc: BoundaryCondition) -> f64 {
    let nf = n.as_f64();
    let mf = f64::from(m);
    match bc {
        BoundaryCondition::Neumann if n.get() == 0 => {
            mcmahon_estimate(Order(1), m, BoundaryCondition::Dirichlet)
        }
        BoundaryCondition::Dirichlet => {
            let mu = 4.0 * nf * nf;
            let b = (mf + 0.5 * nf - 0.25) * PI;
            let e = 8.0 * b;
            b - (mu - 1.0) / e
                - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e.powi(3))
                - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * e.powi(5))
        }
        BoundaryCondition::Neumann => {
            let mu = 4.0 * nf * nf;
            let b = (mf + 0.5 * nf - 0.75) * PI;
            let e = 8.0 * b;
            b - (mu + 3.0) / e
                - 4.0 * (7.0 * mu * mu + 82.0 * mu - 9.0) / (3.0 * e.powi(3))
                - 32.0 * (83.0 * mu.powi(3) + 2075.0 * mu * mu - 3039.0 * mu + 3537.0)
                    / (15.0 * e.powi(5))
        }
    }
}

/// Debye phase of `J_n` at `x`; zero for `x <= n`.
pub fn debye_phase(n: Order, x: f64) -> f64 {
    let nf = n.as_f64();
    if n.get() == 0 {
        return x.max(0.0);
    }
    if x <= nf {
        return 0.0;
    }
    let s = ((x - nf) * (x + nf)).sqrt();
    s - nf * (nf / x).acos()
}

/// Smallest `x >= n` with `debye_phase(n, x) >= target`.
fn phase_inverse(n: Order, target: f64) -> f64 {
    let nf = n.as_f64();
    if target <= 0.0 {
        return nf;
    }
    if n.get() == 0 {
        return target;
    }
    // psi(x) >= x - n pi/2
    let (mut a, mut b) = (nf, nf + target + nf * PI / 2.0 + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if debye_phase(n, mid) < target {
            a = mid;
        } else {
            b = mid;
        }
    }
    b
}

fn opposite(a: f64, b: f64) -> bool {
    (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)
}

fn index_window_ok(n: Order, m: u32, lo: f64, hi: f64) -> bool {
    let mf = f64::from(m);
    debye_phase(n, lo) > (mf - 1.0) * PI && debye_phase(n, hi) < (mf + 0.5) * PI
}

fn certified_dirichlet(n: Order, m: u32, lo: f64, hi: f64) -> bool {
    lo > 0.0
        && lo < hi
        && index_window_ok(n, m, lo, hi)
        && opposite(
            reference::bessel_j(n.get(), lo),
            reference::bessel_j(n.get(), hi),
        )
}

pub(super) fn dirichlet(n: u32, m: u32) -> Result<ZeroBracket> {
    let order = Order(n);
    if let Some((lo, hi)) = airy_bracket(order, m, BoundaryCondition::Dirichlet) {
        if hi - lo < AIRY_MAX_WIDTH && certified_dirichlet(order, m, lo, hi) {
            return Ok(ZeroBracket {
                lower: lo,
                upper: hi,
                source: BracketSource::AiryEstimate,
            });
        }
    }
    if f64::from(m) > 10.0 * f64::from(n.max(1)) {
        let est = mcmahon_estimate(order, m, BoundaryCondition::Dirichlet);
        let (lo, hi) = (est - FRAC_PI_4, est + FRAC_PI_4);
        if certified_dirichlet(order, m, lo, hi) {
            return Ok(ZeroBracket {
                lower: lo,
                upper: hi,
                source: BracketSource::McMahon,
            });
        }
    }
    sign_scan(order, m)
}

/// Step by `pi/4` from a point strictly between zeros `m - 1` and `m`.
fn sign_scan(n: Order, m: u32) -> Result<ZeroBracket> {
    let mf = f64::from(m);
    let start = phase_inverse(n, (mf - 1.0) * PI);
    let stop = phase_inverse(n, (mf + 0.5) * PI);
    let f = |x: f64| reference::bessel_j(n.get(), x);
    let mut a = start;
    let mut fa = f(a);
    while a < stop {
        let b = a + FRAC_PI_4;
        let fb = f(b);
        if opposite(fa, fb) {
            return Ok(ZeroBracket {
                lower: a,
                upper: b,
                source: BracketSource::SignScan,
            });
        }
        if fb != 0.0 {
            fa = fb;
        }
        a = b;
    }
    Err(Error::Bracketing {
        n: n.get(),
        m,
        bc: "dirichlet",
        detail: format!("no sign change of J_n on [{start}, {stop}]"),
    })
}

/// Neumann bracket inside `(below, above)`, an interval already known to hold
/// exactly the m-th zero of `J_n'`; tightened by the Airy or McMahon estimate
/// when that still shows a sign change.
pub(super) fn neumann(n: u32, m: u32, below: f64, above: f64) -> Result<ZeroBracket> {
    let order = Order(n);
    let g = |x: f64| reference::triplet(n, x).derivative();
    let (g_lo, g_hi) = (g(below), g(above));
    if !(below < above) || !opposite(g_lo, g_hi) {
        return Err(Error::Bracketing {
            n,
            m,
            bc: "neumann",
            detail: format!("J_n' has no sign change on interlacing interval ({below}, {above})"),
        });
    }
    let tighten = |lo: f64, hi: f64| -> Option<(f64, f64)> {
        let (lo, hi) = (lo.max(below), hi.min(above));
        if !(lo < hi) {
            return None;
        }
        let a = if lo == below { g_lo } else { g(lo) };
        let b = if hi == above { g_hi } else { g(hi) };
        opposite(a, b).then_some((lo, hi))
    };
    if let Some((lo, hi)) = airy_bracket(order, m, BoundaryCondition::Neumann) {
        let width = C2 * f64::from(m).powf(4.0 / 3.0) / order.as_f64().cbrt();
        if width < AIRY_MAX_WIDTH {
            if let Some((lo, hi)) = tighten(lo, hi) {
                return Ok(ZeroBracket {
                    lower: lo,
                    upper: hi,
                    source: BracketSource::AiryEstimate,
                });
            }
        }
    }
    if f64::from(m) > 10.0 * f64::from(n.max(1)) {
        let est = mcmahon_estimate(order, m, BoundaryCondition::Neumann);
        if let Some((lo, hi)) = tighten(est - FRAC_PI_4, est + FRAC_PI_4) {
            return Ok(ZeroBracket {
                lower: lo,
                upper: hi,
                source: BracketSource::McMahon,
            });
        }
    }
    Ok(ZeroBracket {
        lower: below,
        upper: above,
        source: BracketSource::Interlacing,
    })
}
