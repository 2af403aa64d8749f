use std::f64::consts::FRAC_PI_4;

use super::{BoundaryCondition, ZeroBracket};
use crate::bessel::reference;
use crate::{Error, Result};

const BISECT_WIDTH: f64 = 1e-6;
const MAX_BISECT: usize = 200;
const MAX_NEWTON: usize = 100;

/// `J_n(x)` for Dirichlet, `J_n'(x)` for Neumann.
pub(super) fn target(n: u32, bc: BoundaryCondition, x: f64) -> f64 {
    match bc {
        BoundaryCondition::Dirichlet => reference::bessel_j(n, x),
        BoundaryCondition::Neumann => reference::triplet(n, x).derivative(),
    }
}

fn target_with_slope(n: u32, bc: BoundaryCondition, x: f64) -> (f64, f64) {
    let t = reference::triplet(n, x);
    let d = t.derivative();
    match bc {
        BoundaryCondition::Dirichlet => (t.cur, d),
        BoundaryCondition::Neumann => {
            let nf = f64::from(n);
            (d, -d / x - (1.0 - nf * nf / (x * x)) * t.cur)
        }
    }
}

/// Bisection down to `1e-6`, then Newton steps kept inside the bracket.
pub(super) fn refine(
    n: u32,
    m: u32,
    bc: BoundaryCondition,
    br: &ZeroBracket,
    tol: f64,
) -> Result<f64> {
    let (mut a, mut b) = (br.lower, br.upper);
    let fa = target(n, bc, a);
    let fb = target(n, bc, b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracketing {
            n,
            m,
            bc: bc.name(),
            detail: format!("bracket [{a}, {b}] lost its sign change"),
        });
    }
    let sa = fa.signum();
    let tol = tol.max(4.0 * f64::EPSILON * b);
    let coarse = BISECT_WIDTH.max(tol);

    for _ in 0..MAX_BISECT {
        if b - a <= coarse {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = target(n, bc, mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }

    let mut x = 0.5 * (a + b);
    for _ in 0..MAX_NEWTON {
        let (v, d) = target_with_slope(n, bc, x);
        if v == 0.0 {
            return Ok(x);
        }
        if v.signum() == sa {
            a = x;
        } else {
            b = x;
        }
        if b - a <= tol {
            return Ok(0.5 * (a + b));
        }
        let mut next = x - v / d;
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        if (next - x).abs() <= 0.5 * tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Numerical(format!(
        "no convergence for n={n}, m={m} ({bc}) in [{a}, {b}]"
    )))
}

/// Sign changes of the target on `[x0, k)` using a `pi/4` grid.
pub(super) fn count_sign_changes_below(n: u32, bc: BoundaryCondition, k: f64) -> u32 {
    let x0 = match (bc, n) {
        (BoundaryCondition::Dirichlet, _) => f64::from(n),
        (BoundaryCondition::Neumann, 0) => 1.0,
        (BoundaryCondition::Neumann, _) => f64::from(n),
    };
    let end = k - 1e-7 * k.max(1.0);
    let mut count = 0;
    let mut last = 0.0f64;
    let mut x = x0;
    loop {
        let at = x.min(end);
        let v = target(n, bc, at);
        if v != 0.0 {
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
        if at >= end {
            break;
        }
        x += FRAC_PI_4;
    }
    count
}
