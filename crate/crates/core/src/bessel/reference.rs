//! Reference evaluator for `J_n(x)`, integer `n`.
//!
//! Three regimes, each classically stable on its own domain:
//! - ascending series when `x^2 <= 2(n+1)` (terms decrease monotonically),
//! - Hankel's asymptotic expansion when `x >= max(25, n^2/4)`,
//! - Miller backward recurrence normalised by `J_0 + 2 sum J_2k = 1` otherwise.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// `J_{n-1}`, `J_n`, `J_{n+1}` at a common argument.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Triplet {
    pub prev: f64,
    pub cur: f64,
    pub next: f64,
}

impl Triplet {
    pub fn derivative(&self) -> f64 {
        0.5 * (self.prev - self.next)
    }
}

const HANKEL_MIN_ARG: f64 = 25.0;
const RESCALE_AT: f64 = 1e200;

fn series_applies(n: u32, x: f64) -> bool {
    x * x <= 2.0 * (f64::from(n) + 1.0)
}

pub(crate) fn hankel_applies(n: u32, x: f64) -> bool {
    let nf = f64::from(n);
    x >= f64::max(HANKEL_MIN_ARG, 0.25 * nf * nf)
}

pub(crate) fn bessel_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if series_applies(n, x) {
        power_series(f64::from(n), x)
    } else if hankel_applies(n, x) {
        hankel(f64::from(n), x)
    } else {
        miller(n, x).cur
    }
}

pub(crate) fn triplet(n: u32, x: f64) -> Triplet {
    if x == 0.0 {
        let at = |k: i64| if k == 0 { 1.0 } else { 0.0 };
        let n = i64::from(n);
        return Triplet {
            prev: if n == 0 { 0.0 } else { at(n - 1) },
            cur: at(n),
            next: at(n + 1),
        };
    }
    if series_applies(n + 1, x) && series_applies(n, x) {
        let cur = power_series(f64::from(n), x);
        let next = power_series(f64::from(n) + 1.0, x);
        let prev = if n == 0 {
            -next
        } else {
            2.0 * f64::from(n) / x * cur - next
        };
        Triplet { prev, cur, next }
    } else if hankel_applies(n + 1, x) {
        let cur = hankel(f64::from(n), x);
        let next = hankel(f64::from(n) + 1.0, x);
        let prev = if n == 0 {
            -next
        } else {
            hankel(f64::from(n) - 1.0, x)
        };
        Triplet { prev, cur, next }
    } else {
        miller(n, x)
    }
}

/// Ascending series `sum (-1)^k (x/2)^(2k+nu) / (k! Gamma(nu+k+1))` for
/// integer `nu >= 0`.
pub(crate) fn power_series(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    // (x/2)^nu / nu! as a running product; drops to 0 on genuine underflow.
    let mut lead = 1.0;
    let mut j = 1.0;
    while j <= nu {
        lead *= half / j;
        j += 1.0;
    }
    series_sum(nu, half * half, lead)
}

pub(crate) fn series_sum(nu: f64, quarter_x2: f64, lead: f64) -> f64 {
    let mut term = lead;
    let mut sum = lead;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -quarter_x2 / (k * (nu + k));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || term == 0.0 || k > 500.0 {
            break;
        }
    }
    sum
}

/// Hankel expansion `sqrt(2/(pi x)) (P cos chi - Q sin chi)` summed until the
/// terms stop decreasing or fall below round-off.
pub(crate) fn hankel(nu: f64, x: f64) -> f64 {
    let (p, q) = hankel_pq(nu, x);
    let (c, s) = phase_cos_sin(nu, x);
    (2.0 / (PI * x)).sqrt() * (p * c - q * s)
}

pub(crate) fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last_mag = f64::INFINITY;
    let mut past_turn = false;
    for k in 1..2000u32 {
        let kf = f64::from(k);
        let odd = 2.0 * kf - 1.0;
        let next = term * (mu - odd * odd) / (kf * eight_x);
        let mag = next.abs();
        // Once the factors (mu - (2k-1)^2) have changed sign the series is
        // in its asymptotic tail: stop at the smallest term.
        if odd * odd > mu {
            if past_turn && mag > last_mag {
                break;
            }
            past_turn = true;
        }
        term = next;
        // a_k enters with sign (-1)^(k/2) into P (k even) or (-1)^((k-1)/2) into Q.
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if mag <= 1e-17 * p.abs().max(q.abs()) || term == 0.0 {
            break;
        }
        last_mag = mag;
    }
    (p, q)
}

/// `cos` and `sin` of `x - (nu/2 + 1/4) pi`, reducing the phase exactly when
/// `2 nu` is an integer.
pub(crate) fn phase_cos_sin(nu: f64, x: f64) -> (f64, f64) {
    let (sx, cx) = x.sin_cos();
    let two_nu = 2.0 * nu;
    if two_nu.fract() == 0.0 && two_nu.abs() < 1e15 {
        // phase = (2 nu + 1) pi / 4 = j pi / 4 with j taken mod 8.
        let j = ((two_nu as i64 + 1).rem_euclid(8)) as u8;
        let (sp, cp) = eighth_turn(j);
        // cos(x - p) = cos x cos p + sin x sin p; sin(x - p) = sin x cos p - cos x sin p
        (cx * cp + sx * sp, sx * cp - cx * sp)
    } else {
        let chi = x - (0.5 * nu + 0.25) * PI;
        let (s, c) = chi.sin_cos();
        (c, s)
    }
}

fn eighth_turn(j: u8) -> (f64, f64) {
    let h = FRAC_1_SQRT_2;
    match j {
        0 => (0.0, 1.0),
        1 => (h, h),
        2 => (1.0, 0.0),
        3 => (h, -h),
        4 => (0.0, -1.0),
        5 => (-h, -h),
        6 => (-1.0, 0.0),
        _ => (-h, h),
    }
}

/// Starting order for the backward recurrence: far enough above both `n`
/// and the turning point `x` that the seed error is below round-off.
fn miller_start(n: u32, x: f64) -> usize {
    let base = f64::max(f64::from(n) + 1.0, x);
    let top = base + 30.0 + 20.0 * x.max(1.0).cbrt();
    let top = top.ceil() as usize;
    top + (top & 1)
}

/// Backward recurrence `J_{k-1} = (2k/x) J_k - J_{k+1}` normalised by the
/// Neumann sum. Captured values carry the number of rescalings that happened
/// after capture so tiny results are reconstructed without underflow of the
/// working variables.
pub(crate) fn miller(n: u32, x: f64) -> Triplet {
    let top = miller_start(n, x);
    let n = n as usize;
    let mut above = 0.0; // J_{k+1}
    let mut cur = 1e-280; // J_k, k = top
    let mut sum = 2.0 * cur;
    let mut rescales: i32 = 0;
    let mut captured = [(0.0f64, 0i32); 3]; // orders n-1, n, n+1
    let capture = |k: usize, v: f64, rescales: i32, captured: &mut [(f64, i32); 3]| {
        if k + 1 >= n && k <= n + 1 {
            captured[k + 1 - n] = (v, rescales);
        }
    };
    capture(top, cur, rescales, &mut captured);
    let inv_x = 1.0 / x;
    for k in (1..=top).rev() {
        let below = (2.0 * k as f64) * inv_x * cur - above;
        above = cur;
        cur = below;
        let order = k - 1;
        if order == 0 {
            sum += cur;
        } else if order % 2 == 0 {
            sum += 2.0 * cur;
        }
        capture(order, cur, rescales, &mut captured);
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            above /= RESCALE_AT;
            sum /= RESCALE_AT;
            rescales += 1;
        }
    }
    let finish = |(v, at): (f64, i32)| {
        let mut out = v / sum;
        for _ in at..rescales {
            out /= RESCALE_AT;
            if out == 0.0 {
                break;
            }
        }
        out
    };
    let cur_v = finish(captured[1]);
    let next_v = finish(captured[2]);
    let prev_v = if n == 0 { -next_v } else { finish(captured[0]) };
    Triplet {
        prev: prev_v,
        cur: cur_v,
        next: next_v,
    }
}
