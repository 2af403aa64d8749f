//! Seeded invariant suite behind `diskgrowth verify`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bessel::{bessel_j, bessel_j_prime, krasikov_bound, krasikov_threshold, landau_bound};
use crate::bessel::{EvalRegime, Order};
use crate::modes::{DiskModes, ModeIndex};
use crate::zeros::{verify_zero_estimates, BoundaryCondition, ZeroFinder};
use crate::Result;

const D: BoundaryCondition = BoundaryCondition::Dirichlet;
const N: BoundaryCondition = BoundaryCondition::Neumann;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One `name: PASS|FAIL detail` line per check.
    pub fn to_text(&self) -> String {
        let mut s = format!("seed {}\n", self.seed);
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(s, "{}: {tag} {}", c.name, c.detail).unwrap();
        }
        s
    }
}

fn outcome(name: &'static str, failures: usize, total: usize, extra: String) -> CheckOutcome {
    let mut detail = format!("{}/{} ok", total - failures, total);
    if !extra.is_empty() {
        detail.push_str("; ");
        detail.push_str(&extra);
    }
    CheckOutcome {
        name,
        passed: failures == 0,
        detail,
    }
}

fn sample_bc(rng: &mut ChaCha8Rng) -> BoundaryCondition {
    if rng.gen_bool(0.5) {
        D
    } else {
        N
    }
}

/// Run every invariant. Randomised checks draw from `ChaCha8Rng::seed_from_u64(seed)`.
pub fn run_suite(zeros: &ZeroFinder, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = vec![
        zero_accuracy(zeros)?,
        interlacing(zeros)?,
        bracket_certification(zeros, &mut rng)?,
        bessel_bounds(&mut rng)?,
        recurrence(&mut rng)?,
        zero_estimates(zeros)?,
        normalization(zeros, &mut rng)?,
        orthogonality(zeros, &mut rng)?,
    ];
    Ok(VerifyReport { seed, checks })
}

fn zero_accuracy(zeros: &ZeroFinder) -> Result<CheckOutcome> {
    let expected = [
        (0, 1, D, 2.404825557695773),
        (0, 2, D, 5.520078110286311),
        (0, 3, D, 8.653727912911013),
        (1, 1, N, 1.841183781340659),
        (0, 1, N, 3.831705970207512),
    ];
    let mut worst = 0.0f64;
    let mut bad = 0;
    for (n, m, bc, k) in expected {
        let err = (zeros.find_zero(Order(n), m, bc)?.k - k).abs();
        worst = worst.max(err);
        if err > 1e-10 {
            bad += 1;
        }
    }
    Ok(outcome(
        "zero_accuracy",
        bad,
        expected.len(),
        format!("max error {worst:.1e}"),
    ))
}

fn interlacing(zeros: &ZeroFinder) -> Result<CheckOutcome> {
    let bad = (0..=50u32)
        .into_par_iter()
        .map(|n| -> Result<usize> {
            let d = zeros.zero_table(Order(n), 101, D)?;
            let p = zeros.zero_table(Order(n), 100, N)?;
            let mut bad = 0;
            for m in 1..=100usize {
                let kp = p[m - 1].k;
                let ok = if n == 0 {
                    d[m - 1].k < kp && kp < d[m].k
                } else {
                    let below = if m == 1 { 0.0 } else { d[m - 2].k };
                    below < kp && kp < d[m - 1].k
                };
                if !ok {
                    bad += 1;
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(outcome("interlacing", bad, 51 * 100, String::new()))
}

fn bracket_certification(zeros: &ZeroFinder, rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let triples: Vec<(u32, u32, BoundaryCondition)> = (0..1000)
        .map(|_| {
            (
                rng.gen_range(0..=200),
                rng.gen_range(1..=400),
                sample_bc(rng),
            )
        })
        .collect();
    let bad: usize = triples
        .par_iter()
        .map(|&(n, m, bc)| -> Result<usize> {
            let br = zeros.estimate_bracket(Order(n), m, bc)?;
            let g = |x: f64| match bc {
                D => bessel_j(Order(n), x, EvalRegime::Reference),
                N => bessel_j_prime(Order(n), x),
            };
            Ok(usize::from(g(br.lower)? * g(br.upper)? >= 0.0))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(outcome(
        "bracket_certification",
        bad,
        triples.len(),
        String::new(),
    ))
}

fn bessel_bounds(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let total = 10_000;
    let mut bad = 0;
    let mut worst = 0.0f64;
    for _ in 0..total {
        let n = Order(rng.gen_range(1..=100));
        let t = krasikov_threshold(n);
        let x = t + rng.gen_range(1e-6..1.0) * (4.0 * t + 200.0);
        let j = bessel_j(n, x, EvalRegime::Reference)?;
        let kr = j * j / krasikov_bound(n, x)?;
        let y = rng.gen_range(0.0..(4.0 * t + 200.0));
        let la = bessel_j(n, y, EvalRegime::Reference)?.abs() / landau_bound(n)?;
        worst = worst.max(kr).max(la);
        if kr > 1.0 || la > 1.0 {
            bad += 1;
        }
    }
    Ok(outcome(
        "bessel_bounds",
        bad,
        total,
        format!("max value/bound {worst:.4}"),
    ))
}

fn recurrence(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let total = 2000;
    let mut bad = 0;
    for _ in 0..total {
        let n = rng.gen_range(1..=500u32);
        let x = rng.gen_range(0.1..2000.0);
        let jm = bessel_j(Order(n - 1), x, EvalRegime::Reference)?;
        let j = bessel_j(Order(n), x, EvalRegime::Reference)?;
        let jp = bessel_j(Order(n + 1), x, EvalRegime::Reference)?;
        let scale = jm.abs() + jp.abs() + (2.0 * f64::from(n) / x * j).abs();
        if (jm + jp - 2.0 * f64::from(n) / x * j).abs() > 1e-12 * scale.max(1e-300) {
            bad += 1;
        }
    }
    Ok(outcome("three_term_recurrence", bad, total, String::new()))
}

fn zero_estimates(zeros: &ZeroFinder) -> Result<CheckOutcome> {
    let mut bad = 0;
    let mut m0s = Vec::new();
    for n in [5u32, 10, 20, 50] {
        for bc in [D, N] {
            let r = verify_zero_estimates(zeros, Order(n), 1..=200, bc)?;
            match r.m0 {
                Some(m0) => m0s.push(format!("{}{n}:{m0}", &bc.name()[..1])),
                None => bad += 1,
            }
        }
    }
    Ok(outcome(
        "zero_estimates",
        bad,
        8,
        format!("m0 {}", m0s.join(" ")),
    ))
}

fn random_modes(rng: &mut ChaCha8Rng, count: usize) -> Vec<ModeIndex> {
    (0..count)
        .map(|i| {
            let bc = if i % 2 == 0 { D } else { N };
            ModeIndex::new(rng.gen_range(0..=50), rng.gen_range(1..=50), bc)
        })
        .collect()
}

fn normalization(zeros: &ZeroFinder, rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let dm = DiskModes::new(zeros);
    let modes = random_modes(rng, 40);
    let errs = modes
        .par_iter()
        .map(|&mode| dm.l2_norm_check(mode).map(|v| (v - 1.0).abs()))
        .collect::<Result<Vec<_>>>()?;
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    let bad = errs.iter().filter(|&&e| !(e < 1e-6)).count();
    Ok(outcome(
        "normalization",
        bad,
        modes.len(),
        format!("max |norm - 1| {worst:.1e}"),
    ))
}

fn orthogonality(zeros: &ZeroFinder, rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let dm = DiskModes::new(zeros);
    let pairs: Vec<(ModeIndex, ModeIndex)> = (0..40)
        .map(|_| {
            let bc = sample_bc(rng);
            let n = rng.gen_range(0..=50);
            let m1 = rng.gen_range(1..=30);
            let m2 = m1 + rng.gen_range(1..=20);
            (ModeIndex::new(n, m1, bc), ModeIndex::new(n, m2, bc))
        })
        .collect();
    let vals = pairs
        .par_iter()
        .map(|&(a, b)| dm.inner_product(a, b).map(f64::abs))
        .collect::<Result<Vec<_>>>()?;
    let worst = vals.iter().cloned().fold(0.0, f64::max);
    let bad = vals.iter().filter(|&&v| !(v < 1e-8)).count();
    Ok(outcome(
        "orthogonality",
        bad,
        pairs.len(),
        format!("max |<F,G>| {worst:.1e}"),
    ))
}
