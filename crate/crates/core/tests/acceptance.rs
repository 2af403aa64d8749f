//! Acceptance run: one `criterion N: PASS|FAIL` line per criterion.
//!
//! Parts that are attainable are also asserted, so a regression fails the
//! target. A criterion that does not hold at the computed scale prints FAIL
//! without aborting the run.

use std::time::{Duration, Instant};

use diskgrowth::bessel::{
    bessel_j, bessel_j_prime, krasikov_bound, krasikov_threshold, landau_bound, EvalRegime,
};
use diskgrowth::commands::Session;
use diskgrowth::gallery::{decay_sweep, DEFAULT_MARGIN};
use diskgrowth::growth::{table_gammas, Explorer, DEFAULT_N_MAX};
use diskgrowth::zeros::verify_zero_estimates;
use diskgrowth::{BoundaryCondition, DiskModes, ModeIndex, Order, RunConfig, ZeroFinder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const D: BoundaryCondition = BoundaryCondition::Dirichlet;
const N: BoundaryCondition = BoundaryCondition::Neumann;
const SEED: u64 = 0;

const ZERO_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 1e-14;
const NORM_TOL: f64 = 1e-6;
const BOUND_SLACK: f64 = 0.02;
const CEILING: f64 = 0.25;
const GALLERY_FINAL_MASS: f64 = 0.999;
const GALLERY_MIN_R2: f64 = 0.99;
const WIDE_MARGIN: f64 = 0.05;

struct Run {
    failures: Vec<String>,
}

impl Run {
    fn report(&self, n: u32, passed: bool, detail: &str, elapsed: Duration) {
        let tag = if passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {n}: {tag} {detail} [{:.2}s]",
            elapsed.as_secs_f64()
        );
    }

    /// Record a violated must-hold condition; the run exits nonzero at the end.
    fn require(&mut self, ok: bool, what: String) {
        if !ok {
            println!("    required: {what}");
            self.failures.push(what);
        }
    }
}

/// Plain bisection on the reference series.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    assert!(
        fa * f(b) < 0.0,
        "oracle bracket [{a}, {b}] has no sign change"
    );
    while b - a > ORACLE_TOL {
        let c = 0.5 * (a + b);
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if fa * fc < 0.0 {
            b = c;
        } else {
            a = c;
            fa = fc;
        }
    }
    0.5 * (a + b)
}

fn criterion_1(run: &mut Run) {
    let t = Instant::now();
    let f = ZeroFinder::default();
    let j0 = |x: f64| bessel_j(Order(0), x, EvalRegime::Reference).unwrap();
    let j1p = |x: f64| bessel_j_prime(Order(1), x).unwrap();
    let cases = [
        (
            "k_{0,1}",
            2.404825557695773,
            bisect(j0, 2.0, 3.0),
            f.find_zero(Order(0), 1, D),
        ),
        (
            "k_{0,2}",
            5.520078110286311,
            bisect(j0, 5.0, 6.0),
            f.find_zero(Order(0), 2, D),
        ),
        (
            "k_{0,3}",
            8.653727912911013,
            bisect(j0, 8.0, 9.0),
            f.find_zero(Order(0), 3, D),
        ),
        (
            "k'_{1,1}",
            1.841183781340659,
            bisect(j1p, 1.5, 2.0),
            f.find_zero(Order(1), 1, N),
        ),
    ];
    let mut worst = 0.0f64;
    let mut ok = true;
    for (name, pinned, oracle, found) in cases {
        let k = found.unwrap().k;
        let err = (k - pinned).abs().max((k - oracle).abs());
        worst = worst.max(err);
        ok &= err < ZERO_TOL;
        run.require(
            (oracle - pinned).abs() < ZERO_TOL,
            format!("oracle {name} = {oracle}"),
        );
    }
    let el = t.elapsed();
    let fast = el < Duration::from_secs(1);
    run.require(ok, format!("zero accuracy, max error {worst:e}"));
    run.require(fast, "criterion 1 runtime < 1 s".into());
    run.report(
        1,
        ok && fast,
        &format!("max |k - expected| = {worst:.1e}"),
        el,
    );
}

fn criterion_2(run: &mut Run) {
    let t = Instant::now();
    let f = ZeroFinder::default();
    let bad: usize = (0..=50u32)
        .into_par_iter()
        .map(|n| {
            let d = f.zero_table(Order(n), 101, D).unwrap();
            let p = f.zero_table(Order(n), 100, N).unwrap();
            (1..=100usize)
                .filter(|&m| {
                    let kp = p[m - 1].k;
                    // n = 0 excludes the trivial zero of J_0', which shifts the index by one
                    let (lo, hi) = match (n, m) {
                        (0, _) => (d[m - 1].k, d[m].k),
                        (_, 1) => (0.0, d[0].k),
                        _ => (d[m - 2].k, d[m - 1].k),
                    };
                    !(lo < kp && kp < hi)
                })
                .count()
        })
        .sum();
    let el = t.elapsed();
    let ok = bad == 0 && el < Duration::from_secs(60);
    run.require(ok, format!("interlacing: {bad} violations in {el:?}"));
    run.report(
        2,
        ok,
        &format!("{} / 5100 triples interlace", 5100 - bad),
        el,
    );
}

fn criterion_3(run: &mut Run) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut kras_bad, mut landau_bad) = (0, 0);
    let total = 10_000;
    for _ in 0..total {
        let n = Order(rng.gen_range(1..=100));
        let th = krasikov_threshold(n);
        let x = th + rng.gen_range(1e-9..1.0) * (4.0 * th + 200.0);
        let j = bessel_j(n, x, EvalRegime::Reference).unwrap();
        if j * j > krasikov_bound(n, x).unwrap() {
            kras_bad += 1;
        }
        let y = rng.gen_range(0.0..(4.0 * th + 200.0));
        if bessel_j(n, y, EvalRegime::Reference).unwrap().abs() > landau_bound(n).unwrap() {
            landau_bad += 1;
        }
    }
    let el = t.elapsed();
    let ok = kras_bad == 0 && landau_bad == 0 && el < Duration::from_secs(30);
    run.require(
        ok,
        format!("bounds: krasikov {kras_bad}, landau {landau_bad}"),
    );
    run.report(
        3,
        ok,
        &format!("{total} points, Krasikov violations {kras_bad}, Landau violations {landau_bad}"),
        el,
    );
}

fn criterion_4(run: &mut Run) {
    let t = Instant::now();
    let f = ZeroFinder::default();
    let mut ok = true;
    let mut m0s = Vec::new();
    for bc in [D, N] {
        for n in [5u32, 10, 20, 50] {
            let r = verify_zero_estimates(&f, Order(n), 1..=200, bc).unwrap();
            match r.m0 {
                Some(m0) => {
                    let holds = r.checks.iter().filter(|c| c.m >= m0).all(|c| c.holds());
                    ok &= holds;
                    m0s.push(format!("{}:{n}->{m0}", bc.name()));
                }
                None => {
                    ok = false;
                    m0s.push(format!("{}:{n}->none", bc.name()));
                }
            }
        }
    }
    let el = t.elapsed();
    ok &= el < Duration::from_secs(60);
    run.require(ok, "zero estimates hold from m0".into());
    run.report(4, ok, &format!("measured m0 {}", m0s.join(" ")), el);
}

fn criterion_5(run: &mut Run) {
    let t = Instant::now();
    let f = ZeroFinder::default();
    let dm = DiskModes::new(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let modes: Vec<ModeIndex> = (0..40)
        .map(|i| {
            let bc = if i % 2 == 0 { D } else { N };
            ModeIndex::new(rng.gen_range(0..=50), rng.gen_range(1..=50), bc)
        })
        .collect();
    let worst = modes
        .par_iter()
        .map(|&m| (dm.l2_norm_check(m).unwrap() - 1.0).abs())
        .reduce(|| 0.0, f64::max);
    let el = t.elapsed();
    let ok = worst < NORM_TOL && el < Duration::from_secs(60);
    run.require(ok, format!("normalization worst {worst:e}"));
    run.report(
        5,
        ok,
        &format!("40 modes, max |norm - 1| = {worst:.1e}"),
        el,
    );
}

fn criteria_6_and_7(run: &mut Run) {
    let t = Instant::now();
    let f = ZeroFinder::default();
    let ex = Explorer::new(&f);
    let bands = [
        (D, 0.0, 0.157, 0.177),
        (D, 1.0, 0.073, 0.094),
        (D, 4.0, 0.198, 0.219),
        (N, 2.0, 0.157, 0.177),
    ];
    let mut ok6 = true;
    let mut parts = Vec::new();
    for (bc, gamma, lo, hi) in bands {
        let r = ex.report(gamma, bc, DEFAULT_N_MAX).unwrap();
        let inside = (lo..=hi).contains(&r.phi_estimate);
        ok6 &= inside;
        parts.push(format!("{} g={gamma}: {:.4}", bc.name(), r.phi_estimate));
    }
    let el6 = t.elapsed();
    ok6 &= el6 < Duration::from_secs(600);
    run.require(ok6, "exponent bands".into());
    run.report(6, ok6, &parts.join(", "), el6);

    // every ratio on every table path
    let mut below = Vec::new();
    let mut above = 0usize;
    let mut samples = 0usize;
    for bc in [D, N] {
        for &(label, gamma) in table_gammas(bc) {
            let r = ex.report(gamma, bc, DEFAULT_N_MAX).unwrap();
            samples += r.samples.len();
            run.require(
                r.estimate_respects_lower(BOUND_SLACK),
                format!(
                    "{} gamma={label}: estimate {} below lower",
                    bc.name(),
                    r.phi_estimate
                ),
            );
            above += r.ratios_above_ceiling(BOUND_SLACK).len();
            let low: Vec<_> = r
                .samples
                .iter()
                .filter(|s| s.ratio < r.theoretical_lower - BOUND_SLACK)
                .collect();
            // known misses at the computed scale; anything else is a regression
            let expected_miss = bc == D && gamma == 0.0;
            run.require(
                low.is_empty() || expected_miss,
                format!(
                    "{} gamma={label}: {} ratios below lower",
                    bc.name(),
                    low.len()
                ),
            );
            if let Some(worst) = low.iter().map(|s| s.ratio).min_by(f64::total_cmp) {
                below.push(format!(
                    "{} gamma={label}: {} ratios below {:.4} (min {:.4})",
                    bc.name(),
                    low.len(),
                    r.theoretical_lower - BOUND_SLACK,
                    worst
                ));
            }
        }
    }
    run.require(
        above == 0,
        format!("{above} ratios above {CEILING} + {BOUND_SLACK}"),
    );
    let ok7 = below.is_empty() && above == 0;
    let detail = if ok7 {
        format!("{samples} ratios within [lower - {BOUND_SLACK}, {CEILING} + {BOUND_SLACK}]")
    } else {
        format!(
            "{samples} ratios, none above the ceiling; lower-bound misses: {}",
            below.join("; ")
        )
    };
    run.report(7, ok7, &detail, t.elapsed());
}

fn criterion_8(run: &mut Run) {
    let t = Instant::now();
    let f = ZeroFinder::default();
    let dm = DiskModes::new(&f);
    let ns = [25u32, 50, 100, 200, 400];
    let s = decay_sweep(&dm, 0.0, D, &ns, DEFAULT_MARGIN).unwrap();
    let decreasing = s.interior_strictly_decreasing();
    let increasing = s.annulus_increasing();
    let last_mass = s.profiles.last().unwrap().annulus_mass;
    let fit = s.decay_fit().unwrap();
    for p in &s.profiles {
        run.require(
            (p.interior_mass + p.annulus_mass - 1.0).abs() < NORM_TOL,
            format!("mass conservation at n={}", p.mode.n),
        );
    }
    // same sweep with the interior edge moved off the turning-point layer
    let wide = decay_sweep(&dm, 0.0, D, &ns, WIDE_MARGIN).unwrap();
    let wide_fit = wide.decay_fit().unwrap();
    run.require(
        wide.interior_strictly_decreasing(),
        format!("margin {WIDE_MARGIN}: interior_sup decreasing"),
    );
    run.require(
        wide_fit.c > 0.0 && wide_fit.r_squared > GALLERY_MIN_R2,
        format!("margin {WIDE_MARGIN}: decay fit {wide_fit:?}"),
    );
    let el = t.elapsed();
    run.require(
        el < Duration::from_secs(120),
        "criterion 8 runtime < 2 min".into(),
    );
    let ok = decreasing
        && increasing
        && last_mass > GALLERY_FINAL_MASS
        && fit.c > 0.0
        && fit.r_squared > GALLERY_MIN_R2;
    let list = |v: Vec<f64>| {
        v.iter()
            .map(|x| format!("{x:.4}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    run.report(
        8,
        ok,
        &format!(
            "margin {DEFAULT_MARGIN}: interior_sup decreasing={decreasing} [{}], fit c={:.4} R2={:.4}; \
             annulus_mass increasing={increasing} final={last_mass:.4} (> {GALLERY_FINAL_MASS} required) [{}]; \
             margin {WIDE_MARGIN}: interior_sup decreasing={} [{}], fit c={:.4} R2={:.4}",
            list(s.profiles.iter().map(|p| p.interior_sup).collect()),
            fit.c,
            fit.r_squared,
            list(s.profiles.iter().map(|p| p.annulus_mass).collect()),
            wide.interior_strictly_decreasing(),
            list(wide.profiles.iter().map(|p| p.interior_sup).collect()),
            wide_fit.c,
            wide_fit.r_squared,
        ),
        el,
    );
}

fn criterion_9(run: &mut Run) {
    let t = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        cache_dir: Some(dir.path().to_path_buf()),
        ..RunConfig::default()
    };
    let cold = {
        let s = Session::new(cfg.clone()).unwrap();
        let out = s.table(D, DEFAULT_N_MAX).unwrap();
        s.zeros.flush().unwrap();
        out
    };
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    let warm = Session::new(cfg).unwrap().table(D, DEFAULT_N_MAX).unwrap();
    let el = t.elapsed();
    let ok =
        files > 0 && cold.data.as_bytes() == warm.data.as_bytes() && el < Duration::from_secs(600);
    run.require(ok, "table cold/warm byte identity".into());
    run.report(
        9,
        ok,
        &format!(
            "{} bytes, cold == warm with {files} cache files",
            cold.data.len()
        ),
        el,
    );
}

fn main() {
    let mut run = Run {
        failures: Vec::new(),
    };
    criterion_1(&mut run);
    criterion_2(&mut run);
    criterion_3(&mut run);
    criterion_4(&mut run);
    criterion_5(&mut run);
    criteria_6_and_7(&mut run);
    criterion_8(&mut run);
    criterion_9(&mut run);
    if !run.failures.is_empty() {
        eprintln!("{} required checks failed", run.failures.len());
        std::process::exit(1);
    }
}
