//! Positive zeros of `J_n` (Dirichlet) and `J_n'` (Neumann) with certified
//! sign-change brackets.
//!
//! Indexing follows the usual convention: `k_{n,m}` is the m-th positive zero
//! of `J_n`, `k'_{n,m}` the m-th positive zero of `J_n'`. For `n = 0` the zero
//! of `J_0'` at the origin is not counted, so `k'_{0,1} = j_{1,1} = 3.8317...`.

mod bracket;
mod cache;
mod estimates;
mod refine;

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::bessel::{landau_bound, Order};
use crate::modes::ModeIndex;
use crate::{Error, Result};

pub use bracket::{airy_bracket, debye_phase, mcmahon_estimate, C1, C2};
pub use cache::ZeroCache;
pub use estimates::{verify_zero_estimates, EstimateCheck, EstimateReport};

/// Default refinement tolerance on `k`.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Smallest tolerance accepted by [`ZeroFinder`].
pub const MIN_TOL: f64 = 1e-13;

/// Sign-change index check is run up to these limits.
const EXHAUSTIVE_MAX_N: u32 = 50;
const EXHAUSTIVE_MAX_M: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            "neumann" => Ok(BoundaryCondition::Neumann),
            other => Err(Error::Domain(format!(
                "unknown boundary condition '{other}' (expected dirichlet or neumann)"
            ))),
        }
    }
}

/// Which estimate produced a bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketSource {
    AiryEstimate,
    McMahon,
    SignScan,
    /// Neumann only: consecutive Dirichlet zeros `(k_{n,m-1}, k_{n,m})`.
    Interlacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroBracket {
    pub lower: f64,
    pub upper: f64,
    pub source: BracketSource,
}

impl ZeroBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair {
    pub mode: ModeIndex,
    pub k: f64,
    pub lambda: f64,
}

impl Eigenpair {
    fn new(mode: ModeIndex, k: f64) -> Self {
        Eigenpair {
            mode,
            k,
            lambda: k * k,
        }
    }
}

/// Zero finder with an in-memory memo and an optional on-disk cache.
///
/// Results depend only on `(n, m, bc, tol)`: no value ever depends on which
/// other zeros were computed first, so cached and fresh runs agree bit for bit.
#[derive(Debug)]
pub struct ZeroFinder {
    tol: f64,
    exhaustive: bool,
    cache: Option<ZeroCache>,
    memo: RwLock<HashMap<(BoundaryCondition, u32, u32), f64>>,
}

impl Default for ZeroFinder {
    fn default() -> Self {
        ZeroFinder {
            tol: DEFAULT_TOL,
            exhaustive: true,
            cache: None,
            memo: RwLock::new(HashMap::new()),
        }
    }
}

impl ZeroFinder {
    pub fn new(tol: f64) -> Result<Self> {
        if !(tol >= MIN_TOL) || !tol.is_finite() {
            return Err(Error::Domain(format!(
                "tolerance {tol} must be >= {MIN_TOL:e}"
            )));
        }
        Ok(ZeroFinder {
            tol,
            ..ZeroFinder::default()
        })
    }

    /// Attach a disk cache rooted at `dir`.
    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Result<Self> {
        self.cache = Some(ZeroCache::open(dir, self.tol)?);
        Ok(self)
    }

    /// Toggle the sign-change index check for small `(n, m)`.
    pub fn with_exhaustive_check(mut self, on: bool) -> Self {
        self.exhaustive = on;
        self
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn cache(&self) -> Option<&ZeroCache> {
        self.cache.as_ref()
    }

    /// Write newly computed zeros to the disk cache, if any.
    pub fn flush(&self) -> Result<()> {
        match &self.cache {
            Some(c) => c.flush(),
            None => Ok(()),
        }
    }

    /// Bracket certified to contain exactly the m-th zero.
    pub fn estimate_bracket(&self, n: Order, m: u32, bc: BoundaryCondition) -> Result<ZeroBracket> {
        check_index(n, m)?;
        match bc {
            BoundaryCondition::Dirichlet => bracket::dirichlet(n.get(), m),
            BoundaryCondition::Neumann => {
                let below = if n.get() == 0 {
                    self.k(n, m, BoundaryCondition::Dirichlet)?
                } else if m == 1 {
                    n.as_f64()
                } else {
                    self.k(n, m - 1, BoundaryCondition::Dirichlet)?
                };
                let above = if n.get() == 0 {
                    self.k(n, m + 1, BoundaryCondition::Dirichlet)?
                } else {
                    self.k(n, m, BoundaryCondition::Dirichlet)?
                };
                bracket::neumann(n.get(), m, below, above)
            }
        }
    }

    pub fn find_zero(&self, n: Order, m: u32, bc: BoundaryCondition) -> Result<Eigenpair> {
        let k = self.k(n, m, bc)?;
        Ok(Eigenpair::new(ModeIndex { n, m, bc }, k))
    }

    /// The first `m_max` zeros, strictly increasing.
    pub fn zero_table(
        &self,
        n: Order,
        m_max: u32,
        bc: BoundaryCondition,
    ) -> Result<Vec<Eigenpair>> {
        if m_max == 0 {
            return Err(Error::Index("m_max must be >= 1".into()));
        }
        let mut out = Vec::with_capacity(m_max as usize);
        for m in 1..=m_max {
            let pair = self.find_zero(n, m, bc)?;
            if let Some(prev) = out.last() {
                let prev: &Eigenpair = prev;
                if !(pair.k > prev.k) {
                    return Err(Error::Numerical(format!(
                        "zero table for n={n} ({bc}) not increasing at m={m}"
                    )));
                }
            }
            out.push(pair);
        }
        Ok(out)
    }

    fn k(&self, n: Order, m: u32, bc: BoundaryCondition) -> Result<f64> {
        check_index(n, m)?;
        let key = (bc, n.get(), m);
        if let Some(&k) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(k);
        }
        if let Some(k) = match &self.cache {
            Some(c) => c.get(bc, n.get(), m)?,
            None => None,
        } {
            self.memo.write().expect("memo lock").insert(key, k);
            return Ok(k);
        }
        let k = self.compute(n, m, bc)?;
        if let Some(cache) = &self.cache {
            cache.stage(bc, n.get(), &[(m, k)])?;
        }
        self.memo.write().expect("memo lock").insert(key, k);
        Ok(k)
    }

    fn compute(&self, n: Order, m: u32, bc: BoundaryCondition) -> Result<f64> {
        let br = self.estimate_bracket(n, m, bc)?;
        let k = refine::refine(n.get(), m, bc, &br, self.tol)?;
        let residual = refine::target(n.get(), bc, k).abs();
        let scale = if n.get() == 0 { 1.0 } else { landau_bound(n)? };
        if !(residual < 1e-9 * scale) {
            return Err(Error::Numerical(format!(
                "residual {residual:e} at k={k} too large for n={n}, m={m} ({bc})"
            )));
        }
        if self.exhaustive && n.get() <= EXHAUSTIVE_MAX_N && m <= EXHAUSTIVE_MAX_M {
            let below = refine::count_sign_changes_below(n.get(), bc, k);
            if below != m - 1 {
                return Err(Error::Numerical(format!(
                    "index check failed for n={n}, m={m} ({bc}): {below} sign changes below k={k}"
                )));
            }
        }
        Ok(k)
    }
}

fn check_index(n: Order, m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::Index("zero index m must be >= 1".into()));
    }
    if n.get() > crate::bessel::MAX_ORDER {
        return Err(Error::Capacity(format!(
            "order n={n} exceeds cap {}",
            crate::bessel::MAX_ORDER
        )));
    }
    Ok(())
}

/// [`ZeroFinder::estimate_bracket`] with a fresh default finder.
pub fn estimate_bracket(n: Order, m: u32, bc: BoundaryCondition) -> Result<ZeroBracket> {
    ZeroFinder::default().estimate_bracket(n, m, bc)
}

/// [`ZeroFinder::find_zero`] with a fresh finder at tolerance `tol`.
pub fn find_zero(n: Order, m: u32, bc: BoundaryCondition, tol: f64) -> Result<Eigenpair> {
    ZeroFinder::new(tol)?.find_zero(n, m, bc)
}

/// [`ZeroFinder::zero_table`] at the default tolerance, without disk cache.
pub fn zero_table(n: Order, m_max: u32, bc: BoundaryCondition) -> Result<Vec<Eigenpair>> {
    ZeroFinder::default().zero_table(n, m_max, bc)
}
