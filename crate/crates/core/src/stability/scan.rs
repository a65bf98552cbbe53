use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::depth::{stable_depth_with, DepthRecord, Strategy, FULL_DEGREE_CAP};
use super::PolySequence;
use crate::arith::{fmt_ratio, parse_ratio, primes_up_to, ratio_from_big, ratio_to_f64};
use crate::error::{Error, Result};

/// Default bound on `max_depth * pi(X)`.
pub const DEFAULT_WORK_CAP: u64 = 50_000_000;
const MIN_PRIME_BOUND: u64 = 100;

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    pub strategy: Strategy,
    pub work_cap: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            workers: 0,
            strategy: Strategy::Auto,
            work_cap: DEFAULT_WORK_CAP,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SurvivalRow {
    pub k: usize,
    pub count: usize,
    pub survival: String,
    pub decimal: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StabilityReport {
    pub sequence: String,
    pub prime_bound: u64,
    pub max_depth: usize,
    pub strategy: Strategy,
    pub prime_count: usize,
    pub survival: Vec<SurvivalRow>,
    pub records: Vec<DepthRecord>,
}

impl StabilityReport {
    /// `#{p : depth >= k} / pi(X)`; 1 at `k = 0`.
    pub fn survival(&self, k: usize) -> BigRational {
        match k {
            0 => BigRational::one(),
            k => parse_ratio(&self.survival[k - 1].survival).expect("stored as a valid rational"),
        }
    }

    pub fn survival_decimal(&self, k: usize) -> f64 {
        ratio_to_f64(&self.survival(k))
    }

    /// Per-prime rows `p,depth,reason`.
    pub fn records_csv(&self) -> Result<String> {
        crate::report::csv_string(&self.records)
    }

    pub fn survival_csv(&self) -> Result<String> {
        crate::report::csv_string(&self.survival)
    }
}

/// Stable depth of every prime `p <= prime_bound`, up to `max_depth`.
pub fn density_scan(
    seq: &PolySequence,
    prime_bound: u64,
    max_depth: usize,
    opts: ScanOptions,
) -> Result<StabilityReport> {
    if prime_bound < MIN_PRIME_BOUND {
        return Err(Error::Domain(format!("prime bound must be at least {MIN_PRIME_BOUND}")));
    }
    if max_depth == 0 {
        return Err(Error::Domain("maximal depth must be positive".into()));
    }
    let primes = primes_up_to(prime_bound);
    let work = (max_depth as u64).saturating_mul(primes.len() as u64);
    if work > opts.work_cap {
        return Err(Error::ResourceCap(format!(
            "{max_depth} depths x {} primes = {work} work units exceeds the cap {}",
            primes.len(),
            opts.work_cap
        )));
    }
    let strategy = opts.strategy.resolve(seq);
    if strategy == Strategy::Full && seq.composed_degree(max_depth).is_none_or(|d| d > FULL_DEGREE_CAP) {
        return Err(Error::ResourceCap(format!(
            "composed degree at depth {max_depth} exceeds {FULL_DEGREE_CAP} for the full strategy"
        )));
    }
    let run = || {
        primes
            .par_iter()
            .map(|&p| stable_depth_with(seq, p, max_depth, strategy))
            .collect::<Result<Vec<_>>>()
    };
    let records = if opts.workers == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::ResourceCap(format!("cannot start {} workers: {e}", opts.workers)))?
            .install(run)?
    };
    let total = BigUint::from(primes.len());
    let survival = (1..=max_depth)
        .map(|k| {
            let count = records.iter().filter(|r| r.depth >= k).count();
            let exact = ratio_from_big(&BigUint::from(count), &total);
            SurvivalRow {
                k,
                count,
                decimal: ratio_to_f64(&exact),
                survival: fmt_ratio(&exact),
            }
        })
        .collect();
    Ok(StabilityReport {
        sequence: seq.to_string(),
        prime_bound,
        max_depth,
        strategy,
        prime_count: primes.len(),
        survival,
        records,
    })
}
