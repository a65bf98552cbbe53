use num_rational::BigRational;
use serde::Serialize;

use super::scan::StabilityReport;
use crate::arith::{fmt_ratio, ratio_to_f64};
use crate::error::{Error, Result};

/// Scores above this many standard deviations are flagged.
const FLAG_SIGMAS: f64 = 4.0;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ComparisonRow {
    pub k: usize,
    pub empirical: String,
    pub empirical_decimal: f64,
    pub candidate: String,
    pub candidate_decimal: f64,
    /// Binomial z-score; `None` when the candidate is 0 or 1 and the
    /// empirical value differs (an infinite score).
    pub z: Option<f64>,
    pub flagged: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Comparison {
    pub sequence: String,
    pub prime_count: usize,
    pub rows: Vec<ComparisonRow>,
    pub any_flagged: bool,
}

/// Empirical survival at each depth against a candidate cycle proportion,
/// scored as `(s - pi) / sqrt(pi (1 - pi) / M)` over `M` primes.
pub fn chebotarev_compare(report: &StabilityReport, candidates: &[BigRational]) -> Result<Comparison> {
    if candidates.len() != report.max_depth {
        return Err(Error::LengthMismatch {
            expected: report.max_depth,
            got: candidates.len(),
        });
    }
    let m = report.prime_count as f64;
    let rows: Vec<ComparisonRow> = candidates
        .iter()
        .enumerate()
        .map(|(i, pi)| {
            let k = i + 1;
            let s = report.survival(k);
            let (sd, pd) = (ratio_to_f64(&s), ratio_to_f64(pi));
            let var = pd * (1.0 - pd) / m;
            let z = if &s == pi {
                Some(0.0)
            } else if var > 0.0 {
                Some((sd - pd) / var.sqrt())
            } else {
                None
            };
            ComparisonRow {
                k,
                empirical: fmt_ratio(&s),
                empirical_decimal: sd,
                candidate: fmt_ratio(pi),
                candidate_decimal: pd,
                flagged: z.is_none_or(|z| z.abs() > FLAG_SIGMAS),
                z,
            }
        })
        .collect();
    Ok(Comparison {
        sequence: report.sequence.clone(),
        prime_count: report.prime_count,
        any_flagged: rows.iter().any(|r| r.flagged),
        rows,
    })
}
