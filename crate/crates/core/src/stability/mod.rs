//! Stable primes of iterated polynomial sequences: per-prime stable depth,
//! density scans with survival curves, comparison with candidate cycle
//! proportions, Dickson polynomials and orbit obstructions.

mod compare;
mod depth;
mod orbits;
mod scan;

pub use compare::{chebotarev_compare, Comparison, ComparisonRow};
pub use depth::{stable_depth, stable_depth_with, DepthRecord, FailureReason, Strategy, FULL_DEGREE_CAP};
pub use orbits::{detect_periodic, detect_postcritical, dickson, dickson_identity_holds, PostcriticalWitness, HEIGHT_CUTOFF_BITS};
pub use scan::{density_scan, ScanOptions, StabilityReport, SurvivalRow, DEFAULT_WORK_CAP};

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::parse_ratio;
use crate::error::{Error, Result};
use crate::ffpoly::RatPoly;

/// `head` followed by `tail` repeated forever; entry 1 is the outermost
/// function of every partial composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySequence {
    head: Vec<RatPoly>,
    tail: Vec<RatPoly>,
}

impl PolySequence {
    pub fn new(head: Vec<RatPoly>, tail: Vec<RatPoly>) -> Result<Self> {
        if tail.is_empty() {
            return Err(Error::Domain("sequence tail must be nonempty".into()));
        }
        if let Some(f) = head.iter().chain(&tail).find(|f| f.degree().unwrap_or(0) < 2) {
            return Err(Error::Domain(format!("entry {f} has degree < 2")));
        }
        Ok(Self { head, tail })
    }

    /// `(f - a, f, f, ...)`.
    pub fn from_pair(f: &RatPoly, a: &BigRational) -> Result<Self> {
        Self::new(vec![f.sub(&RatPoly::constant(a.clone()))], vec![f.clone()])
    }

    pub fn head(&self) -> &[RatPoly] {
        &self.head
    }

    pub fn tail(&self) -> &[RatPoly] {
        &self.tail
    }

    /// Entry `j >= 1`.
    pub fn entry(&self, j: usize) -> &RatPoly {
        assert!(j >= 1, "entries are numbered from 1");
        if j <= self.head.len() {
            &self.head[j - 1]
        } else {
            &self.tail[(j - 1 - self.head.len()) % self.tail.len()]
        }
    }

    /// True if every entry has degree 2.
    pub fn all_quadratic(&self) -> bool {
        self.head.iter().chain(&self.tail).all(|f| f.degree() == Some(2))
    }

    /// Degree of the `n`-th partial composition.
    pub fn composed_degree(&self, n: usize) -> Option<u64> {
        (1..=n).try_fold(1u64, |acc, j| acc.checked_mul(self.entry(j).degree().unwrap() as u64))
    }
}

impl fmt::Display for PolySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[RatPoly]| v.iter().map(|p| format!("[{p}]")).collect::<Vec<_>>().join(", ");
        write!(f, "head: {}; tail: {}", join(&self.head), join(&self.tail))
    }
}

/// Sequence specification document: explicit entries, or the pair
/// `{f, a}` standing for `(f - a, f, f, ...)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SequenceSpec {
    Explicit { head: Vec<String>, tail: Vec<String> },
    Pair {
        f: String,
        #[serde(deserialize_with = "string_or_number")]
        a: String,
    },
}

fn string_or_number<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<String, D::Error> {
    match serde_json::Value::deserialize(d)? {
        serde_json::Value::String(s) => Ok(s),
        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        other => Err(serde::de::Error::custom(format!("expected a rational, got {other}"))),
    }
}

impl SequenceSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<PolySequence> {
        match self {
            SequenceSpec::Explicit { head, tail } => {
                let parse = |v: &[String]| v.iter().map(|s| s.parse()).collect::<Result<Vec<RatPoly>>>();
                PolySequence::new(parse(head)?, parse(tail)?)
            }
            SequenceSpec::Pair { f, a } => PolySequence::from_pair(&f.parse()?, &parse_ratio(a)?),
        }
    }
}

/// `f_1 o f_2 o ... o f_n` over the rationals.
pub fn partial_composition(seq: &PolySequence, n: usize) -> RatPoly {
    (1..=n).fold(RatPoly::x(), |acc, j| acc.compose(seq.entry(j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn pair_encoding_and_compositions() {
        let f = RatPoly::from_i64(&[-2, 0, 1]);
        let seq = PolySequence::from_pair(&f, &ratio(0, 1)).unwrap();
        assert_eq!(partial_composition(&seq, 1), f);
        let g = RatPoly::from_i64(&[1, 0, 1]);
        let seq = PolySequence::from_pair(&g, &ratio(0, 1)).unwrap();
        assert_eq!(partial_composition(&seq, 2), RatPoly::from_i64(&[2, 0, 2, 0, 1]));
        let seq = PolySequence::from_pair(&g, &ratio(3, 1)).unwrap();
        assert_eq!(seq.entry(1), &RatPoly::from_i64(&[-2, 0, 1]));
        assert_eq!(seq.entry(5), &g);
        assert_eq!(partial_composition(&seq, 3).degree(), Some(8));
    }

    #[test]
    fn validation_and_specs() {
        assert!(PolySequence::new(vec![], vec![]).is_err());
        assert!(PolySequence::new(vec![], vec![RatPoly::from_i64(&[1, 1])]).is_err());
        let spec = SequenceSpec::from_json(r#"{"f": "−2 0 1", "a": "0"}"#).unwrap();
        assert_eq!(spec, SequenceSpec::from_json(r#"{"f": "−2 0 1", "a": 0}"#).unwrap());
        assert_eq!(spec.build().unwrap().entry(1), &RatPoly::from_i64(&[-2, 0, 1]));
        let spec = SequenceSpec::from_json(r#"{"head": ["1 0 1"], "tail": ["0 0 1", "1 1 1"]}"#).unwrap();
        let seq = spec.build().unwrap();
        assert_eq!(seq.entry(4), &RatPoly::from_i64(&[0, 0, 1]));
        assert_eq!(seq.composed_degree(3), Some(8));
        assert!(SequenceSpec::from_json(r#"{"g": 1}"#).is_err());
    }

    #[test]
    fn mixed_degrees() {
        let seq = PolySequence::new(vec![RatPoly::from_i64(&[1, 0, 0, 1])], vec![RatPoly::from_i64(&[0, 0, 1])]).unwrap();
        assert!(!seq.all_quadratic());
        assert_eq!(partial_composition(&seq, 2), RatPoly::from_i64(&[1, 0, 0, 0, 0, 0, 1]));
    }
}
