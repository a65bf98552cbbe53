use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::PolySequence;
use crate::arith::{inv_mod, is_prime, legendre, mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::ffpoly::{is_irreducible, FpPoly};

/// Largest composed degree tested by the full strategy.
pub const FULL_DEGREE_CAP: u64 = 1 << 12;

/// How irreducibility of the partial compositions is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// `tower` when every entry is quadratic, `full` otherwise.
    #[default]
    Auto,
    /// Rabin's test on the composed polynomial modulo `p`.
    Full,
    /// Quadratic steps only: one quadratic-character (or trace) test per
    /// depth on a root of the previous composition.
    Tower,
}

impl Strategy {
    pub fn resolve(self, seq: &PolySequence) -> Strategy {
        match self {
            Strategy::Auto if seq.all_quadratic() => Strategy::Tower,
            Strategy::Auto => Strategy::Full,
            s => s,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strategy::Auto => "auto",
            Strategy::Full => "full",
            Strategy::Tower => "tower",
        };
        write!(f, "{s}")
    }
}

/// Why the scan of one prime stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    /// The `k`-th partial composition is reducible.
    Reducible(usize),
    BadDenominator,
    LeadingCoeff,
    /// Irreducible through the maximal depth.
    Exhausted,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::Reducible(k) => write!(f, "reducible@{k}"),
            FailureReason::BadDenominator => write!(f, "bad_denominator"),
            FailureReason::LeadingCoeff => write!(f, "leading_coeff"),
            FailureReason::Exhausted => write!(f, "exhausted"),
        }
    }
}

impl Serialize for FailureReason {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for FailureReason {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bad_denominator" => FailureReason::BadDenominator,
            "leading_coeff" => FailureReason::LeadingCoeff,
            "exhausted" => FailureReason::Exhausted,
            _ => FailureReason::Reducible(
                s.strip_prefix("reducible@")
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown failure reason {s:?}")))?,
            ),
        })
    }
}

impl<'de> Deserialize<'de> for FailureReason {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthRecord {
    pub p: u64,
    pub depth: usize,
    pub reason: FailureReason,
}

fn reduce_entry(seq: &PolySequence, j: usize, p: u64) -> std::result::Result<FpPoly, FailureReason> {
    seq.entry(j).reduce_mod_p(p).map_err(|e| match e {
        Error::BadDenominator(_) => FailureReason::BadDenominator,
        _ => FailureReason::LeadingCoeff,
    })
}

/// Stable depth with the automatically chosen strategy.
pub fn stable_depth(seq: &PolySequence, p: u64, max_depth: usize) -> Result<DepthRecord> {
    stable_depth_with(seq, p, max_depth, Strategy::Auto)
}

/// Largest `k <= max_depth` such that the partial compositions of depth
/// `1..=k` all reduce modulo `p` with full degree and stay irreducible.
pub fn stable_depth_with(seq: &PolySequence, p: u64, max_depth: usize, strategy: Strategy) -> Result<DepthRecord> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if max_depth == 0 {
        return Err(Error::Domain("maximal depth must be positive".into()));
    }
    match strategy.resolve(seq) {
        Strategy::Tower => tower_depth(seq, p, max_depth),
        _ => full_depth(seq, p, max_depth),
    }
}

fn record(p: u64, depth: usize, reason: FailureReason) -> Result<DepthRecord> {
    Ok(DepthRecord { p, depth, reason })
}

fn full_depth(seq: &PolySequence, p: u64, max_depth: usize) -> Result<DepthRecord> {
    match seq.composed_degree(max_depth) {
        Some(d) if d <= FULL_DEGREE_CAP => {}
        _ => {
            return Err(Error::ResourceCap(format!(
                "composed degree at depth {max_depth} exceeds {FULL_DEGREE_CAP}"
            )))
        }
    }
    let mut composed = FpPoly::x(p);
    for k in 1..=max_depth {
        let f = match reduce_entry(seq, k, p) {
            Ok(f) => f,
            Err(reason) => return record(p, k - 1, reason),
        };
        composed = composed.compose(&f)?;
        if !is_irreducible(&composed)? {
            return record(p, k - 1, FailureReason::Reducible(k));
        }
    }
    record(p, max_depth, FailureReason::Exhausted)
}

/// For quadratic entries `f_k = aX^2 + bX + c` and an irreducible previous
/// composition `F` of degree `D` with leading coefficient `L`, `F(f_k)` is
/// irreducible iff `f_k(X) - theta` is irreducible over `F_p(theta)` for a
/// root `theta` of `F`. For odd `p` that is the non-square test on the norm
/// of the discriminant, `(-4a)^D F(v) / L` with `v` the critical value of
/// `f_k`. For `p = 2` the step needs `b = 1` and trace `D c + s = 1`, where
/// `s` is the coefficient of `X^(D-1)` in `F`.
fn tower_depth(seq: &PolySequence, p: u64, max_depth: usize) -> Result<DepthRecord> {
    if !seq.all_quadratic() {
        return Err(Error::Precondition("tower strategy needs quadratic entries".into()));
    }
    let mut entries: Vec<[u64; 3]> = Vec::with_capacity(max_depth);
    // D mod (p - 1) for exponents, D mod 2 and the X^(D-1) coefficient for p = 2
    let mut deg_exp = 1 % (p - 1).max(1);
    let mut deg_parity = 1u64;
    let mut lead = 1u64;
    let mut second = 0u64;
    for k in 1..=max_depth {
        let f = match reduce_entry(seq, k, p) {
            Ok(f) => f,
            Err(reason) => return record(p, k - 1, reason),
        };
        let (c, b, a) = (f.coeff(0), f.coeff(1), f.coeff(2));
        let irreducible = if p == 2 {
            b == 1 && (deg_parity * c + second) % 2 == 1
        } else {
            let inv4a = inv_mod(mul_mod(4, a, p), p).expect("a is a unit");
            let v = (c + p - mul_mod(mul_mod(b, b, p), inv4a, p)) % p;
            let at_v = entries.iter().rev().fold(v, |x, &[c, b, a]| {
                (mul_mod(mul_mod(a, x, p), x, p) + mul_mod(b, x, p) + c) % p
            });
            let minus_4a = (p - mul_mod(4, a, p)) % p;
            let norm = mul_mod(
                mul_mod(pow_mod(minus_4a, deg_exp, p), at_v, p),
                inv_mod(lead, p).expect("leading coefficient is a unit"),
                p,
            );
            legendre(norm, p) == -1
        };
        if !irreducible {
            return record(p, k - 1, FailureReason::Reducible(k));
        }
        if p == 2 {
            second = deg_parity * b % 2;
        }
        lead = mul_mod(lead, pow_mod(a, deg_exp, p), p);
        if p > 2 {
            deg_exp = deg_exp * 2 % (p - 1);
        }
        deg_parity = 0;
        entries.push([c, b, a]);
    }
    record(p, max_depth, FailureReason::Exhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{primes_up_to, ratio};
    use crate::ffpoly::RatPoly;
    use crate::stability::partial_composition;

    fn pair(c: &[i64], a: i64) -> PolySequence {
        PolySequence::from_pair(&RatPoly::from_i64(c), &ratio(a, 1)).unwrap()
    }

    #[test]
    fn examples() {
        let s = pair(&[-2, 0, 1], 0);
        for strategy in [Strategy::Full, Strategy::Tower] {
            let r = stable_depth_with(&s, 5, 2, strategy).unwrap();
            assert_eq!(r.depth, 2, "{strategy}");
            assert_eq!(r.reason, FailureReason::Exhausted);
            let r = stable_depth_with(&s, 7, 4, strategy).unwrap();
            assert_eq!((r.depth, r.reason), (0, FailureReason::Reducible(1)));
        }
        let lc = pair(&[1, 0, 3], 0);
        let r = stable_depth(&lc, 3, 4).unwrap();
        assert_eq!((r.depth, r.reason), (0, FailureReason::LeadingCoeff));
        let half = PolySequence::from_pair(&RatPoly::from_i64(&[1, 0, 1]), &ratio(1, 2)).unwrap();
        let r = stable_depth(&half, 2, 4).unwrap();
        assert_eq!((r.depth, r.reason), (0, FailureReason::BadDenominator));
        assert_eq!(FailureReason::Reducible(3).to_string(), "reducible@3");
        for r in ["reducible@3", "exhausted", "bad_denominator", "leading_coeff"] {
            assert_eq!(r.parse::<FailureReason>().unwrap().to_string(), r);
        }
        assert!("reducible@".parse::<FailureReason>().is_err());
    }

    #[test]
    fn tower_agrees_with_full() {
        let seqs = [
            pair(&[1, 0, 1], 0),
            pair(&[-2, 0, 1], 0),
            pair(&[1, 1, 1], 0),
            pair(&[3, -1, 2], 1),
            pair(&[-1, 2, 1], 3),
            PolySequence::new(
                vec![RatPoly::from_i64(&[1, 1, 1])],
                vec![RatPoly::from_i64(&[2, 0, 3]), RatPoly::from_i64(&[-1, 1, 1])],
            )
            .unwrap(),
            PolySequence::new(
                vec![],
                vec![RatPoly::new(vec![ratio(1, 3), ratio(1, 1), ratio(1, 2)])],
            )
            .unwrap(),
        ];
        for seq in &seqs {
            for p in primes_up_to(1000) {
                let a = stable_depth_with(seq, p, 6, Strategy::Full).unwrap();
                let b = stable_depth_with(seq, p, 6, Strategy::Tower).unwrap();
                assert_eq!(a, b, "{seq} at p={p}");
            }
        }
    }

    #[test]
    fn incremental_matches_rational_composition() {
        let seq = pair(&[1, 1, 1], 2);
        let composed: Vec<RatPoly> = (1..=5).map(|n| partial_composition(&seq, n)).collect();
        for p in primes_up_to(300) {
            let r = stable_depth_with(&seq, p, 5, Strategy::Full).unwrap();
            let mut expect = 0;
            for f in &composed {
                match f.reduce_mod_p(p) {
                    Ok(g) if is_irreducible(&g).unwrap() => expect += 1,
                    _ => break,
                }
            }
            assert_eq!(r.depth, expect, "p={p}");
        }
    }

    #[test]
    fn strategy_errors() {
        let cubic = PolySequence::new(vec![], vec![RatPoly::from_i64(&[1, 0, 0, 1])]).unwrap();
        assert_eq!(Strategy::Auto.resolve(&cubic), Strategy::Full);
        assert!(stable_depth_with(&cubic, 5, 2, Strategy::Tower).is_err());
        assert!(matches!(stable_depth(&cubic, 5, 9), Err(Error::ResourceCap(_))));
        assert!(stable_depth(&cubic, 4, 2).is_err());
        assert!(stable_depth(&cubic, 5, 0).is_err());
    }
}
