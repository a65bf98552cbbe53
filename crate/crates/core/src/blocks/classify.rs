use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::is_primitive;
use crate::arith::{divisors, factorial, is_prime, prime_power};
use crate::error::{Error, Result};
use crate::group::PermGroup;

/// Case of the classification of primitive groups containing a full cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum CaseTag {
    /// `C_p <= G <= AGL_1(p)`.
    #[serde(rename = "1a")]
    AffinePrime,
    #[serde(rename = "1b")]
    S4,
    /// `A_n <= G <= S_n`.
    #[serde(rename = "2a")]
    AlternatingOrSymmetric,
    /// `PGL_d(q) <= G <= PGammaL_d(q)`, `e` the field-automorphism factor.
    #[serde(rename = "2b")]
    ProjectiveLinear { d: u32, q: u64, e: u32 },
    /// `M_11`, `PSL_2(11)` on 11 points or `M_23`.
    #[serde(rename = "2c")]
    Sporadic,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::AffinePrime => write!(f, "1a"),
            CaseTag::S4 => write!(f, "1b"),
            CaseTag::AlternatingOrSymmetric => write!(f, "2a"),
            CaseTag::ProjectiveLinear { d, q, .. } => write!(f, "2b (d={d}, q={q})"),
            CaseTag::Sporadic => write!(f, "2c"),
            CaseTag::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationVerdict {
    #[serde(flatten)]
    pub tag: CaseTag,
    pub degree: usize,
    pub order: String,
    /// Only known when the group is enumerated.
    pub solvable: Option<bool>,
}

/// `|PGL_d(q)| = q^(d(d-1)/2) * prod_{i=2..d} (q^i - 1)`.
pub fn pgl_order(d: u32, q: u64) -> BigUint {
    let qb = BigUint::from(q);
    let mut order = qb.pow(d * (d - 1) / 2);
    for i in 2..=d {
        order *= qb.pow(i) - BigUint::one();
    }
    order
}

const MAX_PROJECTIVE_DEGREE: u64 = 1024;

fn projective_match(n: u64, order: &BigUint) -> Option<CaseTag> {
    for q in 2..n {
        let Some((_, f)) = prime_power(q) else { continue };
        let mut d = 2u32;
        loop {
            let points = (q.pow(d) - 1) / (q - 1);
            if points > n || points > MAX_PROJECTIVE_DEGREE {
                break;
            }
            if points == n && !matches!((d, q), (2, 2) | (2, 3)) {
                let base = pgl_order(d, q);
                for e in divisors(f as u64) {
                    if &(&base * e) == order {
                        return Some(CaseTag::ProjectiveLinear { d, q, e: e as u32 });
                    }
                }
            }
            d += 1;
        }
    }
    None
}

/// Decision ladder over degree and order for a primitive group that
/// contains a full cycle.
pub fn classify_primitive_with_full_cycle(g: &PermGroup) -> Result<ClassificationVerdict> {
    if !g.is_transitive() || !is_primitive(g)? {
        return Err(Error::Precondition("group is not primitive".into()));
    }
    if g.find_full_cycle().is_none() {
        return Err(Error::Precondition("group contains no full cycle".into()));
    }
    let n = g.degree() as u64;
    let order = g.order();
    let solvable = if g.is_enumerated() { Some(g.is_solvable()?) } else { None };
    let nfact = factorial(n);
    let tag = if is_prime(n) && (BigUint::from(n * (n - 1)) % order) == BigUint::from(0u32) {
        CaseTag::AffinePrime
    } else if n == 4 && order == &BigUint::from(24u32) {
        CaseTag::S4
    } else if order == &nfact || order * 2u32 == nfact {
        CaseTag::AlternatingOrSymmetric
    } else if let Some(tag) = projective_match(n, order) {
        tag
    } else if [(11u64, 7920u64), (11, 660), (23, 10_200_960)]
        .iter()
        .any(|&(deg, ord)| deg == n && order == &BigUint::from(ord))
    {
        CaseTag::Sporadic
    } else {
        CaseTag::Unknown
    };
    Ok(ClassificationVerdict {
        tag,
        degree: n as usize,
        order: order.to_string(),
        solvable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::generate;
    use crate::perm::Permutation;

    #[test]
    fn pgl_orders() {
        assert_eq!(pgl_order(2, 5), BigUint::from(120u32));
        assert_eq!(pgl_order(3, 2), BigUint::from(168u32));
        assert_eq!(pgl_order(2, 4), BigUint::from(60u32));
        assert_eq!(pgl_order(2, 7), BigUint::from(336u32));
        assert_eq!(pgl_order(4, 2), BigUint::from(20160u32));
    }

    #[test]
    fn symmetric_is_2a() {
        let s6 = generate(
            &[Permutation::from_cycles(6, &[&[0, 1]]).unwrap(), Permutation::rotation(6)],
            1000,
        )
        .unwrap();
        let v = classify_primitive_with_full_cycle(&s6).unwrap();
        assert_eq!(v.tag, CaseTag::AlternatingOrSymmetric);
        assert_eq!(v.solvable, Some(false));
    }

    #[test]
    fn preconditions() {
        let c4 = generate(&[Permutation::rotation(4)], 10).unwrap();
        assert!(matches!(
            classify_primitive_with_full_cycle(&c4),
            Err(Error::Precondition(_))
        ));
        // A4 is primitive but has no 4-cycle
        let a4 = generate(
            &[
                Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap(),
                Permutation::from_cycles(4, &[&[1, 2, 3]]).unwrap(),
            ],
            100,
        )
        .unwrap();
        assert!(classify_primitive_with_full_cycle(&a4).is_err());
    }
}
