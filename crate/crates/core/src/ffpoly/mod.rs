//! Polynomials over the rationals and over prime fields: reduction,
//! composition, fast modular arithmetic and irreducibility tests.

mod fp;
mod irred;
mod modular;

pub use fp::{FpPoly, MAX_MODULUS};
pub use irred::{
    irreducible_count_sanity, is_irreducible, is_irreducible_by_trial_division, monic_from_code,
    monic_irreducible_count, FrobeniusCache, IrreducibleSample,
};
pub use modular::{mulmod, powmod, ModulusPoly};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{parse_ratio, ratio_mod_p};
use crate::error::{Error, Result};

/// A polynomial over the rationals, constant term first, without trailing
/// zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> RatPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// `self(inner)`.
    pub fn compose(&self, inner: &RatPoly) -> RatPoly {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            acc.mul(inner).add(&Self::constant(c.clone()))
        })
    }

    /// Coefficient-wise reduction modulo `p`, refusing a vanishing
    /// denominator or a vanishing leading coefficient.
    pub fn reduce_mod_p(&self, p: u64) -> Result<FpPoly> {
        fp::check_modulus(p)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| ratio_mod_p(c, p).ok_or(Error::BadDenominator(p)))
            .collect::<Result<Vec<u64>>>()?;
        if coeffs.last() == Some(&0) {
            return Err(Error::LeadingCoeffVanishes(p));
        }
        Ok(FpPoly::from_raw(p, coeffs))
    }

    /// Common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()))
    }
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// `"c0 c1 c2 ..."`; the zero polynomial prints as `0`.
impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(fmt_coeff).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl FromStr for RatPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split_whitespace()
            .map(parse_ratio)
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        Ok(Self::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use proptest::prelude::*;

    #[test]
    fn reduction_examples() {
        let f = RatPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(f.reduce_mod_p(7).unwrap(), FpPoly::from_i64(7, &[5, 0, 1]).unwrap());
        let g = RatPoly::new(vec![ratio(1, 1), ratio(0, 1), ratio(1, 2)]);
        assert!(matches!(g.reduce_mod_p(2), Err(Error::BadDenominator(2))));
        let h = RatPoly::from_i64(&[0, 1, 3]);
        assert!(matches!(h.reduce_mod_p(3), Err(Error::LeadingCoeffVanishes(3))));
        assert!(f.reduce_mod_p(8).is_err());
    }

    #[test]
    fn text_round_trip() {
        let f: RatPoly = "1 -3/4 0 2".parse().unwrap();
        assert_eq!(f.degree(), Some(3));
        assert_eq!(f.to_string(), "1 -3/4 0 2");
        let g: RatPoly = "\u{2212}2 0 1".parse().unwrap();
        assert_eq!(g, RatPoly::from_i64(&[-2, 0, 1]));
        assert_eq!("0 0".parse::<RatPoly>().unwrap(), RatPoly::zero());
        assert_eq!(RatPoly::zero().to_string(), "0");
        assert!("".parse::<RatPoly>().is_err());
        assert!("1 x".parse::<RatPoly>().is_err());
        assert!("1/0".parse::<RatPoly>().is_err());
    }

    #[test]
    fn composition_and_calculus() {
        let f = RatPoly::from_i64(&[1, 0, 1]);
        assert_eq!(f.compose(&f), RatPoly::from_i64(&[2, 0, 2, 0, 1]));
        assert_eq!(f.derivative(), RatPoly::from_i64(&[0, 2]));
        assert_eq!(f.eval(&ratio(1, 2)), ratio(5, 4));
        let g = RatPoly::new(vec![ratio(1, 6), ratio(1, 4)]);
        assert_eq!(g.denominator_lcm(), BigInt::from(12));
    }

    fn arb_rat() -> impl Strategy<Value = BigRational> {
        (-20i64..20, 1i64..6).prop_map(|(n, d)| ratio(n, d))
    }

    fn arb_ratpoly() -> impl Strategy<Value = RatPoly> {
        proptest::collection::vec(arb_rat(), 0..5).prop_map(RatPoly::new)
    }

    proptest! {
        #[test]
        fn reduction_is_multiplicative(f in arb_ratpoly(), g in arb_ratpoly(), pi in 0usize..4) {
            let p = [7u64, 11, 13, 17][pi];
            if let (Ok(a), Ok(b), Ok(c)) = (f.reduce_mod_p(p), g.reduce_mod_p(p), f.mul(&g).reduce_mod_p(p)) {
                prop_assert_eq!(a.mul(&b).unwrap(), c);
            }
        }

        #[test]
        fn text_round_trips(f in arb_ratpoly()) {
            prop_assert_eq!(f.to_string().parse::<RatPoly>().unwrap(), f);
        }
    }
}
