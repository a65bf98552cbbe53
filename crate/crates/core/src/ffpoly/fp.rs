use std::fmt;

use crate::arith::{inv_mod, is_prime, mul_mod};
use crate::error::{Error, Result};

/// Moduli must stay below this bound so that a product of two residues
/// fits in 124 bits.
pub const MAX_MODULUS: u64 = 1 << 62;

const KARATSUBA_THRESHOLD: usize = 32;

/// A polynomial over `F_p`, constant term first, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

pub(crate) fn check_modulus(p: u64) -> Result<()> {
    if p >= MAX_MODULUS || !is_prime(p) {
        return Err(Error::Domain(format!("modulus {p} is not a prime below 2^62")));
    }
    Ok(())
}

/// Sum of products with lazy reduction: at most `LAZY` terms of size
/// `< 2^124` are added before reducing.
#[inline]
fn lazy_batch(p: u64) -> usize {
    let sq = (p as u128 - 1) * (p as u128 - 1);
    (u128::MAX / sq.max(1)).min(1 << 20) as usize
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        check_modulus(p)?;
        Ok(Self::from_raw(p, coeffs.into_iter().map(|c| c % p).collect()))
    }

    /// Coefficients already reduced modulo a checked prime.
    pub(crate) fn from_raw(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    /// From signed integer coefficients.
    pub fn from_i64(p: u64, coeffs: &[i64]) -> Result<Self> {
        check_modulus(p)?;
        let c = coeffs
            .iter()
            .map(|&c| (c as i128).rem_euclid(p as i128) as u64)
            .collect();
        Ok(Self::from_raw(p, c))
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::from_raw(p, vec![1 % p])
    }

    pub fn x(p: u64) -> Self {
        Self::from_raw(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn same_field(&self, other: &FpPoly) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn monic(&self) -> FpPoly {
        match inv_mod(self.leading(), self.p) {
            Some(inv) if inv != 1 => self.scale(inv),
            _ => self.clone(),
        }
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        let c = c % self.p;
        Self::from_raw(self.p, self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect())
    }

    pub fn add(&self, other: &FpPoly) -> Result<FpPoly> {
        self.same_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        Self::from_raw(
            p,
            (0..n)
                .map(|i| {
                    let s = self.coeff(i) + other.coeff(i);
                    if s >= p { s - p } else { s }
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> FpPoly {
        let p = self.p;
        Self::from_raw(p, self.coeffs.iter().map(|&a| if a == 0 { 0 } else { p - a }).collect())
    }

    pub fn sub(&self, other: &FpPoly) -> Result<FpPoly> {
        self.same_field(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub(crate) fn sub_unchecked(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        Self::from_raw(
            p,
            (0..n)
                .map(|i| {
                    let (a, b) = (self.coeff(i), other.coeff(i));
                    if a >= b { a - b } else { a + p - b }
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &FpPoly) -> Result<FpPoly> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &FpPoly) -> FpPoly {
        Self::from_raw(self.p, mul_slices(&self.coeffs, &other.coeffs, self.p))
    }

    /// Long division; errors on a zero divisor.
    pub fn divrem(&self, divisor: &FpPoly) -> Result<(FpPoly, FpPoly)> {
        self.same_field(divisor)?;
        let d = divisor.degree().ok_or(Error::ZeroModulus)?;
        let p = self.p;
        let Some(n) = self.degree().filter(|&n| n >= d) else {
            return Ok((FpPoly::zero(p), self.clone()));
        };
        let inv = inv_mod(divisor.leading(), p).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; n - d + 1];
        for i in (0..=n - d).rev() {
            let c = mul_mod(r[i + d], inv, p);
            q[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let t = mul_mod(c, b, p);
                let x = r[i + j];
                r[i + j] = if x >= t { x - t } else { x + p - t };
            }
        }
        r.truncate(d);
        Ok((Self::from_raw(p, q), Self::from_raw(p, r)))
    }

    pub fn rem(&self, divisor: &FpPoly) -> Result<FpPoly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &FpPoly) -> Result<FpPoly> {
        self.same_field(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        Self::from_raw(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
        )
    }

    /// `self(inner)` by Horner's rule.
    pub fn compose(&self, inner: &FpPoly) -> Result<FpPoly> {
        self.same_field(inner)?;
        let p = self.p;
        let mut acc = FpPoly::zero(p);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul_unchecked(inner).add_unchecked(&FpPoly::from_raw(p, vec![c]));
        }
        Ok(acc)
    }
}

/// Schoolbook product with lazy reduction.
fn mul_schoolbook(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let batch = lazy_batch(p);
    let n = a.len() + b.len() - 1;
    let pm = p as u128;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lo = k.saturating_sub(b.len() - 1);
        let hi = k.min(a.len() - 1);
        let mut acc: u128 = 0;
        let mut count = 0;
        for i in lo..=hi {
            acc += a[i] as u128 * b[k - i] as u128;
            count += 1;
            if count == batch {
                acc %= pm;
                count = 1;
            }
        }
        out.push((acc % pm) as u64);
    }
    out
}

fn add_into(dst: &mut [u64], src: &[u64], p: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        let t = *d + s;
        *d = if t >= p { t - p } else { t };
    }
}

fn sub_into(dst: &mut [u64], src: &[u64], p: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = if *d >= s { *d - s } else { *d + p - s };
    }
}

/// Karatsuba product, falling back to schoolbook on short or unbalanced
/// inputs.
pub(crate) fn mul_slices(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.len() < KARATSUBA_THRESHOLD {
        return mul_schoolbook(a, b, p);
    }
    if a.len() > 2 * b.len() {
        // split the long factor into chunks of the short one's length
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, chunk) in a.chunks(b.len()).enumerate() {
            let part = mul_slices(chunk, b, p);
            add_into(&mut out[i * b.len()..], &part, p);
        }
        return out;
    }
    let m = a.len() / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m.min(b.len()));
    let z0 = mul_slices(a0, b0, p);
    let z2 = mul_slices(a1, b1, p);
    let mut sa = a0.to_vec();
    sa.resize(m.max(a1.len()), 0);
    add_into(&mut sa, a1, p);
    let mut sb = b0.to_vec();
    sb.resize(m.max(b1.len()), 0);
    add_into(&mut sb, b1, p);
    let mut z1 = mul_slices(&sa, &sb, p);
    z1.resize(z1.len().max(z0.len()).max(z2.len()), 0);
    sub_into(&mut z1, &z0, p);
    sub_into(&mut z1, &z2, p);
    let mut out = vec![0u64; a.len() + b.len() - 1];
    add_into(&mut out, &z0, p);
    add_into(&mut out[m..], &z1, p);
    add_into(&mut out[2 * m..], &z2, p);
    out
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly(mod {}: {})", self.p, self)
    }
}

/// Coefficients constant term first, space separated; `0` for zero.
impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(p: u64, c: &[i64]) -> FpPoly {
        FpPoly::from_i64(p, c).unwrap()
    }

    #[test]
    fn composition_example() {
        let f = poly(3, &[1, 0, 1]);
        assert_eq!(f.compose(&f).unwrap(), poly(3, &[2, 0, 2, 0, 1]));
        assert_eq!(FpPoly::x(3).compose(&f).unwrap(), f);
        assert!(f.compose(&poly(5, &[1])).is_err());
    }

    #[test]
    fn division_and_gcd() {
        let f = poly(7, &[-2, 0, 1]);
        let (q, r) = f.divrem(&poly(7, &[-3, 1])).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, poly(7, &[3, 1]));
        let g = f.gcd(&poly(7, &[-3, 1]).mul(&poly(7, &[1, 1])).unwrap()).unwrap();
        assert_eq!(g, poly(7, &[-3, 1]));
        assert!(f.divrem(&FpPoly::zero(7)).is_err());
        assert!(FpPoly::new(9, vec![1]).is_err());
    }

    #[test]
    fn karatsuba_matches_schoolbook_on_large_modulus() {
        let p = 4_611_686_018_427_387_847;
        let a: Vec<u64> = (0..300u64).map(|i| i.wrapping_mul(0x9E37_79B9_7F4A_7C15) % p).collect();
        let b: Vec<u64> = (0..170u64).map(|i| i.wrapping_mul(0xBF58_476D_1CE4_E5B9).wrapping_add(7) % p).collect();
        assert_eq!(mul_slices(&a, &b, p), mul_schoolbook(&a, &b, p));
    }

    fn arb_poly(p: u64, max_len: usize) -> impl Strategy<Value = FpPoly> {
        proptest::collection::vec(0..p, 0..max_len).prop_map(move |c| FpPoly::from_raw(p, c))
    }

    proptest! {
        #[test]
        fn karatsuba_agrees(a in arb_poly(101, 200), b in arb_poly(101, 120)) {
            prop_assert_eq!(
                mul_slices(a.coeffs(), b.coeffs(), 101),
                FpPoly::from_raw(101, mul_schoolbook(a.coeffs(), b.coeffs(), 101)).coeffs().to_vec()
            );
        }

        #[test]
        fn divrem_reconstructs(a in arb_poly(13, 40), b in arb_poly(13, 12)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }

        #[test]
        fn compose_degree_law_and_associativity(
            f in arb_poly(11, 4), g in arb_poly(11, 4), h in arb_poly(11, 4)
        ) {
            if let (Some(dg), Some(df)) = (g.degree(), f.degree().filter(|&d| d >= 1)) {
                prop_assert_eq!(g.compose(&f).unwrap().degree(), Some(dg * df));
            }
            let left = h.compose(&g).unwrap().compose(&f).unwrap();
            let right = h.compose(&g.compose(&f).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
