use num_bigint::BigUint;

use super::fp::{mul_slices, FpPoly};
use crate::arith::inv_mod;
use crate::error::{Error, Result};

/// Below this modulus degree remainders use long division.
const NEWTON_THRESHOLD: usize = 48;

/// A monic modulus with the precomputed inverse of its reversal, for
/// remainders by two multiplications.
#[derive(Clone, Debug)]
pub struct ModulusPoly {
    f: FpPoly,
    /// `rev(f)^-1 mod X^deg f`.
    rev_inv: Vec<u64>,
}

fn truncate(mut v: Vec<u64>, n: usize) -> Vec<u64> {
    v.truncate(n);
    v
}

/// Inverse of the power series `a` (with `a[0] != 0`) modulo `X^n`.
fn series_inverse(a: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut g = vec![inv_mod(a[0], p).expect("unit constant term")];
    let mut k = 1;
    while k < n {
        k = (2 * k).min(n);
        // g <- g * (2 - a g) mod X^k
        let ag = truncate(mul_slices(&a[..a.len().min(k)], &g, p), k);
        let mut t: Vec<u64> = ag.iter().map(|&c| if c == 0 { 0 } else { p - c }).collect();
        t.resize(k, 0);
        t[0] = (t[0] + 2) % p;
        g = truncate(mul_slices(&g, &t, p), k);
    }
    g.resize(n, 0);
    g
}

impl ModulusPoly {
    /// Normalizes `f` to be monic; errors on constants.
    pub fn new(f: &FpPoly) -> Result<Self> {
        let d = f.degree().ok_or(Error::ZeroModulus)?;
        if d == 0 {
            return Err(Error::Domain("modulus must have degree >= 1".into()));
        }
        let f = f.monic();
        let rev: Vec<u64> = f.coeffs().iter().rev().copied().collect();
        let rev_inv = if d >= NEWTON_THRESHOLD {
            series_inverse(&rev, d, f.modulus())
        } else {
            Vec::new()
        };
        Ok(Self { f, rev_inv })
    }

    pub fn poly(&self) -> &FpPoly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.degree().unwrap()
    }

    pub fn modulus(&self) -> u64 {
        self.f.modulus()
    }

    /// `a mod f`.
    pub fn reduce(&self, a: &FpPoly) -> Result<FpPoly> {
        if a.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), a.modulus()));
        }
        Ok(self.reduce_unchecked(a))
    }

    fn reduce_unchecked(&self, a: &FpPoly) -> FpPoly {
        let n = self.degree();
        let Some(da) = a.degree().filter(|&d| d >= n) else {
            return a.clone();
        };
        if self.rev_inv.is_empty() || da > 2 * n - 2 {
            return a.divrem(&self.f).expect("nonzero modulus").1;
        }
        let p = self.modulus();
        let m = da - n + 1;
        let rev_a: Vec<u64> = a.coeffs().iter().rev().take(m).copied().collect();
        let q_rev = truncate(mul_slices(&rev_a, &self.rev_inv[..m.min(n)], p), m);
        let mut q: Vec<u64> = q_rev;
        q.resize(m, 0);
        q.reverse();
        let qf = mul_slices(&q, self.f.coeffs(), p);
        let r: Vec<u64> = (0..n)
            .map(|i| {
                let (x, y) = (a.coeff(i), qf.get(i).copied().unwrap_or(0));
                if x >= y { x - y } else { x + p - y }
            })
            .collect();
        FpPoly::from_raw(p, r)
    }

    /// `a * b mod f` for reduced inputs.
    pub fn mulmod(&self, a: &FpPoly, b: &FpPoly) -> Result<FpPoly> {
        if a.modulus() != self.modulus() || b.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), a.modulus().max(b.modulus())));
        }
        Ok(self.mulmod_unchecked(a, b))
    }

    pub(crate) fn mulmod_unchecked(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        self.reduce_unchecked(&a.mul_unchecked(b))
    }

    /// `base^e mod f` by square and multiply.
    pub fn powmod(&self, base: &FpPoly, e: &BigUint) -> Result<FpPoly> {
        let base = self.reduce(base)?;
        let mut acc = self.reduce_unchecked(&FpPoly::one(self.modulus()));
        for i in (0..e.bits()).rev() {
            acc = self.mulmod_unchecked(&acc, &acc);
            if e.bit(i) {
                acc = self.mulmod_unchecked(&acc, &base);
            }
        }
        Ok(acc)
    }

    /// `g(h) mod f` by the baby-step giant-step method of Brent and Kung.
    pub fn compose_mod(&self, g: &FpPoly, h: &FpPoly) -> Result<FpPoly> {
        let p = self.modulus();
        if g.modulus() != p || h.modulus() != p {
            return Err(Error::ModulusMismatch(p, g.modulus().max(h.modulus())));
        }
        let Some(dg) = g.degree() else {
            return Ok(FpPoly::zero(p));
        };
        let n = self.degree();
        let h = self.reduce_unchecked(h);
        let k = ((dg + 1) as f64).sqrt().ceil().max(1.0) as usize;
        let mut powers = vec![self.reduce_unchecked(&FpPoly::one(p))];
        for i in 1..=k {
            let next = self.mulmod_unchecked(&powers[i - 1], &h);
            powers.push(next);
        }
        let giant = powers.pop().unwrap();
        let batch = {
            let sq = (p as u128 - 1) * (p as u128 - 1);
            (u128::MAX / sq.max(1)).min(1 << 20) as usize
        };
        let block_value = |block: &[u64]| -> FpPoly {
            let mut acc = vec![0u128; n];
            let mut count = 0;
            for (c, pw) in block.iter().zip(&powers) {
                if *c == 0 {
                    continue;
                }
                for (slot, &x) in acc.iter_mut().zip(pw.coeffs()) {
                    *slot += *c as u128 * x as u128;
                }
                count += 1;
                if count == batch {
                    for slot in acc.iter_mut() {
                        *slot %= p as u128;
                    }
                    count = 1;
                }
            }
            FpPoly::from_raw(p, acc.into_iter().map(|x| (x % p as u128) as u64).collect())
        };
        let blocks: Vec<&[u64]> = g.coeffs().chunks(k).collect();
        let mut acc = FpPoly::zero(p);
        for block in blocks.iter().rev() {
            acc = self.mulmod_unchecked(&acc, &giant).add_unchecked(&block_value(block));
        }
        Ok(acc)
    }
}

/// `base^e mod m` for an arbitrary nonzero modulus polynomial.
pub fn powmod(base: &FpPoly, e: &BigUint, m: &FpPoly) -> Result<FpPoly> {
    ModulusPoly::new(m)?.powmod(base, e)
}

/// `a * b mod m`.
pub fn mulmod(a: &FpPoly, b: &FpPoly, m: &FpPoly) -> Result<FpPoly> {
    let m = ModulusPoly::new(m)?;
    m.mulmod(&m.reduce(a)?, &m.reduce(b)?)
}
