use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::fp::FpPoly;
use super::modular::ModulusPoly;
use crate::arith::{divisors, mobius, prime_divisors};
use crate::error::{Error, Result};

/// `X^(p^j) mod f` for several `j`, from `X^p mod f` by repeated modular
/// composition: `X^(p^(a+b)) = (X^(p^a)) o (X^(p^b))`.
pub struct FrobeniusCache<'a> {
    modulus: &'a ModulusPoly,
    powers: HashMap<usize, FpPoly>,
}

impl<'a> FrobeniusCache<'a> {
    pub fn new(modulus: &'a ModulusPoly) -> Result<Self> {
        let p = modulus.modulus();
        let h1 = modulus.powmod(&FpPoly::x(p), &BigUint::from(p))?;
        let mut powers = HashMap::new();
        powers.insert(0, modulus.reduce(&FpPoly::x(p))?);
        powers.insert(1, h1);
        Ok(Self { modulus, powers })
    }

    /// `X^(p^j) mod f`.
    pub fn get(&mut self, j: usize) -> Result<FpPoly> {
        if let Some(h) = self.powers.get(&j) {
            return Ok(h.clone());
        }
        let mut acc: Option<(usize, FpPoly)> = None;
        let mut step = 1usize;
        let mut step_poly = self.powers[&1].clone();
        let mut rest = j;
        while rest > 0 {
            if rest & 1 == 1 {
                acc = Some(match acc {
                    None => (step, step_poly.clone()),
                    Some((e, h)) => {
                        let composed = self.modulus.compose_mod(&h, &step_poly)?;
                        self.powers.insert(e + step, composed.clone());
                        (e + step, composed)
                    }
                });
            }
            rest >>= 1;
            if rest > 0 {
                let doubled = match self.powers.get(&(2 * step)) {
                    Some(h) => h.clone(),
                    None => {
                        let h = self.modulus.compose_mod(&step_poly, &step_poly)?;
                        self.powers.insert(2 * step, h.clone());
                        h
                    }
                };
                step *= 2;
                step_poly = doubled;
            }
        }
        let (_, h) = acc.expect("j > 0");
        Ok(h)
    }
}

/// Rabin's test: `f` of degree `m` is irreducible iff `X^(p^m) = X mod f`
/// and `gcd(X^(p^(m/l)) - X, f) = 1` for every prime `l | m`.
pub fn is_irreducible(f: &FpPoly) -> Result<bool> {
    let m = match f.degree() {
        None | Some(0) => return Err(Error::Domain("irreducibility needs degree >= 1".into())),
        Some(m) => m,
    };
    if m == 1 {
        return Ok(true);
    }
    let modulus = ModulusPoly::new(f)?;
    let p = f.modulus();
    let x = FpPoly::x(p);
    let mut cache = FrobeniusCache::new(&modulus)?;
    // cheap rejection: a repeated or linear factor shows up in gcd(X^p - X, f)
    for l in prime_divisors(m as u64) {
        let h = cache.get(m / l as usize)?;
        if h.sub_unchecked(&x).gcd(modulus.poly())?.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(cache.get(m)? == modulus.reduce(&x)?)
}

/// Exhaustive oracle: no monic factor of degree `1..=m/2`.
pub fn is_irreducible_by_trial_division(f: &FpPoly) -> Result<bool> {
    let m = match f.degree() {
        None | Some(0) => return Err(Error::Domain("irreducibility needs degree >= 1".into())),
        Some(m) => m,
    };
    let p = f.modulus();
    for d in 1..=m / 2 {
        let count = p.checked_pow(d as u32).ok_or_else(|| Error::Size("trial division too large".into()))?;
        for code in 0..count {
            if f.rem(&monic_from_code(p, d, code))?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Monic polynomial of degree `d` whose lower coefficients are the base-`p`
/// digits of `code`.
pub fn monic_from_code(p: u64, d: usize, mut code: u64) -> FpPoly {
    let mut c = Vec::with_capacity(d + 1);
    for _ in 0..d {
        c.push(code % p);
        code /= p;
    }
    c.push(1);
    FpPoly::from_raw(p, c)
}

/// Number of monic irreducible polynomials of degree `d` over `F_p`:
/// `(1/d) sum_{e | d} mu(e) p^(d/e)`.
pub fn monic_irreducible_count(p: u64, d: usize) -> BigUint {
    let total: BigInt = divisors(d as u64)
        .into_iter()
        .map(|e| BigInt::from(mobius(e)) * BigInt::from(p).pow((d as u64 / e) as u32))
        .sum();
    (total / BigInt::from(d)).to_biguint().expect("count is positive")
}

#[derive(Clone, Debug, Serialize)]
pub struct IrreducibleSample {
    pub p: u64,
    pub d: usize,
    pub sample: usize,
    pub irreducible: usize,
    pub fraction: f64,
    pub expected: f64,
    /// Binomial standard deviation of the fraction under `expected`.
    pub tuple: f64,
}

impl IrreducibleSample {
    pub fn within_sigmas(&self, k: f64) -> bool {
        (self.fraction - self.expected).abs() <= k * self.tuple.max(f64::EPSILON)
    }
}

/// Fraction of irreducibles among `sample` random monic polynomials of
/// degree `d`, next to the exact proportion. Meant for `sample >= 1000`.
pub fn irreducible_count_sanity(p: u64, d: usize, sample: usize, seed: u64) -> Result<IrreducibleSample> {
    super::fp::check_modulus(p)?;
    if d == 0 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for _ in 0..sample {
        let c: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).chain([1]).collect();
        if is_irreducible(&FpPoly::from_raw(p, c))? {
            hits += 1;
        }
    }
    let count = monic_irreducible_count(p, d);
    let expected = crate::arith::ratio_to_f64(&crate::arith::ratio_from_big(&count, &BigUint::from(p).pow(d as u32)));
    let tuple = (expected * (1.0 - expected) / sample.max(1) as f64).sqrt();
    Ok(IrreducibleSample {
        p,
        d,
        sample,
        irreducible: hits,
        fraction: hits as f64 / sample.max(1) as f64,
        expected,
        tuple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, c: &[i64]) -> FpPoly {
        FpPoly::from_i64(p, c).unwrap()
    }

    #[test]
    fn examples() {
        assert!(is_irreducible(&poly(3, &[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&poly(7, &[-2, 0, 1])).unwrap());
        assert!(is_irreducible(&poly(5, &[3, 2])).unwrap());
        assert!(is_irreducible(&FpPoly::one(5)).is_err());
        // squarefree but reducible: (X^2+1)(X^2+X+2) over F_3
        let f = poly(3, &[1, 0, 1]).mul(&poly(3, &[2, 1, 1])).unwrap();
        assert!(!is_irreducible(&f).unwrap());
        // repeated factor
        let g = poly(3, &[1, 0, 1]).mul(&poly(3, &[1, 0, 1])).unwrap();
        assert!(!is_irreducible(&g).unwrap());
    }

    #[test]
    fn counts_match_moebius_oracle() {
        for p in [2u64, 3, 5] {
            for d in 1..=5 {
                let exhaustive = (0..p.pow(d as u32))
                    .filter(|&c| is_irreducible(&monic_from_code(p, d, c)).unwrap())
                    .count();
                assert_eq!(BigUint::from(exhaustive), monic_irreducible_count(p, d), "p={p} d={d}");
            }
        }
        assert_eq!(monic_irreducible_count(101, 2), BigUint::from((101u32 * 101 - 101) / 2));
    }

    #[test]
    fn frobenius_cache_matches_powmod() {
        let f = poly(5, &[2, 3, 0, 1, 4, 1, 1]);
        let m = ModulusPoly::new(&f).unwrap();
        let mut cache = FrobeniusCache::new(&m).unwrap();
        for j in 0..=7usize {
            let direct = m.powmod(&FpPoly::x(5), &BigUint::from(5u32).pow(j as u32)).unwrap();
            assert_eq!(cache.get(j).unwrap(), direct, "j={j}");
        }
    }

    #[test]
    fn sampling_statistics() {
        let s = irreducible_count_sanity(101, 2, 2000, 1).unwrap();
        assert!((s.expected - 0.495).abs() < 1e-3);
        assert!(s.within_sigmas(3.0), "{s:?}");
        let s = irreducible_count_sanity(101, 5, 2000, 2).unwrap();
        assert!(s.within_sigmas(3.0), "{s:?}");
        let s = irreducible_count_sanity(101, 1, 1000, 3).unwrap();
        assert_eq!(s.fraction, 1.0);
    }

    #[test]
    fn rabin_agrees_with_trial_division_small() {
        for p in [2u64, 3] {
            for d in 1..=6 {
                for code in 0..p.pow(d as u32) {
                    let f = monic_from_code(p, d, code);
                    assert_eq!(is_irreducible(&f).unwrap(), is_irreducible_by_trial_division(&f).unwrap());
                }
            }
        }
    }
}
