use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::divisors;
use crate::ffpoly::RatPoly;

/// Orbits stop once a numerator or denominator exceeds this many bits.
pub const HEIGHT_CUTOFF_BITS: u64 = 1024;
const MAX_ORBIT_STEPS: usize = 64;

/// `D_0 = 2`, `D_1 = X`, `D_k = X D_{k-1} - alpha D_{k-2}`.
pub fn dickson(n: usize, alpha: &BigRational) -> RatPoly {
    let mut prev = RatPoly::from_i64(&[2]);
    if n == 0 {
        return prev;
    }
    let mut cur = RatPoly::x();
    for _ in 1..n {
        let next = RatPoly::x().mul(&cur).sub(&prev.mul(&RatPoly::constant(alpha.clone())));
        prev = cur;
        cur = next;
    }
    cur
}

fn too_tall(x: &BigRational) -> bool {
    x.numer().bits() > HEIGHT_CUTOFF_BITS || x.denom().bits() > HEIGHT_CUTOFF_BITS
}

/// Smallest `m` in `1..=bound` with `f^m(a) = a`; `bound` is clamped to 64.
/// `None` means only that no return was seen.
pub fn detect_periodic(f: &RatPoly, a: &BigRational, bound: usize) -> Option<usize> {
    let mut x = a.clone();
    for m in 1..=bound.min(MAX_ORBIT_STEPS) {
        x = f.eval(&x);
        if &x == a {
            return Some(m);
        }
        if too_tall(&x) {
            return None;
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PostcriticalWitness {
    pub critical_point: String,
    /// `m >= 1` with `f^m(critical_point) = a`.
    pub steps: usize,
}

/// Rational roots of `g` by the rational root theorem.
fn rational_roots(g: &RatPoly) -> Vec<BigRational> {
    if g.is_zero() {
        return Vec::new();
    }
    let den = g.denominator_lcm();
    let mut ints: Vec<BigInt> = g
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let mut roots = Vec::new();
    let zero_mult = ints.iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 0 {
        roots.push(BigRational::zero());
        ints.drain(..zero_mult);
    }
    if ints.len() < 2 {
        return roots;
    }
    let (Some(c0), Some(cn)) = (ints[0].abs().to_u64(), ints.last().unwrap().abs().to_u64()) else {
        return roots;
    };
    let reduced = RatPoly::new(ints.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    for num in divisors(c0) {
        for den in divisors(cn) {
            for sign in [Sign::Plus, Sign::Minus] {
                let r = BigRational::new(BigInt::from_biguint(sign, num.into()), BigInt::from(den));
                if reduced.eval(&r).is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

/// A rational critical point whose forward orbit hits `a` within `bound`
/// steps (clamped to 64).
pub fn detect_postcritical(f: &RatPoly, a: &BigRational, bound: usize) -> Option<PostcriticalWitness> {
    let mut crit = rational_roots(&f.derivative());
    crit.sort();
    for c in crit {
        let mut x = c.clone();
        for m in 1..=bound.min(MAX_ORBIT_STEPS) {
            x = f.eval(&x);
            if &x == a {
                return Some(PostcriticalWitness {
                    critical_point: if c.is_integer() { c.numer().to_string() } else { c.to_string() },
                    steps: m,
                });
            }
            if too_tall(&x) {
                break;
            }
        }
    }
    None
}

/// `D_n(X + alpha/X) X^n = X^(2n) + alpha^n`, expanded as
/// `sum c_i (X^2 + alpha)^i X^(n-i)`.
pub fn dickson_identity_holds(n: usize, alpha: &BigRational) -> bool {
    let d = dickson(n, alpha);
    let base = RatPoly::new(vec![alpha.clone(), BigRational::zero(), BigRational::one()]);
    let mut lhs = RatPoly::zero();
    let mut power = RatPoly::from_i64(&[1]);
    for i in 0..=n {
        let mut shift = vec![BigRational::zero(); n - i];
        shift.push(BigRational::one());
        lhs = lhs.add(&power.mul(&RatPoly::new(shift)).mul(&RatPoly::constant(d.coeff(i))));
        power = power.mul(&base);
    }
    let mut rhs = vec![BigRational::zero(); 2 * n + 1];
    rhs[0] = num_traits::pow(alpha.clone(), n);
    rhs[2 * n] += BigRational::one();
    lhs == RatPoly::new(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn dickson_examples() {
        let a = ratio(3, 1);
        assert_eq!(dickson(1, &a), RatPoly::x());
        assert_eq!(dickson(2, &a), RatPoly::from_i64(&[-6, 0, 1]));
        assert_eq!(dickson(3, &a), RatPoly::from_i64(&[0, -9, 0, 1]));
        assert_eq!(dickson(0, &a), RatPoly::from_i64(&[2]));
    }

    #[test]
    fn dickson_identity() {
        for alpha in [ratio(1, 1), ratio(-1, 1), ratio(2, 1), ratio(1, 2)] {
            for n in 0..=20 {
                assert!(dickson_identity_holds(n, &alpha), "n={n} alpha={alpha}");
            }
        }
    }

    #[test]
    fn dickson_semigroup() {
        let one = ratio(1, 1);
        for m in 0..=5 {
            for n in 0..=5 {
                assert_eq!(dickson(m, &one).compose(&dickson(n, &one)), dickson(m * n, &one), "{m},{n}");
            }
        }
    }

    #[test]
    fn periodic_orbits() {
        assert_eq!(detect_periodic(&RatPoly::from_i64(&[0, 0, 1]), &ratio(1, 1), 64), Some(1));
        assert_eq!(detect_periodic(&RatPoly::from_i64(&[-1, 0, 1]), &ratio(0, 1), 64), Some(2));
        assert_eq!(detect_periodic(&RatPoly::from_i64(&[1, 0, 1]), &ratio(0, 1), 64), None);
    }

    #[test]
    fn postcritical_orbits() {
        let w = detect_postcritical(&RatPoly::from_i64(&[0, 0, 1]), &ratio(0, 1), 64).unwrap();
        assert_eq!((w.critical_point.as_str(), w.steps), ("0", 1));
        let w = detect_postcritical(&RatPoly::from_i64(&[-2, 0, 1]), &ratio(2, 1), 64).unwrap();
        assert_eq!((w.critical_point.as_str(), w.steps), ("0", 2));
        assert_eq!(detect_postcritical(&RatPoly::from_i64(&[1, 0, 1]), &ratio(0, 1), 64), None);
        // critical point 1/3 of 3X^2 - 2X
        let f = RatPoly::from_i64(&[0, -2, 3]);
        let w = detect_postcritical(&f, &ratio(-1, 3), 4).unwrap();
        assert_eq!((w.critical_point.as_str(), w.steps), ("1/3", 1));
    }

    #[test]
    fn rational_root_search() {
        let g = RatPoly::from_i64(&[-6, 1, 1]); // (X+3)(X-2)
        let mut r = rational_roots(&g);
        r.sort();
        assert_eq!(r, vec![ratio(-3, 1), ratio(2, 1)]);
    }
}
