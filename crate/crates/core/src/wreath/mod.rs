//! Imprimitive wreath products in interleaved coordinates: block `i` is
//! `{i + k*r : 0 <= k < s}` and its `k`-th point is `i + k*r`, so the
//! rotation `(0 1 ... n-1)` permutes the blocks as an `r`-cycle.

mod context;
mod field;
mod subkernel;

pub use context::{
    coset_census, first_entry_power, kernel_product_census, kernel_tuple, tuple_to_perm,
    verify_first_entry_contract, ContractCheck, KernelElement, WreathContext,
};
pub use field::{least_irreducible, pgl, psl, singer_cycle, ProjectiveSpace, SmallField};
pub use subkernel::{claimed_bound, subkernel_check, SubkernelReport, SubkernelRow};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::{is_prime, primitive_root};
use crate::error::{Error, Result};
use crate::group::{generate, PermGroup, DEFAULT_ENUMERATION_CAP};
use crate::perm::Permutation;

/// Default largest ambient degree for constructed wreath products.
pub const DEFAULT_AMBIENT_CAP: usize = 32;

/// `H wr V` with `H` acting inside blocks of size `s` and `V` permuting the
/// `r` blocks.
pub fn wreath(h: &PermGroup, v: &PermGroup) -> Result<PermGroup> {
    wreath_with_cap(h, v, DEFAULT_AMBIENT_CAP)
}

pub fn wreath_with_cap(h: &PermGroup, v: &PermGroup, cap: usize) -> Result<PermGroup> {
    if !h.is_transitive() || !v.is_transitive() {
        return Err(Error::Intransitive);
    }
    let (s, r) = (h.degree(), v.degree());
    let n = r * s;
    if n > cap {
        return Err(Error::Size(format!("ambient degree {n} exceeds cap {cap}")));
    }
    let mut gens: Vec<Permutation> = Vec::new();
    for g in h.generators() {
        let mut images: Vec<usize> = (0..n).collect();
        for k in 0..s {
            images[k * r] = g.image(k) * r;
        }
        gens.push(Permutation::new(images)?);
    }
    for g in v.generators() {
        let images = (0..n).map(|x| g.image(x % r) + (x / r) * r).collect();
        gens.push(Permutation::new(images)?);
    }
    let w = generate(&gens, DEFAULT_ENUMERATION_CAP)?;
    debug_assert_eq!(w.order(), &(h.order().pow(r as u32) * v.order()));
    Ok(w)
}

/// Folds `parts` into an iterated wreath product; `parts[0]` is the
/// outermost action on blocks and the last entry acts innermost.
pub fn iterated_wreath(parts: &[PermGroup]) -> Result<PermGroup> {
    iterated_wreath_with_cap(parts, DEFAULT_AMBIENT_CAP)
}

pub fn iterated_wreath_with_cap(parts: &[PermGroup], cap: usize) -> Result<PermGroup> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::Precondition("iterated wreath of no parts".into()))?;
    let degree: usize = parts.iter().map(PermGroup::degree).product();
    if degree > cap {
        return Err(Error::Size(format!("ambient degree {degree} exceeds cap {cap}")));
    }
    rest.iter()
        .try_fold(first.clone(), |acc, part| wreath_with_cap(part, &acc, cap))
}

/// Largest prime accepted by [`agl1`].
pub const MAX_AGL_PRIME: u64 = 1000;

/// `AGL_1(p)`: the maps `x -> a*x + b` on `F_p`.
pub fn agl1(p: u64) -> Result<PermGroup> {
    if !is_prime(p) || p > MAX_AGL_PRIME {
        return Err(Error::Domain(format!("agl1 needs a prime <= {MAX_AGL_PRIME}, got {p}")));
    }
    let g = primitive_root(p)?;
    let n = p as usize;
    let mult = Permutation::new((0..p).map(|x| (x * g % p) as usize).collect())?;
    // keep memory bounded for large p: fall back to a stabilizer chain
    generate(&[Permutation::rotation(n), mult], DEFAULT_ENUMERATION_CAP / n)
}

/// Product of the full-cycle proportions of the parts, which is the
/// proportion for their full iterated wreath product.
pub fn full_wreath_pi(parts: &[PermGroup]) -> Result<BigRational> {
    parts.iter().try_fold(BigRational::one(), |acc, g| {
        Ok(acc * g.full_cycle_census()?.proportion)
    })
}

/// `|H|^r * |V|`.
pub fn wreath_order(h: &PermGroup, v: &PermGroup) -> BigUint {
    h.order().pow(v.degree() as u32) * v.order()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::arith::ratio;

    pub fn cyclic(n: usize) -> PermGroup {
        generate(&[Permutation::rotation(n)], 100).unwrap()
    }

    pub fn symmetric(n: usize) -> PermGroup {
        let t = Permutation::from_cycles(n, &[&[0, 1]]).unwrap();
        generate(&[t, Permutation::rotation(n)], 100_000).unwrap()
    }

    pub fn alternating5() -> PermGroup {
        let t = Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        generate(&[t, Permutation::rotation(5)], 100).unwrap()
    }

    #[test]
    fn basic_orders() {
        let d4 = wreath(&cyclic(2), &cyclic(2)).unwrap();
        assert_eq!(d4.order(), &BigUint::from(8u32));
        assert!(d4.contains(&Permutation::rotation(4)));
        let w = wreath(&cyclic(3), &cyclic(2)).unwrap();
        assert_eq!((w.degree(), w.order()), (6, &BigUint::from(18u32)));
        let w = wreath(&symmetric(4), &cyclic(3)).unwrap();
        assert_eq!((w.degree(), w.order()), (12, &BigUint::from(41472u32)));
        assert!(w.contains(&Permutation::rotation(12)));
    }

    #[test]
    fn ambient_cap() {
        assert!(matches!(wreath(&symmetric(6), &cyclic(6)), Err(Error::Size(_))));
        assert!(matches!(
            iterated_wreath(&[cyclic(2), cyclic(3), cyclic(3), cyclic(2)]),
            Err(Error::Size(_))
        ));
        let c2 = generate(&[Permutation::from_cycles(3, &[&[0, 1]]).unwrap()], 10).unwrap();
        assert!(matches!(wreath(&c2, &cyclic(2)), Err(Error::Intransitive)));
    }

    #[test]
    fn fold_orientation() {
        let g = iterated_wreath(&[cyclic(2), cyclic(2), cyclic(2)]).unwrap();
        assert_eq!((g.degree(), g.order()), (8, &BigUint::from(128u32)));
        let g = iterated_wreath(&[cyclic(2)]).unwrap();
        assert_eq!(g.order(), &BigUint::from(2u32));
        // first entry on top: C2 inside blocks of size 2, C3 on three blocks
        let g = iterated_wreath(&[cyclic(3), cyclic(2)]).unwrap();
        assert_eq!((g.degree(), g.order()), (6, &BigUint::from(24u32)));
        let direct = wreath(&cyclic(2), &cyclic(3)).unwrap();
        assert!(g.generators().iter().all(|x| direct.contains(x)));
        assert!(iterated_wreath(&[]).is_err());
    }

    #[test]
    fn agl1_examples() {
        assert_eq!(agl1(2).unwrap().order(), &BigUint::from(2u32));
        let g = agl1(5).unwrap();
        assert_eq!(g.order(), &BigUint::from(20u32));
        let c = g.full_cycle_census().unwrap();
        assert_eq!(c.count, BigUint::from(4u32));
        assert_eq!(c.proportion, ratio(1, 5));
        assert_eq!(agl1(7).unwrap().order(), &BigUint::from(42u32));
        assert!(agl1(9).is_err());
        let big = agl1(997).unwrap();
        assert_eq!(big.order(), &BigUint::from(997u32 * 996));
    }

    #[test]
    fn full_wreath_formula() {
        let cases: Vec<Vec<PermGroup>> = vec![
            vec![cyclic(2), cyclic(2)],
            vec![cyclic(2), cyclic(2), cyclic(2)],
            vec![cyclic(2), cyclic(2), cyclic(2), cyclic(2)],
            vec![cyclic(3), cyclic(2)],
            vec![symmetric(3), cyclic(2)],
            vec![cyclic(2), cyclic(3)],
        ];
        for parts in cases {
            let census = iterated_wreath(&parts).unwrap().full_cycle_census().unwrap();
            assert_eq!(full_wreath_pi(&parts).unwrap(), census.proportion);
        }
        assert_eq!(full_wreath_pi(&[cyclic(2), cyclic(2)]).unwrap(), ratio(1, 4));
        assert_eq!(full_wreath_pi(&[cyclic(3), cyclic(2)]).unwrap(), ratio(1, 3));
    }
}
