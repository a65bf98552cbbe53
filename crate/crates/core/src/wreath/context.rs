use indexmap::IndexSet;
use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::arith::ratio_from_big;
use crate::error::{Error, Result};
use crate::group::{generate, PermGroup, DEFAULT_ENUMERATION_CAP};
use crate::perm::Permutation;

use super::DEFAULT_AMBIENT_CAP;

/// Coordinates for a subgroup of `H wr S_r` on `n = r*s` points with the
/// reference full cycle `shift = (0 1 ... n-1)`. `H` is relabelled so that
/// `block_shift = (0 1 ... s-1)` lies in it.
#[derive(Clone, Debug)]
pub struct WreathContext {
    bottom: PermGroup,
    r: usize,
    s: usize,
    shift: Permutation,
}

/// A kernel element as the tuple of its actions on the blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KernelElement {
    components: Vec<Permutation>,
}

impl KernelElement {
    pub fn new(components: Vec<Permutation>) -> Self {
        Self { components }
    }

    pub fn identity(r: usize, s: usize) -> Self {
        Self {
            components: vec![Permutation::identity(s); r],
        }
    }

    pub fn components(&self) -> &[Permutation] {
        &self.components
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(Permutation::is_identity)
    }
}

impl WreathContext {
    pub fn new(bottom: &PermGroup, r: usize) -> Result<Self> {
        let s = bottom.degree();
        if r == 0 {
            return Err(Error::Domain("top degree must be positive".into()));
        }
        if r * s > DEFAULT_AMBIENT_CAP {
            return Err(Error::Size(format!(
                "ambient degree {} exceeds cap {DEFAULT_AMBIENT_CAP}",
                r * s
            )));
        }
        if !bottom.is_transitive() {
            return Err(Error::Intransitive);
        }
        let cycle = bottom
            .find_full_cycle()
            .ok_or_else(|| Error::Precondition("bottom group has no full cycle".into()))?;
        // send the k-th point of the cycle through 0 to k
        let mut relabel = vec![0; s];
        let mut x = 0;
        for k in 0..s {
            relabel[x] = k;
            x = cycle.image(x);
        }
        let relabel = Permutation::new(relabel)?;
        let bottom = bottom.conjugate(&relabel, DEFAULT_ENUMERATION_CAP)?;
        debug_assert!(bottom.contains(&Permutation::rotation(s)));
        Ok(Self {
            bottom,
            r,
            s,
            shift: Permutation::rotation(r * s),
        })
    }

    pub fn bottom(&self) -> &PermGroup {
        &self.bottom
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn degree(&self) -> usize {
        self.r * self.s
    }

    pub fn shift(&self) -> &Permutation {
        &self.shift
    }

    pub fn block_shift(&self) -> Permutation {
        Permutation::rotation(self.s)
    }

    pub fn block(&self, i: usize) -> Vec<usize> {
        (0..self.s).map(|k| i + k * self.r).collect()
    }

    /// `H^r` as permutations of the ambient points.
    pub fn full_kernel(&self) -> Result<PermGroup> {
        let mut gens = Vec::new();
        for i in 0..self.r {
            for h in self.bottom.generators() {
                let components = (0..self.r)
                    .map(|j| if j == i { h.clone() } else { Permutation::identity(self.s) })
                    .collect();
                gens.push(tuple_to_perm(self, &KernelElement::new(components))?);
            }
        }
        generate(&gens, DEFAULT_ENUMERATION_CAP)
    }

    /// The full wreath product `H wr C_r` containing `shift`.
    pub fn ambient_group(&self) -> Result<PermGroup> {
        let mut gens = self.full_kernel()?.generators().to_vec();
        gens.push(self.shift.clone());
        generate(&gens, DEFAULT_ENUMERATION_CAP)
    }
}

/// Block components of `g`, each block read in increasing point order.
pub fn kernel_tuple(ctx: &WreathContext, g: &Permutation) -> Result<KernelElement> {
    let (r, s) = (ctx.r, ctx.s);
    if g.degree() != ctx.degree() {
        return Err(Error::DegreeMismatch(ctx.degree(), g.degree()));
    }
    let components = (0..r)
        .map(|i| {
            let images = (0..s)
                .map(|k| {
                    let y = g.image(i + k * r);
                    if y % r == i {
                        Ok(y / r)
                    } else {
                        Err(Error::Precondition(format!("{g} moves block {i}")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Permutation::new(images)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelElement { components })
}

pub fn tuple_to_perm(ctx: &WreathContext, tuple: &KernelElement) -> Result<Permutation> {
    let (r, s) = (ctx.r, ctx.s);
    if tuple.components.len() != r {
        return Err(Error::LengthMismatch {
            expected: r,
            got: tuple.components.len(),
        });
    }
    let mut images = vec![0; r * s];
    for (i, c) in tuple.components.iter().enumerate() {
        if c.degree() != s {
            return Err(Error::DegreeMismatch(s, c.degree()));
        }
        for k in 0..s {
            images[i + k * r] = i + c.image(k) * r;
        }
    }
    Permutation::new(images)
}

/// `sigma_1 sigma_2 ... sigma_r block_shift`: the action of `(tuple shift)^r` on the
/// first block, so `tuple shift` is a full cycle iff this is an `s`-cycle.
pub fn first_entry_power(ctx: &WreathContext, tuple: &KernelElement) -> Permutation {
    tuple
        .components
        .iter()
        .fold(Permutation::identity(ctx.s), |acc, c| acc.then(c))
        .then(&ctx.block_shift())
}

/// Proportion of full cycles in the coset `K shift'`, by direct cycle tests.
pub fn coset_census(ctx: &WreathContext, kernel: &PermGroup, shift: &Permutation) -> Result<BigRational> {
    let n = ctx.degree();
    if kernel.degree() != n || shift.degree() != n {
        return Err(Error::DegreeMismatch(n, kernel.degree().max(shift.degree())));
    }
    if !shift.is_full_cycle() {
        return Err(Error::Precondition(format!("{shift} is not a full cycle")));
    }
    let moves_blocks_coherently = (0..ctx.r).all(|i| {
        let target = shift.image(i) % ctx.r;
        ctx.block(i).iter().all(|&x| shift.image(x) % ctx.r == target)
    });
    if !moves_blocks_coherently {
        return Err(Error::Precondition(format!("{shift} does not preserve the blocks")));
    }
    let elements = kernel
        .elements()
        .ok_or_else(|| Error::Size(format!("kernel of order {} is not enumerated", kernel.order())))?;
    let count = (0..elements.len())
        .into_par_iter()
        .filter(|&i| elements[i].then(shift).is_full_cycle())
        .count();
    Ok(ratio_from_big(&BigUint::from(count), kernel.order()))
}

/// Proportion of full cycles in `H^r shift`, counted through the first-block
/// reduction: the distribution of `sigma_1 ... sigma_r` over `H` is built
/// one block at a time, then each product is tested against `block_shift`.
pub fn kernel_product_census(ctx: &WreathContext) -> Result<BigRational> {
    let h: &IndexSet<Permutation> = ctx
        .bottom
        .elements()
        .ok_or_else(|| Error::Size("bottom group is not enumerated".into()))?;
    let m = h.len();
    let table: Vec<Vec<usize>> = (0..m)
        .into_par_iter()
        .map(|a| {
            (0..m)
                .map(|b| h.get_index_of(&h[a].then(&h[b])).expect("closed under products"))
                .collect()
        })
        .collect();
    let id = h.get_index_of(&Permutation::identity(ctx.s)).expect("identity");
    let mut counts = vec![BigUint::from(0u32); m];
    counts[id] = BigUint::from(1u32);
    for _ in 0..ctx.r {
        let mut next = vec![BigUint::from(0u32); m];
        for (a, ca) in counts.iter().enumerate() {
            if *ca == BigUint::from(0u32) {
                continue;
            }
            for b in 0..m {
                next[table[a][b]] += ca;
            }
        }
        counts = next;
    }
    let block_shift = ctx.block_shift();
    let full: BigUint = counts
        .iter()
        .enumerate()
        .filter(|(a, _)| h[*a].then(&block_shift).is_full_cycle())
        .map(|(_, c)| c.clone())
        .sum();
    let total = BigUint::from(m).pow(ctx.r as u32);
    Ok(ratio_from_big(&full, &total))
}

/// Outcome of comparing the first-block test with direct cycle tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractCheck {
    pub checked: usize,
    pub full_cycles: usize,
    pub mismatches: usize,
}

/// Checks, over every element of `kernel`, that `tuple shift` is a full cycle
/// exactly when `first_entry_power(tuple)` is an `s`-cycle.
pub fn verify_first_entry_contract(ctx: &WreathContext, kernel: &PermGroup) -> Result<ContractCheck> {
    let elements = kernel.require_elements("first-entry contract check")?;
    let results = (0..elements.len())
        .into_par_iter()
        .map(|i| {
            let g = &elements[i];
            let direct = g.then(&ctx.shift).is_full_cycle();
            let reduced = first_entry_power(ctx, &kernel_tuple(ctx, g)?).is_full_cycle();
            Ok((direct, direct != reduced))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ContractCheck {
        checked: results.len(),
        full_cycles: results.iter().filter(|r| r.0).count(),
        mismatches: results.iter().filter(|r| r.1).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::wreath::tests::{alternating5, cyclic, symmetric};
    use crate::wreath::{agl1, wreath};
    use proptest::prelude::*;

    fn ctx(h: &PermGroup, r: usize) -> WreathContext {
        WreathContext::new(h, r).unwrap()
    }

    #[test]
    fn tau_power_is_rho_on_every_block() {
        let c = ctx(&cyclic(2), 2);
        let t2 = c.shift().pow(2);
        assert_eq!(t2, Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap());
        let tuple = kernel_tuple(&c, &t2).unwrap();
        assert_eq!(tuple.components(), &[c.block_shift(), c.block_shift()]);
        let c = ctx(&cyclic(3), 2);
        let tuple = kernel_tuple(&c, &c.shift().pow(2)).unwrap();
        assert_eq!(tuple.components(), &[c.block_shift(), c.block_shift()]);
        assert!(c.full_kernel().unwrap().contains(&c.shift().pow(2)));
    }

    #[test]
    fn tuple_round_trip_and_errors() {
        let c = ctx(&symmetric(3), 2);
        assert!(kernel_tuple(&c, &Permutation::identity(6)).unwrap().is_identity());
        let k = c.full_kernel().unwrap();
        assert_eq!(k.order(), &BigUint::from(36u32));
        for g in k.elements().unwrap() {
            assert_eq!(&tuple_to_perm(&c, &kernel_tuple(&c, g).unwrap()).unwrap(), g);
        }
        assert!(kernel_tuple(&c, c.shift()).is_err());
        assert!(tuple_to_perm(&c, &KernelElement::identity(3, 3)).is_err());
    }

    #[test]
    fn first_entry_examples() {
        let c = ctx(&cyclic(2), 2);
        assert_eq!(first_entry_power(&c, &KernelElement::identity(2, 2)), c.block_shift());
        let swap = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
        let tuple = KernelElement::new(vec![swap, Permutation::identity(2)]);
        let e = first_entry_power(&c, &tuple);
        assert!(e.is_identity());
        let g = tuple_to_perm(&c, &tuple).unwrap();
        assert!(!g.then(c.shift()).is_full_cycle());
    }

    #[test]
    fn contract_holds_exhaustively() {
        for (h, r) in [(cyclic(2), 2), (cyclic(3), 2), (cyclic(2), 3), (symmetric(3), 2), (agl1(3).unwrap(), 2)] {
            let c = ctx(&h, r);
            let k = c.full_kernel().unwrap();
            let check = verify_first_entry_contract(&c, &k).unwrap();
            assert_eq!(check.mismatches, 0);
            assert_eq!(check.checked, k.order_u64().unwrap() as usize);
        }
    }

    #[test]
    fn relabelled_bottom_contains_rho() {
        // a bottom group given with a full cycle other than (0 1 2 3 4)
        let h = generate(&[Permutation::from_cycles(5, &[&[0, 2, 4, 1, 3]]).unwrap()], 10).unwrap();
        let c = ctx(&h, 2);
        assert!(c.bottom().contains(&c.block_shift()));
        assert!(WreathContext::new(&generate(&[Permutation::identity(2)], 1).unwrap(), 2).is_err());
    }

    #[test]
    fn coset_censuses() {
        let c = ctx(&cyclic(2), 2);
        let k = c.full_kernel().unwrap();
        assert_eq!(coset_census(&c, &k, c.shift()).unwrap(), ratio(1, 2));
        assert_eq!(kernel_product_census(&c).unwrap(), ratio(1, 2));
        // coset of the full wreath product containing shift
        let w = wreath(&cyclic(2), &cyclic(2)).unwrap();
        assert!(w.contains(c.shift()));

        let c = ctx(&agl1(3).unwrap(), 2);
        let k = c.full_kernel().unwrap();
        assert_eq!(coset_census(&c, &k, c.shift()).unwrap(), ratio(1, 3));
        assert_eq!(kernel_product_census(&c).unwrap(), ratio(1, 3));

        let c = ctx(&alternating5(), 2);
        assert_eq!(kernel_product_census(&c).unwrap(), ratio(2, 5));
        let k = c.full_kernel().unwrap();
        assert_eq!(k.order(), &BigUint::from(3600u32));
        assert_eq!(coset_census(&c, &k, c.shift()).unwrap(), ratio(2, 5));
    }

    #[test]
    fn coset_census_preconditions() {
        let c = ctx(&cyclic(2), 2);
        let k = c.full_kernel().unwrap();
        assert!(coset_census(&c, &k, &Permutation::identity(4)).is_err());
        // a 4-cycle that splits the blocks {0,2} and {1,3}
        let bad = Permutation::from_cycles(4, &[&[0, 1, 3, 2]]).unwrap();
        assert!(coset_census(&c, &k, &bad).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn contract_on_random_tuples(seed in proptest::collection::vec(0usize..24, 3)) {
            let h = symmetric(4);
            let c = ctx(&h, 3);
            let el = c.bottom().elements().unwrap();
            let tuple = KernelElement::new(seed.iter().map(|&i| el[i].clone()).collect());
            let g = tuple_to_perm(&c, &tuple).unwrap();
            prop_assert_eq!(kernel_tuple(&c, &g).unwrap(), tuple.clone());
            prop_assert_eq!(
                g.then(c.shift()).is_full_cycle(),
                first_entry_power(&c, &tuple).is_full_cycle()
            );
        }
    }
}
