//! Block systems, maximal chains of invariant partitions and the bound on
//! the proportion of full cycles that such a chain certifies.

mod chain;
mod classify;
mod tower;

pub use chain::{maximal_chains, verify_bound, BlockChain, BoundReport, ChainEnumeration, ChainRecord, ChainStep};
pub use classify::{classify_primitive_with_full_cycle, pgl_order, CaseTag, ClassificationVerdict};
pub use tower::{max_cyclic_tower_order, CyclicTowerTable};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{euler_phi, is_prime, ratio};
use crate::error::{Error, Result};
use crate::group::{generate, PermGroup, DEFAULT_ENUMERATION_CAP};
use crate::perm::Permutation;

/// A partition of `0..n` into blocks of equal size. Blocks are sorted
/// internally and ordered by their smallest point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockSystem {
    degree: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    pub fn new(degree: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b.first().copied());
        let size = blocks.first().map_or(0, Vec::len);
        let mut seen = vec![false; degree];
        for b in &blocks {
            if b.is_empty() || b.len() != size {
                return Err(Error::Precondition(format!(
                    "blocks must be nonempty and of equal size: {blocks:?}"
                )));
            }
            for &x in b {
                if x >= degree || seen[x] {
                    return Err(Error::Precondition(format!("blocks overlap or overflow: {blocks:?}")));
                }
                seen[x] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Precondition(format!("blocks do not cover 0..{degree}")));
        }
        Ok(Self { degree, blocks })
    }

    pub fn singletons(degree: usize) -> Self {
        Self {
            degree,
            blocks: (0..degree).map(|x| vec![x]).collect(),
        }
    }

    pub fn whole(degree: usize) -> Self {
        Self {
            degree,
            blocks: vec![(0..degree).collect()],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    /// Block index of every point.
    pub fn block_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.degree];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                idx[x] = i;
            }
        }
        idx
    }

    pub fn is_trivial(&self) -> bool {
        self.num_blocks() == 1 || self.block_size() == 1
    }

    /// True if every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &BlockSystem) -> bool {
        let idx = other.block_index();
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| idx[x] == idx[b[0]]))
    }

    pub fn is_invariant_under(&self, g: &Permutation) -> bool {
        let idx = self.block_index();
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| idx[g.image(x)] == idx[g.image(b[0])]))
    }

    /// Merges blocks of `self` according to a partition of its block
    /// indices.
    pub fn coarsen(&self, by: &BlockSystem) -> BlockSystem {
        assert_eq!(by.degree(), self.num_blocks());
        let blocks = by
            .blocks
            .iter()
            .map(|group| group.iter().flat_map(|&i| self.blocks[i].iter().copied()).collect())
            .collect();
        BlockSystem::new(self.degree, blocks).expect("coarsening of a valid partition")
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Finest invariant partition in which `a` and `b` share a block.
pub fn minimal_block_containing(g: &PermGroup, a: usize, b: usize) -> BlockSystem {
    let n = g.degree();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut queue = vec![(a, b)];
    let ra = find(&mut parent, a);
    let rb = find(&mut parent, b);
    parent[rb] = ra;
    while let Some((x, y)) = queue.pop() {
        for s in g.generators() {
            let (u, v) = (s.image(x), s.image(y));
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[rv] = ru;
                queue.push((u, v));
            }
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for x in 0..n {
        let r = find(&mut parent, x);
        classes.entry(r).or_default().push(x);
    }
    BlockSystem::new(n, classes.into_values().collect()).expect("transitive group gives equal blocks")
}

/// All minimal nontrivial invariant partitions; empty iff `g` is
/// primitive.
pub fn minimal_block_systems(g: &PermGroup) -> Result<Vec<BlockSystem>> {
    if !g.is_transitive() {
        return Err(Error::Intransitive);
    }
    let n = g.degree();
    let mut candidates: Vec<BlockSystem> = Vec::new();
    for delta in 1..n {
        let sys = minimal_block_containing(g, 0, delta);
        if sys.num_blocks() > 1 && !candidates.contains(&sys) {
            candidates.push(sys);
        }
    }
    let minimal = candidates
        .iter()
        .filter(|b| !candidates.iter().any(|c| c != *b && c.refines(b)))
        .cloned()
        .collect();
    Ok(minimal)
}

pub fn is_primitive(g: &PermGroup) -> Result<bool> {
    Ok(minimal_block_systems(g)?.is_empty())
}

/// Action of `g` on the blocks of `sys`.
pub fn quotient_action(g: &PermGroup, sys: &BlockSystem) -> Result<PermGroup> {
    let idx = sys.block_index();
    let gens: Vec<Permutation> = g
        .generators()
        .iter()
        .map(|s| {
            Permutation::new(sys.blocks().iter().map(|b| idx[s.image(b[0])]).collect())
                .expect("invariant partition induces a permutation")
        })
        .collect();
    generate(&gens, DEFAULT_ENUMERATION_CAP)
}

/// Setwise stabilizer of the block containing point 0, acting on that
/// block (points relabelled in increasing order). Built from Schreier
/// generators of the action on blocks, so no enumeration is needed.
pub fn block_stabilizer_action(g: &PermGroup, sys: &BlockSystem) -> Result<PermGroup> {
    let n = g.degree();
    let idx = sys.block_index();
    let home = &sys.blocks()[idx[0]];
    let m = sys.num_blocks();
    let mut transversal: Vec<Option<Permutation>> = vec![None; m];
    transversal[idx[0]] = Some(Permutation::identity(n));
    let mut orbit = vec![idx[0]];
    let mut i = 0;
    while i < orbit.len() {
        let b = orbit[i];
        for s in g.generators() {
            let c = idx[s.image(sys.blocks()[b][0])];
            if transversal[c].is_none() {
                transversal[c] = Some(transversal[b].as_ref().unwrap().then(s));
                orbit.push(c);
            }
        }
        i += 1;
    }
    let mut local = vec![usize::MAX; n];
    for (k, &x) in home.iter().enumerate() {
        local[x] = k;
    }
    let mut gens: Vec<Permutation> = Vec::new();
    for &b in &orbit {
        let tb = transversal[b].as_ref().unwrap();
        for s in g.generators() {
            let c = idx[s.image(sys.blocks()[b][0])];
            let tc = transversal[c].as_ref().unwrap();
            let y = tb.then(s).then(&tc.inverse());
            let restricted =
                Permutation::new(home.iter().map(|&x| local[y.image(x)]).collect())?;
            if !restricted.is_identity() && !gens.contains(&restricted) {
                gens.push(restricted);
            }
        }
    }
    if gens.is_empty() {
        gens.push(Permutation::identity(home.len()));
    }
    generate(&gens, DEFAULT_ENUMERATION_CAP)
}

/// Prime degree `p` with order dividing `p(p-1)`, i.e. `C_p <= H <= AGL_1(p)`
/// for a transitive `H`.
pub fn is_affine_type(h: &PermGroup) -> bool {
    let p = h.degree() as u64;
    if !is_prime(p) {
        return false;
    }
    let bound = BigUint::from(p * (p - 1));
    (bound % h.order()).is_zero()
}

/// `phi(n) / (n * 2^d)`.
pub fn full_cycle_bound(n: usize, d: usize) -> BigRational {
    let n = n as u64;
    ratio(euler_phi(n), BigUint::from(n) << d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::generate;

    fn cyc(n: usize, c: &[usize]) -> Permutation {
        Permutation::from_cycles(n, &[c]).unwrap()
    }

    #[test]
    fn s4_is_primitive() {
        let s4 = generate(&[cyc(4, &[0, 1]), Permutation::rotation(4)], 100).unwrap();
        assert!(minimal_block_systems(&s4).unwrap().is_empty());
    }

    #[test]
    fn c4_has_one_system() {
        let c4 = generate(&[Permutation::rotation(4)], 100).unwrap();
        let sys = minimal_block_systems(&c4).unwrap();
        assert_eq!(sys.len(), 1);
        assert_eq!(sys[0].blocks(), &[vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn d4_in_interleaved_coordinates() {
        // C2 wr C2: swap inside block {0,2}, and the block swap 0<->1, 2<->3
        let d4 = generate(&[cyc(4, &[0, 2]), Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()], 100)
            .unwrap();
        assert_eq!(d4.order(), &BigUint::from(8u32));
        let sys = minimal_block_systems(&d4).unwrap();
        assert!(sys.iter().any(|s| s.blocks() == [vec![0, 2], vec![1, 3]]));
    }

    #[test]
    fn intransitive_is_rejected() {
        let g = generate(&[cyc(4, &[0, 1])], 10).unwrap();
        assert!(matches!(minimal_block_systems(&g), Err(Error::Intransitive)));
    }

    #[test]
    fn affine_type() {
        let agl5 = generate(
            &[Permutation::rotation(5), Permutation::new((0..5).map(|x| 2 * x % 5).collect()).unwrap()],
            100,
        )
        .unwrap();
        assert!(is_affine_type(&agl5));
        let s4 = generate(&[cyc(4, &[0, 1]), Permutation::rotation(4)], 100).unwrap();
        assert!(!is_affine_type(&s4));
        let s5 = generate(&[cyc(5, &[0, 1]), Permutation::rotation(5)], 200).unwrap();
        assert!(!is_affine_type(&s5));
    }

    #[test]
    fn bounds() {
        assert_eq!(full_cycle_bound(4, 1), ratio(1, 4));
        assert_eq!(full_cycle_bound(4, 0), ratio(1, 2));
        assert_eq!(full_cycle_bound(1, 0), ratio(1, 1));
        assert_eq!(full_cycle_bound(5, 1), ratio(2, 5));
    }

    #[test]
    fn block_system_validation() {
        assert!(BlockSystem::new(4, vec![vec![0, 1], vec![2]]).is_err());
        assert!(BlockSystem::new(4, vec![vec![0, 1], vec![1, 2]]).is_err());
        let b = BlockSystem::new(4, vec![vec![3, 1], vec![2, 0]]).unwrap();
        assert_eq!(b.blocks(), &[vec![0, 2], vec![1, 3]]);
        assert!(BlockSystem::singletons(4).refines(&b));
        assert!(b.refines(&BlockSystem::whole(4)));
        assert!(!BlockSystem::whole(4).refines(&b));
    }
}
