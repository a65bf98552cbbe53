use num_rational::BigRational;
use serde::Serialize;

use super::{block_stabilizer_action, full_cycle_bound, is_affine_type, minimal_block_systems, quotient_action, BlockSystem};
use crate::arith::{fmt_ratio, ratio_to_f64};
use crate::error::Result;
use crate::group::PermGroup;

/// One step of a chain: the primitive action `action` of a block stabilizer
/// on the finer blocks it contains.
#[derive(Clone, Debug)]
pub struct ChainStep {
    pub action: PermGroup,
    pub affine_type: bool,
}

/// A maximal chain of invariant partitions, finest (singletons) first and
/// the one-block partition last. `steps[i]` goes from `partitions[i]` to
/// `partitions[i + 1]`.
#[derive(Clone, Debug)]
pub struct BlockChain {
    pub degree: usize,
    pub partitions: Vec<BlockSystem>,
    pub steps: Vec<ChainStep>,
}

impl BlockChain {
    /// Number of steps whose action is not between `C_p` and `AGL_1(p)`.
    pub fn d(&self) -> usize {
        self.steps.iter().filter(|s| !s.affine_type).count()
    }

    /// Degrees of the step actions, point-stabilizer end first.
    pub fn step_degrees(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.action.degree()).collect()
    }

    /// `phi(n) / (n * 2^d)` for this chain.
    pub fn bound(&self) -> BigRational {
        full_cycle_bound(self.degree, self.d())
    }
}

#[derive(Clone, Debug)]
pub struct ChainEnumeration {
    pub chains: Vec<BlockChain>,
    /// True if the limit stopped the search early (or was zero).
    pub truncated: bool,
    pub warning: Option<String>,
}

/// Every maximal chain of invariant partitions, depth first over minimal
/// block systems of the successive quotient actions, up to `limit` chains.
pub fn maximal_chains(g: &PermGroup, limit: usize) -> Result<ChainEnumeration> {
    if limit == 0 {
        return Ok(ChainEnumeration {
            chains: Vec::new(),
            truncated: true,
            warning: Some("chain limit 0: no chains enumerated".into()),
        });
    }
    // rejects intransitive input up front
    minimal_block_systems(g)?;
    let mut out = Vec::new();
    let mut truncated = false;
    let start = BlockSystem::singletons(g.degree());
    descend(
        g,
        start.clone(),
        g.clone(),
        vec![start],
        Vec::new(),
        limit,
        &mut out,
        &mut truncated,
    )?;
    Ok(ChainEnumeration {
        chains: out,
        truncated,
        warning: truncated.then(|| format!("chain enumeration stopped at limit {limit}")),
    })
}

#[allow(clippy::too_many_arguments)]
fn descend(
    g: &PermGroup,
    partition: BlockSystem,
    quotient: PermGroup,
    partitions: Vec<BlockSystem>,
    steps: Vec<ChainStep>,
    limit: usize,
    out: &mut Vec<BlockChain>,
    truncated: &mut bool,
) -> Result<()> {
    if partition.num_blocks() == 1 {
        if out.len() >= limit {
            *truncated = true;
        } else {
            out.push(BlockChain {
                degree: g.degree(),
                partitions,
                steps,
            });
        }
        return Ok(());
    }
    let systems = minimal_block_systems(&quotient)?;
    if systems.is_empty() {
        // primitive quotient: the only coarser partition is the whole set
        let mut partitions = partitions;
        let mut steps = steps;
        partitions.push(BlockSystem::whole(g.degree()));
        steps.push(ChainStep {
            affine_type: is_affine_type(&quotient),
            action: quotient,
        });
        return descend(
            g,
            BlockSystem::whole(g.degree()),
            PermGroup::clone(&steps.last().unwrap().action),
            partitions,
            steps,
            limit,
            out,
            truncated,
        );
    }
    for sys in systems {
        if out.len() >= limit {
            *truncated = true;
            return Ok(());
        }
        let action = block_stabilizer_action(&quotient, &sys)?;
        let next = partition.coarsen(&sys);
        let next_quotient = quotient_action(g, &next)?;
        let mut partitions = partitions.clone();
        partitions.push(next.clone());
        let mut steps = steps.clone();
        steps.push(ChainStep {
            affine_type: is_affine_type(&action),
            action,
        });
        descend(g, next, next_quotient, partitions, steps, limit, out, truncated)?;
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ChainRecord {
    pub step_degrees: Vec<usize>,
    pub d: usize,
    pub bound: String,
    pub bound_decimal: f64,
}

/// Bound-check report for one group.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BoundReport {
    pub group: String,
    pub degree: usize,
    pub order: String,
    pub full_cycle_count: String,
    pub proportion: String,
    pub proportion_decimal: f64,
    pub chains: Vec<ChainRecord>,
    pub min_d: Option<usize>,
    pub max_d: Option<usize>,
    pub chains_truncated: bool,
    pub violated: bool,
}

impl BoundReport {
    pub fn proportion(&self) -> BigRational {
        crate::arith::parse_ratio(&self.proportion).expect("report holds a valid rational")
    }
}

/// Compares the proportion of full cycles with the bound of every maximal
/// chain; `violated` is set if any chain's bound is exceeded.
pub fn verify_bound(name: &str, g: &PermGroup, chain_limit: usize) -> Result<BoundReport> {
    let census = g.full_cycle_census()?;
    let chains = maximal_chains(g, chain_limit)?;
    let records: Vec<ChainRecord> = chains
        .chains
        .iter()
        .map(|c| {
            let b = c.bound();
            ChainRecord {
                step_degrees: c.step_degrees(),
                d: c.d(),
                bound_decimal: ratio_to_f64(&b),
                bound: fmt_ratio(&b),
            }
        })
        .collect();
    let violated = chains.chains.iter().any(|c| census.proportion > c.bound());
    Ok(BoundReport {
        group: name.to_string(),
        degree: g.degree(),
        order: g.order().to_string(),
        full_cycle_count: census.count.to_string(),
        proportion: fmt_ratio(&census.proportion),
        proportion_decimal: ratio_to_f64(&census.proportion),
        min_d: records.iter().map(|r| r.d).min(),
        max_d: records.iter().map(|r| r.d).max(),
        chains: records,
        chains_truncated: chains.truncated,
        violated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use num_bigint::BigUint;
    use crate::blocks::is_primitive;
    use crate::group::generate;
    use crate::perm::Permutation;

    fn cyc(n: usize, c: &[usize]) -> Permutation {
        Permutation::from_cycles(n, &[c]).unwrap()
    }

    fn product_of_degrees(chain: &BlockChain) -> BigUint {
        chain.step_degrees().iter().map(|&d| BigUint::from(d)).product()
    }

    fn s4() -> PermGroup {
        generate(&[cyc(4, &[0, 1]), Permutation::rotation(4)], 100).unwrap()
    }

    fn d4() -> PermGroup {
        generate(
            &[cyc(4, &[0, 2]), Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()],
            100,
        )
        .unwrap()
    }

    #[test]
    fn s4_single_chain() {
        let e = maximal_chains(&s4(), 64).unwrap();
        assert_eq!(e.chains.len(), 1);
        let c = &e.chains[0];
        assert_eq!(c.steps.len(), 1);
        assert_eq!(c.steps[0].action.order(), &BigUint::from(24u32));
        assert!(!c.steps[0].affine_type);
        assert_eq!(c.d(), 1);
        assert_eq!(c.bound(), ratio(1, 4));
    }

    #[test]
    fn d4_chain_of_two_c2_steps() {
        let e = maximal_chains(&d4(), 64).unwrap();
        assert_eq!(e.chains.len(), 1);
        let c = &e.chains[0];
        assert_eq!(c.step_degrees(), vec![2, 2]);
        assert!(c.steps.iter().all(|s| s.affine_type && s.action.order() == &BigUint::from(2u32)));
        assert_eq!(c.d(), 0);
        assert_eq!(c.bound(), ratio(1, 2));
    }

    #[test]
    fn c6_two_chains() {
        let c6 = generate(&[Permutation::rotation(6)], 10).unwrap();
        let e = maximal_chains(&c6, 64).unwrap();
        assert_eq!(e.chains.len(), 2);
        let mut degs: Vec<Vec<usize>> = e.chains.iter().map(|c| c.step_degrees()).collect();
        degs.sort();
        assert_eq!(degs, vec![vec![2, 3], vec![3, 2]]);
        assert!(e.chains.iter().all(|c| c.d() == 0));
    }

    #[test]
    fn limit_zero_and_truncation() {
        let c6 = generate(&[Permutation::rotation(6)], 10).unwrap();
        let e = maximal_chains(&c6, 0).unwrap();
        assert!(e.chains.is_empty() && e.truncated && e.warning.is_some());
        let e = maximal_chains(&c6, 1).unwrap();
        assert_eq!(e.chains.len(), 1);
        assert!(e.truncated);
    }

    #[test]
    fn degree_one_chain() {
        let g = generate(&[Permutation::identity(1)], 10).unwrap();
        let e = maximal_chains(&g, 64).unwrap();
        assert_eq!(e.chains.len(), 1);
        assert!(e.chains[0].steps.is_empty());
        assert_eq!(e.chains[0].bound(), ratio(1, 1));
    }

    #[test]
    fn gammas_primitive_and_degrees_multiply() {
        let c12 = generate(&[Permutation::rotation(12)], 100).unwrap();
        let e = maximal_chains(&c12, 64).unwrap();
        assert_eq!(e.chains.len(), 3); // orderings of 2, 2, 3
        for c in &e.chains {
            assert_eq!(product_of_degrees(c), BigUint::from(12u32));
            for s in &c.steps {
                assert!(is_primitive(&s.action).unwrap());
            }
            for w in c.partitions.windows(2) {
                assert!(w[0].refines(&w[1]) && w[0] != w[1]);
            }
        }
    }

    #[test]
    fn verify_s4_equality() {
        let r = verify_bound("S4", &s4(), 64).unwrap();
        assert_eq!(r.proportion, "1/4");
        assert_eq!(r.chains[0].bound, "1/4");
        assert!(!r.violated);
    }

    #[test]
    fn verify_a5_equality() {
        let a5 = generate(&[cyc(5, &[0, 1, 2]), Permutation::rotation(5)], 100).unwrap();
        let r = verify_bound("A5", &a5, 64).unwrap();
        assert_eq!(r.full_cycle_count, "24");
        assert_eq!(r.proportion, "2/5");
        assert_eq!(r.chains[0].d, 1);
        assert_eq!(r.chains[0].bound, "2/5");
        assert!(!r.violated);
    }
}
