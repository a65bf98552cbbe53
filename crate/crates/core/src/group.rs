use std::sync::{Arc, OnceLock};

use indexmap::IndexSet;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::ratio_from_big;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::schreier::StabChain;

/// Default enumeration cap for closures and censuses.
pub const DEFAULT_ENUMERATION_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug)]
pub struct GenerateOptions {
    pub cap: usize,
    /// Fall back to Schreier-Sims when the closure exceeds `cap`.
    pub order_fallback: bool,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ENUMERATION_CAP,
            order_fallback: true,
        }
    }
}

/// A permutation group given by generators, with its exact order and, when
/// small enough, every element.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    order: BigUint,
    elements: Option<Arc<IndexSet<Permutation>>>,
    chain: Arc<OnceLock<StabChain>>,
}

/// Result of counting full cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub count: BigUint,
    pub proportion: BigRational,
}

/// Generates the group, enumerating it when its order is at most `cap`.
pub fn generate(gens: &[Permutation], cap: usize) -> Result<PermGroup> {
    generate_with(
        gens,
        GenerateOptions {
            cap,
            order_fallback: true,
        },
    )
}

pub fn generate_with(gens: &[Permutation], opts: GenerateOptions) -> Result<PermGroup> {
    let degree = match gens.first() {
        Some(g) => g.degree(),
        None => return Err(Error::Precondition("empty generator list".into())),
    };
    if opts.cap == 0 {
        return Err(Error::Precondition("enumeration cap must be positive".into()));
    }
    if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::DegreeMismatch(degree, g.degree()));
    }
    let generators = gens.to_vec();
    match closure(&generators, opts.cap) {
        Ok(set) => Ok(PermGroup {
            degree,
            order: BigUint::from(set.len()),
            generators,
            elements: Some(Arc::new(set)),
            chain: Arc::default(),
        }),
        Err(partial) if opts.order_fallback => {
            let _ = partial;
            let chain = StabChain::new(degree, &generators);
            let cell = OnceLock::new();
            let order = chain.order();
            let _ = cell.set(chain);
            Ok(PermGroup {
                degree,
                generators,
                order,
                elements: None,
                chain: Arc::new(cell),
            })
        }
        Err(partial) => Err(Error::TooLargeToEnumerate {
            cap: opts.cap,
            partial,
        }),
    }
}

/// Breadth-first closure; `Err(partial_count)` once the cap is exceeded.
fn closure(gens: &[Permutation], cap: usize) -> std::result::Result<IndexSet<Permutation>, usize> {
    let degree = gens[0].degree();
    let mut set = IndexSet::new();
    set.insert(Permutation::identity(degree));
    let mut i = 0;
    while i < set.len() {
        let e = set.get_index(i).unwrap().clone();
        for g in gens {
            set.insert(e.then(g));
            if set.len() > cap {
                return Err(set.len());
            }
        }
        i += 1;
    }
    Ok(set)
}

impl PermGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    pub fn elements(&self) -> Option<&IndexSet<Permutation>> {
        self.elements.as_deref()
    }

    pub fn require_elements(&self, what: &'static str) -> Result<&IndexSet<Permutation>> {
        self.elements().ok_or(Error::NotEnumerated(what))
    }

    pub fn stab_chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::new(self.degree, &self.generators))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        match &self.elements {
            Some(set) => set.contains(g),
            None => self.stab_chain().contains(g),
        }
    }

    /// Orbits of the generated group on `0..degree`.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.degree;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                for g in &self.generators {
                    let y = g.image(x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Transitivity via the orbit of point 0.
    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    /// Counts the full cycles among all elements, in parallel.
    pub fn full_cycle_census(&self) -> Result<Census> {
        let set = self.require_elements("full-cycle census")?;
        let count = (0..set.len())
            .into_par_iter()
            .filter(|&i| set[i].is_full_cycle())
            .count();
        let count = BigUint::from(count);
        let proportion = ratio_from_big(&count, &self.order);
        Ok(Census { count, proportion })
    }

    /// Derived-series test, computed inside the enumerated element set.
    pub fn is_solvable(&self) -> Result<bool> {
        self.require_elements("solvability test")?;
        let cap = self.elements().unwrap().len();
        let mut current = self.clone();
        loop {
            if current.order == BigUint::from(1u32) {
                return Ok(true);
            }
            let derived = current.derived_subgroup(cap)?;
            if derived.order == current.order {
                return Ok(false);
            }
            current = derived;
        }
    }

    /// Normal closure of the commutators of the generators.
    pub fn derived_subgroup(&self, cap: usize) -> Result<PermGroup> {
        let gens = &self.generators;
        let mut sub_gens: Vec<Permutation> = Vec::new();
        for a in gens {
            for b in gens {
                let c = a.inverse().then(&b.inverse()).then(a).then(b);
                if !c.is_identity() && !sub_gens.contains(&c) {
                    sub_gens.push(c);
                }
            }
        }
        if sub_gens.is_empty() {
            return generate(&[Permutation::identity(self.degree)], 1);
        }
        let mut sub = generate_with(&sub_gens, GenerateOptions { cap, order_fallback: false })?;
        loop {
            let mut extra = None;
            'find: for h in sub.generators() {
                for g in gens {
                    let c = h.conjugate_by(g);
                    if !sub.contains(&c) {
                        extra = Some(c);
                        break 'find;
                    }
                }
            }
            match extra {
                Some(c) => {
                    sub_gens.push(c);
                    sub = generate_with(&sub_gens, GenerateOptions { cap, order_fallback: false })?;
                }
                None => return Ok(sub),
            }
        }
    }

    /// The group `x^-1 G x` (relabelling of points by `x`).
    pub fn conjugate(&self, x: &Permutation, cap: usize) -> Result<PermGroup> {
        let gens: Vec<Permutation> = self.generators.iter().map(|g| g.conjugate_by(x)).collect();
        generate(&gens, cap)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == BigUint::from(1u32)
    }

    pub fn to_spec(&self, name: &str) -> GroupSpec {
        GroupSpec {
            name: name.to_string(),
            degree: self.degree,
            generators: self.generators.iter().map(Permutation::images).collect(),
        }
    }

    /// First full cycle found among the elements (or generators and a few
    /// short words when the group is not enumerated).
    pub fn find_full_cycle(&self) -> Option<Permutation> {
        if let Some(set) = &self.elements {
            return set.iter().find(|g| g.is_full_cycle()).cloned();
        }
        let mut words: Vec<Permutation> = self.generators.clone();
        for a in &self.generators {
            for b in &self.generators {
                words.push(a.then(b));
                for c in &self.generators {
                    words.push(a.then(b).then(c));
                }
            }
        }
        words.into_iter().find(Permutation::is_full_cycle)
    }
}

impl Census {
    pub fn is_zero(&self) -> bool {
        self.count.is_zero()
    }
}

/// Group-spec document: `{name, degree, generators}` with 0-based images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: GroupSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("group spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::Parse(format!("group {:?} has no generators", self.name)));
        }
        for g in &self.generators {
            if g.len() != self.degree {
                return Err(Error::DegreeMismatch(self.degree, g.len()));
            }
        }
        Ok(())
    }

    pub fn permutations(&self) -> Result<Vec<Permutation>> {
        self.validate()?;
        self.generators.iter().map(|g| Permutation::new(g.clone())).collect()
    }

    pub fn build(&self, cap: usize) -> Result<PermGroup> {
        generate(&self.permutations()?, cap)
    }
}
