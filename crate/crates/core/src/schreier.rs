//! Base and strong generating set via the deterministic Schreier-Sims
//! algorithm. Used for exact orders of groups too large to enumerate and
//! for membership tests.

use num_bigint::BigUint;
use num_traits::One;

use crate::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    orbit: Vec<usize>,
    /// `transversal[b]` maps the base point to `b`.
    transversal: Vec<Option<Permutation>>,
}

/// A stabilizer chain `G = G_0 >= G_1 >= ... >= G_k = 1`.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    base: Vec<usize>,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

fn first_moved(g: &Permutation) -> usize {
    (0..g.degree())
        .find(|&x| g.image(x) != x)
        .expect("identity has no moved point")
}

fn orbit_level(point: usize, degree: usize, gens: &[&Permutation]) -> Level {
    let mut transversal: Vec<Option<Permutation>> = vec![None; degree];
    transversal[point] = Some(Permutation::identity(degree));
    let mut orbit = vec![point];
    let mut i = 0;
    while i < orbit.len() {
        let b = orbit[i];
        for g in gens {
            let c = g.image(b);
            if transversal[c].is_none() {
                let t = transversal[b].as_ref().unwrap().then(g);
                transversal[c] = Some(t);
                orbit.push(c);
            }
        }
        i += 1;
    }
    Level {
        point,
        orbit,
        transversal,
    }
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Permutation]) -> Self {
        let mut strong: Vec<Permutation> = Vec::new();
        for g in gens {
            assert_eq!(g.degree(), degree);
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        let mut base: Vec<usize> = Vec::new();
        for g in &strong {
            if base.iter().all(|&b| g.image(b) == b) {
                base.push(first_moved(g));
            }
        }
        let mut chain = StabChain {
            degree,
            levels: base
                .iter()
                .map(|&b| Level {
                    point: b,
                    orbit: vec![b],
                    transversal: Vec::new(),
                })
                .collect(),
            base,
            strong,
        };

        let mut i = chain.base.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            let prefix = &chain.base[..iu];
            let level_gens: Vec<&Permutation> = chain
                .strong
                .iter()
                .filter(|g| prefix.iter().all(|&b| g.image(b) == b))
                .collect();
            let level = orbit_level(chain.base[iu], degree, &level_gens);
            let mut added = None;
            'scan: for &b in &level.orbit {
                let tb = level.transversal[b].as_ref().unwrap();
                for s in &level_gens {
                    let c = s.image(b);
                    let tc = level.transversal[c].as_ref().unwrap();
                    let y = tb.then(s).then(&tc.inverse());
                    let (h, j) = chain.strip(y, iu + 1);
                    if j < chain.base.len() || !h.is_identity() {
                        added = Some((h, j));
                        break 'scan;
                    }
                }
            }
            chain.levels[iu] = level;
            match added {
                Some((h, j)) => {
                    if j == chain.base.len() {
                        let b = first_moved(&h);
                        chain.base.push(b);
                        chain.levels.push(Level {
                            point: b,
                            orbit: vec![b],
                            transversal: Vec::new(),
                        });
                    }
                    chain.strong.push(h);
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
        chain
    }

    /// Sifts `g` through levels `from..`; returns the residue and the
    /// level where sifting stopped (`base.len()` if it went through).
    fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for k in from..self.levels.len() {
            let level = &self.levels[k];
            let b = g.image(level.point);
            match level.transversal.get(b).and_then(Option::as_ref) {
                Some(t) => g = g.then(&t.inverse()),
                None => return (g, k),
            }
        }
        (g, self.levels.len())
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * l.orbit.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }
}
