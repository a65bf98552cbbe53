use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// Largest supported permutation degree (points are stored as `u16`).
pub const MAX_DEGREE: usize = 1024;

/// A permutation of `0..n`, stored as the image of every point.
///
/// Products are read left to right: `p * q` first applies `p`, then `q`,
/// so `(p * q)(x) = q(p(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u16]>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::InvalidPermutation(format!(
                "degree {n} outside 1..={MAX_DEGREE}"
            )));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Self {
            images: images.into_iter().map(|x| x as u16).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&n), "degree {n} out of range");
        Self {
            images: (0..n).map(|i| i as u16).collect(),
        }
    }

    /// Builds a permutation from disjoint cycles on `0..n`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                let b = cyc[(k + 1) % cyc.len()];
                if a >= n || b >= n || touched[a] {
                    return Err(Error::InvalidPermutation(format!(
                        "bad cycle {cyc:?} on {n} points"
                    )));
                }
                touched[a] = true;
                images[a] = b;
            }
        }
        Self::new(images)
    }

    /// The standard full cycle `(0 1 ... n-1)`.
    pub fn rotation(n: usize) -> Self {
        Self {
            images: (0..n).map(|i| ((i + 1) % n) as u16).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` then `other`; errors on a degree mismatch.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.then(other))
    }

    #[inline]
    pub(crate) fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    pub fn pow(&self, e: u64) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// `x^-1 * self * x`.
    pub fn conjugate_by(&self, x: &Permutation) -> Permutation {
        x.inverse().then(self).then(x)
    }

    /// Disjoint cycles (including fixed points), each starting at its
    /// smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.image(x);
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_lengths(self.cycles().iter().map(Vec::len).collect())
    }

    /// True iff the permutation is a single cycle through all points.
    #[inline]
    pub fn is_full_cycle(&self) -> bool {
        let n = self.images.len();
        let mut x = self.images[0] as usize;
        let mut len = 1;
        while x != 0 {
            x = self.images[x] as usize;
            len += 1;
        }
        len == n
    }

    /// Order of the permutation (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        self.cycle_type()
            .lengths()
            .iter()
            .fold(1u64, |acc, &l| num_integer::lcm(acc, l as u64))
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch");
        self.then(rhs)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images())
    }
}

/// Cycle notation with 1-based points; identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Multiset of cycle lengths, kept sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn from_lengths(mut lengths: Vec<usize>) -> Self {
        debug_assert!(lengths.iter().all(|&l| l >= 1));
        lengths.sort_unstable();
        CycleType(lengths)
    }

    pub fn lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_full(&self) -> bool {
        self.0.len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn compose_is_left_to_right() {
        let p = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let q = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        // 0 -> 1 -> 2, 1 -> 0 -> 0, 2 -> 2 -> 1
        assert_eq!(p.compose(&q).unwrap(), perm(&[2, 0, 1]));
    }

    #[test]
    fn compose_identity_and_inverse_pair() {
        let p = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        let q = Permutation::from_cycles(4, &[&[0, 3, 2, 1]]).unwrap();
        assert_eq!(Permutation::identity(4).compose(&p).unwrap(), p);
        assert!(p.compose(&q).unwrap().is_identity());
    }

    #[test]
    fn compose_degree_mismatch() {
        let err = Permutation::identity(3).compose(&Permutation::identity(4));
        assert!(matches!(err, Err(Error::DegreeMismatch(3, 4))));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3]).is_err());
        assert!(Permutation::new(vec![]).is_err());
    }

    #[test]
    fn cycle_types() {
        assert_eq!(
            Permutation::identity(5).cycle_type().lengths(),
            &[1, 1, 1, 1, 1]
        );
        let c4 = Permutation::rotation(4);
        assert_eq!(c4.cycle_type().lengths(), &[4]);
        assert!(c4.is_full_cycle());
        let p = Permutation::from_cycles(5, &[&[0, 1], &[2, 3, 4]]).unwrap();
        assert_eq!(p.cycle_type().lengths(), &[2, 3]);
        assert!(!p.is_full_cycle());
        assert_eq!(p.order(), 6);
        assert!(Permutation::identity(1).is_full_cycle());
    }

    #[test]
    fn display_is_one_based() {
        let p = Permutation::from_cycles(5, &[&[0, 1], &[2, 3, 4]]).unwrap();
        assert_eq!(p.to_string(), "(1,2)(3,4,5)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn compose_associative(a in arb_perm(9), b in arb_perm(9), c in arb_perm(9)) {
            prop_assert_eq!((&(&a * &b)) * &c, &a * &(&b * &c));
        }

        #[test]
        fn inverse_cancels(a in arb_perm(12)) {
            prop_assert!((&a.inverse() * &a).is_identity());
            prop_assert!((&a * &a.inverse()).is_identity());
        }

        #[test]
        fn full_cycle_iff_single_orbit(a in arb_perm(7)) {
            prop_assert_eq!(a.is_full_cycle(), a.cycle_type().is_full());
            prop_assert_eq!(a.cycle_type().degree(), 7);
        }
    }
}
