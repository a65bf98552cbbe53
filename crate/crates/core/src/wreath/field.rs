//! Small finite fields by lookup table, projective linear groups acting on
//! projective points, and Singer cycles.

use std::collections::HashMap;

use crate::arith::{prime_divisors, prime_power};
use crate::error::{Error, Result};
use crate::group::{generate, PermGroup, DEFAULT_ENUMERATION_CAP};
use crate::perm::Permutation;

/// Largest field order supported by the tables.
pub const MAX_FIELD_ORDER: u64 = 256;
/// Largest projective degree for `pgl`, `psl` and `singer_cycle`.
pub const MAX_PROJECTIVE_POINTS: usize = 64;
const MAX_LINEAR_FIELD: u64 = 16;

/// `GF(q)` with elements `0..q`; element `a` encodes the polynomial
/// `sum a_i x^i` over the prime field, `a = sum a_i p^i`.
#[derive(Clone, Debug)]
pub struct SmallField {
    p: usize,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl SmallField {
    pub fn new(q: u64) -> Result<Self> {
        let (p, f) = prime_power(q)
            .filter(|_| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::Domain(format!("{q} is not a prime power <= {MAX_FIELD_ORDER}")))?;
        let prime = Self::prime(p as usize);
        if f == 1 {
            return Ok(prime);
        }
        let m = least_irreducible(&prime, f as usize);
        let (p, q) = (p as usize, q as usize);
        let digits = |a: usize| -> Vec<usize> {
            let mut v = Vec::with_capacity(f as usize);
            let mut a = a;
            for _ in 0..f {
                v.push(a % p);
                a /= p;
            }
            v
        };
        let encode = |v: &[usize]| v.iter().rev().fold(0, |acc, &c| acc * p + c);
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s) as u8;
                mul[a * q + b] = encode(&poly_mulmod(&prime, &da, &db, &m)) as u8;
            }
        }
        Ok(Self::from_tables(p, q, add, mul))
    }

    fn prime(p: usize) -> Self {
        let mut add = vec![0u8; p * p];
        let mut mul = vec![0u8; p * p];
        for a in 0..p {
            for b in 0..p {
                add[a * p + b] = ((a + b) % p) as u8;
                mul[a * p + b] = (a * b % p) as u8;
            }
        }
        Self::from_tables(p, p, add, mul)
    }

    fn from_tables(p: usize, q: usize, add: Vec<u8>, mul: Vec<u8>) -> Self {
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as u8;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        Self { p, q, add, mul, neg, inv }
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b] as usize)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| self.inv[a] as usize)
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    /// Least element generating the multiplicative group.
    pub fn primitive_element(&self) -> usize {
        let n = self.q - 1;
        let ls = prime_divisors(n as u64);
        (1..self.q)
            .find(|&a| ls.iter().all(|&l| self.pow(a, n / l as usize) != 1))
            .expect("finite fields have cyclic unit groups")
    }
}

/// Remainder of `a` modulo the monic `m` (coefficients low degree first).
fn poly_rem(f: &SmallField, a: &[usize], m: &[usize]) -> Vec<usize> {
    let d = m.len() - 1;
    let mut a = a.to_vec();
    for i in (d..a.len()).rev() {
        let c = a[i];
        if c == 0 {
            continue;
        }
        for (j, &mj) in m.iter().enumerate() {
            let k = i - d + j;
            a[k] = f.sub(a[k], f.mul(c, mj));
        }
    }
    a.truncate(d);
    a.resize(d, 0);
    a
}

fn poly_mulmod(f: &SmallField, a: &[usize], b: &[usize], m: &[usize]) -> Vec<usize> {
    let mut prod = vec![0; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = f.add(prod[i + j], f.mul(x, y));
        }
    }
    poly_rem(f, &prod, m)
}

/// Monic polynomial of degree `d` whose lower coefficients are the base-`q`
/// digits of `code`.
fn monic_from_code(q: usize, d: usize, mut code: usize) -> Vec<usize> {
    let mut m = Vec::with_capacity(d + 1);
    for _ in 0..d {
        m.push(code % q);
        code /= q;
    }
    m.push(1);
    m
}

fn is_irreducible(f: &SmallField, m: &[usize]) -> bool {
    let d = m.len() - 1;
    let q = f.order();
    (1..=d / 2).all(|e| {
        (0..q.pow(e as u32)).all(|code| {
            let g = monic_from_code(q, e, code);
            poly_rem(f, m, &g).iter().any(|&c| c != 0)
        })
    })
}

/// Least irreducible monic polynomial of degree `d`, ordering candidates by
/// the integer `sum c_i q^i` of their lower coefficients.
pub fn least_irreducible(f: &SmallField, d: usize) -> Vec<usize> {
    let q = f.order();
    (0..q.pow(d as u32))
        .map(|code| monic_from_code(q, d, code))
        .find(|m| is_irreducible(f, m))
        .expect("irreducible polynomials exist in every degree")
}

/// Points of `P^{d-1}(F_q)` as vectors whose first nonzero coordinate is 1.
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    field: SmallField,
    dim: usize,
    points: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl ProjectiveSpace {
    pub fn new(dim: usize, q: u64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!("projective space needs d >= 2, got {dim}")));
        }
        if q > MAX_LINEAR_FIELD {
            return Err(Error::Size(format!("field order {q} above {MAX_LINEAR_FIELD}")));
        }
        let field = SmallField::new(q)?;
        let qq = field.order();
        let count = (qq.pow(dim as u32) - 1) / (qq - 1);
        if count > MAX_PROJECTIVE_POINTS {
            return Err(Error::Size(format!(
                "{count} projective points exceed {MAX_PROJECTIVE_POINTS}"
            )));
        }
        let mut points = Vec::with_capacity(count);
        for code in 1..qq.pow(dim as u32) {
            let v: Vec<usize> = (0..dim).map(|i| code / qq.pow(i as u32) % qq).collect();
            if v.iter().find(|&&c| c != 0) == Some(&1) {
                points.push(v);
            }
        }
        let index = points.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        Ok(Self { field, dim, points, index })
    }

    pub fn field(&self) -> &SmallField {
        &self.field
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<usize>] {
        &self.points
    }

    fn normalize(&self, v: &[usize]) -> Option<usize> {
        let lead = *v.iter().find(|&&c| c != 0)?;
        let s = self.field.inv(lead)?;
        let w: Vec<usize> = v.iter().map(|&c| self.field.mul(c, s)).collect();
        self.index.get(&w).copied()
    }

    /// Permutation of the points induced by `v -> v * matrix` (rows first).
    pub fn action(&self, matrix: &[Vec<usize>]) -> Result<Permutation> {
        let f = &self.field;
        let images = self
            .points
            .iter()
            .map(|v| {
                let w: Vec<usize> = (0..self.dim)
                    .map(|j| (0..self.dim).fold(0, |acc, i| f.add(acc, f.mul(v[i], matrix[i][j]))))
                    .collect();
                self.normalize(&w)
                    .ok_or_else(|| Error::Precondition("matrix is singular".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }

    fn identity_matrix(&self) -> Vec<Vec<usize>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| usize::from(i == j)).collect())
            .collect()
    }

    /// Transvections `I + a E_ij` for `a` running over a basis of `F_q`
    /// over its prime field; they generate `SL_d(q)`.
    fn transvections(&self) -> Result<Vec<Permutation>> {
        let f = &self.field;
        let omega = f.primitive_element();
        let degree = prime_power(f.order() as u64).map_or(1, |(_, e)| e as usize);
        let mut gens = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                for e in 0..degree {
                    let mut m = self.identity_matrix();
                    m[i][j] = f.pow(omega, e);
                    gens.push(self.action(&m)?);
                }
            }
        }
        Ok(gens)
    }
}

/// `PGL_d(q)` on the `(q^d - 1)/(q - 1)` projective points.
pub fn pgl(d: usize, q: u64) -> Result<PermGroup> {
    let space = ProjectiveSpace::new(d, q)?;
    let mut gens = space.transvections()?;
    let mut diag = space.identity_matrix();
    diag[0][0] = space.field.primitive_element();
    gens.push(space.action(&diag)?);
    generate(&gens, DEFAULT_ENUMERATION_CAP)
}

/// `PSL_d(q)`: the image of `SL_d(q)` in `PGL_d(q)`.
pub fn psl(d: usize, q: u64) -> Result<PermGroup> {
    let space = ProjectiveSpace::new(d, q)?;
    generate(&space.transvections()?, DEFAULT_ENUMERATION_CAP)
}

/// Multiplication by a generator of `F_{q^d}^*` acting on the points of
/// `F_{q^d}` viewed as `F_q^d` (basis `1, x, ..., x^{d-1}` modulo the least
/// irreducible monic of degree `d`).
pub fn singer_cycle(d: usize, q: u64) -> Result<Permutation> {
    let space = ProjectiveSpace::new(d, q)?;
    let f = space.field();
    let qq = f.order();
    let m = least_irreducible(f, d);
    let unit_order = qq.pow(d as u32) - 1;
    let one: Vec<usize> = (0..d).map(|i| usize::from(i == 0)).collect();
    let power = |g: &[usize], mut e: usize| {
        let mut acc = one.clone();
        let mut base = g.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(f, &acc, &base, &m);
            }
            base = poly_mulmod(f, &base, &base, &m);
            e >>= 1;
        }
        acc
    };
    let ls = prime_divisors(unit_order as u64);
    let generator = (1..=unit_order)
        .map(|code| (0..d).map(|i| code / qq.pow(i as u32) % qq).collect::<Vec<_>>())
        .find(|g| ls.iter().all(|&l| power(g, unit_order / l as usize) != one))
        .ok_or_else(|| Error::Domain(format!("no generator of F_{}^*", unit_order + 1)))?;
    let matrix: Vec<Vec<usize>> = (0..d)
        .map(|i| {
            let basis: Vec<usize> = (0..d).map(|j| usize::from(i == j)).collect();
            poly_mulmod(f, &basis, &generator, &m)
        })
        .collect();
    let c = space.action(&matrix)?;
    if !c.is_full_cycle() {
        return Err(Error::Domain(format!("Singer element for d={d}, q={q} is not a full cycle")));
    }
    Ok(c)
}
